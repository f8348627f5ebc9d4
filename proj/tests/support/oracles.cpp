#include "support/oracles.hpp"

#include <algorithm>

namespace capdl::oracles {

namespace {

AtomSet naive_closure_impl(const Hypergraph& h, const AtomSet& a, bool singleton_only) {
    AtomSet c = a;
    if (c.universe() < h.atom_count()) c.resize_universe(h.atom_count());
    bool changed = true;
    while (changed) {
        changed = false;
        AtomSet next = c;
        h.for_each_edge([&](EdgeId, const Hyperedge& e) {
            if (singleton_only && e.tail.size() != 1) return;
            bool satisfied = true;
            for (AtomId t : e.tail)
                if (!c.test(t)) satisfied = false;
            if (satisfied && !next.test(e.head)) {
                next.set(e.head);
                changed = true;
            }
        });
        c = next;
    }
    return c;
}

}  // namespace

AtomSet naive_closure(const Hypergraph& h, const AtomSet& a) {
    return naive_closure_impl(h, a, false);
}

AtomSet naive_closure1(const Hypergraph& h, const AtomSet& a) {
    return naive_closure_impl(h, a, true);
}

std::vector<int> naive_closure_depths(const Hypergraph& h, const AtomSet& a) {
    std::vector<int> depth(h.atom_count(), -1);
    AtomSet c = a;
    if (c.universe() < h.atom_count()) c.resize_universe(h.atom_count());
    c.for_each([&](AtomId v) { depth[v] = 0; });
    int level = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        ++level;
        AtomSet next = c;
        h.for_each_edge([&](EdgeId, const Hyperedge& e) {
            bool satisfied = true;
            for (AtomId t : e.tail)
                if (!c.test(t)) satisfied = false;
            if (satisfied && !next.test(e.head)) {
                next.set(e.head);
                depth[e.head] = level;
                changed = true;
            }
        });
        c = next;
    }
    return depth;
}

bool naive_safe(const SafetyModel& sm, const AtomSet& a) {
    return !naive_closure(sm.h, a).intersects(sm.forbidden);
}

namespace {

AtomSet subset_from_mask(uint32_t n, uint64_t mask) {
    AtomSet s(n);
    for (uint32_t i = 0; i < n; ++i)
        if (mask & (uint64_t{1} << i)) s.set(i);
    return s;
}

std::vector<AtomSet> minimize_family(std::vector<AtomSet> family) {
    std::sort(family.begin(), family.end(),
              [](const AtomSet& a, const AtomSet& b) { return a.compare_canonical(b) < 0; });
    std::vector<AtomSet> out;
    for (const AtomSet& s : family) {
        bool dominated = false;
        for (const AtomSet& kept : out)
            if (kept.is_subset_of(s)) dominated = true;
        if (!dominated) out.push_back(s);
    }
    return out;
}

}  // namespace

std::vector<AtomSet> brute_force_bf(const SafetyModel& sm) {
    const uint32_t n = sm.atom_count();
    std::vector<AtomSet> unsafe;
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
        AtomSet s = subset_from_mask(n, mask);
        if (!naive_safe(sm, s)) unsafe.push_back(std::move(s));
    }
    return minimize_family(std::move(unsafe));
}

std::vector<std::vector<AtomSet>> brute_force_why(const SafetyModel& sm, const AtomSet& universe) {
    const uint32_t n = sm.atom_count();
    std::vector<AtomId> support = universe.to_vector();
    std::vector<std::vector<AtomSet>> witnesses(n);
    for (uint64_t mask = 0; mask < (uint64_t{1} << support.size()); ++mask) {
        AtomSet w(n);
        for (size_t i = 0; i < support.size(); ++i)
            if (mask & (uint64_t{1} << i)) w.set(support[i]);
        AtomSet cl = naive_closure(sm.h, w);
        cl.for_each([&](AtomId v) { witnesses[v].push_back(w); });
    }
    for (auto& family : witnesses) family = minimize_family(std::move(family));
    return witnesses;
}

AuditSurface definitional_surface(const SafetyModel& sm, const AtomSet& a, uint32_t k_param) {
    const uint32_t n = sm.atom_count();
    AtomSet closed = naive_closure(sm.h, a);
    AtomSet single = naive_closure1(sm.h, a);

    AuditSurface g;
    g.k_param = k_param;
    g.emergent = AtomSet(n);
    closed.for_each([&](AtomId v) {
        if (!a.test(v) && !single.test(v) && !sm.forbidden.test(v)) g.emergent.set(v);
    });

    g.nmf = AtomSet(n);
    sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        std::vector<AtomId> missing;
        for (AtomId t : e.tail)
            if (!closed.test(t)) missing.push_back(t);
        if (missing.size() != 1) return;
        AtomId mu = missing[0];
        if (sm.forbidden.test(mu)) return;
        AtomSet ext = a;
        if (ext.universe() < n) ext.resize_universe(n);
        ext.set(mu);
        if (!naive_closure(sm.h, ext).intersects(sm.forbidden)) g.nmf.set(mu);
    });

    std::vector<GainEntry> gains;
    for (AtomId v = 0; v < n; ++v) {
        if (closed.test(v) || sm.forbidden.test(v)) continue;
        AtomSet ext = a;
        if (ext.universe() < n) ext.resize_universe(n);
        ext.set(v);
        AtomSet gained = naive_closure(sm.h, ext);
        gained.subtract(closed);
        gained.subtract(sm.forbidden);
        gains.push_back({v, gained.count()});
    }
    std::sort(gains.begin(), gains.end(), [](const GainEntry& x, const GainEntry& y) {
        return x.gain != y.gain ? x.gain > y.gain : x.atom < y.atom;
    });
    if (gains.size() > k_param) gains.resize(k_param);
    g.topk = std::move(gains);
    return g;
}

AtomSet naive_eval(const datalog::Program& p, const AtomSet& edb) {
    AtomSet model = edb;
    if (model.universe() < p.atom_count) model.resize_universe(p.atom_count);
    for (uint32_t s = 0; s < p.strata_count; ++s) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const datalog::Rule& r : p.rules) {
                if (r.stratum != s) continue;
                bool satisfied = true;
                for (const datalog::Literal& l : r.body)
                    if (model.test(l.atom) == l.negated) satisfied = false;
                if (satisfied && !model.test(r.head)) {
                    model.set(r.head);
                    changed = true;
                }
            }
        }
    }
    return model;
}

bool exhaustive_containment(const datalog::Program& p1, const datalog::Program& p2) {
    const uint32_t n = p1.atom_count;
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
        AtomSet d = subset_from_mask(n, mask);
        if (!naive_eval(p1, d).is_subset_of(naive_eval(p2, d))) return false;
    }
    return true;
}

}  // namespace capdl::oracles
