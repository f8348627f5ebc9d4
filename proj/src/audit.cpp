#include "capdl/audit.hpp"

#include <algorithm>
#include <sstream>

namespace capdl {

std::vector<BoundaryEdge> boundary_edges(const SafetyModel& sm, const AtomSet& closed) {
    std::vector<BoundaryEdge> out;
    sm.h.for_each_edge([&](EdgeId id, const Hyperedge& e) {
        AtomId missing = 0;
        uint32_t miss_count = 0;
        for (AtomId t : e.tail)
            if (!closed.test(t)) {
                missing = t;
                ++miss_count;
            }
        if (miss_count == 1) out.push_back({id, missing});
    });
    return out;
}

namespace {

// One closure of A + v; `closed` is cl(A) computed by the caller.
uint32_t gain_given_closed(const SafetyModel& sm, const AtomSet& a, const AtomSet& closed,
                           AtomId v) {
    AtomSet extended = a;
    if (extended.universe() < sm.atom_count()) extended.resize_universe(sm.atom_count());
    extended.set(v);
    AtomSet gained = closure(sm.h, extended);
    gained.subtract(closed);
    gained.subtract(sm.forbidden);
    return gained.count();
}

}  // namespace

uint32_t marginal_gain(const SafetyModel& sm, const AtomSet& a, AtomId v) {
    AtomSet closed = closure(sm.h, a);
    if (v >= sm.atom_count() || closed.test(v) || sm.forbidden.test(v))
        throw CandidateInvalid("marginal gain candidate must lie outside cl(A) and F");
    return gain_given_closed(sm, a, closed, v);
}

namespace {

std::vector<GainEntry> rank_gains(std::vector<GainEntry> gains, uint32_t k_param) {
    std::sort(gains.begin(), gains.end(), [](const GainEntry& x, const GainEntry& y) {
        return x.gain != y.gain ? x.gain > y.gain : x.atom < y.atom;
    });
    if (gains.size() > k_param) gains.resize(k_param);
    return gains;
}

}  // namespace

AuditSurface audit_surface(const SafetyModel& sm, const AtomSet& a, uint32_t k_param) {
    const uint32_t n = sm.atom_count();
    AuditSurface g;
    g.k_param = k_param;

    AtomSet closed = closure(sm.h, a);
    AtomSet single = closure1(sm.h, a);

    g.emergent = closed;
    g.emergent.subtract(a);
    g.emergent.subtract(single);
    g.emergent.subtract(sm.forbidden);

    g.nmf = AtomSet(n);
    for (const BoundaryEdge& b : boundary_edges(sm, closed)) {
        if (sm.forbidden.test(b.missing) || g.nmf.test(b.missing)) continue;
        AtomSet extended = a;
        if (extended.universe() < n) extended.resize_universe(n);
        extended.set(b.missing);
        if (!closure(sm.h, extended).intersects(sm.forbidden)) g.nmf.set(b.missing);
    }

    std::vector<GainEntry> gains;
    for (AtomId v = 0; v < n; ++v) {
        if (closed.test(v) || sm.forbidden.test(v)) continue;
        gains.push_back({v, gain_given_closed(sm, a, closed, v)});
    }
    g.topk = rank_gains(std::move(gains), k_param);
    return g;
}

bool surface_containment(const AuditSurface& g1, const AuditSurface& g2) {
    if (g1.k_param != g2.k_param)
        throw ParamMismatch("surface containment requires matching k parameters");
    if (!g1.emergent.is_subset_of(g2.emergent)) return false;
    if (!g1.nmf.is_subset_of(g2.nmf)) return false;
    for (const GainEntry& e : g1.topk) {
        bool present = false;
        for (const GainEntry& f : g2.topk)
            if (f.atom == e.atom) present = true;
        if (!present) return false;
    }
    return true;
}

ViewProgram build_view_program(const SafetyModel& sm) {
    const uint32_t n = sm.atom_count();
    ViewProgram vp;
    vp.cap_count = n;
    datalog::Program& p = vp.program;

    auto fresh = [&](const std::string& name) { return p.names.intern(name); };

    for (AtomId v = 0; v < n; ++v) vp.in_a.push_back(fresh("in_A(" + sm.names.name(v) + ")"));
    for (AtomId v = 0; v < n; ++v) vp.has.push_back(fresh("has(" + sm.names.name(v) + ")"));
    for (AtomId v = 0; v < n; ++v)
        vp.has_single.push_back(fresh("has_single(" + sm.names.name(v) + ")"));
    vp.forbidden = fresh("forbidden");

    sm.h.for_each_edge([&](EdgeId id, const Hyperedge& e) {
        std::vector<AtomId> ae_row, bm_row;
        const std::string tag = std::to_string(vp.edge_ids.size());
        for (size_t i = 0; i < e.tail.size(); ++i) {
            const std::string& s = sm.names.name(e.tail[i]);
            ae_row.push_back(fresh("all_except(e" + tag + "," + s + ")"));
            bm_row.push_back(fresh("boundary_miss(e" + tag + "," + s + ")"));
        }
        vp.all_except.push_back(std::move(ae_row));
        vp.boundary_miss.push_back(std::move(bm_row));
        vp.edge_ids.push_back(id);
    });
    for (AtomId v = 0; v < n; ++v)
        vp.emergent.push_back(sm.forbidden.test(v) ? UINT32_MAX
                                                   : fresh("emergent(" + sm.names.name(v) + ")"));

    p.atom_count = p.names.size();
    p.strata_count = 3;
    p.edb_atoms = AtomSet(p.atom_count);
    for (AtomId v = 0; v < n; ++v) p.edb_atoms.set(vp.in_a[v]);

    using datalog::Literal;
    using datalog::Rule;

    // Stratum 0: capability closure plus the forbidden marker.
    for (AtomId v = 0; v < n; ++v)
        p.rules.emplace_back(std::vector<Literal>{{vp.in_a[v], false}}, vp.has[v], 0);
    size_t row = 0;
    sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        std::vector<Literal> body;
        for (AtomId s : e.tail) body.push_back({vp.has[s], false});
        p.rules.emplace_back(std::move(body), vp.has[e.head], 0);
        ++row;
    });
    sm.forbidden.for_each([&](AtomId f) {
        p.rules.emplace_back(std::vector<Literal>{{vp.has[f], false}}, vp.forbidden, 0);
    });

    // Stratum 1: singleton-tail closure and the all_except predicates.
    for (AtomId v = 0; v < n; ++v)
        p.rules.emplace_back(std::vector<Literal>{{vp.in_a[v], false}}, vp.has_single[v], 1);
    row = 0;
    sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        if (e.tail.size() == 1)
            p.rules.emplace_back(std::vector<Literal>{{vp.has_single[e.tail[0]], false}},
                                 vp.has_single[e.head], 1);
        for (size_t i = 0; i < e.tail.size(); ++i) {
            std::vector<Literal> body;
            for (size_t j = 0; j < e.tail.size(); ++j)
                if (j != i) body.push_back({vp.has[e.tail[j]], false});
            p.rules.emplace_back(std::move(body), vp.all_except[row][i], 1);
        }
        ++row;
    });

    // Stratum 2: emergent and boundary_miss, the negation layer.
    for (AtomId v = 0; v < n; ++v) {
        if (vp.emergent[v] == UINT32_MAX) continue;
        p.rules.emplace_back(
            std::vector<Literal>{
                {vp.has[v], false}, {vp.has_single[v], true}, {vp.in_a[v], true}},
            vp.emergent[v], 2);
    }
    row = 0;
    sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        for (size_t i = 0; i < e.tail.size(); ++i)
            p.rules.emplace_back(
                std::vector<Literal>{{vp.all_except[row][i], false}, {vp.has[e.tail[i]], true}},
                vp.boundary_miss[row][i], 2);
        ++row;
    });

    return vp;
}

ViewResult eval_view(const ViewProgram& vp, const SafetyModel& sm, const AtomSet& a) {
    AtomSet edb(vp.program.atom_count);
    a.for_each([&](AtomId v) { edb.set(vp.in_a[v]); });
    datalog::Model m = datalog::eval(vp.program, edb);

    ViewResult res;
    res.emergent = AtomSet(vp.cap_count);
    for (AtomId v = 0; v < vp.cap_count; ++v)
        if (vp.emergent[v] != UINT32_MAX && m.true_atoms.test(vp.emergent[v]))
            res.emergent.set(v);
    for (size_t row = 0; row < vp.boundary_miss.size(); ++row) {
        const Hyperedge& e = sm.h.edge(vp.edge_ids[row]);
        for (size_t i = 0; i < vp.boundary_miss[row].size(); ++i)
            if (m.true_atoms.test(vp.boundary_miss[row][i]))
                res.boundary.push_back({vp.edge_ids[row], e.tail[i]});
    }
    return res;
}

std::string serialize_surface(const SafetyModel& sm, const AuditSurface& g) {
    std::ostringstream out;
    auto names = [&](const AtomSet& s) {
        std::string acc;
        s.for_each([&](AtomId v) {
            if (!acc.empty()) acc += ", ";
            acc += sm.names.name(v);
        });
        return acc;
    };
    out << "emergent: {" << names(g.emergent) << "}\n";
    out << "nmf: {" << names(g.nmf) << "}\n";
    out << "topk(k=" << g.k_param << "):";
    for (const GainEntry& e : g.topk) out << ' ' << sm.names.name(e.atom) << '=' << e.gain;
    out << '\n';
    return out.str();
}

}  // namespace capdl
