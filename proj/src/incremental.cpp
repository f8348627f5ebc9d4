#include "capdl/incremental.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <deque>
#include <sstream>

namespace capdl {

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    uint64_t nanos() const {
        return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                         std::chrono::steady_clock::now() - start_)
                                         .count());
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void erase_value(std::vector<EdgeId>& v, EdgeId e) {
    v.erase(std::remove(v.begin(), v.end(), e), v.end());
}

}  // namespace

std::string UpdateReport::csv_row() const {
    std::ostringstream out;
    out << op << ',' << cone.count() << ',' << rederivations << ',' << closure_evals << ','
        << wall_nanos;
    return out.str();
}

MaintainedState::MaintainedState(SafetyModel sm, AtomSet a, uint32_t k_param)
    : sm_(std::move(sm)), a_(std::move(a)), k_(k_param) {
    if (a_.universe() < sm_.atom_count()) a_.resize_universe(sm_.atom_count());
    rebuild_closure_caches();
    rebuild_surface_full(nullptr, false);
}

AtomId MaintainedState::add_atom(const std::string& name) {
    AtomId id = sm_.names.intern(name);
    grow_universe(sm_.names.size());
    return id;
}

void MaintainedState::grow_universe(uint32_t n) {
    if (n <= sm_.h.atom_count()) return;
    sm_.h.add_atoms(n);
    while (sm_.names.size() < n) sm_.names.intern("_v" + std::to_string(sm_.names.size()));
    sm_.forbidden.resize_universe(n);
    a_.resize_universe(n);
    closed_.resize_universe(n);
    closed1_.resize_universe(n);
    derived_by_.resize(n);
    derived_by1_.resize(n);
    head_index_.resize(n);
    gain_.resize(n, -1);
    surface_.emergent.resize_universe(n);
    surface_.nmf.resize_universe(n);
}

void MaintainedState::rebuild_closure_caches() {
    const uint32_t n = sm_.atom_count();
    closed_ = closure(sm_.h, a_);
    closed1_ = closure1(sm_.h, a_);
    support_.assign(sm_.h.edge_slots(), 0);
    support1_.assign(sm_.h.edge_slots(), 0);
    lazy_.assign(sm_.h.edge_slots(), 0);
    derived_by_.assign(n, {});
    derived_by1_.assign(n, {});
    head_index_.assign(n, {});
    sm_.h.for_each_edge(
        [&](EdgeId id, const Hyperedge& e) { head_index_[e.head].push_back(id); });
    sm_.h.for_each_edge([&](EdgeId id, const Hyperedge& e) {
        uint32_t sup = 0, sup1 = 0;
        for (AtomId t : e.tail) {
            if (closed_.test(t)) ++sup;
            if (closed1_.test(t)) ++sup1;
        }
        support_[id] = sup;
        support1_[id] = sup1;
        lazy_[id] = sup < e.tail.size();
        if (sup == e.tail.size()) derived_by_[e.head].push_back(id);
        if (e.tail.size() == 1 && sup1 == 1) derived_by1_[e.head].push_back(id);
    });
}

void MaintainedState::rebuild_surface_full(UpdateReport* report, bool count_all_noncfg_gains) {
    const uint32_t n = sm_.atom_count();
    gain_.assign(n, -1);

    for (AtomId v = 0; v < n; ++v) {
        if (a_.test(v) || sm_.forbidden.test(v)) continue;
        bool candidate = !closed_.test(v);
        if (!candidate && !count_all_noncfg_gains) continue;
        AtomSet ext = a_;
        ext.set(v);
        AtomSet cl = closure(sm_.h, ext);
        if (report) ++report->closure_evals;
        if (candidate) {
            cl.subtract(closed_);
            cl.subtract(sm_.forbidden);
            gain_[v] = cl.count();
        }
    }

    surface_ = AuditSurface{};
    surface_.k_param = k_;
    surface_.emergent = closed_;
    surface_.emergent.subtract(a_);
    surface_.emergent.subtract(closed1_);
    surface_.emergent.subtract(sm_.forbidden);

    surface_.nmf = AtomSet(n);
    for (const BoundaryEdge& b : boundary_edges(sm_, closed_)) {
        if (sm_.forbidden.test(b.missing) || surface_.nmf.test(b.missing)) continue;
        AtomSet ext = a_;
        ext.set(b.missing);
        if (!closure(sm_.h, ext).intersects(sm_.forbidden)) surface_.nmf.set(b.missing);
    }

    std::vector<GainEntry> gains;
    for (AtomId v = 0; v < n; ++v)
        if (gain_[v] >= 0) gains.push_back({v, static_cast<uint32_t>(gain_[v])});
    std::sort(gains.begin(), gains.end(), [](const GainEntry& x, const GainEntry& y) {
        return x.gain != y.gain ? x.gain > y.gain : x.atom < y.atom;
    });
    if (gains.size() > k_) gains.resize(k_);
    surface_.topk = std::move(gains);
}

AtomSet MaintainedState::propagate_insert(EdgeId eid, bool singleton_layer,
                                          uint64_t& rederivations) {
    AtomSet& closed = singleton_layer ? closed1_ : closed_;
    std::vector<uint32_t>& support = singleton_layer ? support1_ : support_;
    auto& derived_by = singleton_layer ? derived_by1_ : derived_by_;

    AtomSet cone(sm_.atom_count());
    std::deque<AtomId> queue;
    auto usable = [&](const Hyperedge& e) { return !singleton_layer || e.tail.size() == 1; };

    auto derive = [&](AtomId v) {
        closed.set(v);
        cone.set(v);
        if (!singleton_layer) ++rederivations;
        queue.push_back(v);
    };

    const Hyperedge& e = sm_.h.edge(eid);
    derived_by[e.head].push_back(eid);
    if (!closed.test(e.head)) derive(e.head);

    while (!queue.empty()) {
        AtomId u = queue.front();
        queue.pop_front();
        for (EdgeId f : sm_.h.edges_with_tail_atom(u)) {
            if (!sm_.h.edge_alive(f) || !usable(sm_.h.edge(f))) continue;
            const Hyperedge& fe = sm_.h.edge(f);
            if (++support[f] == fe.tail.size()) {
                if (!singleton_layer) lazy_[f] = 0;
                derived_by[fe.head].push_back(f);
                if (!closed.test(fe.head)) derive(fe.head);
            }
        }
    }
    return cone;
}

AtomSet MaintainedState::dred_delete(EdgeId eid, bool singleton_layer, uint64_t& rederivations) {
    AtomSet& closed = singleton_layer ? closed1_ : closed_;
    std::vector<uint32_t>& support = singleton_layer ? support1_ : support_;
    auto& derived_by = singleton_layer ? derived_by1_ : derived_by_;
    auto usable = [&](EdgeId f) {
        return sm_.h.edge_alive(f) && (!singleton_layer || sm_.h.edge(f).tail.size() == 1);
    };

    const Hyperedge& e = sm_.h.edge(eid);
    const bool fired = support[eid] == e.tail.size();
    AtomSet marked(sm_.atom_count());
    if (!fired) return marked;
    erase_value(derived_by[e.head], eid);

    // Phase 1: over-delete every atom with some derivation through the edge.
    std::deque<AtomId> queue;
    if (!a_.test(e.head) && closed.test(e.head)) {
        marked.set(e.head);
        queue.push_back(e.head);
    }
    while (!queue.empty()) {
        AtomId u = queue.front();
        queue.pop_front();
        for (EdgeId f : sm_.h.edges_with_tail_atom(u)) {
            if (!usable(f) || f == eid) continue;
            const Hyperedge& fe = sm_.h.edge(f);
            if (support[f] != fe.tail.size()) continue;  // was not firing
            if (a_.test(fe.head) || marked.test(fe.head) || !closed.test(fe.head)) continue;
            marked.set(fe.head);
            queue.push_back(fe.head);
        }
    }

    // Retract marked atoms and fix supports for edges touching them.
    marked.for_each([&](AtomId m) { closed.reset(m); });
    marked.for_each([&](AtomId m) {
        for (EdgeId f : sm_.h.edges_with_tail_atom(m)) {
            if (!usable(f) || f == eid) continue;
            const Hyperedge& fe = sm_.h.edge(f);
            if (support[f]-- == fe.tail.size()) {
                erase_value(derived_by[fe.head], f);
                if (!singleton_layer) lazy_[f] = 1;
            }
        }
    });

    // Phase 2: re-derive survivors semi-naively inside the marked region.
    auto rederive = [&](AtomId v) {
        closed.set(v);
        if (!singleton_layer) ++rederivations;
        queue.push_back(v);
    };
    marked.for_each([&](AtomId m) {
        if (a_.test(m) || !derived_by[m].empty()) rederive(m);
    });
    while (!queue.empty()) {
        AtomId u = queue.front();
        queue.pop_front();
        for (EdgeId f : sm_.h.edges_with_tail_atom(u)) {
            if (!usable(f) || f == eid) continue;
            const Hyperedge& fe = sm_.h.edge(f);
            if (++support[f] == fe.tail.size()) {
                if (!singleton_layer) lazy_[f] = 0;
                derived_by[fe.head].push_back(f);
                if (!closed.test(fe.head)) rederive(fe.head);
            }
        }
    }
    return marked;
}

AtomSet MaintainedState::forward_cone(const AtomSet& sources) const {
    AtomSet seen = sources;
    if (seen.universe() < sm_.atom_count()) seen.resize_universe(sm_.atom_count());
    std::deque<AtomId> queue;
    seen.for_each([&](AtomId v) { queue.push_back(v); });
    while (!queue.empty()) {
        AtomId v = queue.front();
        queue.pop_front();
        for (EdgeId f : sm_.h.edges_with_tail_atom(v)) {
            if (!sm_.h.edge_alive(f)) continue;
            AtomId h = sm_.h.edge(f).head;
            if (!seen.test(h)) {
                seen.set(h);
                queue.push_back(h);
            }
        }
    }
    return seen;
}

AtomSet MaintainedState::reverse_cone(const AtomSet& targets) const {
    AtomSet seen = targets;
    if (seen.universe() < sm_.atom_count()) seen.resize_universe(sm_.atom_count());
    std::deque<AtomId> queue;
    seen.for_each([&](AtomId v) { queue.push_back(v); });
    while (!queue.empty()) {
        AtomId v = queue.front();
        queue.pop_front();
        if (v >= head_index_.size()) continue;
        for (EdgeId f : head_index_[v]) {
            if (!sm_.h.edge_alive(f)) continue;
            for (AtomId t : sm_.h.edge(f).tail)
                if (!seen.test(t)) {
                    seen.set(t);
                    queue.push_back(t);
                }
        }
    }
    return seen;
}

void MaintainedState::refresh_surface(const AtomSet& touched_atoms, UpdateReport& report) {
    const uint32_t n = sm_.atom_count();
    surface_.emergent.resize_universe(n);
    surface_.nmf.resize_universe(n);
    if (gain_.size() < n) gain_.resize(n, -1);

    // Emergent status can change only where closure or singleton-closure
    // membership changed; both cones are inside touched_atoms.
    touched_atoms.for_each([&](AtomId v) {
        bool emg = closed_.test(v) && !a_.test(v) && !closed1_.test(v) && !sm_.forbidden.test(v);
        if (emg)
            surface_.emergent.set(v);
        else
            surface_.emergent.reset(v);
    });

    // Near-miss frontier: candidate verdicts depend on the whole closure, so
    // they are recomputed per update from the boundary index.
    surface_.nmf = AtomSet(n);
    std::vector<int8_t> verdict(n, -1);
    for (const BoundaryEdge& b : boundary_edges(sm_, closed_)) {
        if (sm_.forbidden.test(b.missing)) continue;
        if (verdict[b.missing] < 0) {
            AtomSet ext = a_;
            ext.set(b.missing);
            verdict[b.missing] = !closure(sm_.h, ext).intersects(sm_.forbidden);
            ++report.closure_evals;
        }
        if (verdict[b.missing]) surface_.nmf.set(b.missing);
    }

    // Gains: candidacy follows the closure; values are recomputed for
    // candidates whose cone can interact with the touched region.  The
    // interaction may happen at a conjunctive tail downstream of a touched
    // atom, hence forward-expand first, then reverse-expand.
    AtomSet affected = reverse_cone(forward_cone(touched_atoms));
    for (AtomId v = 0; v < n; ++v) {
        bool candidate = !closed_.test(v) && !sm_.forbidden.test(v);
        if (!candidate) {
            gain_[v] = -1;
            continue;
        }
        if (gain_[v] >= 0 && !affected.test(v)) continue;
        AtomSet ext = a_;
        ext.set(v);
        AtomSet cl = closure(sm_.h, ext);
        ++report.closure_evals;
        cl.subtract(closed_);
        cl.subtract(sm_.forbidden);
        gain_[v] = cl.count();
    }

    std::vector<GainEntry> gains;
    for (AtomId v = 0; v < n; ++v)
        if (gain_[v] >= 0) gains.push_back({v, static_cast<uint32_t>(gain_[v])});
    std::sort(gains.begin(), gains.end(), [](const GainEntry& x, const GainEntry& y) {
        return x.gain != y.gain ? x.gain > y.gain : x.atom < y.atom;
    });
    if (gains.size() > k_) gains.resize(k_);
    surface_.topk = std::move(gains);

    debug_check();
}

UpdateReport MaintainedState::insert_edge(const Hyperedge& e) {
    Stopwatch timer;
    UpdateReport report;
    report.op = "insert";

    AtomId max_atom = e.head;
    for (AtomId t : e.tail) max_atom = std::max(max_atom, t);
    grow_universe(max_atom + 1);
    if (sm_.h.find_edge(e)) throw DuplicateEdge("edge already present");
    report.cone = AtomSet(sm_.atom_count());

    EdgeId eid = sm_.h.add_edge(e);
    support_.resize(sm_.h.edge_slots(), 0);
    support1_.resize(sm_.h.edge_slots(), 0);
    lazy_.resize(sm_.h.edge_slots(), 0);
    head_index_[e.head].push_back(eid);

    uint32_t sup = 0, sup1 = 0;
    for (AtomId t : e.tail) {
        if (closed_.test(t)) ++sup;
        if (closed1_.test(t)) ++sup1;
    }
    support_[eid] = sup;
    support1_[eid] = sup1;

    AtomSet touched(sm_.atom_count());
    for (AtomId t : e.tail) touched.set(t);
    touched.set(e.head);

    if (sup == e.tail.size()) {
        report.cone = propagate_insert(eid, false, report.rederivations);
        touched |= report.cone;
    } else {
        lazy_[eid] = 1;  // unsatisfied tail; fires later if completed
    }
    if (e.tail.size() == 1 && sup1 == 1) {
        uint64_t ignored = 0;
        touched |= propagate_insert(eid, true, ignored);
    }

    refresh_surface(touched, report);
    report.wall_nanos = timer.nanos();
    return report;
}

UpdateReport MaintainedState::delete_edge(EdgeId id) {
    Stopwatch timer;
    UpdateReport report;
    report.op = "delete";
    if (!sm_.h.edge_alive(id)) throw UnknownEdge("no live edge with id " + std::to_string(id));

    const Hyperedge e = sm_.h.edge(id);
    AtomSet touched(sm_.atom_count());
    for (AtomId t : e.tail) touched.set(t);
    touched.set(e.head);

    report.cone = dred_delete(id, false, report.rederivations);
    touched |= report.cone;
    if (e.tail.size() == 1) {
        uint64_t ignored = 0;
        touched |= dred_delete(id, true, ignored);
    }
    sm_.h.remove_edge(id);

    refresh_surface(touched, report);
    report.wall_nanos = timer.nanos();
    return report;
}

UpdateReport MaintainedState::insert_edge_naive(const Hyperedge& e) {
    AtomId max_atom = e.head;
    for (AtomId t : e.tail) max_atom = std::max(max_atom, t);
    grow_universe(max_atom + 1);
    if (sm_.h.find_edge(e)) throw DuplicateEdge("edge already present");
    sm_.h.add_edge(e);
    UpdateReport report = naive_recompute();
    report.op = "insert_naive";
    return report;
}

UpdateReport MaintainedState::naive_recompute() {
    Stopwatch timer;
    UpdateReport report;
    report.op = "naive";
    report.cone = AtomSet(sm_.atom_count());
    report.closure_evals = 1;  // the base closure
    rebuild_closure_caches();
    rebuild_surface_full(&report, true);
    report.wall_nanos = timer.nanos();
    return report;
}

void MaintainedState::debug_check() const {
#ifndef NDEBUG
    assert(closed_ == closure(sm_.h, a_));
    assert(closed1_ == closure1(sm_.h, a_));
    assert(surface_ == audit_surface(sm_, a_, k_));
#endif
}

}  // namespace capdl
