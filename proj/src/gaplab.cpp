#include "capdl/gaplab.hpp"

#include <algorithm>
#include <sstream>

namespace capdl::gaplab {

FamilyInstance gen_family(FamilyKind kind, uint32_t n) {
    if (n < 2) throw Error("family size must be at least 2");
    FamilyInstance fi;

    if (kind == FamilyKind::Chain) {
        for (uint32_t i = 1; i <= n; ++i) fi.sm.names.intern("v" + std::to_string(i));
        fi.sm.h = Hypergraph(n);
        for (uint32_t i = 0; i + 1 < n; ++i) fi.sm.h.add_edge(Hyperedge({i}, i + 1));
        fi.sm.forbidden = AtomSet(n);
        fi.a = AtomSet::of(n, {0});
        fi.update = Hyperedge({n - 1}, n);  // fresh head
        return fi;
    }

    // HPrime: v1..vn are ids 0..n-1, x1..xn are ids n..2n-1.
    for (uint32_t i = 1; i <= n; ++i) fi.sm.names.intern("v" + std::to_string(i));
    for (uint32_t i = 1; i <= n; ++i) fi.sm.names.intern("x" + std::to_string(i));
    fi.sm.h = Hypergraph(2 * n);
    std::vector<AtomId> big_tail;
    for (uint32_t i = 0; i + 1 < n; ++i) big_tail.push_back(i);
    fi.sm.h.add_edge(Hyperedge(big_tail, n - 1));
    for (uint32_t i = 0; i < n; ++i) fi.sm.h.add_edge(Hyperedge({n - 1}, n + i));
    fi.sm.forbidden = AtomSet(2 * n);
    fi.a = AtomSet(2 * n);
    for (uint32_t i = 0; i + 1 < n; ++i) fi.a.set(i);
    fi.update = Hyperedge({n - 2}, 2 * n);  // fresh head off v(n-1)
    return fi;
}

OracleInstance::OracleInstance(SafetyModel hidden, AtomSet a, Hyperedge update,
                               std::vector<Hyperedge> public_rules)
    : hidden_(std::move(hidden)),
      a_(std::move(a)),
      update_(std::move(update)),
      public_rules_(std::move(public_rules)) {
    // Probes answer for the state before the update edge activates.
    Hypergraph pre(hidden_.atom_count());
    hidden_.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        if (!(e == update_)) pre.add_edge(e);
    });
    cl_pre_ = closure(pre, a_);

    phi_ = AtomSet(hidden_.atom_count());
    for (AtomId t : update_.tail) phi_.set(t);
    phi_.set(update_.head);

    correct_ = audit_surface(hidden_, a_, k_param());
}

AtomProbeAnswer OracleInstance::probe_atom(AtomId a) {
    log_.push_back({ProbeLogEntry::Kind::Atom, a});
    if (phi_.test(a))
        ++frontier_;
    else
        ++propagation_;
    return peek_atom(a);
}

const Hyperedge& OracleInstance::probe_rule(size_t public_index) {
    log_.push_back({ProbeLogEntry::Kind::Rule, static_cast<uint32_t>(public_index)});
    return public_rules_.at(public_index);
}

AtomProbeAnswer OracleInstance::peek_atom(AtomId a) const {
    return {a_.test(a), cl_pre_.test(a)};
}

void OracleInstance::reset_probes() {
    log_.clear();
    frontier_ = 0;
    propagation_ = 0;
}

namespace {

// Exhaustive sweep: every atom probe except the distinguishing one must agree,
// the distinguishing one must differ, and the correct surfaces must differ.
void verify_pair(const InstancePair& pair) {
    if (pair.plus.universe() != pair.minus.universe())
        throw Error("instance pair universes differ");
    for (AtomId a = 0; a < pair.plus.universe(); ++a) {
        AtomProbeAnswer p = pair.plus.peek_atom(a);
        AtomProbeAnswer m = pair.minus.peek_atom(a);
        bool same = p.in_a == m.in_a && p.in_cl == m.in_cl;
        if (a == pair.distinguishing && same)
            throw Error("distinguishing atom probe does not differ");
        if (a != pair.distinguishing && !same)
            throw Error("non-distinguishing atom probe differs");
    }
    if (pair.plus.public_rules().size() != pair.minus.public_rules().size())
        throw Error("public rule sets differ");
    for (size_t i = 0; i < pair.plus.public_rules().size(); ++i)
        if (!(pair.plus.public_rules()[i] == pair.minus.public_rules()[i]))
            throw Error("public rule sets differ");
    if (pair.plus.correct_post_surface() == pair.minus.correct_post_surface())
        throw Error("correct post-update surfaces coincide");
}

}  // namespace

InstancePair gen_pair(PairKind kind, uint32_t k, uint32_t j) {
    if (k < 1) throw Error("tail size must be at least 1");
    if (kind == PairKind::Tail && (j < 1 || j > k)) throw Error("tail index out of range");

    // Shared atom layout: two fresh feeder atoms, the k tail atoms, then v_u.
    const uint32_t n = k + 3;
    Interner names;
    names.intern(kind == PairKind::Tail ? "x1" : "y1");
    names.intern(kind == PairKind::Tail ? "x2" : "y2");
    for (uint32_t i = 1; i <= k; ++i) names.intern("s" + std::to_string(i));
    names.intern("vu");
    const auto s = [](uint32_t i) { return static_cast<AtomId>(1 + i); };  // s(1)..s(k)
    const AtomId vu = k + 2;

    std::vector<AtomId> tail;
    for (uint32_t i = 1; i <= k; ++i) tail.push_back(s(i));
    Hyperedge update(tail, vu);

    auto make_model = [&](const std::vector<Hyperedge>& rules) {
        SafetyModel sm;
        sm.names = names;
        sm.h = Hypergraph(n);
        for (const Hyperedge& e : rules) sm.h.add_edge(e);
        sm.forbidden = AtomSet(n);
        return sm;
    };

    if (kind == PairKind::Tail) {
        // Private feeder rule: two fresh atoms jointly derive s_j on the plus
        // side only.  Two tail atoms keep it out of every singleton closure,
        // so the public rules determine cl_1 on both instances.
        Hyperedge feeder({0, 1}, s(j));
        AtomSet a(n);
        a.set(0);
        a.set(1);
        for (uint32_t i = 1; i <= k; ++i)
            if (i != j) a.set(s(i));
        std::vector<Hyperedge> public_rules{update};
        InstancePair pair{
            OracleInstance(make_model({update, feeder}), a, update, public_rules),
            OracleInstance(make_model({update}), a, update, public_rules),
            s(j), update};
        verify_pair(pair);
        return pair;
    }

    // Head pair: the public feeder derives s_1 conjunctively, so v_u stays
    // outside cl_1 even for singleton updates; the instances differ only in
    // whether v_u is already held.
    Hyperedge feeder({0, 1}, s(1));
    AtomSet a_plus(n);
    a_plus.set(0);
    a_plus.set(1);
    for (uint32_t i = 2; i <= k; ++i) a_plus.set(s(i));
    AtomSet a_minus = a_plus;
    a_minus.set(vu);
    std::vector<Hyperedge> public_rules{update, feeder};
    InstancePair pair{
        OracleInstance(make_model({update, feeder}), a_plus, update, public_rules),
        OracleInstance(make_model({update, feeder}), a_minus, update, public_rules),
        vu, update};
    verify_pair(pair);
    return pair;
}

namespace {

AuditSurface reconstruct_surface(OracleInstance& inst, const std::vector<AtomProbeAnswer>& facts) {
    const uint32_t n = inst.universe();
    AtomSet a(n), cl_pre(n);
    for (AtomId v = 0; v < n; ++v) {
        if (facts[v].in_a) a.set(v);
        if (facts[v].in_cl) cl_pre.set(v);
    }

    Hypergraph pub(n);
    for (size_t i = 0; i < inst.public_rules().size(); ++i)
        pub.add_edge(inst.probe_rule(i));

    SafetyModel view;
    view.h = std::move(pub);
    view.forbidden = inst.forbidden();

    AtomSet cl_post = closure(view.h, cl_pre);
    AtomSet cl1 = closure1(view.h, a);

    AuditSurface g;
    g.k_param = inst.k_param();
    g.emergent = cl_post;
    g.emergent.subtract(a);
    g.emergent.subtract(cl1);
    g.emergent.subtract(view.forbidden);

    g.nmf = AtomSet(n);
    for (const BoundaryEdge& b : boundary_edges(view, cl_post)) {
        if (view.forbidden.test(b.missing) || g.nmf.test(b.missing)) continue;
        AtomSet ext = a;
        ext.set(b.missing);
        if (!closure(view.h, ext).intersects(view.forbidden)) g.nmf.set(b.missing);
    }

    std::vector<GainEntry> gains;
    for (AtomId v = 0; v < n; ++v) {
        if (cl_post.test(v) || view.forbidden.test(v)) continue;
        AtomSet ext = a;
        ext.set(v);
        AtomSet gained = closure(view.h, ext);
        gained.subtract(cl_post);
        gained.subtract(view.forbidden);
        gains.push_back({v, gained.count()});
    }
    std::sort(gains.begin(), gains.end(), [](const GainEntry& x, const GainEntry& y) {
        return x.gain != y.gain ? x.gain > y.gain : x.atom < y.atom;
    });
    if (gains.size() > g.k_param) gains.resize(g.k_param);
    g.topk = std::move(gains);
    return g;
}

}  // namespace

AuditSurface dred_strategy(OracleInstance& inst) {
    const uint32_t n = inst.universe();
    std::vector<AtomProbeAnswer> facts(n);
    std::vector<uint8_t> probed(n, 0);

    // Rule-activation frontier first: every tail atom of the update, then
    // its head.
    for (AtomId t : inst.update().tail) {
        facts[t] = inst.probe_atom(t);
        probed[t] = 1;
    }
    facts[inst.update().head] = inst.probe_atom(inst.update().head);
    probed[inst.update().head] = 1;

    for (AtomId v = 0; v < n; ++v)
        if (!probed[v]) facts[v] = inst.probe_atom(v);

    return reconstruct_surface(inst, facts);
}

Strategy phi_avoiding_strategy(AtomId skip) {
    return [skip](OracleInstance& inst) {
        const uint32_t n = inst.universe();
        std::vector<AtomProbeAnswer> facts(n);
        for (AtomId v = 0; v < n; ++v)
            facts[v] = v == skip ? AtomProbeAnswer{false, false} : inst.probe_atom(v);
        return reconstruct_surface(inst, facts);
    };
}

ProbeRun run_probed(const Strategy& strategy, OracleInstance& inst) {
    inst.reset_probes();
    ProbeRun run;
    run.surface = strategy(inst);
    run.frontier_probes = inst.frontier_probes();
    run.total_probes = inst.probe_count();
    run.correct = run.surface == inst.correct_post_surface();
    return run;
}

std::vector<ProbeExperimentRow> run_probe_experiments(uint32_t k_max) {
    std::vector<ProbeExperimentRow> rows;
    auto run_both = [&](InstancePair& pair, const std::string& kind, uint32_t k, uint32_t j) {
        ProbeRun dp = run_probed(dred_strategy, pair.plus);
        ProbeRun dm = run_probed(dred_strategy, pair.minus);
        rows.push_back({kind, k, j, "dred", dp.frontier_probes, dp.total_probes, dp.correct,
                        dm.correct});
        Strategy avoid = phi_avoiding_strategy(pair.distinguishing);
        ProbeRun ap = run_probed(avoid, pair.plus);
        ProbeRun am = run_probed(avoid, pair.minus);
        rows.push_back({kind, k, j, "phi_avoiding", ap.frontier_probes, ap.total_probes,
                        ap.correct, am.correct});
    };
    for (uint32_t k = 1; k <= k_max; ++k) {
        for (uint32_t j = 1; j <= k; ++j) {
            InstancePair pair = gen_pair(PairKind::Tail, k, j);
            run_both(pair, "TAIL", k, j);
        }
        InstancePair pair = gen_pair(PairKind::Head, k);
        run_both(pair, "HEAD", k, 0);
    }
    return rows;
}

std::string probe_csv(const std::vector<ProbeExperimentRow>& rows) {
    std::ostringstream out;
    out << "kind,k,j,strategy,probes,correct_plus,correct_minus\n";
    for (const auto& r : rows)
        out << r.kind << ',' << r.k << ',' << r.j << ',' << r.strategy << ',' << r.probes << ','
            << (r.correct_plus ? 1 : 0) << ',' << (r.correct_minus ? 1 : 0) << '\n';
    return out.str();
}

std::vector<GapRow> run_gap_bench(const std::vector<uint32_t>& sizes, uint32_t trials,
                                  uint32_t k_param) {
    std::vector<GapRow> rows;
    for (uint32_t n : sizes) {
        GapRow row;
        row.n = n;

        std::vector<uint64_t> incr_walls, naive_walls;
        for (uint32_t t = 0; t < std::max(1u, trials); ++t) {
            FamilyInstance fi = gen_family(FamilyKind::HPrime, n);
            MaintainedState incr(fi.sm, fi.a, k_param);
            MaintainedState naive(fi.sm, fi.a, k_param);

            UpdateReport ri = incr.insert_edge(fi.update);
            UpdateReport rn = naive.insert_edge_naive(fi.update);

            AuditSurface scratch = audit_surface(incr.model(), incr.config(), k_param);
            if (incr.surface() != scratch || naive.surface() != scratch)
                throw Error("benchmark surfaces diverged from the scratch evaluation");

            row.incr_rederivations = ri.rederivations;
            row.naive_closure_evals = rn.closure_evals;
            incr_walls.push_back(ri.wall_nanos);
            naive_walls.push_back(rn.wall_nanos);
        }
        std::sort(incr_walls.begin(), incr_walls.end());
        std::sort(naive_walls.begin(), naive_walls.end());
        row.incr_wall_ns = incr_walls[incr_walls.size() / 2];
        row.naive_wall_ns = naive_walls[naive_walls.size() / 2];
        rows.push_back(row);
    }
    return rows;
}

std::string gap_csv(const std::vector<GapRow>& rows) {
    std::ostringstream out;
    out << "n,incr_rederivations,incr_wall_ns,naive_closure_evals,naive_wall_ns\n";
    for (const GapRow& r : rows)
        out << r.n << ',' << r.incr_rederivations << ',' << r.incr_wall_ns << ','
            << r.naive_closure_evals << ',' << r.naive_wall_ns << '\n';
    return out.str();
}

}  // namespace capdl::gaplab
