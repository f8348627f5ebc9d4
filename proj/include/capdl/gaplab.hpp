#pragma once

#include <functional>
#include <string>
#include <vector>

#include "capdl/incremental.hpp"

namespace capdl::gaplab {

enum class FamilyKind { Chain, HPrime };

struct FamilyInstance {
    SafetyModel sm;
    AtomSet a;
    Hyperedge update;  // head is a fresh atom one past the current universe
};

// Chain: v1 -> v2 -> ... -> vn, A = {v1}, update appends a fresh head to vn.
// HPrime: one (n-1)-tail edge into vn, fan-out vn -> x1..xn, A = v1..v(n-1),
// update is the singleton ({v(n-1)} -> fresh); its dependency cone is one atom
// while a from-scratch pass must re-evaluate a gain closure per non-EDB atom.
FamilyInstance gen_family(FamilyKind kind, uint32_t n);

struct AtomProbeAnswer {
    bool in_a = false;
    bool in_cl = false;  // derivability before the update edge activates
};

struct ProbeLogEntry {
    enum class Kind { Atom, Rule } kind;
    uint32_t index;
};

// A hidden (model, configuration) reachable only through unit-cost probes.
// Rule probes address the public base program; auxiliary rules inside the
// hidden model are not addressable (their presence shows up only through the
// atom probes they influence).
class OracleInstance {
public:
    OracleInstance(SafetyModel hidden, AtomSet a, Hyperedge update,
                   std::vector<Hyperedge> public_rules);

    uint32_t universe() const { return hidden_.atom_count(); }
    const AtomSet& forbidden() const { return hidden_.forbidden; }
    const Hyperedge& update() const { return update_; }
    const std::vector<Hyperedge>& public_rules() const { return public_rules_; }
    uint32_t k_param() const { return universe(); }

    AtomProbeAnswer probe_atom(AtomId a);
    const Hyperedge& probe_rule(size_t public_index);

    uint64_t probe_count() const { return log_.size(); }
    uint64_t frontier_probes() const { return frontier_; }
    uint64_t propagation_probes() const { return propagation_; }
    const std::vector<ProbeLogEntry>& probe_log() const { return log_; }
    void reset_probes();

    // Harness side: ground truth and non-logging inspection.
    AtomProbeAnswer peek_atom(AtomId a) const;
    const AuditSurface& correct_post_surface() const { return correct_; }
    const SafetyModel& hidden_model() const { return hidden_; }
    const AtomSet& hidden_config() const { return a_; }

private:
    SafetyModel hidden_;  // includes the update edge and any auxiliary rules
    AtomSet a_;
    Hyperedge update_;
    std::vector<Hyperedge> public_rules_;
    AtomSet cl_pre_;  // closure with the update edge inactive
    AtomSet phi_;     // S_u + {v_u}
    AuditSurface correct_;
    std::vector<ProbeLogEntry> log_;
    uint64_t frontier_ = 0;
    uint64_t propagation_ = 0;
};

enum class PairKind { Tail, Head };

// Two instances whose probe answers agree everywhere except one atom, with
// different correct post-update surfaces.  Invariants are checked by an
// exhaustive probe sweep at construction.
struct InstancePair {
    OracleInstance plus;
    OracleInstance minus;
    AtomId distinguishing;
    Hyperedge update;
};

// Tail pairs hide whether tail atom s_j is derivable (via a private
// two-fresh-atom rule present only on the plus side); head pairs hide whether
// v_u is already held.  j is 1-based and only meaningful for Tail.
InstancePair gen_pair(PairKind kind, uint32_t k, uint32_t j = 1);

using Strategy = std::function<AuditSurface(OracleInstance&)>;

// Probes every atom of Phi(u) = S_u + {v_u} (the rule-activation frontier),
// surveys the remaining atoms, and reconstructs the post-update surface from
// the public rules.
AuditSurface dred_strategy(OracleInstance& inst);

// Same reconstruction but never probes `skip`, assuming it absent and
// underivable.  Used to demonstrate the inspection lower bound.
Strategy phi_avoiding_strategy(AtomId skip);

struct ProbeRun {
    AuditSurface surface;
    uint64_t frontier_probes = 0;
    uint64_t total_probes = 0;
    bool correct = false;
};

ProbeRun run_probed(const Strategy& strategy, OracleInstance& inst);

struct ProbeExperimentRow {
    std::string kind;      // TAIL or HEAD
    uint32_t k = 0;
    uint32_t j = 0;
    std::string strategy;  // dred or phi_avoiding
    uint64_t probes = 0;   // frontier (rule-activation) probes
    uint64_t total_probes = 0;
    bool correct_plus = false;
    bool correct_minus = false;
};

// Runs both strategies over every pair with tail size <= k_max.
std::vector<ProbeExperimentRow> run_probe_experiments(uint32_t k_max);
std::string probe_csv(const std::vector<ProbeExperimentRow>& rows);

struct GapRow {
    uint32_t n = 0;
    uint64_t incr_rederivations = 0;
    uint64_t incr_wall_ns = 0;
    uint64_t naive_closure_evals = 0;
    uint64_t naive_wall_ns = 0;
};

// For each size: twin states take the HPrime update incrementally and via
// full recomputation; both resulting surfaces are checked against a scratch
// evaluation before counters are recorded.  Wall times are medians of
// `trials` runs; counters are deterministic.
std::vector<GapRow> run_gap_bench(const std::vector<uint32_t>& sizes, uint32_t trials,
                                  uint32_t k_param = 8);
std::string gap_csv(const std::vector<GapRow>& rows);

}  // namespace capdl::gaplab
