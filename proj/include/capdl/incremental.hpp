#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capdl/audit.hpp"

namespace capdl {

struct UpdateReport {
    std::string op;
    AtomSet cone;               // atoms whose derivation status the update touched
    uint64_t rederivations = 0;  // atom (re)derivations during propagation
    uint64_t closure_evals = 0;  // full closure evaluations (gain recomputations)
    std::optional<uint64_t> probes;
    uint64_t wall_nanos = 0;

    // op,cone_size,rederivations,closure_evals,wall_nanos
    std::string csv_row() const;
};

// Closure and audit surface maintained under hyperedge updates.  Insertions
// propagate semi-naively from the new edge; deletions run delete-and-rederive
// (over-delete everything derivable through the removed edge, then re-derive
// survivors).  The surface is refreshed on the dependency cone: emergent and
// boundary status for touched atoms/edges, gains for candidates that can
// reach a touched atom (conservative reverse reachability).
class MaintainedState {
public:
    MaintainedState(SafetyModel sm, AtomSet a, uint32_t k_param);

    // Names a fresh atom and grows the universe.
    AtomId add_atom(const std::string& name);

    UpdateReport insert_edge(const Hyperedge& e);        // throws DuplicateEdge
    UpdateReport insert_edge_naive(const Hyperedge& e);  // register, then naive_recompute
    UpdateReport delete_edge(EdgeId id);                 // throws UnknownEdge

    // Discards caches and recomputes everything from definitions.  Reported
    // closure_evals = 1 base closure + one gain closure per atom outside
    // A and F, the cost profile of recomputation without closure knowledge.
    UpdateReport naive_recompute();

    const SafetyModel& model() const { return sm_; }
    const AtomSet& config() const { return a_; }
    const AtomSet& closed() const { return closed_; }
    const AtomSet& closed_single() const { return closed1_; }
    const AuditSurface& surface() const { return surface_; }
    uint32_t k_param() const { return k_; }
    bool edge_lazy(EdgeId e) const { return lazy_.at(e) != 0; }

private:
    SafetyModel sm_;
    AtomSet a_;
    uint32_t k_;

    AtomSet closed_, closed1_;
    std::vector<uint32_t> support_, support1_;            // tail atoms currently closed
    std::vector<std::vector<EdgeId>> derived_by_, derived_by1_;  // edges firing into atom
    std::vector<std::vector<EdgeId>> head_index_;         // edges by head atom
    std::vector<uint8_t> lazy_;
    AuditSurface surface_;
    std::vector<int64_t> gain_;  // cached gain per atom, -1 when not a candidate

    void grow_universe(uint32_t n);
    void rebuild_closure_caches();
    void rebuild_surface_full(UpdateReport* report, bool count_all_noncfg_gains);
    AtomSet propagate_insert(EdgeId eid, bool singleton_layer, uint64_t& rederivations);
    AtomSet dred_delete(EdgeId eid, bool singleton_layer, uint64_t& rederivations);
    void refresh_surface(const AtomSet& touched_atoms, UpdateReport& report);
    // Arc-relaxed cones (every hyperedge contributes arcs tail atom -> head):
    // a superset of anything derivations through the touched region can reach
    // or feed, so gain caches outside rev(fwd(touched)) stay valid.
    AtomSet forward_cone(const AtomSet& sources) const;
    AtomSet reverse_cone(const AtomSet& targets) const;
    void debug_check() const;
};

}  // namespace capdl
