#pragma once

#include <string>
#include <vector>

#include "capdl/encoding.hpp"

namespace capdl {

struct GainEntry {
    AtomId atom;
    uint32_t gain;
    friend bool operator==(const GainEntry& a, const GainEntry& b) {
        return a.atom == b.atom && a.gain == b.gain;
    }
};

// The safe audit surface: emergent capabilities minus the forbidden set, the
// near-miss frontier, and the top-k marginal gains over candidates outside
// cl(A) and F.  Ties break by gain descending then atom id ascending.
struct AuditSurface {
    AtomSet emergent;
    AtomSet nmf;
    std::vector<GainEntry> topk;
    uint32_t k_param = 0;

    friend bool operator==(const AuditSurface& a, const AuditSurface& b) {
        return a.k_param == b.k_param && a.emergent == b.emergent && a.nmf == b.nmf &&
               a.topk == b.topk;
    }
    friend bool operator!=(const AuditSurface& a, const AuditSurface& b) { return !(a == b); }
};

// Hyperedge with exactly one tail atom outside cl(A), and that atom.
struct BoundaryEdge {
    EdgeId edge;
    AtomId missing;
    friend bool operator==(const BoundaryEdge& a, const BoundaryEdge& b) {
        return a.edge == b.edge && a.missing == b.missing;
    }
};

std::vector<BoundaryEdge> boundary_edges(const SafetyModel& sm, const AtomSet& closed);

// gamma_F(v, A) = |cl(A + v) \ (cl(A) + F)|.  Throws CandidateInvalid when
// v already lies in cl(A) or in F.
uint32_t marginal_gain(const SafetyModel& sm, const AtomSet& a, AtomId v);

AuditSurface audit_surface(const SafetyModel& sm, const AtomSet& a, uint32_t k_param);

// True iff every component of g1 is contained in the corresponding component
// of g2 (top-k compared as atom sets).  Throws ParamMismatch on different k.
bool surface_containment(const AuditSurface& g1, const AuditSurface& g2);

// Stratified view program over EDB atoms in_A(v):
//   stratum 0: closure (in_A(v) => has(v), one rule per hyperedge, forbidden)
//   stratum 1: singleton closure has_single, plus all_except(e, s_i) rules
//   stratum 2: emergent(v) :- has(v), !has_single(v), !in_A(v)  [v outside F]
//              boundary_miss(e, s_i) :- all_except(e, s_i), !has(s_i)
// Strata beyond boundary detection (NMF filtering, top-k ranking) are
// computed directly; this program is cross-validated against the direct path.
struct ViewProgram {
    datalog::Program program;
    uint32_t cap_count = 0;
    std::vector<AtomId> in_a;          // per capability
    std::vector<AtomId> has;           // per capability
    std::vector<AtomId> has_single;    // per capability
    AtomId forbidden = 0;
    std::vector<std::vector<AtomId>> all_except;     // [edge][tail position]
    std::vector<std::vector<AtomId>> boundary_miss;  // [edge][tail position]
    std::vector<AtomId> emergent;                    // per capability; UINT32_MAX for forbidden atoms
    std::vector<EdgeId> edge_ids;                    // live edge id per all_except row
};

ViewProgram build_view_program(const SafetyModel& sm);

struct ViewResult {
    AtomSet emergent;
    std::vector<BoundaryEdge> boundary;
};

// Evaluates the view program on D_A and reads back the derived predicates.
ViewResult eval_view(const ViewProgram& vp, const SafetyModel& sm, const AtomSet& a);

// Three labeled sections, atoms by name, integer gains.
std::string serialize_surface(const SafetyModel& sm, const AuditSurface& g);

}  // namespace capdl
