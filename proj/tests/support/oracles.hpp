#pragma once

// Independent reference implementations used as test oracles.  Everything
// here works by naive set-at-a-time iteration or exhaustive enumeration and
// deliberately avoids the library's worklist/semi-naive/incremental paths.

#include <vector>

#include "capdl/audit.hpp"
#include "capdl/datalog.hpp"
#include "capdl/encoding.hpp"

namespace capdl::oracles {

// Fixed-point iteration C_{i+1} = C_i + heads of satisfied edges.
AtomSet naive_closure(const Hypergraph& h, const AtomSet& a);
AtomSet naive_closure1(const Hypergraph& h, const AtomSet& a);

// Iteration index at which each atom first appears (0 for the initial set,
// -1 when unreachable).
std::vector<int> naive_closure_depths(const Hypergraph& h, const AtomSet& a);

bool naive_safe(const SafetyModel& sm, const AtomSet& a);

// All inclusion-minimal unsafe subsets, by scanning all 2^n subsets.
std::vector<AtomSet> brute_force_bf(const SafetyModel& sm);

// Minimal W within the support universe with v in cl(W), per atom.
std::vector<std::vector<AtomSet>> brute_force_why(const SafetyModel& sm, const AtomSet& universe);

// Surface computed from the definitions using only naive_closure.
AuditSurface definitional_surface(const SafetyModel& sm, const AtomSet& a, uint32_t k_param);

// Stratified naive evaluation: per stratum, iterate all rules until stable.
AtomSet naive_eval(const datalog::Program& p, const AtomSet& edb);

// Whether p1(D) is a subset of p2(D) for every database over the universe.
bool exhaustive_containment(const datalog::Program& p1, const datalog::Program& p2);

}  // namespace capdl::oracles
