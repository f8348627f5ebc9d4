#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "capdl/provenance.hpp"

namespace capdl {

struct MinimalUnsafeFamily {
    Antichain witnesses;
    bool complete = true;
};

// One closure plus an intersection test.
bool is_safe(const SafetyModel& sm, const AtomSet& a);

// True iff b is unsafe and every one-element deletion is safe (|b|+1 closures).
bool bf_member(const SafetyModel& sm, const AtomSet& b);

// Breadth-first lattice enumeration with subset pruning: candidates of size s
// that contain no previously found witness and are unsafe are minimal, since
// all smaller minimal unsafe sets were already found.  Deterministic
// (size, then lexicographic) order.  Truncates once max_witnesses is hit.
MinimalUnsafeFamily bf_enumerate(const SafetyModel& sm,
                                 std::optional<size_t> max_witnesses = std::nullopt);

// False iff some witness is a subset of the union of the configurations.
// Requires a complete family.
bool coalition_safe(const SafetyModel& sm, const std::vector<AtomSet>& configs,
                    const MinimalUnsafeFamily& family);

// Two individually safe configurations with an unsafe union, split off a
// non-singleton witness; absent when every witness is a singleton.
std::optional<std::pair<AtomSet, AtomSet>> split_witness(const SafetyModel& sm,
                                                         const MinimalUnsafeFamily& family);

}  // namespace capdl
