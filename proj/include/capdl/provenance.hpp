#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capdl/encoding.hpp"

namespace capdl {

// Inclusion-minimal family of atom sets in canonical order (size, then
// lexicographic on indices).  Carrier of the why-provenance semiring
// with PLUS = union-then-minimize and TIMES = pairwise-union-then-minimize.
class Antichain {
public:
    Antichain() = default;
    explicit Antichain(uint32_t universe) : universe_(universe) {}

    // PLUS identity: the empty family.
    static Antichain zero(uint32_t universe) { return Antichain(universe); }
    // TIMES identity: the family containing only the empty set.
    static Antichain one(uint32_t universe) {
        Antichain a(universe);
        a.sets_.push_back(AtomSet(universe));
        return a;
    }
    static Antichain from_sets(uint32_t universe, std::vector<AtomSet> sets);

    uint32_t universe() const { return universe_; }
    const std::vector<AtomSet>& sets() const { return sets_; }
    bool empty() const { return sets_.empty(); }
    size_t size() const { return sets_.size(); }

    bool dominates(const AtomSet& s) const;  // some element is a subset of s

    friend bool operator==(const Antichain& a, const Antichain& b) { return a.sets_ == b.sets_; }
    friend bool operator!=(const Antichain& a, const Antichain& b) { return !(a == b); }

private:
    uint32_t universe_ = 0;
    std::vector<AtomSet> sets_;
};

enum class SemiringOp { Plus, Times };

Antichain antichain_combine(const Antichain& x, const Antichain& y, SemiringOp op);
inline Antichain antichain_plus(const Antichain& x, const Antichain& y) {
    return antichain_combine(x, y, SemiringOp::Plus);
}
inline Antichain antichain_times(const Antichain& x, const Antichain& y) {
    return antichain_combine(x, y, SemiringOp::Times);
}

struct TruncationReport {
    bool truncated = false;
    std::vector<AtomId> affected_atoms;
};

// Per-atom minimal-support table over an explicit support universe.
struct WhyTable {
    uint32_t atom_count = 0;
    std::vector<Antichain> entries;
    Antichain forbidden_entry;
    TruncationReport truncation;
    uint64_t passes = 0;

    const Antichain& entry(AtomId v) const { return entries.at(v); }
};

// Fixed point of: entry(v) starts as {{v}} for v in the support universe,
// then each edge (S -> v) contributes TIMES over its tail entries, PLUS'd
// into entry(v), iterated to stability.  forbidden_entry is the PLUS over
// the forbidden atoms' entries.  Exact unless max_elements is exceeded.
WhyTable why_provenance(const SafetyModel& sm, const AtomSet& universe,
                        std::optional<size_t> max_elements = std::nullopt);

struct Certificate {
    AtomId target = 0;
    AtomSet base;
    FiringTrace trace;
};

// Certificate with a minimal base drawn from the target's why-provenance over
// support universe `a`; nullopt when the target is not derivable from `a`.
std::optional<Certificate> derive_certificate(const SafetyModel& sm, const AtomSet& a,
                                              AtomId target);

// Replays the trace from the base; true iff every step fires a live edge with
// its full tail already derived and the target ends up derived.
bool verify_certificate(const SafetyModel& sm, const Certificate& c);

// Line format: `target; base: a,b; steps: (edge,atom),(edge,atom)`.
std::string serialize_certificate(const SafetyModel& sm, const Certificate& c);
Certificate parse_certificate(const SafetyModel& sm, const std::string& line);

}  // namespace capdl
