#include "capdl/safety.hpp"

namespace capdl {

bool is_safe(const SafetyModel& sm, const AtomSet& a) {
    return !closure(sm.h, a).intersects(sm.forbidden);
}

bool bf_member(const SafetyModel& sm, const AtomSet& b) {
    if (is_safe(sm, b)) return false;
    bool minimal = true;
    b.for_each([&](AtomId x) {
        AtomSet smaller = b;
        smaller.reset(x);
        if (!is_safe(sm, smaller)) minimal = false;
    });
    return minimal;
}

namespace {

// Visits all size-s subsets of 0..n-1 in lexicographic order.
template <typename F>
void for_each_combination(uint32_t n, uint32_t s, F f) {
    if (s > n) return;
    std::vector<AtomId> idx(s);
    for (uint32_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
        f(idx);
        uint32_t i = s;
        while (i > 0 && idx[i - 1] == n - s + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (uint32_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

MinimalUnsafeFamily bf_enumerate(const SafetyModel& sm, std::optional<size_t> max_witnesses) {
    const uint32_t n = sm.atom_count();
    std::vector<AtomSet> found;
    bool complete = true;

    for (uint32_t s = 0; s <= n && complete; ++s) {
        for_each_combination(n, s, [&](const std::vector<AtomId>& idx) {
            if (!complete) return;
            AtomSet c(n);
            for (AtomId a : idx) c.set(a);
            for (const AtomSet& w : found)
                if (w.is_subset_of(c)) return;
            if (is_safe(sm, c)) return;
            if (max_witnesses && found.size() >= *max_witnesses) {
                complete = false;
                return;
            }
            found.push_back(std::move(c));
        });
    }
    return {Antichain::from_sets(n, std::move(found)), complete};
}

bool coalition_safe(const SafetyModel& sm, const std::vector<AtomSet>& configs,
                    const MinimalUnsafeFamily& family) {
    if (!family.complete)
        throw IncompleteFamily("coalition check requires the complete witness family");
    AtomSet joint(sm.atom_count());
    for (const AtomSet& c : configs) joint |= c;
    return !family.witnesses.dominates(joint);
}

std::optional<std::pair<AtomSet, AtomSet>> split_witness(const SafetyModel& sm,
                                                         const MinimalUnsafeFamily& family) {
    if (!family.complete)
        throw IncompleteFamily("witness split requires the complete witness family");
    for (auto it = family.witnesses.sets().rbegin(); it != family.witnesses.sets().rend(); ++it) {
        if (it->count() < 2) continue;
        AtomId last = it->to_vector().back();
        AtomSet left = *it;
        left.reset(last);
        AtomSet right(sm.atom_count());
        right.set(last);
        return std::make_pair(std::move(left), std::move(right));
    }
    return std::nullopt;
}

}  // namespace capdl
