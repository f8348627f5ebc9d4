#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "capdl/atoms.hpp"
#include "capdl/errors.hpp"

namespace capdl {

// Singleton-head hyperedge: fires head once every tail atom is present.
// An empty tail is a fact edge and fires unconditionally.
struct Hyperedge {
    std::vector<AtomId> tail;  // sorted, duplicate-free
    AtomId head = 0;

    Hyperedge() = default;
    Hyperedge(std::vector<AtomId> t, AtomId h);

    friend bool operator==(const Hyperedge& a, const Hyperedge& b) {
        return a.head == b.head && a.tail == b.tail;
    }
};

struct FiringStep {
    EdgeId edge;
    AtomId derived;
    friend bool operator==(const FiringStep& a, const FiringStep& b) {
        return a.edge == b.edge && a.derived == b.derived;
    }
};

// Replayable derivation: applying the steps in order to the initial
// configuration reproduces the closure exactly.
struct FiringTrace {
    std::vector<FiringStep> steps;
};

struct ClosureStats {
    uint32_t insertions = 0;       // atoms added to the worklist, <= n
    uint64_t tail_decrements = 0;  // counter updates, <= m*k
};

// Directed hypergraph with singleton heads and a per-atom tail index.
// Edge ids are stable; removal tombstones the slot.
class Hypergraph {
public:
    Hypergraph() = default;
    explicit Hypergraph(uint32_t atom_count) : tail_index_(atom_count) {}

    uint32_t atom_count() const { return static_cast<uint32_t>(tail_index_.size()); }
    uint32_t edge_count() const { return live_edges_; }
    uint32_t edge_slots() const { return static_cast<uint32_t>(edges_.size()); }
    uint32_t max_tail_size() const { return max_tail_; }

    bool edge_alive(EdgeId e) const { return e < edges_.size() && alive_[e]; }
    const Hyperedge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<EdgeId>& edges_with_tail_atom(AtomId a) const { return tail_index_.at(a); }

    template <typename F>
    void for_each_edge(F f) const {
        for (EdgeId e = 0; e < edges_.size(); ++e)
            if (alive_[e]) f(e, edges_[e]);
    }

    void add_atoms(uint32_t new_count);
    EdgeId add_edge(Hyperedge e);
    std::optional<EdgeId> find_edge(const Hyperedge& e) const;
    void remove_edge(EdgeId e);

    // Every (atom, edge) tail membership appears exactly once in the index
    // and the recorded counts match the contents.
    bool check_invariants() const;

private:
    std::vector<Hyperedge> edges_;
    std::vector<uint8_t> alive_;
    std::vector<std::vector<EdgeId>> tail_index_;
    uint32_t live_edges_ = 0;
    uint32_t max_tail_ = 0;
};

// Splits multi-head raw edges into singleton-head form and builds the index.
// Rejects any raw edge whose head set intersects its tail.
using RawEdge = std::pair<std::vector<AtomId>, std::vector<AtomId>>;
Hypergraph normalize(const std::vector<RawEdge>& raw_edges, uint32_t atom_count);

// Least superset of `a` closed under edge firing.  Worklist with per-edge
// missing-tail counters; FIFO over insertion order so traces are stable.
AtomSet closure(const Hypergraph& h, const AtomSet& a, FiringTrace* trace = nullptr,
                ClosureStats* stats = nullptr);

// Closure restricted to edges with exactly one tail atom.  Fact edges are
// excluded: they are conjunctive degenerate cases, not singleton chains.
AtomSet closure1(const Hypergraph& h, const AtomSet& a);

// Replays a trace from `base`.  Returns the derived set, or nullopt if some
// step references a dead edge, a mismatched head, or an unsatisfied tail.
std::optional<AtomSet> replay_trace(const Hypergraph& h, const AtomSet& base,
                                    const FiringTrace& trace);

}  // namespace capdl
