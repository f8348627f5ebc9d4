#include "capdl/hypergraph.hpp"

#include <algorithm>
#include <deque>

namespace capdl {

Hyperedge::Hyperedge(std::vector<AtomId> t, AtomId h) : tail(std::move(t)), head(h) {
    std::sort(tail.begin(), tail.end());
    tail.erase(std::unique(tail.begin(), tail.end()), tail.end());
    if (std::binary_search(tail.begin(), tail.end(), head))
        throw InvalidEdge("edge head appears in its own tail");
}

void Hypergraph::add_atoms(uint32_t new_count) {
    if (new_count < atom_count()) throw std::logic_error("atom universe cannot shrink");
    tail_index_.resize(new_count);
}

EdgeId Hypergraph::add_edge(Hyperedge e) {
    for (AtomId a : e.tail)
        if (a >= atom_count()) throw InvalidEdge("tail atom beyond universe");
    if (e.head >= atom_count()) throw InvalidEdge("head atom beyond universe");
    EdgeId id = static_cast<EdgeId>(edges_.size());
    for (AtomId a : e.tail) tail_index_[a].push_back(id);
    max_tail_ = std::max(max_tail_, static_cast<uint32_t>(e.tail.size()));
    edges_.push_back(std::move(e));
    alive_.push_back(1);
    ++live_edges_;
    return id;
}

std::optional<EdgeId> Hypergraph::find_edge(const Hyperedge& e) const {
    for (EdgeId id = 0; id < edges_.size(); ++id)
        if (alive_[id] && edges_[id] == e) return id;
    return std::nullopt;
}

void Hypergraph::remove_edge(EdgeId e) {
    if (!edge_alive(e)) throw UnknownEdge("no live edge with id " + std::to_string(e));
    alive_[e] = 0;
    --live_edges_;
    if (edges_[e].tail.size() == max_tail_) {
        max_tail_ = 0;
        for_each_edge([&](EdgeId, const Hyperedge& ed) {
            max_tail_ = std::max(max_tail_, static_cast<uint32_t>(ed.tail.size()));
        });
    }
}

bool Hypergraph::check_invariants() const {
    uint32_t live = 0, maxt = 0;
    std::vector<std::vector<EdgeId>> want(atom_count());
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        for (AtomId a : edges_[e].tail) {
            if (a >= atom_count()) return false;
            want[a].push_back(e);
        }
        if (edges_[e].head >= atom_count()) return false;
        if (alive_[e]) {
            ++live;
            maxt = std::max(maxt, static_cast<uint32_t>(edges_[e].tail.size()));
        }
    }
    if (live != live_edges_ || maxt != max_tail_) return false;
    // The index keeps tombstoned entries; memberships must match per atom.
    for (AtomId a = 0; a < atom_count(); ++a)
        if (tail_index_[a] != want[a]) return false;
    return true;
}

Hypergraph normalize(const std::vector<RawEdge>& raw_edges, uint32_t atom_count) {
    Hypergraph h(atom_count);
    for (const auto& [tail, heads] : raw_edges) {
        for (AtomId head : heads) {
            if (std::find(tail.begin(), tail.end(), head) != tail.end())
                throw InvalidEdge("raw edge head set intersects its tail");
            h.add_edge(Hyperedge(tail, head));
        }
    }
    return h;
}

namespace {

AtomSet closure_impl(const Hypergraph& h, const AtomSet& a, bool singleton_only,
                     FiringTrace* trace, ClosureStats* stats) {
    AtomSet closed = a;
    if (closed.universe() < h.atom_count()) closed.resize_universe(h.atom_count());

    auto usable = [&](const Hyperedge& e) {
        return !singleton_only || e.tail.size() == 1;
    };

    std::vector<uint32_t> missing(h.edge_slots(), 0);
    std::deque<AtomId> queue;

    h.for_each_edge([&](EdgeId id, const Hyperedge& e) {
        if (!usable(e)) return;
        uint32_t miss = 0;
        for (AtomId t : e.tail)
            if (!closed.test(t)) ++miss;
        missing[id] = miss;
    });

    auto derive = [&](EdgeId id, AtomId atom) {
        if (closed.test(atom)) return;
        closed.set(atom);
        queue.push_back(atom);
        if (trace) trace->steps.push_back({id, atom});
        if (stats) ++stats->insertions;
    };

    // Fact edges and edges already satisfied by `a` fire first, in id order.
    h.for_each_edge([&](EdgeId id, const Hyperedge& e) {
        if (usable(e) && missing[id] == 0) derive(id, e.head);
    });

    while (!queue.empty()) {
        AtomId u = queue.front();
        queue.pop_front();
        for (EdgeId id : h.edges_with_tail_atom(u)) {
            if (!h.edge_alive(id) || !usable(h.edge(id))) continue;
            if (stats) ++stats->tail_decrements;
            if (--missing[id] == 0) derive(id, h.edge(id).head);
        }
    }
    return closed;
}

}  // namespace

AtomSet closure(const Hypergraph& h, const AtomSet& a, FiringTrace* trace, ClosureStats* stats) {
    return closure_impl(h, a, false, trace, stats);
}

AtomSet closure1(const Hypergraph& h, const AtomSet& a) {
    return closure_impl(h, a, true, nullptr, nullptr);
}

std::optional<AtomSet> replay_trace(const Hypergraph& h, const AtomSet& base,
                                    const FiringTrace& trace) {
    AtomSet acc = base;
    if (acc.universe() < h.atom_count()) acc.resize_universe(h.atom_count());
    for (const FiringStep& step : trace.steps) {
        if (!h.edge_alive(step.edge)) return std::nullopt;
        const Hyperedge& e = h.edge(step.edge);
        if (e.head != step.derived) return std::nullopt;
        for (AtomId t : e.tail)
            if (!acc.test(t)) return std::nullopt;
        acc.set(step.derived);
    }
    return acc;
}

}  // namespace capdl
