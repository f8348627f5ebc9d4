#include "capdl/encoding.hpp"

namespace capdl {

EncodedProgram cap_to_dl(const SafetyModel& sm) {
    const uint32_t n = sm.atom_count();
    EncodedProgram enc;
    enc.map.cap_count = n;
    enc.map.forbidden_atom = n;

    datalog::Program& p = enc.program;
    p.atom_count = n + 1;
    p.strata_count = 1;
    for (AtomId v = 0; v < n; ++v) {
        std::string w = "has(" + sm.names.name(v) + ")";
        enc.map.wrapped.push_back(w);
        p.names.intern(w);
    }
    p.names.intern("forbidden");

    sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        std::vector<datalog::Literal> body;
        for (AtomId s : e.tail) body.push_back({s, false});
        p.rules.emplace_back(std::move(body), e.head, 0);
    });
    sm.forbidden.for_each([&](AtomId f) {
        p.rules.emplace_back(std::vector<datalog::Literal>{{f, false}}, enc.map.forbidden_atom, 0);
    });

    p.edb_atoms = AtomSet(p.atom_count);
    for (AtomId v = 0; v < n; ++v) p.edb_atoms.set(v);
    return enc;
}

AtomSet edb_for_config(const EncodedProgram& enc, const AtomSet& a) {
    AtomSet edb(enc.program.atom_count);
    a.for_each([&](AtomId v) { edb.set(enc.map.program_atom(v)); });
    return edb;
}

SafetyModel dl_to_cap(const datalog::Program& p) {
    if (!p.positive()) throw NegationPresent("hypergraph encoding requires a positive program");
    SafetyModel sm;
    sm.h = Hypergraph(p.atom_count);
    sm.forbidden = AtomSet(p.atom_count);
    for (AtomId a = 0; a < p.atom_count; ++a)
        sm.names.intern(a < p.names.size() ? p.names.name(a) : "a" + std::to_string(a));
    for (const datalog::Rule& r : p.rules) {
        std::vector<AtomId> tail;
        for (const datalog::Literal& l : r.body) {
            if (l.atom == r.head)
                throw InvalidEdge("rule head occurs in its own body; no hyperedge counterpart");
            tail.push_back(l.atom);
        }
        sm.h.add_edge(Hyperedge(std::move(tail), r.head));
    }
    return sm;
}

}  // namespace capdl
