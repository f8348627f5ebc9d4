#pragma once

#include <string>
#include <vector>

#include "capdl/datalog.hpp"
#include "capdl/hypergraph.hpp"

namespace capdl {

// A capability hypergraph with a forbidden set and the atom-name table.
struct SafetyModel {
    Hypergraph h;
    AtomSet forbidden;
    Interner names;

    uint32_t atom_count() const { return h.atom_count(); }
};

// Materialized capability <-> program-atom correspondence.  Capability v maps
// to program atom v (named `has(v)`); the distinguished `forbidden` atom gets
// the reserved id one past the capability universe.
struct LabelMap {
    uint32_t cap_count = 0;
    AtomId forbidden_atom = 0;
    std::vector<std::string> wrapped;  // per capability, e.g. "has(c1)"

    AtomId program_atom(AtomId cap) const { return cap; }
    AtomId capability(AtomId program_atom) const { return program_atom; }
};

struct EncodedProgram {
    datalog::Program program;
    LabelMap map;
};

// One positive rule per hyperedge, one `has(f) => forbidden` rule per
// forbidden capability; every capability atom is extensional.
EncodedProgram cap_to_dl(const SafetyModel& sm);

// EDB for configuration A under the encoding.
AtomSet edb_for_config(const EncodedProgram& enc, const AtomSet& a);

// One hyperedge per rule over the program's own atom universe.
// Throws NegationPresent for non-positive programs; a rule whose head occurs
// in its own body has no hyperedge counterpart and is rejected.
SafetyModel dl_to_cap(const datalog::Program& p);

}  // namespace capdl
