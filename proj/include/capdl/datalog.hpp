#pragma once

#include <string>
#include <vector>

#include "capdl/atoms.hpp"
#include "capdl/errors.hpp"

namespace capdl::datalog {

struct Literal {
    AtomId atom = 0;
    bool negated = false;
    friend bool operator==(const Literal& a, const Literal& b) {
        return a.atom == b.atom && a.negated == b.negated;
    }
};

struct Rule {
    std::vector<Literal> body;  // sorted by (atom, negated), duplicate-free
    AtomId head = 0;
    uint32_t stratum = 0;

    Rule() = default;
    Rule(std::vector<Literal> b, AtomId h, uint32_t s = 0);

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.head == b.head && a.stratum == b.stratum && a.body == b.body;
    }
};

// Stratified propositional program over a dense atom universe.
struct Program {
    uint32_t atom_count = 0;
    std::vector<Rule> rules;
    uint32_t strata_count = 1;
    AtomSet edb_atoms;  // atoms allowed to appear in the EDB
    Interner names;     // one name per atom id; used by the text format

    bool positive() const;
};

struct Model {
    AtomSet true_atoms;
};

// Throws StratificationViolation unless: every intensional atom's defining
// rules share one stratum, positive body atoms sit in strata <= the rule's,
// and negated body atoms sit strictly below.  Extensional atoms count as
// stratum 0.
void validate_stratification(const Program& p);

// Stratum-by-stratum semi-naive least fixed point.  Negative literals are
// evaluated against the completed lower strata only.
Model eval(const Program& p, const AtomSet& edb);

// One application of T_P: i plus the heads of rules whose bodies hold in i.
// Requires a positive program.
AtomSet immediate_consequence(const Program& p, const AtomSet& i);

// Classical per-rule uniform containment for positive propositional programs:
// p1(D) is contained in p2(D) for every database D over the shared universe
// iff for each rule B => h of p1, h is in p2(B).  The base case (facts of D
// itself) holds automatically because models contain their EDB.
bool uniform_containment(const Program& p1, const Program& p2, AtomId q);

// Text format: `% edb a b` header, `% stratum N` section headers, one rule
// per line as `h :- b1, !b2.`; facts as `h.`.  serialize . parse = identity
// on programs; parse . serialize = identity on canonical text.
std::string serialize_program(const Program& p);
Program parse_program(const std::string& text);

}  // namespace capdl::datalog
