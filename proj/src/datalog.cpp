#include "capdl/datalog.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace capdl::datalog {

Rule::Rule(std::vector<Literal> b, AtomId h, uint32_t s) : body(std::move(b)), head(h), stratum(s) {
    std::sort(body.begin(), body.end(), [](const Literal& x, const Literal& y) {
        return x.atom != y.atom ? x.atom < y.atom : x.negated < y.negated;
    });
    body.erase(std::unique(body.begin(), body.end()), body.end());
}

bool Program::positive() const {
    for (const Rule& r : rules)
        for (const Literal& l : r.body)
            if (l.negated) return false;
    return true;
}

namespace {

// Defining stratum per atom: rules' shared stratum for intensional atoms,
// 0 for purely extensional ones.
std::vector<uint32_t> defining_strata(const Program& p) {
    constexpr uint32_t kNone = UINT32_MAX;
    std::vector<uint32_t> def(p.atom_count, kNone);
    for (const Rule& r : p.rules) {
        if (r.head >= p.atom_count) throw StratificationViolation("rule head beyond universe");
        if (def[r.head] == kNone)
            def[r.head] = r.stratum;
        else if (def[r.head] != r.stratum)
            throw StratificationViolation("atom defined in more than one stratum");
    }
    for (uint32_t a = 0; a < p.atom_count; ++a)
        if (def[a] == kNone) def[a] = 0;
    return def;
}

}  // namespace

void validate_stratification(const Program& p) {
    auto def = defining_strata(p);
    for (const Rule& r : p.rules) {
        if (r.stratum >= p.strata_count)
            throw StratificationViolation("rule stratum beyond strata_count");
        for (const Literal& l : r.body) {
            if (l.atom >= p.atom_count)
                throw StratificationViolation("body atom beyond universe");
            if (l.negated) {
                if (def[l.atom] >= r.stratum)
                    throw StratificationViolation("negated atom not in a strictly lower stratum");
            } else if (def[l.atom] > r.stratum) {
                throw StratificationViolation("positive body atom in a higher stratum");
            }
        }
    }
}

namespace {

// Positive semi-naive pass over one stratum's rules.  `model` already holds
// the lower strata; negated literals were checked by the caller.
void run_stratum(const Program& p, const std::vector<size_t>& rule_ids, AtomSet& model) {
    std::vector<uint32_t> missing(rule_ids.size(), 0);
    std::vector<std::vector<size_t>> by_atom(p.atom_count);
    std::deque<AtomId> queue;

    for (size_t i = 0; i < rule_ids.size(); ++i) {
        const Rule& r = p.rules[rule_ids[i]];
        uint32_t miss = 0;
        for (const Literal& l : r.body) {
            if (l.negated) continue;
            by_atom[l.atom].push_back(i);
            if (!model.test(l.atom)) ++miss;
        }
        missing[i] = miss;
    }

    auto derive = [&](AtomId head) {
        if (model.test(head)) return;
        model.set(head);
        queue.push_back(head);
    };

    for (size_t i = 0; i < rule_ids.size(); ++i)
        if (missing[i] == 0) derive(p.rules[rule_ids[i]].head);

    while (!queue.empty()) {
        AtomId u = queue.front();
        queue.pop_front();
        for (size_t i : by_atom[u])
            if (--missing[i] == 0) derive(p.rules[rule_ids[i]].head);
    }
}

AtomSet eval_impl(const Program& p, const AtomSet& edb) {
    AtomSet model = edb;
    if (model.universe() < p.atom_count) model.resize_universe(p.atom_count);

    for (uint32_t s = 0; s < p.strata_count; ++s) {
        std::vector<size_t> active;
        for (size_t i = 0; i < p.rules.size(); ++i) {
            const Rule& r = p.rules[i];
            if (r.stratum != s) continue;
            bool blocked = false;
            for (const Literal& l : r.body)
                if (l.negated && model.test(l.atom)) blocked = true;
            if (!blocked) active.push_back(i);
        }
        run_stratum(p, active, model);
    }
    return model;
}

}  // namespace

Model eval(const Program& p, const AtomSet& edb) {
    validate_stratification(p);
    if (!edb.is_subset_of(p.edb_atoms)) throw Error("EDB contains non-extensional atoms");
    return Model{eval_impl(p, edb)};
}

AtomSet immediate_consequence(const Program& p, const AtomSet& i) {
    if (!p.positive()) throw NegationPresent("immediate consequence requires a positive program");
    AtomSet out = i;
    if (out.universe() < p.atom_count) out.resize_universe(p.atom_count);
    for (const Rule& r : p.rules) {
        bool holds = true;
        for (const Literal& l : r.body)
            if (!i.test(l.atom)) holds = false;
        if (holds) out.set(r.head);
    }
    return out;
}

bool uniform_containment(const Program& p1, const Program& p2, AtomId q) {
    if (p1.atom_count != p2.atom_count)
        throw UniverseMismatch("containment requires a shared atom universe");
    if (q >= p1.atom_count) throw UniverseMismatch("query atom beyond universe");
    if (!p1.positive() || !p2.positive())
        throw NegationPresent("containment is defined for positive programs");

    for (const Rule& r : p1.rules) {
        AtomSet canonical(p1.atom_count);
        for (const Literal& l : r.body) canonical.set(l.atom);
        if (!eval_impl(p2, canonical).test(r.head)) return false;
    }
    return true;
}

namespace {

std::string atom_name(const Program& p, AtomId a) {
    if (a < p.names.size()) return p.names.name(a);
    return "a" + std::to_string(a);
}

}  // namespace

std::string serialize_program(const Program& p) {
    std::ostringstream out;
    out << "% atoms";
    for (AtomId a = 0; a < p.atom_count; ++a) out << ' ' << atom_name(p, a);
    out << '\n';
    if (!p.edb_atoms.empty()) {
        out << "% edb";
        p.edb_atoms.for_each([&](AtomId a) { out << ' ' << atom_name(p, a); });
        out << '\n';
    }
    for (uint32_t s = 0; s < p.strata_count; ++s) {
        out << "% stratum " << s << '\n';
        for (const Rule& r : p.rules) {
            if (r.stratum != s) continue;
            out << atom_name(p, r.head);
            if (!r.body.empty()) {
                out << " :- ";
                for (size_t i = 0; i < r.body.size(); ++i) {
                    if (i) out << ", ";
                    if (r.body[i].negated) out << '!';
                    out << atom_name(p, r.body[i].atom);
                }
            }
            out << ".\n";
        }
    }
    return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Program parse_program(const std::string& text) {
    Program p;
    uint32_t current_stratum = 0;
    std::vector<std::string> edb_names;
    std::istringstream in(text);
    std::string raw;
    size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip(raw);
        if (line.empty()) continue;
        if (line[0] == '%') {
            auto toks = split_ws(line.substr(1));
            if (toks.empty()) continue;
            if (toks[0] == "atoms") {
                for (size_t i = 1; i < toks.size(); ++i) p.names.intern(toks[i]);
            } else if (toks[0] == "edb") {
                edb_names.assign(toks.begin() + 1, toks.end());
            } else if (toks[0] == "stratum") {
                if (toks.size() != 2) throw ParseError(line_no, "malformed stratum header");
                current_stratum = static_cast<uint32_t>(std::stoul(toks[1]));
                p.strata_count = std::max(p.strata_count, current_stratum + 1);
            } else {
                throw ParseError(line_no, "unknown directive: " + toks[0]);
            }
            continue;
        }
        if (line.back() != '.') throw ParseError(line_no, "rule must end with '.'");
        line.pop_back();

        std::string head_s, body_s;
        size_t arrow = line.find(":-");
        if (arrow == std::string::npos) {
            head_s = strip(line);
        } else {
            head_s = strip(line.substr(0, arrow));
            body_s = strip(line.substr(arrow + 2));
        }
        if (head_s.empty() || head_s.find(' ') != std::string::npos)
            throw ParseError(line_no, "malformed rule head");

        std::vector<Literal> body;
        if (!body_s.empty()) {
            size_t pos = 0;
            while (pos <= body_s.size()) {
                size_t comma = body_s.find(',', pos);
                std::string tok = strip(comma == std::string::npos ? body_s.substr(pos)
                                                                   : body_s.substr(pos, comma - pos));
                if (tok.empty()) throw ParseError(line_no, "empty body literal");
                bool neg = tok[0] == '!';
                if (neg) tok = strip(tok.substr(1));
                if (tok.empty()) throw ParseError(line_no, "empty negated literal");
                body.push_back({p.names.intern(tok), neg});
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
        p.rules.emplace_back(std::move(body), p.names.intern(head_s), current_stratum);
    }

    for (const std::string& n : edb_names) p.names.intern(n);
    p.atom_count = p.names.size();
    p.edb_atoms = AtomSet(p.atom_count);
    for (const std::string& n : edb_names) p.edb_atoms.set(p.names.id_of(n));
    return p;
}

}  // namespace capdl::datalog
