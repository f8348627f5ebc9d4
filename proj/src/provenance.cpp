#include "capdl/provenance.hpp"

#include <algorithm>
#include <sstream>

namespace capdl {

namespace {

std::vector<AtomSet> minimize(std::vector<AtomSet> sets) {
    std::sort(sets.begin(), sets.end(),
              [](const AtomSet& a, const AtomSet& b) { return a.compare_canonical(b) < 0; });
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<AtomSet> out;
    for (const AtomSet& s : sets) {
        bool dominated = false;
        for (const AtomSet& kept : out)
            if (kept.is_subset_of(s)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(s);
    }
    return out;
}

}  // namespace

Antichain Antichain::from_sets(uint32_t universe, std::vector<AtomSet> sets) {
    Antichain a(universe);
    a.sets_ = minimize(std::move(sets));
    return a;
}

bool Antichain::dominates(const AtomSet& s) const {
    for (const AtomSet& e : sets_)
        if (e.is_subset_of(s)) return true;
    return false;
}

Antichain antichain_combine(const Antichain& x, const Antichain& y, SemiringOp op) {
    uint32_t universe = std::max(x.universe(), y.universe());
    std::vector<AtomSet> sets;
    if (op == SemiringOp::Plus) {
        sets = x.sets();
        sets.insert(sets.end(), y.sets().begin(), y.sets().end());
    } else {
        sets.reserve(x.size() * y.size());
        for (const AtomSet& a : x.sets())
            for (const AtomSet& b : y.sets()) sets.push_back(a | b);
    }
    return Antichain::from_sets(universe, std::move(sets));
}

WhyTable why_provenance(const SafetyModel& sm, const AtomSet& universe,
                        std::optional<size_t> max_elements) {
    const uint32_t n = sm.atom_count();
    WhyTable table;
    table.atom_count = n;
    table.entries.assign(n, Antichain::zero(n));
    universe.for_each([&](AtomId v) {
        AtomSet self(n);
        self.set(v);
        table.entries[v] = Antichain::from_sets(n, {self});
    });

    const uint64_t pass_limit = uint64_t{n} * std::max(1u, sm.h.edge_count()) + 1;
    bool changed = true;
    while (changed) {
        changed = false;
        ++table.passes;
        sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
            Antichain combined = Antichain::one(n);
            for (AtomId s : e.tail) {
                combined = antichain_times(combined, table.entries[s]);
                if (combined.empty()) break;
            }
            if (combined.empty()) return;
            Antichain next = antichain_plus(table.entries[e.head], combined);
            if (max_elements && next.size() > *max_elements) {
                table.truncation.truncated = true;
                table.truncation.affected_atoms.push_back(e.head);
                return;
            }
            if (next != table.entries[e.head]) {
                table.entries[e.head] = std::move(next);
                changed = true;
            }
        });
        if (table.passes > pass_limit)
            throw Error("why-provenance fixed point exceeded its pass bound");
    }

    table.forbidden_entry = Antichain::zero(n);
    sm.forbidden.for_each([&](AtomId f) {
        table.forbidden_entry = antichain_plus(table.forbidden_entry, table.entries[f]);
    });
    return table;
}

std::optional<Certificate> derive_certificate(const SafetyModel& sm, const AtomSet& a,
                                              AtomId target) {
    WhyTable table = why_provenance(sm, a);
    const Antichain& entry = table.entry(target);
    if (entry.empty()) return std::nullopt;

    Certificate cert;
    cert.target = target;
    cert.base = entry.sets().front();  // canonical order puts a smallest witness first
    FiringTrace full;
    closure(sm.h, cert.base, &full);
    for (const FiringStep& step : full.steps) {
        cert.trace.steps.push_back(step);
        if (step.derived == target) break;
    }
    return cert;
}

bool verify_certificate(const SafetyModel& sm, const Certificate& c) {
    auto derived = replay_trace(sm.h, c.base, c.trace);
    return derived.has_value() && derived->test(c.target);
}

std::string serialize_certificate(const SafetyModel& sm, const Certificate& c) {
    std::ostringstream out;
    out << sm.names.name(c.target) << "; base:";
    bool first = true;
    c.base.for_each([&](AtomId v) {
        out << (first ? " " : ",") << sm.names.name(v);
        first = false;
    });
    out << "; steps:";
    first = true;
    for (const FiringStep& s : c.trace.steps) {
        out << (first ? " " : ",") << '(' << s.edge << ',' << sm.names.name(s.derived) << ')';
        first = false;
    }
    return out.str();
}

namespace {

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

Certificate parse_certificate(const SafetyModel& sm, const std::string& line) {
    size_t p1 = line.find(';');
    size_t p2 = line.find(';', p1 == std::string::npos ? std::string::npos : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw ParseError(1, "certificate needs 'target; base: ...; steps: ...'");

    Certificate c;
    c.target = sm.names.id_of(trimmed(line.substr(0, p1)));
    c.base = AtomSet(sm.atom_count());

    std::string base_part = trimmed(line.substr(p1 + 1, p2 - p1 - 1));
    if (base_part.rfind("base:", 0) != 0) throw ParseError(1, "missing 'base:' section");
    std::istringstream base_in(base_part.substr(5));
    std::string tok;
    while (std::getline(base_in, tok, ',')) {
        tok = trimmed(tok);
        if (!tok.empty()) c.base.set(sm.names.id_of(tok));
    }

    std::string steps_part = trimmed(line.substr(p2 + 1));
    if (steps_part.rfind("steps:", 0) != 0) throw ParseError(1, "missing 'steps:' section");
    std::string rest = trimmed(steps_part.substr(6));
    size_t pos = 0;
    while (pos < rest.size()) {
        size_t open = rest.find('(', pos);
        if (open == std::string::npos) break;
        size_t comma = rest.find(',', open);
        size_t close = rest.find(')', open);
        if (comma == std::string::npos || close == std::string::npos || comma > close)
            throw ParseError(1, "malformed step");
        EdgeId edge = static_cast<EdgeId>(std::stoul(rest.substr(open + 1, comma - open - 1)));
        AtomId atom = sm.names.id_of(trimmed(rest.substr(comma + 1, close - comma - 1)));
        c.trace.steps.push_back({edge, atom});
        pos = close + 1;
    }
    return c;
}

}  // namespace capdl
