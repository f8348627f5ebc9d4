#include "capdl/model_io.hpp"

#include <sstream>

#include "json.hpp"

namespace capdl {

namespace {

std::string strip_comment(const std::string& line) {
    size_t hash = line.find('#');
    std::string s = hash == std::string::npos ? line : line.substr(0, hash);
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct RawModel {
    Interner names;
    std::vector<std::pair<std::vector<AtomId>, std::vector<AtomId>>> edges;
    std::vector<AtomId> forbidden;
    std::vector<AtomId> init;
};

ParsedModel finish(RawModel raw) {
    ParsedModel pm;
    pm.sm.names = std::move(raw.names);
    const uint32_t n = pm.sm.names.size();
    pm.sm.h = normalize(raw.edges, n);
    pm.sm.forbidden = AtomSet(n);
    for (AtomId f : raw.forbidden) pm.sm.forbidden.set(f);
    pm.init = AtomSet(n);
    for (AtomId a : raw.init) pm.init.set(a);
    return pm;
}

}  // namespace

ParsedModel parse_model_text(const std::string& text) {
    RawModel raw;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string body = strip_comment(line);
        if (body.empty()) continue;
        auto toks = tokens(body);
        const std::string& kw = toks[0];

        if (kw == "atom") {
            for (size_t i = 1; i < toks.size(); ++i) raw.names.intern(toks[i]);
        } else if (kw == "edge") {
            auto arrow = std::find(toks.begin(), toks.end(), "->");
            if (arrow == toks.end())
                throw ParseError(line_no, "edge line needs 'edge tail... -> head...'");
            if (arrow + 1 == toks.end()) throw ParseError(line_no, "edge has no head atoms");
            std::vector<AtomId> tail, heads;
            for (auto it = toks.begin() + 1; it != arrow; ++it) tail.push_back(raw.names.intern(*it));
            for (auto it = arrow + 1; it != toks.end(); ++it) heads.push_back(raw.names.intern(*it));
            for (AtomId h : heads)
                if (std::find(tail.begin(), tail.end(), h) != tail.end())
                    throw ParseError(line_no, "edge head '" + raw.names.name(h) +
                                                  "' appears in its own tail");
            raw.edges.emplace_back(std::move(tail), std::move(heads));
        } else if (kw == "forbidden") {
            if (toks.size() < 2) throw ParseError(line_no, "forbidden line needs atoms");
            for (size_t i = 1; i < toks.size(); ++i) raw.forbidden.push_back(raw.names.intern(toks[i]));
        } else if (kw == "init") {
            for (size_t i = 1; i < toks.size(); ++i) raw.init.push_back(raw.names.intern(toks[i]));
        } else {
            throw ParseError(line_no, "unknown keyword '" + kw + "'");
        }
    }
    return finish(std::move(raw));
}

std::string serialize_model_text(const SafetyModel& sm, const AtomSet& init) {
    std::ostringstream out;
    if (sm.atom_count() > 0) {
        out << "atom";
        for (AtomId v = 0; v < sm.atom_count(); ++v) out << ' ' << sm.names.name(v);
        out << '\n';
    }
    sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        out << "edge";
        for (AtomId t : e.tail) out << ' ' << sm.names.name(t);
        out << " -> " << sm.names.name(e.head) << '\n';
    });
    if (!sm.forbidden.empty()) {
        out << "forbidden";
        sm.forbidden.for_each([&](AtomId f) { out << ' ' << sm.names.name(f); });
        out << '\n';
    }
    if (!init.empty()) {
        out << "init";
        init.for_each([&](AtomId a) { out << ' ' << sm.names.name(a); });
        out << '\n';
    }
    return out.str();
}

ParsedModel parse_model_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(1, std::string("invalid JSON: ") + e.what());
    }
    RawModel raw;
    for (const auto& a : doc.value("atoms", nlohmann::json::array()))
        raw.names.intern(a.get<std::string>());
    for (const auto& e : doc.value("edges", nlohmann::json::array())) {
        std::vector<AtomId> tail, heads;
        for (const auto& t : e.value("tail", nlohmann::json::array()))
            tail.push_back(raw.names.intern(t.get<std::string>()));
        for (const auto& h : e.at("head")) heads.push_back(raw.names.intern(h.get<std::string>()));
        raw.edges.emplace_back(std::move(tail), std::move(heads));
    }
    for (const auto& f : doc.value("forbidden", nlohmann::json::array()))
        raw.forbidden.push_back(raw.names.intern(f.get<std::string>()));
    for (const auto& a : doc.value("init", nlohmann::json::array()))
        raw.init.push_back(raw.names.intern(a.get<std::string>()));
    return finish(std::move(raw));
}

std::string serialize_model_json(const SafetyModel& sm, const AtomSet& init) {
    nlohmann::json doc;
    doc["atoms"] = nlohmann::json::array();
    for (AtomId v = 0; v < sm.atom_count(); ++v) doc["atoms"].push_back(sm.names.name(v));
    doc["edges"] = nlohmann::json::array();
    sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
        nlohmann::json je;
        je["tail"] = nlohmann::json::array();
        for (AtomId t : e.tail) je["tail"].push_back(sm.names.name(t));
        je["head"] = nlohmann::json::array({sm.names.name(e.head)});
        doc["edges"].push_back(je);
    });
    doc["forbidden"] = nlohmann::json::array();
    sm.forbidden.for_each([&](AtomId f) { doc["forbidden"].push_back(sm.names.name(f)); });
    doc["init"] = nlohmann::json::array();
    init.for_each([&](AtomId a) { doc["init"].push_back(sm.names.name(a)); });
    return doc.dump(2) + "\n";
}

}  // namespace capdl
