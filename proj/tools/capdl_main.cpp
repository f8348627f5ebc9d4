// capdl: capability-safety analysis over propositional-Datalog semantics.
//
// Exit codes: 0 success / analysis positive, 1 analysis negative (unsafe,
// not contained, invalid certificate), 2 usage or input errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "capdl/audit.hpp"
#include "capdl/datalog.hpp"
#include "capdl/encoding.hpp"
#include "capdl/gaplab.hpp"
#include "capdl/incremental.hpp"
#include "capdl/model_io.hpp"
#include "capdl/provenance.hpp"
#include "capdl/safety.hpp"

namespace {

using namespace capdl;
using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ParsedModel load_model(const std::string& path, const std::string& format) {
    std::string text = read_file(path);
    if (format == "json") return parse_model_json(text);
    return parse_model_text(text);
}

AtomSet parse_atom_list(const SafetyModel& sm, const std::string& csv) {
    AtomSet out(sm.atom_count());
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        size_t b = tok.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        size_t e = tok.find_last_not_of(" \t");
        out.set(sm.names.id_of(tok.substr(b, e - b + 1)));
    }
    return out;
}

std::string atom_set_names(const SafetyModel& sm, const AtomSet& s) {
    std::string acc = "{";
    bool first = true;
    s.for_each([&](AtomId v) {
        if (!first) acc += ", ";
        acc += sm.names.name(v);
        first = false;
    });
    return acc + "}";
}

json atom_set_json(const SafetyModel& sm, const AtomSet& s) {
    json arr = json::array();
    s.for_each([&](AtomId v) { arr.push_back(sm.names.name(v)); });
    return arr;
}

json surface_json(const SafetyModel& sm, const AuditSurface& g) {
    json j;
    j["emergent"] = atom_set_json(sm, g.emergent);
    j["nmf"] = atom_set_json(sm, g.nmf);
    j["k"] = g.k_param;
    j["topk"] = json::array();
    for (const GainEntry& e : g.topk)
        j["topk"].push_back({{"atom", sm.names.name(e.atom)}, {"gain", e.gain}});
    return j;
}

json antichain_json(const SafetyModel& sm, const Antichain& a) {
    json arr = json::array();
    for (const AtomSet& s : a.sets()) arr.push_back(atom_set_json(sm, s));
    return arr;
}

std::string antichain_names(const SafetyModel& sm, const Antichain& a) {
    std::string acc;
    for (const AtomSet& s : a.sets()) {
        if (!acc.empty()) acc += " ";
        acc += atom_set_names(sm, s);
    }
    return acc.empty() ? "(none)" : acc;
}

struct CommonOpts {
    std::string file;
    std::string format = "text";
    std::string init_csv;
    bool use_file_init = true;
    bool json_out = false;
};

AtomSet resolve_init(const ParsedModel& pm, const CommonOpts& opts) {
    if (!opts.init_csv.empty()) return parse_atom_list(pm.sm, opts.init_csv);
    return pm.init;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_init = true) {
    cmd->add_option("file", opts.file, "model file")->required();
    cmd->add_option("--format", opts.format, "model format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    if (with_init) cmd->add_option("--init", opts.init_csv, "initial configuration, comma separated");
    cmd->add_flag("--json", opts.json_out, "machine-readable output");
}

int cmd_closure(const CommonOpts& opts, bool trace) {
    ParsedModel pm = load_model(opts.file, opts.format);
    AtomSet a = resolve_init(pm, opts);
    FiringTrace ft;
    AtomSet closed = closure(pm.sm.h, a, trace ? &ft : nullptr);
    if (opts.json_out) {
        json j;
        j["closure"] = atom_set_json(pm.sm, closed);
        if (trace) {
            j["trace"] = json::array();
            for (const FiringStep& s : ft.steps)
                j["trace"].push_back({{"edge", s.edge}, {"atom", pm.sm.names.name(s.derived)}});
        }
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << atom_set_names(pm.sm, closed) << '\n';
        if (trace)
            for (const FiringStep& s : ft.steps)
                std::cout << "fired edge " << s.edge << " -> " << pm.sm.names.name(s.derived)
                          << '\n';
    }
    return 0;
}

int cmd_check_safe(const CommonOpts& opts) {
    ParsedModel pm = load_model(opts.file, opts.format);
    AtomSet a = resolve_init(pm, opts);
    bool safe = is_safe(pm.sm, a);
    if (opts.json_out)
        std::cout << json{{"safe", safe}}.dump(2) << '\n';
    else
        std::cout << (safe ? "safe" : "unsafe") << '\n';
    return safe ? 0 : 1;
}

int cmd_audit(const CommonOpts& opts, uint32_t k) {
    ParsedModel pm = load_model(opts.file, opts.format);
    AtomSet a = resolve_init(pm, opts);
    AuditSurface g = audit_surface(pm.sm, a, k);
    if (opts.json_out)
        std::cout << surface_json(pm.sm, g).dump(2) << '\n';
    else
        std::cout << serialize_surface(pm.sm, g);
    return 0;
}

int cmd_bf(const CommonOpts& opts, uint64_t budget) {
    ParsedModel pm = load_model(opts.file, opts.format);
    std::optional<size_t> limit;
    if (budget > 0) limit = budget;
    MinimalUnsafeFamily fam = bf_enumerate(pm.sm, limit);
    if (opts.json_out) {
        json j;
        j["witnesses"] = antichain_json(pm.sm, fam.witnesses);
        j["complete"] = fam.complete;
        std::cout << j.dump(2) << '\n';
    } else {
        for (const AtomSet& w : fam.witnesses.sets())
            std::cout << atom_set_names(pm.sm, w) << '\n';
        if (!fam.complete) std::cout << "(truncated)\n";
    }
    return 0;
}

int cmd_why(const CommonOpts& opts, const std::string& target, bool universe_all) {
    ParsedModel pm = load_model(opts.file, opts.format);
    AtomSet universe = universe_all
                           ? [&] {
                                 AtomSet u(pm.sm.atom_count());
                                 for (AtomId v = 0; v < pm.sm.atom_count(); ++v) u.set(v);
                                 return u;
                             }()
                           : resolve_init(pm, opts);
    WhyTable table = why_provenance(pm.sm, universe);
    json j;
    if (target.empty()) {
        for (AtomId v = 0; v < pm.sm.atom_count(); ++v) {
            if (table.entry(v).empty()) continue;
            if (opts.json_out)
                j[pm.sm.names.name(v)] = antichain_json(pm.sm, table.entry(v));
            else
                std::cout << pm.sm.names.name(v) << ": " << antichain_names(pm.sm, table.entry(v))
                          << '\n';
        }
        if (opts.json_out) j["forbidden"] = antichain_json(pm.sm, table.forbidden_entry);
        else std::cout << "forbidden: " << antichain_names(pm.sm, table.forbidden_entry) << '\n';
    } else {
        const Antichain& entry = target == "forbidden" ? table.forbidden_entry
                                                       : table.entry(pm.sm.names.id_of(target));
        if (opts.json_out)
            j[target] = antichain_json(pm.sm, entry);
        else
            std::cout << target << ": " << antichain_names(pm.sm, entry) << '\n';
    }
    if (opts.json_out) std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_certify(const CommonOpts& opts, const std::string& target, const std::string& check_path) {
    ParsedModel pm = load_model(opts.file, opts.format);
    if (!check_path.empty()) {
        Certificate c = parse_certificate(pm.sm, read_file(check_path));
        bool ok = verify_certificate(pm.sm, c);
        if (opts.json_out)
            std::cout << json{{"valid", ok}}.dump(2) << '\n';
        else
            std::cout << (ok ? "valid" : "invalid") << '\n';
        return ok ? 0 : 1;
    }
    AtomSet a = resolve_init(pm, opts);
    auto cert = derive_certificate(pm.sm, a, pm.sm.names.id_of(target));
    if (!cert) {
        std::cerr << "target not derivable from the configuration\n";
        return 1;
    }
    std::string line = serialize_certificate(pm.sm, *cert);
    if (opts.json_out)
        std::cout << json{{"certificate", line}}.dump(2) << '\n';
    else
        std::cout << line << '\n';
    return 0;
}

int cmd_coalition(const CommonOpts& opts, const std::string& groups) {
    ParsedModel pm = load_model(opts.file, opts.format);
    std::vector<AtomSet> configs;
    std::istringstream in(groups);
    std::string part;
    while (std::getline(in, part, ';')) configs.push_back(parse_atom_list(pm.sm, part));
    MinimalUnsafeFamily fam = bf_enumerate(pm.sm);
    bool safe = coalition_safe(pm.sm, configs, fam);
    if (opts.json_out)
        std::cout << json{{"coalition_safe", safe}}.dump(2) << '\n';
    else
        std::cout << (safe ? "coalition safe" : "coalition unsafe") << '\n';
    return safe ? 0 : 1;
}

int cmd_contain(const CommonOpts& opts, const std::string& init1, const std::string& init2,
                uint32_t k) {
    ParsedModel pm = load_model(opts.file, opts.format);
    AuditSurface g1 = audit_surface(pm.sm, parse_atom_list(pm.sm, init1), k);
    AuditSurface g2 = audit_surface(pm.sm, parse_atom_list(pm.sm, init2), k);
    bool contained = surface_containment(g1, g2);
    if (opts.json_out)
        std::cout << json{{"contained", contained}}.dump(2) << '\n';
    else
        std::cout << (contained ? "contained" : "not contained") << '\n';
    return contained ? 0 : 1;
}

int cmd_encode(const CommonOpts& opts) {
    ParsedModel pm = load_model(opts.file, opts.format);
    EncodedProgram enc = cap_to_dl(pm.sm);
    std::cout << datalog::serialize_program(enc.program);
    return 0;
}

int cmd_decode(const CommonOpts& opts) {
    datalog::Program p = datalog::parse_program(read_file(opts.file));
    SafetyModel sm = dl_to_cap(p);

    // Strip the has(.) wrapper and fold `forbidden` rules back into the
    // forbidden set when the file came from `encode`.
    bool wrapped = sm.atom_count() > 0;
    for (AtomId v = 0; v < sm.atom_count() && wrapped; ++v) {
        const std::string& n = sm.names.name(v);
        if (n == "forbidden") continue;
        wrapped = n.rfind("has(", 0) == 0 && n.back() == ')';
    }
    if (wrapped && sm.names.contains("forbidden")) {
        AtomId forb = sm.names.id_of("forbidden");
        SafetyModel out;
        std::vector<AtomId> remap(sm.atom_count(), UINT32_MAX);
        for (AtomId v = 0; v < sm.atom_count(); ++v) {
            if (v == forb) continue;
            const std::string& n = sm.names.name(v);
            remap[v] = out.names.intern(n.substr(4, n.size() - 5));
        }
        out.h = Hypergraph(out.names.size());
        out.forbidden = AtomSet(out.names.size());
        sm.h.for_each_edge([&](EdgeId, const Hyperedge& e) {
            if (e.head == forb) {
                for (AtomId t : e.tail) out.forbidden.set(remap[t]);
                return;
            }
            std::vector<AtomId> tail;
            for (AtomId t : e.tail) tail.push_back(remap[t]);
            out.h.add_edge(Hyperedge(std::move(tail), remap[e.head]));
        });
        std::cout << serialize_model_text(out, AtomSet(out.names.size()));
    } else {
        std::cout << serialize_model_text(sm, AtomSet(sm.atom_count()));
    }
    return 0;
}

int cmd_dred_trace(const CommonOpts& opts, const std::string& script_path, uint32_t k) {
    ParsedModel pm = load_model(opts.file, opts.format);
    MaintainedState st(pm.sm, resolve_init(pm, opts), k);
    std::istringstream in(read_file(script_path));
    std::string line;
    size_t line_no = 0;
    std::cout << "op,cone_size,rederivations,closure_evals,wall_nanos\n";
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty() || toks[0][0] == '#') continue;

        UpdateReport rep;
        if (toks[0] == "recompute") {
            rep = st.naive_recompute();
        } else if (toks[0] == "insert" || toks[0] == "delete") {
            auto arrow = std::find(toks.begin(), toks.end(), "->");
            if (arrow == toks.end() || arrow + 1 == toks.end())
                throw ParseError(line_no, "expected '" + toks[0] + " tail... -> head'");
            std::vector<AtomId> tail;
            for (auto it = toks.begin() + 1; it != arrow; ++it)
                tail.push_back(st.model().names.contains(*it)
                                   ? st.model().names.id_of(*it)
                                   : const_cast<MaintainedState&>(st).add_atom(*it));
            AtomId head = st.model().names.contains(*(arrow + 1))
                              ? st.model().names.id_of(*(arrow + 1))
                              : st.add_atom(*(arrow + 1));
            Hyperedge e(tail, head);
            if (toks[0] == "insert") {
                rep = st.insert_edge(e);
            } else {
                auto id = st.model().h.find_edge(e);
                if (!id) throw UnknownEdge("script line " + std::to_string(line_no) +
                                           ": no such edge");
                rep = st.delete_edge(*id);
            }
        } else {
            throw ParseError(line_no, "unknown op '" + toks[0] + "'");
        }
        std::cout << rep.csv_row() << '\n';
    }
    return 0;
}

int cmd_bench_gap(const std::string& sizes_csv, uint32_t trials, const std::string& out_path) {
    std::vector<uint32_t> sizes;
    std::istringstream in(sizes_csv);
    std::string tok;
    while (std::getline(in, tok, ',')) sizes.push_back(static_cast<uint32_t>(std::stoul(tok)));
    auto rows = gaplab::run_gap_bench(sizes, trials);
    std::string csv = gaplab::gap_csv(rows);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        out << csv;
    }
    return 0;
}

int cmd_oracle_probes(uint32_t kmax, const std::string& out_path, bool json_out) {
    auto rows = gaplab::run_probe_experiments(kmax);
    if (json_out) {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"kind", r.kind},
                           {"k", r.k},
                           {"j", r.j},
                           {"strategy", r.strategy},
                           {"frontier_probes", r.probes},
                           {"total_probes", r.total_probes},
                           {"correct_plus", r.correct_plus},
                           {"correct_minus", r.correct_minus}});
        std::cout << arr.dump(2) << '\n';
        return 0;
    }
    std::string csv = gaplab::probe_csv(rows);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        out << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"capability-safety analysis via propositional Datalog"};
    app.require_subcommand(1);

    CommonOpts closure_opts, safe_opts, audit_opts, bf_opts, why_opts, cert_opts, coal_opts,
        contain_opts, encode_opts, decode_opts, dred_opts;
    bool closure_trace = false;
    uint32_t audit_k = 5, contain_k = 5, dred_k = 5;
    uint64_t bf_budget = 0;
    std::string why_target, cert_target, cert_check, coal_groups, contain_init1, contain_init2;
    bool why_all_universe = false;
    std::string bench_sizes = "64,128,256,512", bench_out, probe_out;
    uint32_t bench_trials = 3, probe_kmax = 16;
    bool probe_json = false;

    auto* c_closure = app.add_subcommand("closure", "closure of a configuration");
    add_common(c_closure, closure_opts);
    c_closure->add_flag("--trace", closure_trace, "print the firing trace");

    auto* c_safe = app.add_subcommand("check-safe", "is the configuration safe");
    add_common(c_safe, safe_opts);

    auto* c_audit = app.add_subcommand("audit", "audit surface of a configuration");
    add_common(c_audit, audit_opts);
    c_audit->add_option("-k,--top", audit_k, "top-k size");

    auto* c_bf = app.add_subcommand("bf", "enumerate the minimal unsafe antichain");
    add_common(c_bf, bf_opts, false);
    c_bf->add_option("--budget", bf_budget, "max witnesses before truncation (0 = exact)");

    auto* c_why = app.add_subcommand("why", "why-provenance over the configuration");
    add_common(c_why, why_opts);
    c_why->add_option("--atom", why_target, "single atom (or 'forbidden')");
    c_why->add_flag("--universe-all", why_all_universe, "support universe = all atoms");

    auto* c_cert = app.add_subcommand("certify", "derive or check a certificate");
    add_common(c_cert, cert_opts);
    c_cert->add_option("--target", cert_target, "atom to certify");
    c_cert->add_option("--check", cert_check, "verify a serialized certificate file");

    auto* c_coal = app.add_subcommand("coalition", "coalition safety via the witness family");
    add_common(c_coal, coal_opts, false);
    c_coal->add_option("--groups", coal_groups, "configs: atoms comma separated, ';' between")
        ->required();

    auto* c_contain = app.add_subcommand("contain", "audit-surface containment");
    add_common(c_contain, contain_opts, false);
    c_contain->add_option("--init1", contain_init1, "first configuration")->required();
    c_contain->add_option("--init2", contain_init2, "second configuration")->required();
    c_contain->add_option("-k,--top", contain_k, "top-k size");

    auto* c_encode = app.add_subcommand("encode", "model -> Datalog program text");
    add_common(c_encode, encode_opts, false);

    auto* c_decode = app.add_subcommand("decode", "Datalog program text -> model");
    add_common(c_decode, decode_opts, false);

    auto* c_dred = app.add_subcommand("dred-trace", "run an update script, CSV report per op");
    add_common(c_dred, dred_opts);
    std::string dred_script;
    c_dred->add_option("--script", dred_script, "update script file")->required();
    c_dred->add_option("-k,--top", dred_k, "top-k size");

    auto* c_bench = app.add_subcommand("bench-gap", "locality-gap benchmark CSV");
    c_bench->add_option("--sizes", bench_sizes, "comma-separated family sizes");
    c_bench->add_option("--trials", bench_trials, "wall-clock trials per size");
    c_bench->add_option("--out", bench_out, "write CSV here instead of stdout");

    auto* c_probe = app.add_subcommand("oracle-probes", "probe lower-bound experiments CSV");
    c_probe->add_option("--kmax", probe_kmax, "max update tail size");
    c_probe->add_option("--out", probe_out, "write CSV here instead of stdout");
    c_probe->add_flag("--json", probe_json, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_closure)) return cmd_closure(closure_opts, closure_trace);
        if (app.got_subcommand(c_safe)) return cmd_check_safe(safe_opts);
        if (app.got_subcommand(c_audit)) return cmd_audit(audit_opts, audit_k);
        if (app.got_subcommand(c_bf)) return cmd_bf(bf_opts, bf_budget);
        if (app.got_subcommand(c_why)) return cmd_why(why_opts, why_target, why_all_universe);
        if (app.got_subcommand(c_cert)) return cmd_certify(cert_opts, cert_target, cert_check);
        if (app.got_subcommand(c_coal)) return cmd_coalition(coal_opts, coal_groups);
        if (app.got_subcommand(c_contain))
            return cmd_contain(contain_opts, contain_init1, contain_init2, contain_k);
        if (app.got_subcommand(c_encode)) return cmd_encode(encode_opts);
        if (app.got_subcommand(c_decode)) return cmd_decode(decode_opts);
        if (app.got_subcommand(c_dred)) return cmd_dred_trace(dred_opts, dred_script, dred_k);
        if (app.got_subcommand(c_bench)) return cmd_bench_gap(bench_sizes, bench_trials, bench_out);
        if (app.got_subcommand(c_probe)) return cmd_oracle_probes(probe_kmax, probe_out, probe_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
