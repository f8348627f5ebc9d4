#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
    int status;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(CAPDL_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int raw = pclose(pipe);
    return {WEXITSTATUS(raw), out};
}

std::string fixture(const std::string& name) {
    return std::string(CAPDL_FIXTURE_DIR) + "/" + name;
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = std::string(::testing::TempDir()) + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST(Cli, ClosureOfTelcoJointSession) {
    RunResult r = run("closure " + fixture("telco.cap") + " --init c1,c2");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "{c1, c2, c3, c4, c5, c6, c7, c8, c9}\n");
}

TEST(Cli, ClosureOfEmptyModel) {
    RunResult r = run("closure " + fixture("empty.cap"));
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "{}\n");
}

TEST(Cli, CheckSafeExitCodes) {
    RunResult safe = run("check-safe " + fixture("telco.cap") + " --init c1,c2,c3,c5,c7,c8");
    EXPECT_EQ(safe.status, 0);
    EXPECT_EQ(safe.out, "safe\n");

    RunResult unsafe = run("check-safe " + fixture("telco.cap") + " --init c3,c10");
    EXPECT_EQ(unsafe.status, 1);
    EXPECT_EQ(unsafe.out, "unsafe\n");

    RunResult err = run("check-safe " + fixture("telco.cap") + " --init nonexistent");
    EXPECT_EQ(err.status, 2);
}

TEST(Cli, BfListsWitnesses) {
    RunResult r = run("bf " + fixture("telco.cap"));
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("{c3, c10}"), std::string::npos);
    EXPECT_NE(r.out.find("{c12}"), std::string::npos);
}

TEST(Cli, AuditJsonSchema) {
    RunResult r = run("audit " + fixture("telco.cap") + " --init c1,c2 -k 3 --json");
    EXPECT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["k"], 3);
    EXPECT_EQ(j["emergent"], nlohmann::json::array({"c6", "c9"}));
    EXPECT_TRUE(j["nmf"].empty());
    EXPECT_EQ(j["topk"][0]["atom"], "c10");
    EXPECT_EQ(j["topk"][0]["gain"], 1);
}

TEST(Cli, WhyReportsJointSessionProvenance) {
    RunResult r = run("why " + fixture("telco.cap") + " --init c1,c2 --atom c9");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "c9: {c1, c2}\n");
}

TEST(Cli, CoalitionDetectsJointViolation) {
    RunResult r = run("coalition " + fixture("telco.cap") +
                      " --groups \"c1,c2,c3,c4,c5;c2,c10\"");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.out, "coalition unsafe\n");

    RunResult ok = run("coalition " + fixture("telco.cap") + " --groups \"c1,c2,c3,c4,c5\"");
    EXPECT_EQ(ok.status, 0);
}

TEST(Cli, CertifyProducesVerifiableCertificate) {
    RunResult r = run("certify " + fixture("telco.cap") + " --init c1,c2 --target c9");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("c9; base: c1,c2; steps:", 0), 0u);

    std::string cert_path = temp_file("telco_c9.cert", r.out);
    RunResult check = run("certify " + fixture("telco.cap") + " --check " + cert_path);
    EXPECT_EQ(check.status, 0);
    EXPECT_EQ(check.out, "valid\n");
}

TEST(Cli, ContainComparesSurfaces) {
    RunResult r = run("contain " + fixture("telco.cap") + " --init1 c1,c2 --init2 c1,c2");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "contained\n");
}

TEST(Cli, EncodeDecodeRoundTrip) {
    RunResult enc = run("encode " + fixture("telco.cap"));
    EXPECT_EQ(enc.status, 0);
    EXPECT_NE(enc.out.find("has(c6) :- has(c3), has(c5).") != std::string::npos ||
                  enc.out.find("has(c6) :- has(c5), has(c3).") != std::string::npos,
              false);
    EXPECT_NE(enc.out.find("forbidden :- has(c12)."), std::string::npos);

    std::string dl_path = temp_file("telco.dl", enc.out);
    RunResult dec = run("decode " + dl_path);
    EXPECT_EQ(dec.status, 0);
    EXPECT_NE(dec.out.find("edge c3 c5 -> c6"), std::string::npos);
    EXPECT_NE(dec.out.find("forbidden c12"), std::string::npos);
}

TEST(Cli, DredTraceEmitsCsv) {
    std::string script = temp_file("trace.ops",
                                   "insert c9 -> z1\n"
                                   "delete c9 -> z1\n"
                                   "recompute\n");
    RunResult r = run("dred-trace " + fixture("telco.cap") + " --init c1,c2 --script " + script);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("op,cone_size,rederivations,closure_evals,wall_nanos\n", 0), 0u);
    EXPECT_NE(r.out.find("insert,1,1,"), std::string::npos);
    EXPECT_NE(r.out.find("delete,1,0,"), std::string::npos);
    EXPECT_NE(r.out.find("naive,0,0,"), std::string::npos);
}

TEST(Cli, BenchGapCsv) {
    RunResult r = run("bench-gap --sizes 4,8 --trials 1");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("n,incr_rederivations,incr_wall_ns,naive_closure_evals,naive_wall_ns\n",
                          0),
              0u);
    EXPECT_NE(r.out.find("\n4,1,"), std::string::npos);
}

TEST(Cli, OracleProbesCsv) {
    RunResult r = run("oracle-probes --kmax 2");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("kind,k,j,strategy,probes,correct_plus,correct_minus\n", 0), 0u);
    EXPECT_NE(r.out.find("TAIL,1,1,dred,2,1,1"), std::string::npos);
    EXPECT_NE(r.out.find("HEAD,2,0,dred,3,1,1"), std::string::npos);
}

TEST(Cli, JsonOutputsParse) {
    // Every --json output must be valid JSON with the documented keys.
    auto parse = [](const RunResult& r) { return nlohmann::json::parse(r.out); };

    auto closure = parse(run("closure " + fixture("telco.cap") + " --init c1 --json"));
    EXPECT_TRUE(closure.contains("closure"));

    auto safe = parse(run("check-safe " + fixture("telco.cap") + " --init c1 --json"));
    EXPECT_TRUE(safe["safe"].is_boolean());

    auto bf = parse(run("bf " + fixture("telco.cap") + " --json"));
    EXPECT_TRUE(bf["complete"].get<bool>());
    EXPECT_EQ(bf["witnesses"].size(), 3u);

    auto why = parse(run("why " + fixture("telco.cap") + " --init c1,c2 --atom c9 --json"));
    EXPECT_EQ(why["c9"], nlohmann::json::array({{"c1", "c2"}}));

    auto coal = parse(run("coalition " + fixture("telco.cap") + " --groups c1 --json"));
    EXPECT_TRUE(coal["coalition_safe"].get<bool>());

    auto contain =
        parse(run("contain " + fixture("telco.cap") + " --init1 c1 --init2 c1 --json"));
    EXPECT_TRUE(contain["contained"].get<bool>());

    auto cert =
        parse(run("certify " + fixture("telco.cap") + " --init c1,c2 --target c9 --json"));
    EXPECT_TRUE(cert["certificate"].is_string());

    auto probes = parse(run("oracle-probes --kmax 1 --json"));
    EXPECT_EQ(probes.size(), 4u);
    EXPECT_TRUE(probes[0].contains("frontier_probes"));
    EXPECT_TRUE(probes[0].contains("total_probes"));
}

TEST(Cli, JsonModelFormatAccepted) {
    std::string json_model = temp_file("m.json", R"({
      "atoms": ["a", "b", "c"],
      "edges": [{"tail": ["a", "b"], "head": ["c"]}],
      "forbidden": ["c"],
      "init": ["a"]
    })");
    RunResult r = run("check-safe " + json_model + " --format json");
    EXPECT_EQ(r.status, 0);
    RunResult r2 = run("check-safe " + json_model + " --format json --init a,b");
    EXPECT_EQ(r2.status, 1);
}
