#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "msadl_cli/cli.hpp"

namespace msadl {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::cli_dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("msadl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& content) {
        fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string sample(const std::string& name) { return std::string(MSADL_SAMPLES_DIR) + "/" + name; }

    fs::path dir_;
};

const char* kPersonValue = R"({"children": {"SSN": [{"$": "1"}], "country": [{"$": "USA"}], "name": [{"$": "Ada"}]}})";
const char* kPersonRenamed = R"({"children": {"SSN": [{"$": "1"}], "country": [{"$": "USA"}], "name": [{"$": "Grace"}]}})";

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, cli::Usage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::Usage);
    EXPECT_EQ(run_cli({"validate"}).code, cli::Usage);
    EXPECT_EQ(run_cli({"transform", "--to", "corba", "--in", "a", "--out", "b"}).code, cli::Usage);
    EXPECT_EQ(run_cli({"--help"}).code, cli::Success);
}

TEST_F(Cli, ValidateSamples) {
    for (const char* s : {"person.jsm", "architecture.jsm"}) EXPECT_EQ(run_cli({"validate", sample(s)}).code, 0) << s;
    Outcome lemma = run_cli({"validate", sample("example.services.lsm"), sample("behaviour.lsm")});
    EXPECT_EQ(lemma.code, 0) << lemma.out << lemma.err;
}

TEST_F(Cli, ValidateEmptyFile) {
    Outcome r = run_cli({"validate", write("empty.jsm", "")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "");
}

TEST_F(Cli, ValidateReportsDiagnostics) {
    std::string f = write("bad.jsm", "\nservice S { inputPort P { location: \"socket://h:1\" protocol: sodep interfaces: Foo } }\n");
    Outcome r = run_cli({"validate", f});
    EXPECT_EQ(r.code, cli::Failure);
    EXPECT_NE((r.out + r.err).find(f + ":2:"), std::string::npos) << r.out << r.err;
    EXPECT_NE((r.out + r.err).find("error[REF_UNRESOLVED]"), std::string::npos);
    Outcome j = run_cli({"validate", "--json", f});
    auto doc = nlohmann::json::parse(j.out);
    EXPECT_FALSE(doc["ok"].get<bool>());
    EXPECT_EQ(doc["diagnostics"][0]["code"], "REF_UNRESOLVED");
}

TEST_F(Cli, ValidateMissingFileFails) {
    Outcome r = run_cli({"validate", path("nope.jsm")});
    EXPECT_EQ(r.code, cli::Failure);
    EXPECT_NE((r.out + r.err).find("IO_ERROR"), std::string::npos);
}

TEST_F(Cli, CheckValue) {
    EXPECT_EQ(run_cli({"check-value", "--model", sample("person.jsm"), "--type", "Person", "--value", kPersonValue}).code, 0);
    std::string bad = R"({"children": {"SSN": [{"$": "1"}], "country": [{"$": "US"}], "name": [{"$": "Ada"}]}})";
    Outcome r = run_cli({"check-value", "--json", "--model", sample("person.jsm"), "--type", "Person", "--value", bad});
    EXPECT_EQ(r.code, cli::Failure);
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["violations"][0]["path"], "country");
    EXPECT_EQ(doc["violations"][0]["rule"], "refinement_violated");
    std::string file = write("v.json", kPersonValue);
    EXPECT_EQ(run_cli({"check-value", "--model", sample("person.jsm"), "--type", "Person", "--value", "@" + file}).code, 0);
}

TEST_F(Cli, EntityConflictExitsOne) {
    std::string reg = path("reg.json");
    std::vector<std::string> base{"entity", "register", "--model", sample("person.jsm"), "--type", "Person",
                                  "--registry", reg, "--salt", "00ff"};
    auto with = [&](const char* v) {
        auto a = base;
        a.insert(a.end(), {"--value", v});
        return run_cli(a);
    };
    EXPECT_EQ(with(kPersonValue).code, 0);
    EXPECT_EQ(with(kPersonValue).code, 0);
    Outcome c = with(kPersonRenamed);
    EXPECT_EQ(c.code, cli::Failure);
    EXPECT_NE(c.out.find("error[DDD_CONFLICT]: Conflict:"), std::string::npos) << c.out;
    auto stored = nlohmann::json::parse(read_file(reg));
    EXPECT_EQ(stored["entries"].size(), 1u);
    auto wrongSalt = base;
    wrongSalt[9] = "01";
    wrongSalt.insert(wrongSalt.end(), {"--value", kPersonValue});
    Outcome w = run_cli(wrongSalt);
    EXPECT_EQ(w.code, cli::Failure);
    EXPECT_NE((w.out + w.err).find("REGISTRY_INVALID"), std::string::npos);
    auto badSalt = base;
    badSalt[9] = "zz";
    badSalt.insert(badSalt.end(), {"--value", kPersonValue});
    EXPECT_EQ(run_cli(badSalt).code, cli::Usage);
}

TEST_F(Cli, AssertEquals) {
    std::vector<std::string> a{"entity", "assert-equals", "--model", sample("person.jsm"), "--type", "Person",
                               "--value", kPersonValue};
    EXPECT_EQ(run_cli(a).code, cli::Usage);
    auto same = a;
    same.insert(same.end(), {"--value2", kPersonRenamed});
    Outcome r = run_cli(same);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "equal\n");
    auto differ = a;
    differ.insert(differ.end(), {"--value2", R"({"children": {"SSN": [{"$": "2"}], "country": [{"$": "USA"}], "name": [{"$": "Ada"}]}})"});
    Outcome d = run_cli(differ);
    EXPECT_EQ(d.code, 0);
    EXPECT_EQ(d.out, "not equal\n");
}

TEST_F(Cli, FmtIsIdempotent) {
    std::string f = write("a.jsm", "type   T{a:int b [0,*] : string(length(1,2))}");
    EXPECT_EQ(run_cli({"fmt", "--check", f}).code, cli::Failure);
    Outcome first = run_cli({"fmt", f});
    EXPECT_EQ(first.code, 0);
    EXPECT_NE(first.out.find("reformatted"), std::string::npos);
    std::string once = read_file(f);
    EXPECT_EQ(run_cli({"fmt", "--check", f}).code, 0);
    EXPECT_EQ(run_cli({"fmt", f}).code, 0);
    EXPECT_EQ(read_file(f), once);
    std::string broken = write("b.jsm", "type {");
    EXPECT_EQ(run_cli({"fmt", broken}).code, cli::Failure);
    EXPECT_EQ(read_file(broken), "type {");
}

TEST_F(Cli, TransformWritesUnitAndLossReport) {
    Outcome r = run_cli({"transform", "--to", "lemma", "--in", sample("architecture.jsm"), "--out", path("a.lsm"),
                         "--loss-report", path("loss.json")});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(run_cli({"validate", path("a.lsm")}).code, 0);
    auto loss = nlohmann::json::parse(read_file(path("loss.json")));
    EXPECT_EQ(loss["items"].size(), 6u);
    Outcome back = run_cli({"transform", "--to", "jolie", "--in", path("a.lsm"), "--out", path("b.jsm")});
    EXPECT_EQ(back.code, 0) << back.out << back.err;
    EXPECT_EQ(run_cli({"validate", path("b.jsm")}).code, 0);
    Outcome same = run_cli({"transform", "--to", "jolie", "--in", sample("person.jsm"), "--out", path("c.jsm")});
    EXPECT_EQ(same.code, 0);
    EXPECT_EQ(run_cli({"fmt", "--check", path("c.jsm")}).code, 0);
}

TEST_F(Cli, InterchangeJsonInputAndOutput) {
    EXPECT_EQ(run_cli({"transform", "--to", "lemma", "--in", sample("architecture.jsm"), "--out", path("a.json")}).code, 0);
    auto doc = nlohmann::json::parse(read_file(path("a.json")));
    EXPECT_EQ(doc["view"], "lemma");
    EXPECT_EQ(run_cli({"validate", path("a.json")}).code, 0);
}

TEST_F(Cli, SimulateOutcomes) {
    Outcome ok = run_cli({"simulate", "--model", sample("architecture.jsm"), "--seed", "3", "--max-steps", "40",
                          "--trace", path("t.jsonl")});
    EXPECT_EQ(ok.out.rfind("outcome: ", 0), 0u) << ok.out;
    std::string deadlock = write(
        "d.jsm",
        "interface A { requestResponse a(int) -> int }\n"
        "service P { inputPort In { location: \"socket://h:1\" protocol: sodep interfaces: A }\n"
        "  outputPort Q { location: \"socket://h:2\" protocol: sodep interfaces: A } main { a@Q(1)(r); a(x)(x) } }\n"
        "service Q { inputPort In { location: \"socket://h:2\" protocol: sodep interfaces: A }\n"
        "  outputPort P { location: \"socket://h:1\" protocol: sodep interfaces: A } main { a@P(1)(r); a(x)(x) } }\n");
    Outcome stuck = run_cli({"simulate", "--model", deadlock});
    EXPECT_EQ(stuck.code, cli::Failure);
    EXPECT_NE(stuck.out.find("outcome: stuck"), std::string::npos) << stuck.out;
    EXPECT_NE((stuck.out + stuck.err).find("STUCK_DEADLOCK"), std::string::npos);
}

TEST_F(Cli, DocsWritesFiles) {
    EXPECT_EQ(run_cli({"docs", "--model", sample("person.jsm"), "--out", path("site")}).code, 0);
    EXPECT_TRUE(fs::exists(path("site/index.md")));
    EXPECT_NE(read_file(path("site/types/Person.md")).find("identified by SSN, country"), std::string::npos);
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
    std::vector<std::vector<std::string>> commands = {
        {"validate", "--json", sample("architecture.jsm")},
        {"simulate", "--model", sample("architecture.jsm"), "--seed", "9", "--max-steps", "60", "--trace", path("t.jsonl")},
        {"transform", "--to", "lemma", "--in", sample("architecture.jsm"), "--out", path("o.lsm"), "--loss-report",
         path("l.json")},
        {"docs", "--model", sample("architecture.jsm"), "--out", path("d")},
    };
    for (const auto& c : commands) {
        Outcome a = run_cli(c);
        std::string files = read_file(path("t.jsonl")) + read_file(path("o.lsm")) + read_file(path("l.json")) +
                            read_file(path("d/index.md"));
        Outcome b = run_cli(c);
        std::string files2 = read_file(path("t.jsonl")) + read_file(path("o.lsm")) + read_file(path("l.json")) +
                             read_file(path("d/index.md"));
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(a.err, b.err);
        EXPECT_EQ(files, files2);
    }
}

}  // namespace
}  // namespace msadl
