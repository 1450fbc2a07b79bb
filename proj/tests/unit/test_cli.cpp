#include "../common/golden_cases.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <gtest/gtest.h>
#include <sys/wait.h>

using namespace azumaya;

namespace {

const std::string samples = AZUMAYA_SAMPLES_DIR;
const std::string golden_dir = AZUMAYA_GOLDEN_DIR;

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("azumaya_test_" + name)).string();
}

golden::Run cli(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    golden::Run r;
    r.status = run_command(std::move(args), in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

/// Runs the installed binary through the shell; returns (exit status, stdout).
std::pair<int, std::string> spawn(const std::string& args) {
    std::string cmd = std::string(AZUMAYA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Golden, EverySubcommandMatchesReference) {
    bool update = std::getenv("AZUMAYA_UPDATE_GOLDEN") != nullptr;
    for (const auto& c : golden::cases()) {
        auto r = golden::run(c, samples, temp_path(c.name + ".svg"));
        EXPECT_EQ(r.status, c.exit_code) << c.name << "\n" << r.err;
        std::string path = golden_dir + "/" + c.name + ".json";
        if (update) {
            std::ofstream(path, std::ios::binary) << r.out;
            if (!c.svg.empty()) std::ofstream(golden_dir + "/" + c.svg, std::ios::binary) << r.svg;
            continue;
        }
        EXPECT_EQ(r.out, golden::read_file(path)) << c.name;
        if (!c.svg.empty()) {
            EXPECT_EQ(r.svg, golden::read_file(golden_dir + "/" + c.svg)) << c.name;
        }
    }
}

TEST(Golden, BinaryAgreesWithLibraryAndExitCodes) {
    for (const auto& c : golden::cases()) {
        std::string args;
        for (const auto& a : c.args) args += " " + (a.rfind('@', 0) == 0 ? samples + "/" + a.substr(1) : a);
        if (!c.svg.empty()) args += " --svg-out " + temp_path("spawn.svg");
        auto [status, out] = spawn(args);
        EXPECT_EQ(status, c.exit_code) << c.name;
        EXPECT_EQ(out, golden::read_file(golden_dir + "/" + c.name + ".json")) << c.name;
    }
}

TEST(Golden, ThreadCountDoesNotChangeOutput) {
    for (const auto& c : golden::cases()) {
        if (c.svg.empty()) continue;
        auto a = golden::run(c, samples, temp_path("t1.svg"), 1);
        auto b = golden::run(c, samples, temp_path("t4.svg"), 4);
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(a.svg, b.svg);
    }
}

TEST(Cli, ClassifyFlags) {
    auto r = cli({"d0", "classify", samples + "/d0_jordan.json"});
    ASSERT_EQ(r.status, 0);
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["flags"]["chow"], false);
    EXPECT_EQ(j["flags"]["hilb"], "true");
    EXPECT_EQ(j["flags"]["singleton"], true);
}

TEST(Cli, AnalyzeReportsTypeAndHilbert) {
    auto j = Json::parse(cli({"morphism", "analyze", samples + "/morphism_diag.json"}).out);
    EXPECT_EQ(j["comb_type"].dump(), R"({"g":0,"r":2,"chi":2,"beta":3})");
    EXPECT_EQ(j["hilbert"]["pretty"], "5m + 2");
}

TEST(Cli, ValidationFailureStillEmitsReport) {
    auto r = cli({"morphism", "validate", samples + "/morphism_chain_mismatch.json"});
    EXPECT_EQ(r.status, 2);
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["validation"]["valid"], false);
    EXPECT_EQ(j["validation"]["issues"][0]["node"], 0);
    EXPECT_FALSE(r.err.empty());
    auto nc = cli({"d0", "classify", samples + "/d0_noncommuting.json"});
    EXPECT_EQ(nc.status, 2);
    EXPECT_EQ(Json::parse(nc.out)["validation"]["noncommuting_pairs"][0].dump(), "[1,2]");
    EXPECT_EQ(cli({"presentation", "check", samples + "/presentation_fail4.json"}).status, 2);
    EXPECT_EQ(cli({"presentation", "check", samples + "/presentation_fail1.json"}).status, 2);
}

TEST(Cli, ReadsStdinAndWritesOutputFile) {
    std::string text = golden::read_file(samples + "/d0_jordan.json");
    auto from_stdin = cli({"d0", "classify"}, text);
    EXPECT_EQ(from_stdin.status, 0);
    EXPECT_EQ(from_stdin.out, golden::read_file(golden_dir + "/d0_classify.json"));
    std::string out = temp_path("out.json");
    auto to_file = cli({"d0", "classify", "-", "-o", out}, text);
    EXPECT_EQ(to_file.status, 0);
    EXPECT_TRUE(to_file.out.empty());
    EXPECT_EQ(golden::read_file(out), from_stdin.out);
}

TEST(Cli, ErrorsExitOne) {
    EXPECT_EQ(cli({"d0", "classify", "/nonexistent/file.json"}).status, 1);
    EXPECT_EQ(cli({"d0", "classify"}, "{not json").status, 1);
    EXPECT_EQ(cli({"d0", "classify", samples + "/morphism_diag.json"}).status, 1);
    EXPECT_EQ(cli({"bogus"}).status, 1);
    EXPECT_EQ(cli({"morphism", "bounds", samples + "/morphism_diag.json", "--m0", "10"}).status, 1);
    EXPECT_EQ(cli({"family", "scan", samples + "/family_merge.json", "--samples", "1,x"}).status, 1);
    EXPECT_EQ(cli({"family", "scan", samples + "/family_merge.json", "--svg-out", "/nonexistent/dir/x.svg"}).status, 1);
    auto r = cli({"morphism", "validate"}, R"({"schema": 1, "kind": "morphism", "r": 2, "k": 1, "maps": {"C0": [["t"]]}})");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("entries: expected 4, found 1"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, HelpExitsZero) {
    auto r = cli({"--help"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("family"), std::string::npos);
}

TEST(Cli, FamilyVerdictsAndSampleOverride) {
    auto nonflat = Json::parse(cli({"family", "scan", samples + "/family_nonflat.json"}).out);
    EXPECT_EQ(nonflat["scan"]["verdict"], "NOT CONSTANT");
    auto unhiggs = Json::parse(cli({"family", "scan", samples + "/family_unhiggs.json"}).out);
    EXPECT_EQ(unhiggs["scan"]["verdict"], "CONSTANT");
    EXPECT_EQ(unhiggs["scan"]["samples"][1]["surrogate_degrees"][0], 1);
    auto two = Json::parse(cli({"family", "scan", samples + "/family_merge.json", "--samples", "1, 0"}).out);
    EXPECT_EQ(two["scan"]["samples"].size(), 2u);
}

TEST(Cli, SeedIsRecorded) {
    auto j = Json::parse(cli({"d0", "classify", samples + "/d0_jordan.json", "--seed", "7"}).out);
    EXPECT_EQ(j["seed"], 7);
}
