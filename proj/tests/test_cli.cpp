#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sys/wait.h>

#include "hypclt/io.hpp"

using hypclt::io::json;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HYPCLT_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r{0, ""};
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string temp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST(Cli, SpectralAnalyzeFreeGroup) {
    const auto r = run("spectral analyze --fixture F2_standard");
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_NEAR(j["result"]["spectral"]["lambda"].get<double>(), 3.0, 1e-9);
    const auto mu = j["result"]["spectral"]["mu"];
    EXPECT_NEAR(mu[0].get<double>(), 0.0, 1e-10);
    for (int i = 1; i < 5; ++i) EXPECT_NEAR(mu[i].get<double>(), 0.25, 1e-10);
    EXPECT_TRUE(j.contains("version"));
    EXPECT_TRUE(j.contains("tolerances"));
    EXPECT_EQ(j["config"]["fixture"], "F2_standard");
}

TEST(Cli, NegativeVerdictExitsWithTwo) {
    const auto r = run("spectral analyze --fixture F2xF2_concat");
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(json::parse(r.out)["verdict"], "not-almost-semisimple");
    EXPECT_EQ(run("fn synthesize --fixture ZxZ2_Lprime --fn fixture --depth 2").status, 2);
}

TEST(Cli, WordLengthDrift) {
    const auto r = run("clt drift --fixture F2_standard --fn word-length");
    ASSERT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["result"]["clt"]["E"].get<double>(), 1.0);
    EXPECT_EQ(j["result"]["clt"]["sigma"].get<double>(), 0.0);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("spectral analyze").status, 1);
    EXPECT_EQ(run("clt sample --fixture F2_standard").status, 1);
    EXPECT_EQ(run("bogus").status, 1);
    EXPECT_EQ(run("spectral analyze --fixture Nope").status, 1);
    EXPECT_EQ(run("spectral analyze --fixture F2_standard --fixture PSL2Z --group-file /dev/null").status, 1);
}

TEST(Cli, ComputeErrorIsReported) {
    // the ball radius exceeds the oracle budget
    const auto r = run("combing validate --fixture F2xF2_concat --radius 30");
    EXPECT_EQ(r.status, 1);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["status"], "error");
    EXPECT_FALSE(j["error"].get<std::string>().empty());
}

TEST(Cli, SamplingIsDeterministic) {
    const std::string args = "clt empirical --fixture F2_standard --fn counting --sigma-pattern ab --n 50 --count 3000 --seed 5";
    const auto a = run(args + " --threads 1"), b = run(args + " --threads 1");
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    const auto c = run(args + " --threads 2");
    EXPECT_EQ(json::parse(a.out)["result"], json::parse(c.out)["result"]);
}

TEST(Cli, HistogramAndBundles) {
    const auto csv = temp("hypclt_hist.csv"), bundle = temp("hypclt_bundle.json"), report = temp("hypclt_report.json");
    auto r = run("clt empirical --fixture F2_standard --fn counting --n 40 --count 2000 --seed 3 --histogram " + csv +
                 " --out " + report);
    ASSERT_EQ(r.status, 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "bin_left,bin_right,count");
    EXPECT_EQ(hypclt::io::read_file(report)["config"]["seed"], 3);

    r = run("fn synthesize --fixture F2_standard --fn counting --sigma-pattern ab --depth 2 --bundle-out " + bundle);
    ASSERT_EQ(r.status, 0);
    r = run("clt drift --function-file " + bundle);
    ASSERT_EQ(r.status, 0);
    EXPECT_NEAR(json::parse(r.out)["result"]["clt"]["sigma2"].get<double>(), 5.0 / 24, 1e-12);
    for (const auto& p : {csv, bundle, report}) std::filesystem::remove(p);
}

TEST(Cli, GroupFileBuildsCombing) {
    const auto group = temp("hypclt_group.json");
    {
        std::ofstream out(group);
        out << R"({"group": {"kind": "free_product_cyclic", "orders": [2, 3], "names": ["s", "t"]}})";
    }
    const auto r = run("combing build --group-file " + group + " --verify-radius 6");
    EXPECT_EQ(r.status, 0);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["result"]["validation"]["passed"].get<bool>());
    EXPECT_EQ(j["result"]["combing"]["digraph"]["vertices"], 3);
    std::filesystem::remove(group);
}

TEST(Cli, QuasimorphismCommands) {
    auto r = run("qm count --fixture F2_standard --sigma-pattern abab --word abababab");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(json::parse(r.out)["result"]["phi_sigma"], 2);
    r = run("qm holder --fixture F2_standard --fn counting --sigma-pattern abab --radius 10 --count 200");
    EXPECT_EQ(r.status, 2);
    r = run("qm defect --fixture F2_standard --fn counting --sigma-pattern ab --radius 3");
    ASSERT_EQ(r.status, 0);
    EXPECT_GT(json::parse(r.out)["result"]["lower_bound"].get<int>(), 0);
}
