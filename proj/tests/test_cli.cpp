#include "nid/report.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace nid;

namespace {

std::string data(const std::string& name) { return std::string(NID_DATA_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "nid_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig config(const std::string& input, std::size_t D, std::uint64_t seed, std::size_t workers = 1)
{
    RunConfig c;
    c.input = input;
    c.dimension = D;
    c.seed = seed;
    c.workers = workers;
    return c;
}

struct Command {
    int status;
    std::string output;
};

Command run(const std::string& args)
{
    const std::string cmd = std::string(NID_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int st = pclose(pipe);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

bool same_points(const std::vector<Point>& a, const std::vector<Point>& b)
{
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& p : a) {
        bool hit = false;
        for (std::size_t k = 0; k < b.size() && !hit; ++k) {
            if (used[k]) continue;
            double d = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, magnitude(p[i] - b[k][i]));
            if (d <= 1e-6) used[k] = hit = true;
        }
        if (!hit) return false;
    }
    return true;
}

} // namespace

TEST(Blackbox, CyclicFourReport)
{
    std::ostringstream log;
    const auto r = run_blackbox(config(data("cyclic4.txt"), 1, 1), log);
    ASSERT_EQ(r.status, 0) << r.message;
    ASSERT_EQ(r.report->sets.size(), 1u);
    EXPECT_EQ(r.report->sets[0].dimension, 1u);
    EXPECT_EQ(r.report->degree(1), 4u);
    EXPECT_TRUE(r.report->isolated.empty());
    EXPECT_NE(log.str().find("seed 1"), std::string::npos);
}

TEST(Blackbox, DemoReportOnFourWorkers)
{
    std::ostringstream log;
    const auto r = run_blackbox(config(data("demo.txt"), 3, 2, 4), log);
    ASSERT_EQ(r.status, 0) << r.message;
    EXPECT_EQ(r.report->degree(3), 1u);
    EXPECT_EQ(r.report->degree(2), 1u);
    EXPECT_EQ(r.report->degree(1), 12u);
    const std::vector<Point> expected{{{3, 0}, {2, 0}, {2, 0}, {1, 0}},
                                      {{3, 0}, {3, 0}, {2, 0}, {1, 0}},
                                      {{4, 0}, {2, 0}, {2, 0}, {1, 0}},
                                      {{4, 0}, {3, 0}, {2, 0}, {1, 0}}};
    EXPECT_TRUE(same_points(r.report->isolated, expected));
    EXPECT_TRUE(r.report->suspects.empty());
}

TEST(Blackbox, SameSeedGivesIdenticalJson)
{
    std::string first;
    for (int k = 0; k < 2; ++k) {
        auto c = config(data("demo.txt"), 3, 11);
        c.report_path = scratch("same_seed_" + std::to_string(k) + ".json").string();
        std::ostringstream log;
        ASSERT_EQ(run_blackbox(c, log).status, 0);
        const auto text = slurp(c.report_path);
        if (k == 0) first = text;
        else EXPECT_EQ(text, first);
    }
    EXPECT_NE(first.find("\"seed\": 11"), std::string::npos);
}

TEST(Blackbox, WorkerCountsGiveEquivalentReports)
{
    std::vector<DecompositionReport> reports;
    for (std::size_t p : {1, 2, 4}) {
        std::ostringstream log;
        auto r = run_blackbox(config(data("demo.txt"), 3, 3, p), log);
        ASSERT_EQ(r.status, 0);
        reports.push_back(*r.report);
    }
    for (std::size_t k = 1; k < reports.size(); ++k) {
        ASSERT_EQ(reports[k].sets.size(), reports[0].sets.size());
        for (std::size_t s = 0; s < reports[0].sets.size(); ++s) {
            EXPECT_EQ(reports[k].sets[s].dimension, reports[0].sets[s].dimension);
            EXPECT_TRUE(same_points(reports[k].sets[s].points, reports[0].sets[s].points));
        }
        EXPECT_TRUE(same_points(reports[k].isolated, reports[0].isolated));
    }
}

TEST(Blackbox, LinearSystemAtDimensionZero)
{
    std::ostringstream log;
    const auto r = run_blackbox(config(data("linear.txt"), 0, 5), log);
    ASSERT_EQ(r.status, 0) << r.message;
    EXPECT_TRUE(r.report->sets.empty());
    EXPECT_EQ(r.report->isolated.size(), 1u);
}

TEST(Blackbox, DefaultDimensionWarns)
{
    auto c = config(data("cyclic4.txt"), 0, 1);
    c.dimension.reset();
    std::ostringstream log;
    const auto r = run_blackbox(c, log);
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.report->top_dimension, 3u);
    EXPECT_EQ(r.report->degree(1), 4u);
    EXPECT_NE(log.str().find("warning: top dimension defaults"), std::string::npos);
}

TEST(Blackbox, InputErrorsAreStatusTwo)
{
    std::ostringstream log;
    EXPECT_EQ(run_blackbox(config(data("malformed.txt"), 0, 1), log).status, 2);
    EXPECT_EQ(run_blackbox(config(data("no_such_file.txt"), 0, 1), log).status, 2);
    EXPECT_EQ(run_blackbox(config(data("cyclic4.txt"), 4, 1), log).status, 2);
    EXPECT_EQ(run_blackbox(config(data("cyclic4.txt"), 1, 1, 0), log).status, 2);
}

TEST(Blackbox, AllPathsFailingIsStatusThree)
{
    auto c = config(data("cyclic4.txt"), 1, 1);
    c.params.max_steps = 1;
    std::ostringstream log;
    const auto r = run_blackbox(c, log);
    EXPECT_EQ(r.status, 3);
    EXPECT_FALSE(r.message.empty());
}

TEST(Blackbox, SuspectsOnlyWarn)
{
    std::ostringstream log;
    const auto r = run_blackbox(config(data("line_double.txt"), 1, 1), log);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.report->suspects.size(), 1u);
    EXPECT_NE(log.str().find("warning"), std::string::npos);
}

TEST(Blackbox, JsonSchema)
{
    std::ostringstream log;
    const auto r = run_blackbox(config(data("cyclic4.txt"), 1, 4), log);
    const auto j = to_json(*r.report);
    for (const char* key : {"seed", "workers", "precision", "nvars", "top_dimension", "dims", "isolated", "suspects",
                            "counts", "warnings"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_FALSE(j.contains("timings"));
    EXPECT_TRUE(to_json(*r.report, true).contains("timings"));
    EXPECT_EQ(j["dims"]["1"]["degree"], 4);
    EXPECT_EQ(j["dims"]["1"]["points"].size(), 4u);
}

TEST(Blackbox, DoubleDoublePrecision)
{
    auto c = config(data("cyclic4.txt"), 1, 2);
    c.precision = Precision::dd;
    std::ostringstream log;
    const auto r = run_blackbox(c, log);
    ASSERT_EQ(r.status, 0) << r.message;
    EXPECT_EQ(r.report->degree(1), 4u);
    EXPECT_THROW(parse_precision("q"), std::invalid_argument);
}

TEST(Cli, ModelCommands)
{
    auto c = run("model pipeline --n 6 --F 3 --p 4");
    EXPECT_EQ(c.status, 0);
    EXPECT_NE(c.output.find("Sp = 8/3 (2.66667)"), std::string::npos) << c.output;
    c = run("model paths --n 3 --p 8");
    EXPECT_NE(c.output.find("Sp = 3 (3)"), std::string::npos) << c.output;
    c = run("model simulate --n 6 --F 3 --p 4");
    EXPECT_NE(c.output.find("makespan 9"), std::string::npos) << c.output;
    c = run("model cascade --counts 55,54,50,26 --p 8");
    EXPECT_NE(c.output.find("Sp = 37/5"), std::string::npos) << c.output;
}

TEST(Cli, UsageErrorsAreStatusTwo)
{
    EXPECT_EQ(run("model pipeline --n x --F 3 --p 4").status, 2);
    EXPECT_EQ(run("model pipeline --n 6 --F 3 --p 1").status, 2);
    EXPECT_EQ(run("solve " + data("malformed.txt")).status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
}

TEST(Cli, SolveWritesReport)
{
    const auto out = scratch("cli_report.json");
    const auto c = run("solve " + data("cyclic4.txt") + " --dim 1 --seed 3 --out " + out.string());
    ASSERT_EQ(c.status, 0) << c.output;
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_EQ(j["seed"], 3);
    EXPECT_EQ(j["dims"]["1"]["degree"], 4);
}

TEST(Cli, EnvironmentSuppliesFlags)
{
    const auto out = scratch("env_report.json");
    const std::string cmd = "NID_DIM=1 NID_SEED=9 " + std::string(NID_CLI_PATH) + " solve " + data("cyclic4.txt") +
                            " --out " + out.string() + " > /dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_EQ(j["seed"], 9);
    EXPECT_EQ(j["top_dimension"], 1);
}
