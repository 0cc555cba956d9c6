// Runs the relayperf binary and checks its output contract.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(RELAYPERF_BINARY) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string scenario(const char* name) { return std::string(RELAYPERF_SCENARIOS) + "/" + name; }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, GainSweepHeaderAndRows) {
    const auto r = run("gain-sweep --config " + scenario("fig1_gain.conf"));
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(first_line(r.out), "gamma1_db,m1,C_closed_form,C_oracle");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 13 * 3);
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, HeadersOfEveryCommand) {
    const std::string fast = " --set sim.trials=1000 --set sweep.points=0,5";
    EXPECT_EQ(first_line(run("avg-snr --config " + scenario("fig2_avg_snr.conf") + fast).out),
              "gamma1_db,balance_ratio,mean_closed,mean_oracle,mean_mc,mc_stderr");
    EXPECT_EQ(first_line(run("abep --config " + scenario("fig3_abep.conf") + fast).out),
              "gamma1_db,scheme,psi,abep_pade,abep_mc,mc_stderr");
    EXPECT_EQ(first_line(run("outage --config " + scenario("fig6_outage.conf") + fast).out),
              "gamma1_over_gammath_db,balance_ratio,op_pade,op_quadrature,op_exact,op_mc,mc_stderr");
}

TEST(Cli, DeterministicForSeedAndSeedMatters) {
    const std::string base = "avg-snr --config " + scenario("fig2_avg_snr.conf") + " --set sim.trials=20000";
    const auto a = run(base + " --seed 5");
    const auto b = run(base + " --seed 5");
    const auto c = run(base + " --seed 6");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, WritesOutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "relayperf_cli_test.csv";
    std::filesystem::remove(path);
    const auto r = run("gain-sweep --config " + scenario("fig1_gain.conf") + " --out " + path.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, "gamma1_db,m1,C_closed_form,C_oracle");
    std::filesystem::remove(path);
}

TEST(Cli, ConfigErrorsExitTwo) {
    EXPECT_EQ(run("gain-sweep --config /nonexistent.conf").status, 2);
    EXPECT_EQ(run("gain-sweep --config " + scenario("fig1_gain.conf") + " --set hop1.bogus=1").status, 2);
    EXPECT_EQ(run("abep --config " + scenario("fig3_abep.conf") + " --set sweep.axis=beta").status, 2);
    EXPECT_EQ(run("gain-sweep").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("").status, 2);
}

TEST(Cli, NumericalFailureExitsThree) {
    const auto r = run("abep --config " + scenario("fig3_abep.conf") + " --set sim.trials=1000 --set sweep.points=40");
    EXPECT_EQ(r.status, 3);
    EXPECT_NE(r.out.find("nan"), std::string::npos);
}

TEST(Cli, ValidateStatusFollowsReport) {
    const auto r = run("validate");
    const bool any_fail = r.out.find("FAIL") != std::string::npos;
    EXPECT_EQ(r.status, any_fail ? 1 : 0);
    EXPECT_NE(r.out.find("1 - exp(-1)"), std::string::npos);
    EXPECT_NE(r.out.find("tolerance="), std::string::npos);
    EXPECT_NE(r.out.find("measured="), std::string::npos);
}

TEST(Cli, ValidateCatchesPerturbedPrefactor) {
    const auto r = run("validate --perturb-prefactor 1.01");
    EXPECT_EQ(r.status, 1);
    std::istringstream in(r.out);
    std::string line;
    int closed_fail = 0;
    while (std::getline(in, line))
        if (line.rfind("FAIL", 0) == 0 && line.find("closed form") != std::string::npos) ++closed_fail;
    EXPECT_GE(closed_fail, 2);
}
