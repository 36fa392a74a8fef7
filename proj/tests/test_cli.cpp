#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace {

const std::string kCli = FROBWDVV_CLI;
const std::string kSpecs = FROBWDVV_SPEC_DIR;

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    CliRun r;
    const std::string cmd = kCli + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

nlohmann::json runJson(const std::string& args, int expectStatus = 0) {
    const CliRun r = run(args);
    EXPECT_EQ(r.status, expectStatus) << args;
    return nlohmann::json::parse(r.out);
}

std::string spec(const std::string& name) { return kSpecs + "/" + name + ".json"; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double entry(const nlohmann::json& m, int i, int j, int part) { return m[i][j][part].get<double>(); }

}  // namespace

TEST(Cli, RecursionTable) {
    const auto j = runJson("recursion nd --max 4");
    EXPECT_EQ(j["schema"], "frobwdvv/1");
    EXPECT_TRUE(j["pass"]);
    const auto& v = j["data"]["values"];
    ASSERT_EQ(v.size(), 4u);
    EXPECT_EQ(v[0][1], "1");
    EXPECT_EQ(v[1][1], "1");
    EXPECT_EQ(v[2][1], "12");
    EXPECT_EQ(v[3][1], "620");
    EXPECT_EQ(j["conventions"]["max"], 4);
}

TEST(Cli, RecursionCsv) {
    const CliRun r = run("recursion nd --max 3 --format csv");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "label,value\nN1,1\nN2,1\nN3,12\n");
}

TEST(Cli, LegendreP1) {
    const auto j = runJson("legendre " + spec("p1") + " --kappa 2 --order 8 --compare " + spec("nls"));
    EXPECT_TRUE(j["pass"]);
    EXPECT_EQ(j["data"]["charge_hat"], "-1");
    EXPECT_EQ(j["data"]["kappa"], 2);
    EXPECT_EQ(j["conventions"]["order"], 8);
}

TEST(Cli, FailedCheckGivesStatusOne) {
    const auto j = runJson("legendre " + spec("p1") + " --kappa 2 --order 6 --compare " + spec("a2"), 1);
    EXPECT_FALSE(j["pass"]);
}

TEST(Cli, MonodromyA2) {
    const auto j = runJson("monodromy " + spec("a2") + " --point 0,3 --phi 2.356194490 --tol 1e-6 --signs 1,-1");
    EXPECT_TRUE(j["pass"]);
    const auto& S = j["data"]["S"];
    EXPECT_NEAR(entry(S, 0, 0, 0), 1, 1e-6);
    EXPECT_NEAR(entry(S, 0, 1, 0), 0, 1e-6);
    EXPECT_NEAR(entry(S, 1, 0, 0), -1, 1e-6);
    EXPECT_NEAR(entry(S, 1, 1, 0), 1, 1e-6);
    EXPECT_EQ(j["tolerance"], 1e-6);
    for (const char* k : {"phi", "signs", "ordering", "branch", "u", "spec"}) EXPECT_TRUE(j["conventions"].contains(k)) << k;
}

TEST(Cli, NonAdmissibleLineIsAnError) {
    EXPECT_EQ(run("monodromy " + spec("a2") + " --point 0,3 --phi 1.5707963267948966").status, 2);
}

TEST(Cli, TensorMonodromy) {
    const auto j = runJson("tensor-monodromy " + spec("p1") + " " + spec("p1"));
    EXPECT_TRUE(j["pass"]);
    EXPECT_EQ(j["data"]["S"].size(), 4u);
    EXPECT_NEAR(entry(j["data"]["mu"], 0, 0, 0), -1, 1e-15);
    EXPECT_NEAR(entry(j["data"]["mu"], 3, 3, 0), 1, 1e-15);
}

TEST(Cli, GenusOneFamilyParams) {
    const auto j = runJson("genus1-check " + spec("twodim_family") + " --param m=4 --param c=1/12");
    EXPECT_TRUE(j["pass"]);
    EXPECT_EQ(j["data"]["m"], "4");
    EXPECT_EQ(j["conventions"]["params"], nlohmann::json({"m=4", "c=1/12"}));
    // default c = 1 at m = 5 leaves an irrational radical
    EXPECT_EQ(run("genus1-check " + spec("twodim_family")).status, 2);
}

TEST(Cli, WdvvAndCalibration) {
    for (const char* s : {"p1", "a2", "nls", "p2"}) EXPECT_TRUE(runJson("wdvv-check " + spec(s))["pass"]) << s;
    EXPECT_TRUE(runJson("calibrate " + spec("a2") + " --m-max 3")["pass"]);
    EXPECT_TRUE(runJson("verify-omega " + spec("p1") + " --kappa 2 --order 7 --m-max 3")["pass"]);
}

TEST(Cli, UsageErrors) {
    EXPECT_NE(run("recursion no-such-table").status, 0);
    EXPECT_NE(run("wdvv-check /nonexistent.json").status, 0);
    EXPECT_NE(run("").status, 0);
}

TEST(Cli, OutputFileIsDeterministic) {
    const auto dir = std::filesystem::temp_directory_path() / ("frobwdvv_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.json", b = dir / "b.json";
    const std::string args = "legendre " + spec("a2") + " --kappa 2 --order 6 --point 0,3 -o ";
    EXPECT_EQ(run(args + a.string()).status, 0);
    EXPECT_EQ(run(args + b.string()).status, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(std::filesystem::exists(a.string() + ".tmp"));
    EXPECT_TRUE(nlohmann::json::parse(slurp(a))["pass"]);
    std::filesystem::remove_all(dir);
}
