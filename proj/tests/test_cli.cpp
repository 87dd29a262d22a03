// Command-level checks run in-process; exit-code checks against the built
// executable live in CMakeLists.txt.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "massmeter/commands.hpp"

using namespace massmeter;
namespace fs = std::filesystem;

namespace {

const fs::path source_dir{MASSMETER_SOURCE_DIR};

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("massmeter_cli_" + name);
    fs::remove_all(d);
    return d;
}

} // namespace

TEST(CmdSolve, PiTriangleFirstRow) {
    auto cfg = load_config(source_dir / "configs/pi_triangle.json");
    cfg.solver.n = 24;
    const auto out = scratch("solve");
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(cfg, out, log), 0);
    const auto rows = lines(out / "eigenvalues.csv");
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], "mode,lambda,h,residual");
    const double lambda = std::stod(rows[1].substr(rows[1].find(',') + 1));
    EXPECT_NEAR(lambda, 5.0, 1e-3);
}

TEST(CmdSolve, SingleModeAndMeshDump) {
    auto cfg = load_config(source_dir / "configs/pi_triangle.json");
    cfg.solver.n = 8;
    cfg.solver.k = 1;
    cfg.output.formats = {"csv", "mesh"};
    const auto out = scratch("solve1");
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(cfg, out, log), 0);
    EXPECT_EQ(lines(out / "eigenvalues.csv").size(), 2u);
    EXPECT_TRUE(fs::exists(out / "mesh.txt"));
}

TEST(CmdVerify, WritesAllFiles) {
    auto cfg = load_config(source_dir / "configs/acute_verify.json");
    cfg.domain.epsilon = 0.0;
    cfg.solver.n = 16;
    cfg.solver.k = 3;
    cfg.experiment.tolerances.side_mass_relative = 0.5;
    const auto out = scratch("verify");
    std::ostringstream log;
    const int rc = cmd_verify(cfg, out, log);
    EXPECT_EQ(lines(out / "side_mass.csv").size(), 1u + 3u * 3u);
    EXPECT_EQ(lines(out / "side_mass.csv")[0], "mode,side,I,predicted,deviation,epsilon");
    EXPECT_EQ(lines(out / "rellich.csv")[0], "mode,R0,Rx,Ry,expected0,expectedX,expectedY");
    EXPECT_EQ(lines(out / "identities.csv")[0], "mode,identity_id,residual");
    EXPECT_EQ(lines(out / "identities.csv").size(), 1u + 3u * 3u);
    std::ifstream in(out / "report.json");
    const auto j = Json::parse(in);
    EXPECT_NO_THROW(report_validator().validate(j));
    EXPECT_EQ(rc, j["pass"].get<bool>() ? 0 : 1);
    EXPECT_NE(log.str().find("identity_relative"), std::string::npos);
}

TEST(CmdVerify, FailingRuleGivesExitOne) {
    auto cfg = load_config(source_dir / "configs/acute_verify.json");
    cfg.solver.n = 6;
    cfg.solver.k = 2;
    cfg.experiment.tolerances.side_mass_relative = 1e-9;
    std::ostringstream log;
    EXPECT_EQ(cmd_verify(cfg, scratch("verify_fail"), log), 1);
    EXPECT_NE(log.str().find("FAIL side_mass_relative"), std::string::npos);
}

TEST(CmdSweep, RowCountAndSlopeFile) {
    auto cfg = load_config(source_dir / "configs/acute_sweep.json");
    cfg.solver.n = 12;
    cfg.solver.k = 5;
    const auto out = scratch("sweep");
    std::ostringstream log;
    cmd_sweep(cfg, out, log);
    EXPECT_EQ(lines(out / "sweep.csv").size(), 1u + 4u * 5u * 3u);
    std::ifstream in(out / "slope.json");
    const auto j = Json::parse(in);
    EXPECT_TRUE(j["status"] == "fitted" || j["status"] == "floor-limited");
    EXPECT_TRUE(j.contains("p"));
    EXPECT_TRUE(j.contains("c_mass_bound"));
    EXPECT_TRUE(fs::exists(out / "sweep.svg"));
}

TEST(CmdSweep, FlatPerturbationIsFloorLimited) {
    auto cfg = load_config(source_dir / "configs/acute_sweep.json");
    cfg.domain.gtilde = PerturbationFn();
    cfg.solver.n = 12;
    cfg.solver.k = 3;
    const auto out = scratch("sweep_flat");
    std::ostringstream log;
    EXPECT_EQ(cmd_sweep(cfg, out, log), 0);
    std::ifstream in(out / "slope.json");
    const auto j = Json::parse(in);
    EXPECT_EQ(j["status"], "floor-limited");
    EXPECT_TRUE(j["p"].is_null());
}

TEST(CmdConverge, OneOrderPerQuantity) {
    auto cfg = load_config(source_dir / "configs/pi_triangle.json");
    cfg.experiment.levels = {8, 16, 32};
    cfg.solver.k = 2;
    const auto out = scratch("converge");
    std::ostringstream log;
    EXPECT_EQ(cmd_converge(cfg, out, log), 0);
    std::ifstream in(out / "orders.json");
    const auto j = Json::parse(in);
    EXPECT_EQ(j["orders"].size(), 4u);
    EXPECT_NEAR(j["orders"]["eigenvalue_error"].get<double>(), 4.0, 0.5);
    EXPECT_EQ(lines(out / "convergence.csv").size(), 4u);
}

TEST(CmdConverge, TooFewLevels) {
    auto cfg = load_config(source_dir / "configs/pi_triangle.json");
    cfg.experiment.levels = {8, 16};
    std::ostringstream log;
    EXPECT_THROW(cmd_converge(cfg, scratch("converge_few"), log), ConfigError);
}
