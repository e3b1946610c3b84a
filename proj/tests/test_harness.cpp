#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fraclab/cli.hpp"
#include "fraclab/error.hpp"
#include "fraclab/harness.hpp"
#include "fraclab/parallel.hpp"
#include "oracle.hpp"

using namespace fraclab;
using nlohmann::json;

namespace {

const std::string kConfigs = FRACLAB_CONFIG_DIR;

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "fraclab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_per_axis = 41;
  cfg.p_list = {4.0, 8.0, 16.0, 32.0};
  cfg.n_random = 50;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, ParsesFullSchema) {
  const json j = json::parse(R"({
    "domain": {"shape": "rectangle", "bounds": [0, 2, 0, 1]},
    "n_per_axis": 9, "collar_width": 0.5,
    "weight": {"kind": "gaussian", "center": [1.0, 0.5], "width": 0.2},
    "s": 0.3, "p_list": [2, 3],
    "solver": {"init": "delta_s", "grad_tol": 1e-7, "max_iter": 100, "method": "gradient"},
    "limit": {"init": "xi", "q_ladder": [8, 16]},
    "output": {"csv": "a.csv", "summary": "b.json"},
    "seed": 7, "deterministic": true, "n_random": 3})");
  const ExperimentConfig cfg = parse_config(j);
  EXPECT_EQ(cfg.domain.shape, Shape::Rectangle);
  EXPECT_EQ(cfg.solver.init, InitSource::DeltaS);
  EXPECT_EQ(cfg.solver.method, DescentMethod::Gradient);
  EXPECT_EQ(cfg.limit.init, LimitInit::Xi);
  EXPECT_EQ(cfg.limit.options.q_ladder.size(), 2u);
  EXPECT_EQ(cfg.csv_path, "a.csv");
  EXPECT_EQ(cfg.seed, 7u);
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  double mass = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) mass += w.mass(i);
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(Config, RejectsInvalid) {
  EXPECT_THROW(parse_config(json::parse(R"({"p_list": [4, 2]})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"p_list": [1, 2]})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"s": 1.5})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"solver": {"init": "bogus"}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"colour": 1})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"weight": {"kind": "weird"}})")).make_weight(
                   build_domain(DomainSpec::interval(0, 1), 5, 1.0)),
               ConfigError);
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST(Sweep, DiagnosticsOnSmallInterval) {
  const ExperimentConfig cfg = small_config();
  const SweepResult r = run_p_sweep(cfg);
  ASSERT_EQ(r.records.size(), 4u);
  EXPECT_EQ(r.flagged, 0);
  EXPECT_TRUE(std::isnan(r.records[0].sup_dist_to_prev));
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  const ScalarField xi = build_xi(w, distance_field(d), d).xi;
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const auto& rec = r.records[k];
    if (k > 0) EXPECT_GT(rec.p, r.records[k - 1].p);
    EXPECT_LE(rec.lambda_root, std::exp(gagliardo_seminorm_log(xi, d, {cfg.s, rec.p, true})));
  }
  EXPECT_LT(r.gaps.back(), r.gaps.front());
  EXPECT_GE(r.k_last, 1.0 - 1e-3);
  EXPECT_TRUE(r.limit.converged);
}

TEST(Sweep, CsvRoundTrip) {
  const SweepResult r = run_p_sweep(small_config());
  const auto back = parse_sweep_csv(sweep_csv(r));
  ASSERT_EQ(back.size(), r.records.size());
  auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_TRUE(same(back[k].p, r.records[k].p));
    EXPECT_TRUE(same(back[k].lambda_root, r.records[k].lambda_root));
    EXPECT_TRUE(same(back[k].holder_of_up, r.records[k].holder_of_up));
    EXPECT_TRUE(same(back[k].el_residual, r.records[k].el_residual));
    EXPECT_TRUE(same(back[k].sup_dist_to_prev, r.records[k].sup_dist_to_prev));
  }
  EXPECT_THROW(parse_sweep_csv("bad header\n"), ConfigError);
}

TEST(Audit, PassesAndIgnoresSigns) {
  const ExperimentConfig cfg = small_config();
  const SweepResult r = run_p_sweep(cfg);
  const AuditReport rep = audit_inequalities(cfg, r, cfg.n_random);
  EXPECT_TRUE(rep.passed);
  for (const auto& c : rep.checks) EXPECT_LE(c.max_violation, c.tolerance) << c.name << " p=" << c.p;

  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  for (const auto& u : random_fields(d, 5, 10)) {
    ScalarField flipped = u;
    for (std::size_t i = 0; i < u.size(); i += 3) flipped[i] = -flipped[i];
    EXPECT_EQ(geometric_mean_k(flipped, w).value, geometric_mean_k(u, w).value);
    EXPECT_EQ(holder_seminorm(flipped, d, cfg.s).value >= 0.0, true);
  }
}

TEST(Audit, ExtremalAttainsTheConstant) {
  const ExperimentConfig cfg = small_config();
  const SweepResult r = run_p_sweep(cfg);
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  const PairKernelTable table(d);
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const auto& sol = r.solutions[k];
    const double gap = r.records[k].log_lambda + sol.p * geometric_mean_k(sol.u_p, w).log_value -
                       sol.p * gagliardo_seminorm_log(sol.u_p, table, {cfg.s, sol.p, true});
    EXPECT_NEAR(gap, 0.0, 1e-10);
  }
}

TEST(Cli, SolveTinyMatchesOracle) {
  std::string out;
  ASSERT_EQ(run({"solve", "--p", "2", "--config", kConfigs + "/tiny3.json"}, &out), kExitOk);
  const json j = json::parse(out);
  const auto ref = oracle::brute_force_lambda({0.0, 1.0, 3}, 0.5, 2.0);
  EXPECT_NEAR(std::exp(j.at("log_lambda").get<double>()) / ref.value, 1.0, 1e-4);
}

TEST(Cli, MissingConfigNamesThePath) {
  std::string err;
  EXPECT_EQ(run({"sweep", "--config", "/no/such/demo.json"}, nullptr, &err), kExitConfig);
  EXPECT_NE(err.find("/no/such/demo.json"), std::string::npos);
}

TEST(Cli, UnknownSubcommandOrFlag) {
  EXPECT_EQ(run({"frobnicate"}), kExitConfig);
  EXPECT_EQ(run({"sweep", "--bogus"}), kExitConfig);
  EXPECT_EQ(run({}), kExitConfig);
}

TEST(Cli, SweepWritesOneRowPerExponent) {
  const std::string csv = ::testing::TempDir() + "/sweep.csv";
  const std::string summary = ::testing::TempDir() + "/summary.json";
  ASSERT_EQ(run({"sweep", "--config", kConfigs + "/demo.json", "--csv", csv, "--summary", summary}), kExitOk);
  const auto rows = parse_sweep_csv(slurp(csv));
  EXPECT_EQ(rows.size(), 5u);
  const json j = json::parse(slurp(summary));
  EXPECT_TRUE(j.contains("mu"));
  EXPECT_TRUE(j.contains("k_last"));
}

TEST(Cli, DeterministicRunsAreBitIdentical) {
  const std::string dir = ::testing::TempDir();
  for (int k = 0; k < 2; ++k) {
    const std::string tag = std::to_string(k);
    ASSERT_EQ(run({"sweep", "--config", kConfigs + "/demo.json", "--deterministic", "--csv",
                   dir + "/det" + tag + ".csv", "--summary", dir + "/det" + tag + ".json"}),
              kExitOk);
  }
  set_deterministic(false);
  EXPECT_EQ(slurp(dir + "/det0.csv"), slurp(dir + "/det1.csv"));
  EXPECT_EQ(slurp(dir + "/det0.json"), slurp(dir + "/det1.json"));
}

TEST(Cli, XiAndLimitAndSelftest) {
  std::string out;
  ASSERT_EQ(run({"xi", "--config", kConfigs + "/demo.json"}, &out), kExitOk);
  const json xi = json::parse(out);
  EXPECT_FALSE(xi.at("levels").empty());
  ASSERT_EQ(run({"limit", "--config", kConfigs + "/demo.json"}, &out), kExitOk);
  EXPECT_GT(json::parse(out).at("mu").get<double>(), 2.0);
  ASSERT_EQ(run({"selftest"}, &out), kExitOk);
  EXPECT_EQ(out.find("FAIL"), std::string::npos);
}
