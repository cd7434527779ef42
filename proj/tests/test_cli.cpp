#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli_app.hpp"

using namespace secretary;
using namespace secretary::cli;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json json_of(const CliRun& r) { return nlohmann::json::parse(r.out); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Compares against tests/golden/<name>; SECRETARY_UPDATE_GOLDEN=1 rewrites it.
void expect_golden(const std::string& name, const std::string& actual) {
  const std::filesystem::path path = std::filesystem::path(SECRETARY_GOLDEN_DIR) / name;
  if (const char* update = std::getenv("SECRETARY_UPDATE_GOLDEN"); update && *update == '1') {
    std::ofstream(path, std::ios::binary) << actual;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << path;
  EXPECT_EQ(read_file(path), actual) << name;
}

}  // namespace

TEST(CliBounds, JsonAndCsv) {
  const CliRun a = run({"bounds", "--n", "100", "--h", "100"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_NEAR(json_of(a)["ros_lower"].get<double>(), 0.633968, 1e-6);
  EXPECT_EQ(json_of(a)["q_rounds"].get<int>(), 0);

  const CliRun b = run({"bounds", "--n", "2", "--h", "1"});
  EXPECT_EQ(json_of(b)["aos_lower"].get<double>(), 0.5);

  const CliRun c = run({"--format", "csv", "bounds", "--n", "2", "--h", "1"});
  ASSERT_EQ(c.code, kExitOk);
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "n,h,aos_lower,aos_upper,ros_lower,ros_upper,q,q_rounds");
  EXPECT_NE(c.out.find("\n2,1,0.5,"), std::string::npos);
  EXPECT_EQ(run({"bounds", "--n", "2", "--h", "1", "--csv"}).out, c.out);
}

TEST(CliUsage, ExitCodes) {
  EXPECT_EQ(run({"bounds", "--n", "0", "--h", "1"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"bounds", "--n", "x", "--h", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"--format", "xml", "bounds", "--n", "3", "--h", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"exact", "--values", "1,-2", "--h", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"exact", "--values", "1,2", "--h", "1", "--algorithm", "alg9"}).code, kExitUsage);
  EXPECT_EQ(run({"iid", "--n", "3", "--dist", "pareto", "--param", "1"}).code, kExitUsage);
  const CliRun help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("sweep"), std::string::npos);
}

TEST(CliExact, WorkedExamples) {
  const CliRun r = run({"exact", "--algorithm", "alg3", "--model", "ros", "--values", "3,2,1", "--h",
                     "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json_of(r);
  EXPECT_NEAR(j["ratio"].get<double>(), 0.75, 1e-15);
  EXPECT_NEAR(j["per_round_profit"][0].get<double>(), 4.0 / 3.0, 1e-15);

  const CliRun aos = run({"exact", "--algorithm", "alg1", "--model", "aos", "--values", "3,2,1",
                       "--h", "1"});
  EXPECT_NEAR(json_of(aos)["ratio"].get<double>(), 0.625, 1e-15);
  const CliRun inc = run({"exact", "--policy", "alg1", "--model", "aos", "--order",
                       "increasing-unseen", "--values", "3,2,1", "--h", "1"});
  EXPECT_NEAR(json_of(inc)["ratio"].get<double>(), 0.625, 1e-15);
}

TEST(CliExact, BudgetGuard) {
  std::string values;
  for (int i = 1; i <= 20; ++i) values += (i > 1 ? "," : "") + std::to_string(i);
  const CliRun r = run({"exact", "--values", values, "--h", "10"});
  EXPECT_EQ(r.code, kExitBudget);
  EXPECT_NE(r.err.find("budget"), std::string::npos);
  EXPECT_EQ(run({"exact", "--values", "1,2,3", "--h", "1", "--budget", "2"}).code, kExitBudget);
  EXPECT_EQ(run({"exact", "--model", "aos", "--values", "1,2,3,4,5,6,7,8,9", "--h", "0",
                 "--algorithm", "alg1"})
                .code,
            kExitBudget);
}

TEST(CliExact, InstanceFile) {
  const auto path = std::filesystem::temp_directory_path() / "secretary_cli_instance.json";
  std::ofstream(path) << R"({"values": [3, 2, 1], "h": 1})";
  const CliRun r = run({"exact", "--instance", path.string(), "--algorithm", "alg3", "--q-rounds",
                     "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(json_of(r)["expected_alg"].get<double>(), 2.0, 1e-15);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"exact", "--instance", "/nonexistent/file.json"}).code, kExitUsage);
}

TEST(CliSimulate, AdversarialEstimateNearExactValue) {
  const CliRun r = run({"simulate", "--algorithm", "alg1", "--model", "aos", "--order",
                     "increasing-unseen", "--values", "3,2,1", "--h", "1", "--trials", "100000",
                     "--seed", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json_of(r);
  EXPECT_LE(std::abs(j["ratio"].get<double>() - 0.625), 5 * j["ratio_std_err"].get<double>());
  EXPECT_EQ(j["trials"].get<int>(), 100000);
  EXPECT_EQ(j["seed"].get<int>(), 7);
}

TEST(CliSimulate, ThreadCountAndFlagPlacement) {
  const std::vector<std::string> base{"simulate", "--values", "5,1,4,2,3", "--h", "2",
                                      "--trials", "30000"};
  auto with = [&](std::vector<std::string> head) {
    head.insert(head.end(), base.begin(), base.end());
    return run(head).out;
  };
  const std::string one = with({"--seed", "11", "--threads", "1"});
  EXPECT_EQ(one, with({"--seed", "11", "--threads", "4"}));
  std::vector<std::string> tail = base;
  tail.insert(tail.end(), {"--seed", "11"});
  EXPECT_EQ(one, run(tail).out);
  EXPECT_NE(one, with({"--seed", "12"}));

  const CliRun csv = run({"--format", "csv", "simulate", "--values", "5,1,4", "--h", "1", "--trials",
                       "100"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')),
            "mean_alg,mean_opt,ratio,std_err,ratio_std_err,trials,seed");
}

TEST(CliSweep, SixteenRowsMatchingBounds) {
  const CliRun r = run({"sweep", "--n", "100", "--h-grid", "0:10:150"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_sweep_csv(r.out);
  ASSERT_TRUE(rows.has_value());
  ASSERT_EQ(rows->size(), 16u);
  for (const SweepRow& row : *rows) {
    const BoundReport b = bound_report(100, row.h);
    EXPECT_EQ(row.ros_lower, b.ros_lower);
    EXPECT_EQ(row.aos_lower, b.aos_lower);
    EXPECT_EQ(row.ros_upper, b.ros_upper);
    EXPECT_EQ(row.aos_upper, b.aos_upper);
    EXPECT_FALSE(row.mc_ratio.has_value());
  }
  EXPECT_NEAR(rows->front().ros_lower, 1.0 / std::numbers::e, 1e-15);
  EXPECT_EQ(rows->front().aos_lower, 0.0);
  const SweepRow& at_one = (*rows)[10];
  EXPECT_EQ(at_one.h, 100u);
  EXPECT_NEAR(at_one.ros_lower, 0.6340, 1e-4);
  EXPECT_EQ(at_one.aos_lower, 0.5);
  EXPECT_EQ(rows->back().h, 150u);
}

TEST(CliSweep, MalformedGrid) {
  for (const char* grid : {"0:0:10", "10:1:0", "a:b:c", "1:2", "0:5:10:", "-1:1:3", ""}) {
    EXPECT_EQ(run({"sweep", "--n", "10", "--h-grid", grid}).code, kExitUsage) << grid;
  }
  EXPECT_EQ(run({"sweep", "--n", "0", "--h-grid", "0:1:2"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--n", "4", "--h-grid", "1:1:3", "--mc-trials", "10", "--policy",
                 "alg2"})
                .code,
            kExitUsage);
}

TEST(CliSweep, CsvRoundTripWithMonteCarloColumns) {
  const CliRun r = run({"--seed", "3", "sweep", "--n", "10", "--h-grid", "0:7:30", "--mc-trials",
                     "2000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_sweep_csv(r.out);
  ASSERT_TRUE(rows.has_value());
  ASSERT_EQ(rows->size(), 5u);
  for (const SweepRow& row : *rows) {
    ASSERT_TRUE(row.mc_ratio.has_value());
    EXPECT_GT(*row.mc_std_err, 0.0);
  }
  EXPECT_EQ(sweep_csv(*rows), r.out);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);

  // Grid ending off-step stops at the last point inside the range.
  const auto direct = sweep_rows(10, *parse_grid("0:7:30"));
  EXPECT_EQ(direct.back().h, 28u);
  EXPECT_FALSE(parse_sweep_csv("n,h\n1,2\n").has_value());
  EXPECT_FALSE(parse_sweep_csv(sweep_csv(direct) + "1,2,x,4,5,6,7,8\n").has_value());
}

TEST(CliOther, IidTradeoffCombined) {
  const CliRun iid = run({"iid", "--dist", "exponential", "--param", "2", "--n", "1", "--trials",
                       "500"});
  ASSERT_EQ(iid.code, kExitOk) << iid.err;
  EXPECT_EQ(json_of(iid)["ratio"].get<double>(), 1.0);

  const CliRun t = run({"tradeoff", "--n", "20", "--h", "20", "--trials", "2000", "--policy",
                     "never"});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  EXPECT_EQ(json_of(t)["ratio"].get<double>(), 0.0);
  EXPECT_EQ(run({"tradeoff", "--n", "1", "--h", "3"}).code, kExitUsage);

  const CliRun c = run({"combined-check", "--n", "2", "--trials", "1000"});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_TRUE(json_of(c).contains("ros"));
  EXPECT_TRUE(json_of(c).contains("aos"));
  const CliRun ccsv = run({"--format", "csv", "combined-check", "--n", "2", "--trials", "1000"});
  EXPECT_NE(ccsv.out.find("\nros,"), std::string::npos);
  EXPECT_NE(ccsv.out.find("\naos,"), std::string::npos);
  EXPECT_EQ(run({"combined-check", "--n", "4", "--trials", "10"}).code, kExitBudget);
}

TEST(CliGolden, FixedSeedOutputs) {
  expect_golden("sweep_n20.csv", run({"--seed", "2024", "sweep", "--n", "20", "--h-grid",
                                      "0:5:40", "--mc-trials", "4000"})
                                     .out);
  expect_golden("simulate_alg3.json", run({"--seed", "99", "simulate", "--values",
                                           "9,4,7,1,3,8,2", "--h", "3", "--trials", "20000"})
                                          .out);
  expect_golden("bounds_50_30.csv", run({"--format", "csv", "bounds", "--n", "50", "--h", "30"})
                                        .out);
}
