#include "harness.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "kschan/info_metrics.hpp"

namespace kschan::harness {
namespace {

RunConfig small(Command command, std::uint64_t trials) {
  RunConfig c;
  c.command = command;
  c.trials = trials;
  c.seed = 7;
  return c;
}

// Rows and summary only; config (workers) and runtime legitimately differ.
nlohmann::json comparable(const Report& r) { return r.results; }

TEST(Parse, Vectors) {
  const UnitVec3 v = parse_vector("0,0,2");
  EXPECT_EQ(v, UnitVec3::unit_z());
  const UnitVec3 w = parse_vector("1,1,0");
  EXPECT_NEAR(w.x(), std::sqrt(0.5), 1e-15);
  EXPECT_THROW(parse_vector("0,0,0"), UsageError);
  EXPECT_THROW(parse_vector("1,2"), UsageError);
  EXPECT_THROW(parse_vector("1,2,3,4"), UsageError);
  EXPECT_THROW(parse_vector("1,x,3"), UsageError);
  EXPECT_THROW(parse_vector("1,2,3abc"), UsageError);
  EXPECT_THROW(parse_vector("nan,0,1"), UsageError);
}

TEST(Parse, ListsAndCommands) {
  EXPECT_EQ(parse_list("-1,-0.5,0,0.5,1"), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
  EXPECT_EQ(parse_command("cost"), Command::kCost);
  EXPECT_THROW(parse_command("bogus"), UsageError);
}

TEST(Validate, RejectsBadRanges) {
  RunConfig c = small(Command::kSimulate, 10);
  c.bins = 3;
  EXPECT_THROW(validated(c), UsageError);
  c.bins = 0;
  EXPECT_THROW(validated(c), UsageError);
  c.bins = 8;
  c.dots = {1.5};
  EXPECT_THROW(validated(c), UsageError);
  c.dots = {};
  EXPECT_NO_THROW(validated(c));

  RunConfig m = small(Command::kMi, 999);
  EXPECT_THROW(validated(m), UsageError);

  RunConfig d;
  d.command = Command::kVerify;
  EXPECT_EQ(validated(d).trials, 1'000'000u);
}

TEST(Verify, BornExamples) {
  RunConfig c = small(Command::kVerify, 50'000);
  c.dots = {1.0, 0.6, -1.0};
  const Report r = cmd_verify(c);
  const auto& rows = r.results["rows"];
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0]["born_p_plus"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(rows[0]["empirical_p_plus"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(rows[1]["born_p_plus"].get<double>(), 0.8);
  EXPECT_NEAR(rows[1]["empirical_p_plus"].get<double>(), 0.8, 0.01);
  EXPECT_DOUBLE_EQ(rows[2]["empirical_p_plus"].get<double>(), 0.0);
  EXPECT_TRUE(r.passed);
}

TEST(Verify, DefaultGridHasThirteenCells) {
  const Report r = cmd_verify(small(Command::kVerify, 2000));
  EXPECT_EQ(r.results["rows"].size(), 13u);
}

TEST(Verify, FixedPair) {
  RunConfig c = small(Command::kVerify, 20'000);
  c.state = parse_vector("0,0,1");
  c.meas = parse_vector("1,0,0");
  const Report r = cmd_verify(c);
  ASSERT_EQ(r.results["rows"].size(), 1u);
  EXPECT_NEAR(r.results["rows"][0]["empirical_p_plus"].get<double>(), 0.5, 0.02);
}

TEST(Determinism, IndependentOfWorkerCount) {
  for (Command cmd : {Command::kVerify, Command::kSimulate, Command::kMi, Command::kCost}) {
    RunConfig c = small(cmd, cmd == Command::kMi ? 150'000 : 10'000);
    c.bins = 64;
    if (cmd == Command::kVerify) c.angles = 3;
    c.workers = 1;
    const Report one = run(c);
    c.workers = 3;
    const Report three = run(c);
    EXPECT_EQ(comparable(one), comparable(three)) << command_name(cmd);
  }
}

TEST(Determinism, SeedChangesOutput) {
  RunConfig c = small(Command::kCost, 2000);
  c.bins = 64;
  const Report a = run(c);
  c.seed = 8;
  const Report b = run(c);
  EXPECT_NE(comparable(a), comparable(b));
}

TEST(Report, JsonShape) {
  RunConfig c = small(Command::kSimulate, 2000);
  c.bins = 64;
  const nlohmann::json j = to_json(cmd_simulate(c));
  for (const char* key : {"config", "results", "runtime_seconds", "version"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["config"]["command"], "simulate");
  EXPECT_EQ(j["results"]["rows"].size(), 10u);
  EXPECT_TRUE(j["results"]["summary"].contains("code_bits"));
  EXPECT_TRUE(j["results"]["summary"]["cost_bounds"].contains("within"));
}

TEST(Report, CsvMatchesJsonRows) {
  RunConfig c = small(Command::kCost, 3000);
  c.bins = 64;
  const Report r = cmd_cost(c);
  const nlohmann::json& rows = r.results["rows"];
  std::istringstream csv(rows_to_csv(rows));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "code_bits,count,fraction,index");
  std::size_t n = 0;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string bits, count, fraction, index;
    std::getline(fields, bits, ',');
    std::getline(fields, count, ',');
    std::getline(fields, fraction, ',');
    std::getline(fields, index, ',');
    const auto& row = rows[n++];
    EXPECT_EQ(std::stoul(bits), row["code_bits"].get<unsigned>());
    EXPECT_EQ(std::stoull(count), row["count"].get<std::uint64_t>());
    EXPECT_EQ(std::stod(fraction), row["fraction"].get<double>());
    EXPECT_EQ(std::stoull(index), row["index"].get<std::uint64_t>());
  }
  EXPECT_EQ(n, rows.size());
}

TEST(Report, CsvQuotesText) {
  const nlohmann::json rows = nlohmann::json::array({{{"a", "x,y"}, {"b", "say \"hi\""}}});
  EXPECT_EQ(rows_to_csv(rows), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

TEST(Mi, Fields) {
  RunConfig c = small(Command::kMi, 100'000);
  const Report r = cmd_mi(c);
  const auto& s = r.results["summary"];
  EXPECT_DOUBLE_EQ(s["exact_bits"].get<double>(), exact_ks_mi());
  EXPECT_NEAR(s["exact_bits"].get<double>(), 1.2786524795555183, 1e-12);
  EXPECT_NEAR(s["marginal_entropy_bits"].get<double>() - s["conditional_entropy_bits"].get<double>(),
              s["exact_bits"].get<double>(), 1e-12);
  EXPECT_NEAR(s["kl_divergence_bits"].get<double>(), s["exact_bits"].get<double>(), 1e-9);
  EXPECT_EQ(r.results["rows"].size(), 5u);
  EXPECT_TRUE(r.passed);
}

TEST(Cost, ReferenceRowsVerbatim) {
  RunConfig c = small(Command::kCost, 2000);
  c.bins = 64;
  const Report r = cmd_cost(c);
  const auto& refs = r.results["summary"]["references"];
  ASSERT_EQ(refs.size(), 5u);
  EXPECT_EQ(refs[1]["bits"].get<double>(), 1.28);
  EXPECT_EQ(refs[2]["bits"].get<double>(), 1.85);
  EXPECT_EQ(refs[3]["bits"].get<double>(), 2.0);
  EXPECT_EQ(refs[4]["bits"].get<double>(), 2.19);
  EXPECT_EQ(refs[2]["protocol"], "Toner-Bacon, amortized parallel");
}

TEST(Cost, PluginEntropyBelowMeanCodeLength) {
  RunConfig c = small(Command::kCost, 20'000);
  c.bins = 256;
  const Report r = cmd_cost(c);
  const auto& s = r.results["summary"];
  EXPECT_LE(s["plugin_index_entropy_bits"].get<double>(), s["mean_code_bits"].get<double>());
  EXPECT_NEAR(s["p_index_1"].get<double>(), 0.4375, 0.015);
  EXPECT_TRUE(r.passed);
}

TEST(Simulate, TrialExport) {
  RunConfig c = small(Command::kSimulate, 100);
  c.bins = 16;
  c.trials_path = "unused";
  const Report r = cmd_simulate(c);
  ASSERT_EQ(r.trials.size(), 100u);
  const std::string csv = trials_to_csv(r.trials);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
  for (const TrialReport& t : r.trials) EXPECT_EQ(t.code_bits, elias_delta_length(t.accepted_index));
}

TEST(Simulate, ExplicitDotsPass) {
  RunConfig c = small(Command::kSimulate, 20'000);
  c.bins = 256;
  c.dots = {-1.0, 0.0, 1.0};
  const Report r = cmd_simulate(c);
  const auto& rows = r.results["rows"];
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["empirical_p_plus"].get<double>(), 0.0);
  EXPECT_GE(rows[2]["empirical_p_plus"].get<double>(), 1.0 - 2.0 / 256);
  EXPECT_TRUE(r.passed);
}

}  // namespace
}  // namespace kschan::harness
