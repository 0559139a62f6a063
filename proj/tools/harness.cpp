#include "harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "kschan/info_metrics.hpp"
#include "kschan/ks_model.hpp"
#include "kschan/parallel.hpp"

#ifndef KSCHAN_VERSION
#define KSCHAN_VERSION "0.0.0"
#endif

namespace kschan::harness {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kShardTrials = 4096;
constexpr std::size_t kRandomDotBins = 10;

double upper_cost_bound() {
  const double im = exact_ks_mi();
  return im + 2.0 * std::log2(im + 1.0) + 2.0 * std::numbers::log2e;
}

json vector_json(const std::optional<UnitVec3>& v) {
  if (!v) return nullptr;
  return json::array({v->x(), v->y(), v->z()});
}

json config_json(const RunConfig& c) {
  return {
      {"command", command_name(c.command)},
      {"trials", c.trials},
      {"seed", c.seed},
      {"bins", c.bins},
      {"state", vector_json(c.state)},
      {"meas", vector_json(c.meas)},
      {"dots", c.dots},
      {"angles", c.angles},
      {"workers", c.workers},
      {"format", c.format == Format::kJson ? "json" : "csv"},
  };
}

std::size_t shard_count(std::uint64_t trials) {
  return static_cast<std::size_t>((trials + kShardTrials - 1) / kShardTrials);
}

// Trials [begin, end) of shard s.
std::pair<std::uint64_t, std::uint64_t> shard_range(std::size_t s, std::uint64_t trials) {
  const std::uint64_t begin = s * kShardTrials;
  return {begin, std::min(trials, begin + kShardTrials)};
}

// A state/measurement pair for one trial: explicit vectors win; otherwise
// the missing one is drawn so that v.m = dot (when a grid is used) or
// uniformly (when not).
struct Frame {
  UnitVec3 state;
  UnitVec3 meas;
};

Frame frame_at_dot(const RunConfig& c, double dot, Rng& rng) {
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  if (c.meas && !c.state) {
    return {rotate_to_frame(UnitVec3::from_polar(dot, phi), *c.meas), *c.meas};
  }
  const UnitVec3 v = c.state ? *c.state : random_unit_vec(rng);
  return {v, rotate_to_frame(UnitVec3::from_polar(dot, phi), v)};
}

Frame free_frame(const RunConfig& c, Rng& rng) {
  const UnitVec3 v = c.state ? *c.state : random_unit_vec(rng);
  const UnitVec3 m = c.meas ? *c.meas : random_unit_vec(rng);
  return {v, m};
}

std::vector<double> polar_grid(std::size_t angles) {
  std::vector<double> dots(angles);
  for (std::size_t k = 0; k < angles; ++k) {
    const double beta = std::numbers::pi * static_cast<double>(k) /
                        static_cast<double>(angles - 1);
    dots[k] = std::cos(beta);
  }
  dots.front() = 1.0;
  dots.back() = -1.0;
  return dots;
}

double clamp_dot(double d) { return std::clamp(d, -1.0, 1.0); }

json born_cell(std::size_t index, double dot_lo, double dot_hi, std::uint64_t n,
               std::uint64_t plus, double born, double variance_sum, double extra_tolerance) {
  const double nd = static_cast<double>(n);
  const double empirical = n ? static_cast<double>(plus) / nd : 0.0;
  const double std_error = n ? std::sqrt(variance_sum) / nd : 0.0;
  const double abs_error = std::abs(empirical - born);
  const double tolerance = 3.0 * std_error + extra_tolerance + 1e-12;
  return {
      {"cell", index},
      {"dot_lo", dot_lo},
      {"dot_hi", dot_hi},
      {"n", n},
      {"empirical_p_plus", empirical},
      {"born_p_plus", born},
      {"abs_error", abs_error},
      {"std_error", std_error},
      {"tolerance", tolerance},
      {"pass", n == 0 || abs_error <= tolerance},
  };
}

// Order statistic by nearest rank.
template <class T>
T percentile(const std::vector<T>& sorted, double q) {
  if (sorted.empty()) return T{};
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

// Mean and standard error of integer code lengths, computed exactly from
// integer sums so the result is independent of summation order.
struct CodeStats {
  double mean = 0.0;
  double std_error = 0.0;
};

CodeStats code_stats(const std::vector<TrialReport>& trials) {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  for (const TrialReport& t : trials) {
    sum += t.code_bits;
    sum_sq += static_cast<std::uint64_t>(t.code_bits) * t.code_bits;
  }
  const double n = static_cast<double>(trials.size());
  const double mean = static_cast<double>(sum) / n;
  const double var = trials.size() > 1
                         ? (static_cast<double>(sum_sq) - n * mean * mean) / (n - 1.0)
                         : 0.0;
  return {mean, std::sqrt(std::max(var, 0.0) / n)};
}

json cost_bounds(const CodeStats& s, std::uint64_t n) {
  const double lower = exact_ks_mi();
  const double upper = upper_cost_bound();
  const bool within = s.mean >= lower - 3.0 * s.std_error && s.mean <= upper + 3.0 * s.std_error;
  return {{"lower_bits", lower}, {"upper_bits", upper},
          {"mean_code_bits", s.mean}, {"std_error", s.std_error},
          {"n", n}, {"within", within}};
}

// Runs `trials` protocol trials with frames from `make_frame`, sharded.
std::vector<TrialReport> run_protocol(const RunConfig& c, std::uint64_t master,
                                      std::uint64_t trials, const KsDiscretization& disc,
                                      const std::function<Frame(Rng&)>& make_frame) {
  std::vector<TrialReport> out(trials, TrialReport{UnitVec3::unit_z(),
                                                   Measurement{UnitVec3::unit_z()}});
  for_each_shard(shard_count(trials), c.workers, [&](std::size_t s) {
    const auto [begin, end] = shard_range(s, trials);
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng setup(trial_seed(master, t, TrialStream::kSetup));
      const Frame f = make_frame(setup);
      out[t] = run_trial(master, t, f.state, Measurement{f.meas}, disc);
    }
  });
  return out;
}

Report finish(const RunConfig& c, json summary, json rows, Clock::time_point start,
              bool passed) {
  Report r;
  r.config = config_json(c);
  summary["passed"] = passed;
  r.results = {{"summary", std::move(summary)}, {"rows", std::move(rows)}};
  r.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.version = KSCHAN_VERSION;
  r.passed = passed;
  return r;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return s;
}

}  // namespace

std::uint64_t default_trials(Command command) {
  switch (command) {
    case Command::kVerify: return 1'000'000;
    case Command::kSimulate: return 100'000;
    case Command::kMi: return 1'000'000;
    case Command::kCost: return 100'000;
  }
  return 100'000;
}

const char* command_name(Command command) {
  switch (command) {
    case Command::kVerify: return "verify";
    case Command::kSimulate: return "simulate";
    case Command::kMi: return "mi";
    case Command::kCost: return "cost";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::kVerify, Command::kSimulate, Command::kMi, Command::kCost}) {
    if (name == command_name(c)) return c;
  }
  throw UsageError("unknown command '" + name + "'");
}

RunConfig validated(RunConfig c) {
  if (c.trials == 0) c.trials = default_trials(c.command);
  if (c.bins < 2 || c.bins % 2 != 0) throw UsageError("--bins must be even and >= 2");
  if (c.angles < 2) throw UsageError("--angles must be >= 2");
  if (c.command == Command::kMi && c.trials < 1000) {
    throw UsageError("mi needs --trials >= 1000");
  }
  for (double d : c.dots) {
    if (!(d >= -1.0 && d <= 1.0)) throw UsageError("--dots values must lie in [-1, 1]");
  }
  return c;
}

UnitVec3 parse_vector(const std::string& text) {
  const std::vector<double> xs = parse_list(text);
  if (xs.size() != 3) throw UsageError("expected a vector x,y,z, got '" + text + "'");
  try {
    return UnitVec3::normalized(xs[0], xs[1], xs[2]);
  } catch (const std::invalid_argument&) {
    throw UsageError("vector '" + text + "' has zero length");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed number '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) {
      throw UsageError("malformed number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

Report cmd_verify(const RunConfig& config) {
  const RunConfig c = validated(config);
  const auto start = Clock::now();

  const bool fixed = c.state && c.meas;
  const std::vector<double> dots =
      fixed ? std::vector<double>{clamp_dot(c.state->dot(*c.meas))}
            : (c.dots.empty() ? polar_grid(c.angles) : c.dots);
  const std::size_t shards = shard_count(c.trials);

  json rows = json::array();
  bool passed = true;
  double max_error = 0.0;
  for (std::size_t cell = 0; cell < dots.size(); ++cell) {
    const std::uint64_t cell_seed = derive_seed(c.seed, cell);
    std::vector<std::uint64_t> plus(shards, 0);
    for_each_shard(shards, c.workers, [&](std::size_t s) {
      Rng rng(derive_seed(cell_seed, s));
      const auto [begin, end] = shard_range(s, c.trials);
      std::uint64_t count = 0;
      for (std::uint64_t t = begin; t < end; ++t) {
        const Frame f = fixed ? Frame{*c.state, *c.meas} : frame_at_dot(c, dots[cell], rng);
        const UnitVec3 x = ks_sample(f.state, rng);
        count += ks_response(x, Measurement{f.meas}) == Outcome::kPlus ? 1 : 0;
      }
      plus[s] = count;
    });
    std::uint64_t total = 0;
    for (std::uint64_t p : plus) total += p;
    const double born = 0.5 * (1.0 + dots[cell]);
    json row = born_cell(cell, dots[cell], dots[cell], c.trials, total, born,
                         static_cast<double>(c.trials) * born * (1.0 - born), 0.0);
    passed = passed && row["pass"].get<bool>();
    max_error = std::max(max_error, row["abs_error"].get<double>());
    rows.push_back(std::move(row));
  }

  json summary = {{"cells", dots.size()}, {"trials_per_cell", c.trials},
                  {"max_abs_error", max_error}, {"sigma_multiplier", 3.0}};
  return finish(c, std::move(summary), std::move(rows), start, passed);
}

Report cmd_simulate(const RunConfig& config) {
  const RunConfig c = validated(config);
  const auto start = Clock::now();
  const KsDiscretization disc(c.bins);
  const double leakage = 2.0 / static_cast<double>(c.bins);

  json rows = json::array();
  std::vector<TrialReport> all;
  bool cells_pass = true;
  double max_error = 0.0;

  const auto add_row = [&](json row) {
    cells_pass = cells_pass && row["pass"].get<bool>();
    if (row["n"].get<std::uint64_t>() > 0) {
      max_error = std::max(max_error, row["abs_error"].get<double>());
    }
    rows.push_back(std::move(row));
  };

  if (!c.dots.empty()) {
    for (std::size_t cell = 0; cell < c.dots.size(); ++cell) {
      const double dot = c.dots[cell];
      auto trials = run_protocol(c, derive_seed(c.seed, cell), c.trials, disc,
                                 [&](Rng& rng) { return frame_at_dot(c, dot, rng); });
      std::uint64_t plus = 0;
      for (const TrialReport& t : trials) plus += t.outcome == Outcome::kPlus ? 1 : 0;
      const double born = 0.5 * (1.0 + dot);
      add_row(born_cell(cell, dot, dot, trials.size(), plus, born,
                        static_cast<double>(trials.size()) * born * (1.0 - born), leakage));
      all.insert(all.end(), trials.begin(), trials.end());
    }
  } else {
    all = run_protocol(c, c.seed, c.trials, disc,
                       [&](Rng& rng) { return free_frame(c, rng); });
    struct Acc {
      std::uint64_t n = 0, plus = 0;
      double born = 0.0, var = 0.0;
    };
    std::vector<Acc> acc(kRandomDotBins);
    for (const TrialReport& t : all) {
      const double dot = clamp_dot(t.state.dot(t.meas.direction));
      const auto b = std::min<std::size_t>(
          static_cast<std::size_t>((dot + 1.0) * 0.5 * kRandomDotBins), kRandomDotBins - 1);
      const double p = born_probability(t.state, t.meas);
      acc[b].n += 1;
      acc[b].plus += t.outcome == Outcome::kPlus ? 1 : 0;
      acc[b].born += p;
      acc[b].var += p * (1.0 - p);
    }
    for (std::size_t b = 0; b < kRandomDotBins; ++b) {
      const double lo = -1.0 + 2.0 * static_cast<double>(b) / kRandomDotBins;
      const double hi = -1.0 + 2.0 * static_cast<double>(b + 1) / kRandomDotBins;
      const double born = acc[b].n ? acc[b].born / static_cast<double>(acc[b].n) : 0.0;
      add_row(born_cell(b, lo, hi, acc[b].n, acc[b].plus, born, acc[b].var, leakage));
    }
  }

  std::vector<unsigned> bits;
  std::vector<std::uint64_t> indices;
  bits.reserve(all.size());
  indices.reserve(all.size());
  for (const TrialReport& t : all) {
    bits.push_back(t.code_bits);
    indices.push_back(t.accepted_index);
  }
  std::sort(bits.begin(), bits.end());
  std::sort(indices.begin(), indices.end());
  const CodeStats stats = code_stats(all);
  const std::uint64_t at_one =
      static_cast<std::uint64_t>(std::upper_bound(indices.begin(), indices.end(), 1u) - indices.begin());
  const json bounds = cost_bounds(stats, all.size());

  json summary = {
      {"trials_total", all.size()},
      {"bins", c.bins},
      {"max_abs_error", max_error},
      {"cells_pass", cells_pass},
      {"code_bits", {{"n", all.size()}, {"mean", stats.mean}, {"std_error", stats.std_error},
                     {"p50", percentile(bits, 0.5)}, {"p99", percentile(bits, 0.99)},
                     {"max", bits.empty() ? 0u : bits.back()}}},
      {"accepted_index", {{"n", all.size()},
                          {"p_index_1", static_cast<double>(at_one) / static_cast<double>(all.size())},
                          {"p50", percentile(indices, 0.5)},
                          {"max", indices.empty() ? 0u : indices.back()}}},
      {"cost_bounds", bounds},
  };
  const bool passed = cells_pass && bounds["within"].get<bool>();
  Report r = finish(c, std::move(summary), std::move(rows), start, passed);
  if (c.trials_path) r.trials = std::move(all);
  return r;
}

Report cmd_mi(const RunConfig& config) {
  const RunConfig c = validated(config);
  const auto start = Clock::now();

  const KsModel model;
  const UnitVec3 v = c.state ? *c.state : UnitVec3::unit_z();
  const double exact = exact_ks_mi();
  const double h_cond = conditional_entropy_ks();
  const double h_marg = marginal_entropy_ks();
  const double kl = kl_divergence_ks(v);
  const MiEstimate mc = mc_mutual_information(model, c.trials, c.seed, c.workers);
  const bool within = std::abs(mc.value - exact) <= 3.0 * mc.std_error;

  json rows = json::array({
      {{"quantity", "exact_mutual_information"}, {"value", exact}, {"std_error", 0.0}, {"n_samples", 0}},
      {{"quantity", "conditional_entropy"}, {"value", h_cond}, {"std_error", 0.0}, {"n_samples", 0}},
      {{"quantity", "marginal_entropy"}, {"value", h_marg}, {"std_error", 0.0}, {"n_samples", 0}},
      {{"quantity", "kl_divergence"}, {"value", kl}, {"std_error", 0.0}, {"n_samples", 0}},
      {{"quantity", "mc_mutual_information"}, {"value", mc.value}, {"std_error", mc.std_error},
       {"n_samples", mc.n_samples}},
  });
  json summary = {
      {"units", "bits"},
      {"exact_bits", exact},
      {"conditional_entropy_bits", h_cond},
      {"marginal_entropy_bits", h_marg},
      {"kl_divergence_bits", kl},
      {"kl_state", json::array({v.x(), v.y(), v.z()})},
      {"mc", {{"value", mc.value}, {"std_error", mc.std_error}, {"n", mc.n_samples}}},
      {"mc_within_3_sigma", within},
  };
  return finish(c, std::move(summary), std::move(rows), start, within);
}

Report cmd_cost(const RunConfig& config) {
  const RunConfig c = validated(config);
  const auto start = Clock::now();
  const KsDiscretization disc(c.bins);

  std::vector<TrialReport> all = run_protocol(c, c.seed, c.trials, disc, [&](Rng& rng) {
    const UnitVec3 v = c.state ? *c.state : random_unit_vec(rng);
    return Frame{v, c.meas ? *c.meas : random_unit_vec(rng)};
  });

  std::map<std::uint64_t, std::uint64_t> index_hist;
  std::map<unsigned, std::uint64_t> bits_hist;
  for (const TrialReport& t : all) {
    ++index_hist[t.accepted_index];
    ++bits_hist[t.code_bits];
  }
  const double n = static_cast<double>(all.size());
  double entropy = 0.0;
  json rows = json::array();
  for (const auto& [index, count] : index_hist) {
    const double f = static_cast<double>(count) / n;
    entropy -= f * std::log2(f);
    rows.push_back({{"index", index}, {"count", count}, {"fraction", f},
                    {"code_bits", elias_delta_length(index)}});
  }
  json bits_rows = json::array();
  for (const auto& [b, count] : bits_hist) bits_rows.push_back({{"bits", b}, {"count", count}});

  const CodeStats stats = code_stats(all);
  const json bounds = cost_bounds(stats, all.size());
  const double p1 = static_cast<double>(index_hist.count(1) ? index_hist.at(1) : 0) / n;
  const bool entropy_ok = entropy <= stats.mean;

  json refs = json::array();
  refs.push_back({{"protocol", "greedy one-shot over Kochen-Specker (this run)"},
                  {"bits", stats.mean}, {"kind", "measured mean code length"}});
  for (const ReferenceCost& rc : kReferenceCosts) {
    refs.push_back({{"protocol", rc.protocol}, {"bits", rc.bits}, {"kind", "reference"}});
  }

  std::uint64_t index_sum = 0;
  for (const TrialReport& t : all) index_sum += t.accepted_index;

  json summary = {
      {"trials", all.size()},
      {"bins", c.bins},
      {"mean_code_bits", stats.mean},
      {"code_bits_std_error", stats.std_error},
      {"mean_index", static_cast<double>(index_sum) / n},
      {"p_index_1", p1},
      {"p_index_1_std_error", std::sqrt(p1 * (1.0 - p1) / n)},
      {"plugin_index_entropy_bits", entropy},
      {"entropy_below_mean_code_bits", entropy_ok},
      {"cost_bounds", bounds},
      {"code_bits_histogram", bits_rows},
      {"references", refs},
      {"n", all.size()},
  };
  const bool passed = entropy_ok && bounds["within"].get<bool>();
  Report r = finish(c, std::move(summary), std::move(rows), start, passed);
  if (c.trials_path) r.trials = std::move(all);
  return r;
}

Report run(const RunConfig& config) {
  switch (config.command) {
    case Command::kVerify: return cmd_verify(config);
    case Command::kSimulate: return cmd_simulate(config);
    case Command::kMi: return cmd_mi(config);
    case Command::kCost: return cmd_cost(config);
  }
  throw UsageError("unknown command");
}

nlohmann::json to_json(const Report& report) {
  return {{"config", report.config},
          {"results", report.results},
          {"runtime_seconds", report.runtime_seconds},
          {"version", report.version}};
}

std::string rows_to_csv(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) return "";
  std::vector<std::string> columns;
  for (const auto& [key, _] : rows.front().items()) columns.push_back(key);
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const json& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "") << (row.contains(columns[i]) ? csv_cell(row[columns[i]]) : "");
    }
    out << '\n';
  }
  return out.str();
}

std::string trials_to_csv(const std::vector<TrialReport>& trials) {
  std::ostringstream out;
  out << "trial,state_x,state_y,state_z,meas_x,meas_y,meas_z,accepted_index,code_bits,outcome\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const TrialReport& t = trials[i];
    const UnitVec3& m = t.meas.direction;
    out << i << ',' << format_number(t.state.x()) << ',' << format_number(t.state.y()) << ','
        << format_number(t.state.z()) << ',' << format_number(m.x()) << ','
        << format_number(m.y()) << ',' << format_number(m.z()) << ',' << t.accepted_index
        << ',' << t.code_bits << ',' << outcome_symbol(t.outcome) << '\n';
  }
  return out.str();
}

void emit(const Report& report, const RunConfig& config, std::ostream& fallback) {
  const std::string body = config.format == Format::kJson
                               ? to_json(report).dump(2) + "\n"
                               : rows_to_csv(report.results["rows"]);
  if (config.output_path) {
    std::ofstream file(*config.output_path);
    if (!file || !(file << body)) {
      throw std::runtime_error("cannot write report to " + *config.output_path);
    }
  } else {
    fallback << body;
  }
  if (config.trials_path) {
    std::ofstream file(*config.trials_path);
    if (!file || !(file << trials_to_csv(report.trials))) {
      throw std::runtime_error("cannot write trials to " + *config.trials_path);
    }
  }
}

}  // namespace kschan::harness
