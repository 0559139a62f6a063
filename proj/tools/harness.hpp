#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kschan/bloch.hpp"
#include "kschan/protocol.hpp"

namespace kschan::harness {

enum class Command { kVerify, kSimulate, kMi, kCost };
enum class Format { kJson, kCsv };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::kVerify;
  std::uint64_t trials = 0;  // 0 selects the per-command default
  std::uint64_t seed = 1;
  std::size_t bins = kDefaultBins;
  std::optional<UnitVec3> state;
  std::optional<UnitVec3> meas;
  std::vector<double> dots;  // explicit v.m grid for verify/simulate
  std::size_t angles = 13;   // verify polar-angle grid size
  unsigned workers = 1;
  std::optional<std::string> output_path;
  std::optional<std::string> trials_path;  // per-trial CSV (simulate, cost)
  Format format = Format::kJson;
};

std::uint64_t default_trials(Command command);
const char* command_name(Command command);
Command parse_command(const std::string& name);

// Fills defaults and checks ranges; throws UsageError.
RunConfig validated(RunConfig config);

// "x,y,z" -> normalized vector; throws UsageError on a malformed or
// zero-length input.
UnitVec3 parse_vector(const std::string& text);
std::vector<double> parse_list(const std::string& text);

struct Report {
  nlohmann::json config;
  nlohmann::json results;  // {"summary": {...}, "rows": [...]}
  double runtime_seconds = 0.0;
  std::string version;
  bool passed = true;
  std::vector<TrialReport> trials;  // only for per-trial export
};

Report cmd_verify(const RunConfig& config);
Report cmd_simulate(const RunConfig& config);
Report cmd_mi(const RunConfig& config);
Report cmd_cost(const RunConfig& config);
Report run(const RunConfig& config);

nlohmann::json to_json(const Report& report);
// The results.rows table as CSV; numbers printed round-trip exact.
std::string rows_to_csv(const nlohmann::json& rows);
std::string trials_to_csv(const std::vector<TrialReport>& trials);

// Writes the report (and per-trial CSV if requested) to the configured
// destinations, or to `fallback` when no output path is set.
void emit(const Report& report, const RunConfig& config, std::ostream& fallback);

// Reference constants for the cost table, in bits per qubit.
struct ReferenceCost {
  const char* protocol;
  double bits;
};
inline constexpr ReferenceCost kReferenceCosts[] = {
    {"Kochen-Specker model via mutual information, amortized parallel", 1.28},
    {"Toner-Bacon, amortized parallel", 1.85},
    {"Toner-Bacon, exact per shot", 2.0},
    {"Cerf et al., average per shot", 2.19},
};

}  // namespace kschan::harness
