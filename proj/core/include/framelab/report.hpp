#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "framelab/frame.hpp"
#include "framelab/fusion.hpp"
#include "framelab/sequences.hpp"

namespace framelab {

enum class Mode { Exact, Float };

struct TaskSpec {
  std::string name;
  std::optional<std::string> expect;  // "yes" | "no" | "undecided"
};

struct RunConfig {
  Mode mode = Mode::Exact;
  double eps = 1e-8;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::uint64_t samples = 200;
  int jobs = 1;
  int max_subset_bits = 24;
  bool timings = false;
  std::vector<TaskSpec> tasks;

  std::optional<Frame> frame;
  std::optional<FusionFrame> fusion;
  std::optional<VectorSequenceRule> sequence;
  std::vector<int> sequence_coords;       // 1-based coordinate set I
  std::uint64_t sequence_truncation = 8;  // N
  int sequence_dim = 0;                   // for PairSums truncations

  std::string input_digest;
};

/// Parses the JSON run file. Exact scalars are decimal-integer or "p/q"
/// strings. Throws ParseError with position context on malformed input.
RunConfig parse_input_text(const std::string& text);
RunConfig parse_input(const std::string& path);

struct RunResult {
  nlohmann::ordered_json report;
  int exit_code = 0;  // 0 ok, 2 CertifiedNo on a task expecting yes
};

RunResult run(const RunConfig& config);

std::string pretty_report(const nlohmann::ordered_json& report);

/// Re-verifies every certificate in a report against the input, without
/// re-running the sweeps that produced them.
bool verify_report(const RunConfig& config, const nlohmann::ordered_json& report,
                   std::string* why = nullptr);

std::uint64_t fnv1a_digest(const std::string& bytes);

}  // namespace framelab
