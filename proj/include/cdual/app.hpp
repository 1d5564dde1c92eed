#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdual/matrix_oracle.hpp"

namespace cdual {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

struct Command {
  std::string name;
  json params = json::object();
};

struct OutputSpec {
  std::optional<std::string> json_path;
  std::optional<std::string> csv_path;
  std::string verbosity = "normal";  // quiet | normal | verbose
};

struct RunSpec {
  std::optional<TreeSpec> tree;
  std::optional<WeightSpec> weights;
  std::vector<Command> commands;
  double tol = kDefaultTol;
  std::optional<int> nmax;  // default for moments / dual-subnormality
  OutputSpec output;
  std::string digest;
};

/// Validates the document completely. ParseError carries a JSON pointer;
/// a tree/weights mismatch raises ConfigurationError.
RunSpec parse_spec(std::string_view text);
TreeSpec parse_tree(const json& j, const std::string& path);
WeightSpec parse_weights(const json& j, const std::string& path);

std::string fnv1a_digest(std::string_view text);

struct CommandResult {
  std::string name;
  std::string status;  // ok | failed | skipped | error
  json result = json::object();
  double wall_clock_ms = 0.0;
};

struct Report {
  std::string input_digest;
  std::vector<CommandResult> commands;
  int exit_code = 0;
  std::optional<MomentSequence> csv_sequence;

  json to_json(bool with_clock = true) const;
};

Report run_suite(const RunSpec& spec);

struct DemoOptions {
  double tol = kDefaultTol;
  std::optional<int> nmax;
  std::optional<int> depth;
};

const std::vector<std::string>& demo_catalog();
/// Throws ConfigurationError listing the catalog for unknown names.
Report run_demo(const std::string& name, const DemoOptions& opts = {});
/// The body of a demo report; "matches" tells whether the expected conclusion was reproduced.
json demo_result(const std::string& name, const DemoOptions& opts);

void write_csv(std::ostream& os, const MomentSequence& seq);

// Serializers.
json to_json(const PropertyVerdict& v);
json to_json(const MomentVerdict& v);
json to_json(const DiscreteMeasure& m);
json to_json(const MomentSequence& s);
json to_json(const SubnormalityReport& r);
json to_json(const TreeReport& r);
json to_json(const AdjacencyReport& r);
json to_json(const ShiftInvariants& inv);
json to_json(const Table1Report& r);

}  // namespace cdual
