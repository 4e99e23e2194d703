#pragma once

#include <string>
#include <vector>

namespace eierl {

struct SlotDef {
  std::string name;
  std::vector<std::string> vocab;

  bool operator==(const SlotDef&) const = default;
};

/// Declarative slot-filling domain. Slot declaration order is load-bearing:
/// it fixes action indices and feature positions for a run.
struct DomainSchema {
  std::string name;
  std::vector<SlotDef> informable;
  std::vector<SlotDef> requestable;
  int kb_size = 100;
  int max_turns = 30;  // L
  int goal_constraints_min = 2;
  int goal_constraints_max = 3;
  int goal_requests_min = 1;
  int goal_requests_max = 2;

  int informable_index(const std::string& slot) const;   // -1 if absent
  int requestable_index(const std::string& slot) const;  // -1 if absent

  bool operator==(const DomainSchema&) const = default;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate_schema(const DomainSchema& schema);

/// Parses the line-based schema format:
///   name = movie
///   kb_size = 100
///   max_turns = 30
///   goal_constraints = 2..3
///   goal_requests = 1..2
///   informable genre = action, comedy, drama
///   requestable theater
///   requestable price = cheap, moderate, expensive
/// '#' starts a comment. Requestable slots without a declared vocabulary get
/// an auto-generated one (<slot>_0 .. <slot>_19).
DomainSchema parse_schema(const std::string& text);

/// Loads and validates a schema file. Throws std::runtime_error with the path
/// on I/O failure.
DomainSchema load_schema(const std::string& path);

/// Renders a schema back into the text format accepted by parse_schema.
std::string format_schema(const DomainSchema& schema);

/// Shipped defaults: "movie" (5 informable / 3 requestable), "restaurant"
/// (7/4), "taxi" (8/5). Throws std::invalid_argument for unknown names.
DomainSchema builtin_schema(const std::string& name);

}  // namespace eierl
