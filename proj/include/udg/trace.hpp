#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "udg/geometry.hpp"
#include "udg/kernel_solvers.hpp"

namespace udg {

enum class QueryProblem { path, vc, ths, fvs, cp };

std::string to_string(QueryProblem p);

// One line of a trace file:
//   # comment
//   H PATHK <k> <PATH|CYCLE>
//   I <id> <x> <y>
//   D <id>
//   Q <PATH|VC|THS|FVS|CP> <k>
struct TraceEvent {
  enum class Kind { header, insert, erase, query };
  Kind kind = Kind::insert;
  int path_k = 0;
  solvers::PathMode path_mode = solvers::PathMode::path;
  VertexId vertex = 0;
  Point point{};
  QueryProblem problem = QueryProblem::vc;
  int k = 0;
};

std::vector<TraceEvent> parse_trace(std::istream& in);
std::vector<TraceEvent> parse_trace_text(const std::string& text);
std::string format_trace(const std::vector<TraceEvent>& events);

struct GenParams {
  std::uint64_t seed = 1;
  int max_active = 40;
  double area = 6.0;          // points uniform in [0, area]^2
  int events = 120;           // insert/delete events
  double delete_ratio = 0.3;  // fraction of updates that delete
  double query_ratio = 0.08;  // expected queries per update event
  int path_k = 3;
  solvers::PathMode path_mode = solvers::PathMode::path;
  int k_min = 0;
  int k_max = 5;
  std::vector<QueryProblem> problems = {QueryProblem::path, QueryProblem::vc,
                                        QueryProblem::ths, QueryProblem::fvs,
                                        QueryProblem::cp};
  double margin = 1e-6;  // pairwise distances keep clear of the threshold
};

// Seeded and reproducible; identical params give identical traces.
std::vector<TraceEvent> generate_trace(const GenParams& params);

}  // namespace udg
