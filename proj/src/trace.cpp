#include "udg/trace.hpp"

#include <random>
#include <set>
#include <sstream>

#include "udg/error.hpp"
#include "udg/grid_index.hpp"

namespace udg {

std::string to_string(QueryProblem p) {
  switch (p) {
    case QueryProblem::path: return "PATH";
    case QueryProblem::vc: return "VC";
    case QueryProblem::ths: return "THS";
    case QueryProblem::fvs: return "FVS";
    case QueryProblem::cp: return "CP";
  }
  return "?";
}

namespace {

QueryProblem problem_from(const std::string& s, int line) {
  if (s == "PATH") return QueryProblem::path;
  if (s == "VC") return QueryProblem::vc;
  if (s == "THS") return QueryProblem::ths;
  if (s == "FVS") return QueryProblem::fvs;
  if (s == "CP") return QueryProblem::cp;
  throw Error(ErrorCode::parse_error,
              "line " + std::to_string(line) + ": unknown problem '" + s + "'");
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::parse_error,
              "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<TraceEvent> parse_trace(std::istream& in) {
  std::vector<TraceEvent> events;
  std::set<VertexId> active;
  std::set<VertexId> ever_used;
  bool have_header = false;
  int header_k = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    TraceEvent ev;
    if (tok == "H") {
      std::string what, mode;
      int k;
      if (!(ls >> what >> k >> mode) || what != "PATHK")
        fail(lineno, "malformed header, expected 'H PATHK <k> <PATH|CYCLE>'");
      ev.kind = TraceEvent::Kind::header;
      ev.path_k = k;
      if (mode == "PATH")
        ev.path_mode = solvers::PathMode::path;
      else if (mode == "CYCLE")
        ev.path_mode = solvers::PathMode::cycle;
      else
        fail(lineno, "path mode must be PATH or CYCLE");
      if ((ev.path_mode == solvers::PathMode::path && k < 2) ||
          (ev.path_mode == solvers::PathMode::cycle && k < 3))
        fail(lineno, "path k out of domain for the mode");
      have_header = true;
      header_k = k;
    } else if (tok == "I") {
      long long id;
      double x, y;
      if (!(ls >> id >> x >> y)) fail(lineno, "malformed insert");
      if (id < 0) fail(lineno, "vertex ids are nonnegative");
      ev.kind = TraceEvent::Kind::insert;
      ev.vertex = static_cast<VertexId>(id);
      ev.point = {x, y};
      if (ever_used.count(ev.vertex))
        fail(lineno, "vertex id " + std::to_string(id) + " reused");
      ever_used.insert(ev.vertex);
      active.insert(ev.vertex);
    } else if (tok == "D") {
      long long id;
      if (!(ls >> id)) fail(lineno, "malformed delete");
      ev.kind = TraceEvent::Kind::erase;
      ev.vertex = static_cast<VertexId>(id);
      if (!active.count(ev.vertex))
        fail(lineno, "delete of inactive vertex " + std::to_string(id));
      active.erase(ev.vertex);
    } else if (tok == "Q") {
      std::string prob;
      int k;
      if (!(ls >> prob >> k)) fail(lineno, "malformed query");
      ev.kind = TraceEvent::Kind::query;
      ev.problem = problem_from(prob, lineno);
      ev.k = k;
      if (ev.problem == QueryProblem::path) {
        if (!have_header) fail(lineno, "PATH query before any header");
        if (k != header_k)
          fail(lineno, "PATH query k differs from the header's k");
      }
      if (ev.problem == QueryProblem::cp && k < 1)
        fail(lineno, "CP query needs k >= 1");
      if (k < 0) fail(lineno, "negative k");
    } else {
      fail(lineno, "unknown event '" + tok + "'");
    }
    events.push_back(ev);
  }
  return events;
}

std::vector<TraceEvent> parse_trace_text(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

std::string format_trace(const std::vector<TraceEvent>& events) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& ev : events) {
    switch (ev.kind) {
      case TraceEvent::Kind::header:
        out << "H PATHK " << ev.path_k << " "
            << (ev.path_mode == solvers::PathMode::path ? "PATH" : "CYCLE")
            << "\n";
        break;
      case TraceEvent::Kind::insert:
        out << "I " << ev.vertex << " " << ev.point.x << " " << ev.point.y
            << "\n";
        break;
      case TraceEvent::Kind::erase:
        out << "D " << ev.vertex << "\n";
        break;
      case TraceEvent::Kind::query:
        out << "Q " << to_string(ev.problem) << " " << ev.k << "\n";
        break;
    }
  }
  return out.str();
}

std::vector<TraceEvent> generate_trace(const GenParams& params) {
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> coord(0.0, params.area);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<TraceEvent> events;
  bool want_path = false;
  for (QueryProblem p : params.problems)
    if (p == QueryProblem::path) want_path = true;
  if (want_path) {
    TraceEvent h;
    h.kind = TraceEvent::Kind::header;
    h.path_k = params.path_k;
    h.path_mode = params.path_mode;
    events.push_back(h);
  }

  GridIndex occupied;  // margin checks only
  std::vector<VertexId> active;
  VertexId next_id = 0;

  double lo = (1.0 - params.margin) * (1.0 - params.margin);
  double hi = (1.0 + params.margin) * (1.0 + params.margin);
  auto margin_ok = [&](Point p) {
    // the banned band reaches past distance 1, so scan the 2-neighborhood
    CellId c = cell_of(p);
    for (std::int64_t dx = -2; dx <= 2; ++dx)
      for (std::int64_t dy = -2; dy <= 2; ++dy)
        for (VertexId u : occupied.residents(CellId{c.ix + dx, c.iy + dy})) {
          double d2 = dist2(occupied.point_of(u), p);
          if (d2 > lo && d2 < hi) return false;
        }
    return true;
  };

  for (int step = 0; step < params.events; ++step) {
    bool full = static_cast<int>(active.size()) >= params.max_active;
    if (full && params.delete_ratio <= 0.0) break;
    bool do_delete =
        !active.empty() && (full || unit(rng) < params.delete_ratio);
    TraceEvent ev;
    if (do_delete) {
      std::size_t i = rng() % active.size();
      ev.kind = TraceEvent::Kind::erase;
      ev.vertex = active[i];
      occupied.erase_vertex(active[i]);
      active.erase(active.begin() + i);
    } else {
      Point p{coord(rng), coord(rng)};
      for (int tries = 0; tries < 64 && !margin_ok(p); ++tries)
        p = {coord(rng), coord(rng)};
      ev.kind = TraceEvent::Kind::insert;
      ev.vertex = next_id++;
      ev.point = p;
      occupied.insert_vertex(ev.vertex, p);
      active.push_back(ev.vertex);
    }
    events.push_back(ev);

    while (unit(rng) < params.query_ratio && !params.problems.empty()) {
      TraceEvent q;
      q.kind = TraceEvent::Kind::query;
      q.problem = params.problems[rng() % params.problems.size()];
      int span = params.k_max - params.k_min + 1;
      q.k = params.k_min + static_cast<int>(rng() % span);
      if (q.problem == QueryProblem::path) q.k = params.path_k;
      if (q.problem == QueryProblem::cp && q.k < 1) q.k = 1;
      events.push_back(q);
      if (unit(rng) < 0.7) break;
    }
  }
  return events;
}

}  // namespace udg
