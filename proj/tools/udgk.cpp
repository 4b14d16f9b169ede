#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "udg/error.hpp"
#include "udg/harness.hpp"

namespace {

using namespace udg;

std::vector<QueryProblem> parse_problems(const std::string& spec) {
  std::vector<QueryProblem> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "PATH")
      out.push_back(QueryProblem::path);
    else if (tok == "VC")
      out.push_back(QueryProblem::vc);
    else if (tok == "THS")
      out.push_back(QueryProblem::ths);
    else if (tok == "FVS")
      out.push_back(QueryProblem::fvs);
    else if (tok == "CP")
      out.push_back(QueryProblem::cp);
    else
      throw Error(ErrorCode::bad_parameter, "unknown problem '" + tok + "'");
  }
  return out;
}

std::vector<TraceEvent> load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::parse_error, "cannot open trace file " + path);
  return parse_trace(in);
}

void write_out(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path);
  out << payload;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic unit disk graph kernels: trace replay and benchmarks"};
  app.require_subcommand(1);

  std::string trace_file, out_file, format = "text", problems_spec =
      "PATH,VC,THS,FVS,CP";

  // gen
  auto* gen = app.add_subcommand("gen", "generate a reproducible trace");
  GenParams gen_params;
  std::string gen_mode = "PATH";
  gen->add_option("--seed", gen_params.seed, "random seed");
  gen->add_option("--events", gen_params.events, "number of update events");
  gen->add_option("--max-active", gen_params.max_active, "active point cap");
  gen->add_option("--area", gen_params.area, "square side for point coords");
  gen->add_option("--delete-ratio", gen_params.delete_ratio,
                  "fraction of deletions among updates");
  gen->add_option("--query-ratio", gen_params.query_ratio,
                  "expected queries per update");
  gen->add_option("--path-k", gen_params.path_k, "k for the PATH structure");
  gen->add_option("--path-mode", gen_mode, "PATH or CYCLE");
  gen->add_option("--k-min", gen_params.k_min, "smallest query k");
  gen->add_option("--k-max", gen_params.k_max, "largest query k");
  gen->add_option("--problems", problems_spec, "comma-separated query kinds");
  gen->add_option("--out", out_file, "output file (stdout when omitted)");

  // run
  auto* run = app.add_subcommand("run", "replay a trace and print answers");
  run->add_option("--trace", trace_file, "trace file")->required();
  run->add_option("--problems", problems_spec, "structures to drive");
  run->add_option("--out", out_file, "output file");
  run->add_option("--format", format, "text or json");

  // diff
  auto* diff = app.add_subcommand(
      "diff", "replay against the exhaustive oracle and report mismatches");
  diff->add_option("--trace", trace_file, "trace file");
  std::uint64_t diff_seed = 0;
  auto* diff_seed_opt = diff->add_option(
      "--seed", diff_seed, "generate the trace with this seed instead");
  diff->add_option("--problems", problems_spec, "structures to drive");
  diff->add_option("--out", out_file, "output file");
  diff->add_option("--format", format, "text or json");
  bool no_invariants = false;
  diff->add_flag("--no-invariants", no_invariants,
                 "skip per-event structural checks");

  // bench
  auto* bench = app.add_subcommand("bench", "latency benchmark");
  BenchParams bench_params;
  std::string sizes_spec = "10000,100000";
  std::string bench_format = "csv";
  bench->add_option("--sizes", sizes_spec, "comma-separated point counts");
  bench->add_option("--density", bench_params.density, "points per unit area");
  bench->add_option("--updates", bench_params.measured_updates,
                    "measured updates per size");
  bench->add_option("--queries", bench_params.queries, "queries per size");
  bench->add_option("--query-k", bench_params.query_k, "k used by queries");
  bench->add_option("--baseline-samples", bench_params.baseline_samples,
                    "static rebuild samples");
  bench->add_option("--seed", bench_params.seed, "random seed");
  bench->add_flag("--include-path", bench_params.include_path,
                  "also bench the k-path structure");
  bench->add_option("--path-k", bench_params.path_k, "k-path parameter");
  bench->add_option("--out", out_file, "output file");
  bench->add_option("--format", bench_format, "csv or json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gen_params.problems = parse_problems(problems_spec);
      if (gen_mode == "CYCLE")
        gen_params.path_mode = udg::solvers::PathMode::cycle;
      else if (gen_mode != "PATH")
        throw Error(ErrorCode::bad_parameter, "path mode must be PATH|CYCLE");
      write_out(out_file, format_trace(generate_trace(gen_params)));
    } else if (*run) {
      RunOptions opts;
      opts.problems = parse_problems(problems_spec);
      auto report = run_trace(load_trace(trace_file), opts);
      write_out(out_file,
                format == "json" ? report.to_json() : report.answers_text());
    } else if (*diff) {
      RunOptions opts;
      opts.problems = parse_problems(problems_spec);
      opts.check_invariants = !no_invariants;
      std::vector<TraceEvent> events;
      if (diff_seed_opt->count() > 0) {
        GenParams params;
        params.seed = diff_seed;
        params.problems = opts.problems;
        events = generate_trace(params);
      } else if (!trace_file.empty()) {
        events = load_trace(trace_file);
      } else {
        throw Error(ErrorCode::bad_parameter, "diff needs --trace or --seed");
      }
      auto report = diff_run(events, opts);
      if (format == "json") {
        write_out(out_file, report.to_json());
      } else {
        std::ostringstream os;
        os << report.answers_text();
        for (const auto& m : report.mismatches)
          os << "MISMATCH " << m.what << "\n";
        os << (report.mismatches.empty() ? "DIFF OK" : "DIFF FAILED") << " ("
           << report.answers.size() << " queries, " << report.update_count
           << " updates)\n";
        write_out(out_file, os.str());
      }
      if (!report.mismatches.empty()) return 1;
    } else if (*bench) {
      std::stringstream ss(sizes_spec);
      std::string tok;
      bench_params.sizes.clear();
      while (std::getline(ss, tok, ','))
        bench_params.sizes.push_back(std::stoi(tok));
      auto report = bench_run(bench_params);
      write_out(out_file, bench_format == "json" ? report.to_json()
                                                 : report.to_csv());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
