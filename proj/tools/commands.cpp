#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "msrpa/engine.hpp"
#include "msrpa/metrics.hpp"
#include "msrpa/scenario_io.hpp"
#include "msrpa/trace_io.hpp"

namespace msrpa::cli {

namespace fs = std::filesystem;

AgentSet parse_agent_list(const std::string& text, std::size_t index_base) {
  std::vector<AgentId> ids;
  std::istringstream items(text);
  std::string item;
  auto label = [&](const std::string& s) -> AgentId {
    std::size_t pos = 0;
    long long v = -1;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || v < static_cast<long long>(index_base)) {
      throw std::invalid_argument("bad agent label '" + s + "'");
    }
    return static_cast<AgentId>(v) - index_base;
  };
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const AgentId lo = label(item.substr(0, dots));
      const AgentId hi = label(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty range '" + item + "'");
      for (AgentId i = lo; i <= hi; ++i) ids.push_back(i);
    } else {
      ids.push_back(label(item));
    }
  }
  return make_agent_set(std::move(ids));
}

namespace {

struct RunOutcome {
  int code = kOk;
  std::string out;
  std::string err;
};

fs::path output_dir(const RunOptions& opts) {
  if (opts.out_dir) return *opts.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return fs::current_path();
}

void write_file(const fs::path& path, void (*writer)(std::ostream&, const Trace&),
                const Trace& tr) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
  writer(file, tr);
  if (!file) throw std::runtime_error("write failed for '" + path.string() + "'");
}

/// Returns true when every tracking guarantee applicable to `tr` holds.
bool report_checks(const Trace& tr, std::ostream& out) {
  const auto& sc = tr.scenario;
  const auto& p = sc.params;
  const auto e = error_series(tr);
  const auto mono = monotonicity_check(tr);
  const auto converged = convergence_time(tr);

  std::int64_t exact_from = p.t0 + p.eta;
  std::string label = "exact tracking from t0 + eta";
  if (p.u_max) {
    const auto bound = finite_time_bound(sc);
    if (!bound) {
      out << "  bound: no positive input margin, finite-time bound unavailable\n";
      return false;
    }
    out << "  bound: V0 = " << format_real(initial_spread(sc))
        << ", margin = " << format_real(*tr.report.margin) << ", T = " << *bound
        << " periods\n";
    exact_from = p.t0 + *bound * p.eta;
    label = "exact tracking from t0 + T*eta";
  }

  bool exact = true;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (tr.steps[k].t >= exact_from && e[k] > kTrackingTolerance) exact = false;
  }
  out << "  " << label << " (t >= " << exact_from << "): " << (exact ? "pass" : "FAIL")
      << '\n';
  out << "  observed convergence time: "
      << (converged ? std::to_string(*converged) : std::string("none")) << '\n';
  const bool within = converged && *converged <= exact_from;
  out << "  observed within bound: " << (within ? "pass" : "FAIL") << '\n';
  out << "  e nonincreasing: " << (mono.nonincreasing ? "pass" : "FAIL");
  if (mono.first_violation) out << " (first increase at t = " << *mono.first_violation << ')';
  out << '\n';
  const auto safety = check_threshold_safety(tr);
  out << "  threshold safety: " << (safety ? "pass" : "FAIL: " + safety.failure) << '\n';
  const auto wave = check_wavefront(tr);
  out << "  wavefront: " << (wave ? "pass" : "FAIL: " + wave.failure) << '\n';
  return exact && within && mono.nonincreasing && safety.ok && wave.ok;
}

RunOutcome run_one(const std::string& path, const RunOptions& opts) {
  RunOutcome res;
  std::ostringstream out;
  std::ostringstream err;

  ScenarioFile file;
  try {
    file = load_scenario_file(path);
    Scenario& sc = file.scenario;
    if (opts.eta) sc.params.eta = *opts.eta;
    if (opts.seed) sc.seed = *opts.seed;
    if (opts.horizon) sc.horizon = *opts.horizon;
    if (opts.u_max) sc.params.u_max = *opts.u_max;
    sc.check();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return {kUsage, out.str(), err.str()};
  }

  const Scenario& sc = file.scenario;
  try {
    const auto report = validate(sc);
    out << "scenario " << (sc.name.empty() ? path : sc.name) << ": n = " << sc.graph.size()
        << ", F = " << sc.params.f << ", eta = " << sc.params.eta << ", horizon = "
        << sc.horizon << ", seed = " << sc.seed << '\n';
    for (const auto& c : report.checks) {
      out << "  [" << (c.passed ? "pass" : "FAIL") << "] " << hypothesis_name(c.id) << ": "
          << c.detail << '\n';
    }
    if (!report.all_passed() && opts.strict) {
      for (const auto& c : report.checks) {
        if (!c.passed) {
          err << "validation failed: " << hypothesis_name(c.id) << ": " << c.detail << '\n';
        }
      }
      return {kValidationFailed, out.str(), err.str()};
    }

    const Trace tr = run(sc);
    if (opts.write_outputs) {
      const fs::path dir = output_dir(opts);
      write_file(dir / file.outputs.trace, write_trace_csv, tr);
      write_file(dir / file.outputs.messages, write_messages_csv, tr);
      write_file(dir / file.outputs.metrics, write_metrics_csv, tr);
      out << "  wrote " << (dir / file.outputs.trace).string() << '\n';
    }
    if (opts.check_theorems) {
      const bool ok = report_checks(tr, out);
      if (!ok && report.all_passed()) res.code = kCheckFailed;
    }
  } catch (const std::exception& e) {
    err << "runtime abort: " << e.what() << '\n';
    return {kRuntimeAbort, out.str(), err.str()};
  }
  res.out = out.str();
  res.err = err.str();
  return res;
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<RunOutcome> outcomes(opts.scenarios.size());
  const std::size_t jobs = std::max(1u, opts.jobs);
  for (std::size_t start = 0; start < opts.scenarios.size(); start += jobs) {
    std::vector<std::future<RunOutcome>> batch;
    const std::size_t end = std::min(opts.scenarios.size(), start + jobs);
    for (std::size_t k = start; k < end; ++k) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 run_one, opts.scenarios[k], opts));
    }
    for (std::size_t k = start; k < end; ++k) outcomes[k] = batch[k - start].get();
  }

  int code = kOk;
  for (const auto& o : outcomes) {
    out << o.out;
    err << o.err;
    code = std::max(code, o.code);
  }
  return code;
}

int cmd_robustness(const RobustnessOptions& opts, std::ostream& out, std::ostream& err) {
  Digraph g;
  AgentSet s;
  try {
    if (opts.circulant_n && opts.circulant_k) {
      g = k_circulant(*opts.circulant_n, *opts.circulant_k, !opts.directed);
    } else if (opts.edge_list) {
      std::ifstream in(*opts.edge_list);
      if (!in) throw std::invalid_argument("cannot open '" + *opts.edge_list + "'");
      g = read_edge_list(in, opts.n);
    } else {
      throw std::invalid_argument("give --circulant N K or --edge-list PATH");
    }
    s = parse_agent_list(opts.set, opts.index_base);
    for (AgentId i : s) {
      if (i >= g.size()) throw std::invalid_argument("set member outside the graph");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  auto label = [&](AgentId i) { return i + opts.index_base; };
  auto print_set = [&](const AgentSet& ids) {
    out << '{';
    for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? "," : "") << label(ids[k]);
    out << '}';
  };

  try {
    const auto cert = strongly_robust_wrt(g, s, opts.r);
    out << "strongly " << opts.r << "-robust w.r.t. ";
    print_set(s);
    out << ": " << (cert.holds ? "holds" : "fails") << '\n';
    for (const auto& round : cert.peel_order) {
      out << "  round " << round.round << ": ";
      print_set(round.agents);
      out << '\n';
    }
    if (!cert.holds) {
      out << "  witness: ";
      print_set(cert.witness);
      out << '\n';
    }
    if (opts.bruteforce) {
      const bool brute = strongly_robust_bruteforce(g, s, opts.r);
      out << "  brute force: " << (brute ? "holds" : "fails")
          << (brute == cert.holds ? " (agrees)" : " (DISAGREES)") << '\n';
      if (brute != cert.holds) return kRuntimeAbort;
    }
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Resilient leader-follower consensus simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Validate, simulate and export one or more scenarios");
  run_cmd->add_option("scenarios", run_opts.scenarios, "Scenario files")->required();
  run_cmd->add_flag("--strict", run_opts.strict, "Exit with code 2 if a hypothesis fails");
  run_cmd->add_flag("--check-theorems", run_opts.check_theorems,
                    "Check the tracking guarantees against the trace");
  run_cmd->add_option("--eta", run_opts.eta, "Override the communication rate")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run_opts.seed, "Override the scenario seed");
  run_cmd->add_option("--horizon", run_opts.horizon, "Override the number of steps")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--u-max", run_opts.u_max, "Bound follower inputs by this value")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out-dir", run_opts.out_dir,
                      std::string("Output directory (default: $") + kOutputDirEnv +
                          " or the working directory)");
  bool no_output = false;
  run_cmd->add_flag("--no-output", no_output, "Skip writing CSV files");
  run_cmd->add_option("--jobs,-j", run_opts.jobs, "Scenarios to run concurrently")
      ->check(CLI::PositiveNumber);

  RobustnessOptions rob;
  std::vector<std::size_t> circulant;
  auto* rob_cmd = app.add_subcommand("robustness", "Certify strong r-robustness w.r.t. a set");
  rob_cmd->add_option("--circulant", circulant, "k-circulant graph: N K")->expected(2);
  rob_cmd->add_flag("--directed", rob.directed, "Use the directed circulant");
  rob_cmd->add_option("--edge-list", rob.edge_list, "Edge-list file (0-based)");
  rob_cmd->add_option("--n", rob.n, "Agent count for the edge list");
  rob_cmd->add_option("--set,-s", rob.set, "Source set, e.g. 1..5 or 0,2,4")->required();
  rob_cmd->add_option("--index-base", rob.index_base, "Label base of --set (0 or 1)")
      ->check(CLI::Range(0, 1));
  rob_cmd->add_option("--r,-r", rob.r, "Robustness parameter")->required()->check(
      CLI::PositiveNumber);
  rob_cmd->add_flag("--bruteforce", rob.bruteforce, "Cross-check by exhaustive enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (run_cmd->parsed()) {
    run_opts.write_outputs = !no_output;
    return cmd_run(run_opts, std::cout, std::cerr);
  }
  if (circulant.size() == 2) {
    rob.circulant_n = circulant[0];
    rob.circulant_k = circulant[1];
  }
  return cmd_robustness(rob, std::cout, std::cerr);
}

}  // namespace msrpa::cli
