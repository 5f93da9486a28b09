// Copyright 2026 The qsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qsep: separability-probability estimation and reference verification.
//
//   qsep estimate --measure hs --alpha0 0.25 --points 20000000 --output runs/hs_q1
//   qsep bloch-bins --measure hs --points 40000000
//   qsep abs-sep --measure kubo-mori
//   qsep verify --all --format csv
//
// Exit codes: 0 ok, 2 usage, 3 unwritable output, 4 verification failure or
// quadrature non-convergence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qsep/estimator.hpp"
#include "qsep/refvalues.hpp"
#include "qsep/report.hpp"
#include "qsep/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitOutput = 3;
constexpr int kExitVerify = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimateOptions {
  std::string measure;
  double alpha0 = 0.5;
  std::uint64_t points = 0;
  std::uint64_t block = 2'000'000;
  std::uint64_t offset = 0;
  std::string policy = "none";
  int bins = 10;
  unsigned workers = 0;
  std::string output = "qsep";
};

unsigned resolve_workers(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("QSEP_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("QSEP_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

qsep::MeasureKind require_measure(const std::string& name) {
  const auto m = qsep::parse_measure(name);
  if (!m) throw UsageError("unknown measure '" + name + "'");
  return *m;
}

qsep::RunPlan make_plan(const EstimateOptions& o, qsep::MeasureKind& measure,
                        qsep::TruncationPolicy& policy) {
  measure = require_measure(o.measure);
  const auto p = qsep::TruncationPolicy::parse(o.policy);
  if (!p) throw UsageError("bad policy '" + o.policy + "' (none | weight-cap:X | eigen-floor:X)");
  policy = *p;
  if (o.block == 0) throw UsageError("--block must be positive");
  if (o.points < o.block) throw UsageError("--points must be at least --block");
  if (o.bins < 1) throw UsageError("--bins must be at least 1");
  if (!std::isfinite(o.alpha0)) throw UsageError("--alpha0 must be finite");
  qsep::RunPlan plan;
  plan.alpha0 = o.alpha0;
  plan.offset = o.offset;
  plan.points = o.points;
  plan.block_size = o.block;
  plan.bins = o.bins;
  plan.workers = resolve_workers(o.workers);
  plan.channels = {{measure, policy}};
  return plan;
}

void add_estimate_flags(CLI::App* cmd, EstimateOptions& o) {
  cmd->add_option("--measure", o.measure,
                  "hs, induced:K, bures, maximal, kubo-mori, geometric, wigner-yanase, "
                  "log-geometric, arith-minmax, morozova-chentsov, identric")
      ->required();
  cmd->add_option("--alpha0", o.alpha0, "sequence phase; 0.25 and 0.75 give the paired runs");
  cmd->add_option("--points", o.points, "number of sequence points")->required();
  cmd->add_option("--block", o.block, "points per trace row");
  cmd->add_option("--offset", o.offset, "first sequence index");
  cmd->add_option("--policy", o.policy, "none | weight-cap:LOG | eigen-floor:DELTA");
  cmd->add_option("--bins", o.bins, "Bloch radius bins on subsystem A");
  cmd->add_option("--workers", o.workers, "worker threads (default: $QSEP_WORKERS, then all cores)");
}

int run_estimate(const EstimateOptions& o) {
  qsep::MeasureKind measure;
  qsep::TruncationPolicy policy;
  const qsep::RunPlan plan = make_plan(o, measure, policy);

  const std::string trace_path = o.output + ".trace.csv";
  const std::string summary_path = o.output + ".summary.json";
  std::ofstream trace(trace_path);
  std::ofstream summary(summary_path);
  if (!trace || !summary) {
    std::cerr << "error: cannot write output '" << (trace ? summary_path : trace_path) << "'\n";
    return kExitOutput;
  }
  trace << qsep::report::kTraceHeader << '\n';
  const qsep::RunResult result =
      qsep::run_estimation(plan, [&](std::uint64_t, const std::vector<qsep::EstimatorState>& s) {
        qsep::report::write_trace_row(trace, s.front().trace().back());
        trace.flush();
      });
  const nlohmann::json j = qsep::report::summary(
      {measure, o.alpha0, o.points, o.block, policy, result.wall_seconds}, result.channels.front());
  summary << j.dump(2) << '\n';
  if (!trace || !summary) {
    std::cerr << "error: failed writing output files\n";
    return kExitOutput;
  }
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int run_bloch_bins(const EstimateOptions& o) {
  qsep::MeasureKind measure;
  qsep::TruncationPolicy policy;
  const qsep::RunPlan plan = make_plan(o, measure, policy);
  const qsep::RunResult result = qsep::run_estimation(plan);
  const qsep::EstimatorState& s = result.channels.front();
  const auto global = s.current_estimate();
  std::printf("# measure=%s points=%llu global_sep=%.6f\n", qsep::to_string(measure).c_str(),
              static_cast<unsigned long long>(o.points),
              global ? global->sep_probability : std::nan(""));
  std::printf("lo,hi,count,sep_estimate,abs_sep_estimate\n");
  for (const qsep::BinEstimate& b : s.bin_estimates()) {
    std::printf("%.3f,%.3f,%llu,%.6f,%.6g\n", b.lo, b.hi,
                static_cast<unsigned long long>(b.sample_count), b.sep_probability,
                b.abs_sep_probability);
  }
  return kExitOk;
}

int run_abs_sep(const std::string& measure_name) {
  const qsep::MeasureKind m = require_measure(measure_name);
  const qsep::AbsSepQuadrature q = qsep::abs_sep_quadrature(m);
  if (!q.probability) {
    std::printf("%s,divergent\n", qsep::to_string(m).c_str());
    return kExitOk;
  }
  std::printf("%s,%.10g\n", qsep::to_string(m).c_str(), *q.probability);
  if (!q.converged) {
    std::cerr << "error: quadrature did not converge for " << qsep::to_string(m) << '\n';
    return kExitVerify;
  }
  return kExitOk;
}

int run_verify(const std::vector<std::string>& quantities, const std::string& format, bool list) {
  qsep::verify::Catalog catalog;
  if (list) {
    for (const auto& n : catalog.names()) std::cout << n << '\n';
    return kExitOk;
  }
  for (const auto& q : quantities) {
    if (!catalog.contains(q)) throw UsageError("unknown quantity '" + q + "' (see verify --list)");
  }
  std::vector<qsep::verify::Check> checks;
  if (quantities.empty()) {
    checks = catalog.evaluate_all();
  } else {
    for (const auto& q : quantities) checks.push_back(catalog.evaluate(q));
  }
  if (format == "csv") {
    qsep::verify::write_csv(std::cout, checks);
  } else {
    qsep::verify::write_text(std::cout, checks);
  }
  int status = kExitOk;
  for (const auto& c : checks) {
    if (!c.converged) {
      std::cerr << "error: quadrature did not converge: " << c.quantity << '\n';
      status = kExitVerify;
    } else if (!c.passed()) {
      std::cerr << "error: out of tolerance: " << c.quantity << '\n';
      status = kExitVerify;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit separability probabilities by quasirandom sampling"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "weighted QMC estimate with trace and summary");
  add_estimate_flags(estimate, est);
  estimate->add_option("--output", est.output, "output prefix for .trace.csv and .summary.json");

  EstimateOptions bins;
  auto* bloch = app.add_subcommand("bloch-bins", "estimate per Bloch radius bin of subsystem A");
  add_estimate_flags(bloch, bins);

  std::string abs_measure = "hs";
  auto* abs = app.add_subcommand("abs-sep", "absolute separability probability by quadrature");
  abs->add_option("--measure", abs_measure, "measure name");

  std::vector<std::string> quantities;
  std::string format = "text";
  bool all = false;
  bool list = false;
  auto* verify = app.add_subcommand("verify", "check reference values by quadrature");
  verify->add_flag("--all", all, "evaluate every quantity (default)");
  verify->add_option("--quantity", quantities, "quantity name (repeatable)");
  verify->add_option("--format", format, "text | csv")->check(CLI::IsMember({"text", "csv"}));
  verify->add_flag("--list", list, "list quantity names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*estimate) return run_estimate(est);
    if (*bloch) return run_bloch_bins(bins);
    if (*abs) return run_abs_sep(abs_measure);
    if (*verify) return run_verify(all ? std::vector<std::string>{} : quantities, format, list);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
