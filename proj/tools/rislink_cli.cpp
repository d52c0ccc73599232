// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: Monte Carlo sweeps, convergence traces and
// operation-count curves, written as CSV.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "rislink/harness.hpp"

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw CLI::ValidationError("bad list entry: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rislink;
  CLI::App app{"RIS-aided amplify-and-forward relay optimizer"};
  app.set_config("--config", "", "TOML/INI file with option values");

  harness::RunConfig cfg;
  std::string algo = "all", n_list = "16", ps_list = "30", sweep = "ps", out_path, trace_path, link_path;
  bool flops_only = false;
  double eps = 0.01, l1 = 10.0, l2 = 10.0;
  std::string flops_n = "8,16,32,64,128,256";

  app.add_option("--algo", algo, "cct-sdp | dt-sca | random-phase | no-ris | all (comma list allowed)");
  app.add_option("--m", cfg.m, "relay antennas")->check(CLI::PositiveNumber);
  app.add_option("--n", n_list, "RIS elements (comma list for --sweep n)");
  app.add_option("--ps-dbm", ps_list, "source power in dBm (comma list for --sweep ps)");
  app.add_option("--pr-dbm", cfg.pr_dbm, "relay power budget in dBm");
  app.add_option("--sigma2-dbm", cfg.sigma2_dbm, "noise power in dBm");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--tol", cfg.ao.tolerance, "outer stopping tolerance on the rate, bits/s/Hz");
  app.add_option("--max-iters", cfg.ao.max_iterations, "outer iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--randomizations", cfg.ao.randomizations, "Gaussian randomization draws")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--sweep", sweep, "ps | n")->check(CLI::IsMember({"ps", "n"}));
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  app.add_option("--link-config", link_path, "geometry / path-loss key=value file");
  app.add_option("--out", out_path, "sweep CSV (stdout if omitted)");
  app.add_option("--trace-out", trace_path, "per-iteration trace CSV");
  app.add_flag("--flops", flops_only, "emit operation-count curves only");
  app.add_option("--eps", eps, "solver accuracy used in the operation counts");
  app.add_option("--l1", l1, "outer iterations assumed for the lifted method");
  app.add_option("--l2", l2, "outer iterations assumed for the low-complexity method");
  app.add_option("--flops-n", flops_n, "N values for the operation-count curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (flops_only) {
      const auto rows = flops::flops_curve(cfg.m, parse_list<int>(flops_n), l1, l2, eps);
      harness::emit_flops_csv(rows, std::cout);
      return 0;
    }
    cfg.algos = harness::parse_algos(algo);
    cfg.ns = parse_list<int>(n_list);
    cfg.ps_dbm = parse_list<double>(ps_list);
    cfg.axis = sweep == "n" ? harness::Axis::N : harness::Axis::Ps;
    cfg.keep_traces = !trace_path.empty();
    if (!link_path.empty()) cfg.link = channel::load_link_config(link_path);

    const harness::SweepResult res = harness::run_sweep(cfg);
    if (out_path.empty()) {
      harness::emit_csv(res, std::cout);
    } else {
      harness::emit_csv(res, out_path);
    }
    if (!trace_path.empty()) harness::emit_trace_csv(res, trace_path);
    for (const auto& r : res.rows) {
      if (r.trials_failed > 0) {
        std::fprintf(stderr, "warning: %s at %s=%g: %d failed trials\n", r.algo.c_str(), r.axis_name.c_str(),
                     r.axis_value, r.trials_failed);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
