// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo sweeps over the source power or the RIS size, and the
// CSV files they produce.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rislink/ao.hpp"
#include "rislink/channel.hpp"
#include "rislink/flops.hpp"

namespace rislink::harness {

enum class Algo { CctSdp, DtSca, RandomPhase, NoRis };

inline constexpr Algo kAllAlgos[] = {Algo::CctSdp, Algo::DtSca, Algo::RandomPhase, Algo::NoRis};

std::string algo_name(Algo a);
// Accepts the names returned by algo_name and "all".
std::vector<Algo> parse_algos(const std::string& s);

enum class Axis { Ps, N };
std::string axis_name(Axis a);

struct RunConfig {
  int m = 2;
  std::vector<int> ns{16};
  std::vector<double> ps_dbm{30.0};
  double pr_dbm = 30.0;
  double sigma2_dbm = -90.0;
  std::vector<Algo> algos{Algo::DtSca};
  Axis axis = Axis::Ps;
  int trials = 20;
  std::uint64_t seed = 1;
  AoOptions ao;
  channel::LinkConfig link;
  int threads = 0;  // 0 = hardware concurrency
  bool keep_traces = false;

  void validate() const;
  std::size_t num_points() const;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of one (axis point, trial) pair; every algorithm at that pair sees the
// same channels and initial phases.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial);

struct TrialOutcome {
  bool ok = false;
  double rate = 0.0;
  int iterations = 0;
  std::string error;
  AoTrace trace;  // empty for the baselines
};

// Runs one algorithm on one (point, trial) pair.
TrialOutcome run_trial(const RunConfig& cfg, std::size_t point, int trial, Algo algo);

struct SweepRow {
  std::string axis_name;
  double axis_value = 0.0;
  std::string algo;
  int trials_ok = 0;
  int trials_failed = 0;
  double mean_rate_bps_hz = 0.0;
  double stderr_rate = 0.0;
  double mean_iters = 0.0;
};

struct TraceRecord {
  std::string run_id;
  int iter = 0;
  double rate_bps_hz = 0.0;
  std::string subproblem;
  double objective = 0.0;
  bool accepted = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TraceRecord> traces;
  // Per-trial final rates, rows order, for paired comparisons.
  std::vector<std::vector<double>> rates;
};

SweepResult run_sweep(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// CSV

void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::string& path);
void emit_trace_csv(const SweepResult& result, std::ostream& out);
void emit_trace_csv(const SweepResult& result, const std::string& path);
void emit_flops_csv(const std::vector<flops::FlopsRow>& rows, std::ostream& out);

std::vector<SweepRow> parse_sweep_csv(std::istream& in);
std::vector<TraceRecord> parse_trace_csv(std::istream& in);

}  // namespace rislink::harness
