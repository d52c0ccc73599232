// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rislink/harness.hpp"

namespace rislink::harness {

namespace {

const char* const kSweepHeader =
    "axis_name,axis_value,algo,trials_ok,trials_failed,mean_rate_bps_hz,stderr_rate,mean_iters";
const char* const kTraceHeader = "run_id,iter,rate_bps_hz,subproblem,objective,accepted";

// 17 significant digits round-trip any double.
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

void check_header(std::istream& in, const char* expected) {
  std::string line;
  if (!std::getline(in, line) || line != expected) throw std::runtime_error("unexpected CSV header");
}

void finish(std::ostream& out, const std::string& what) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + what);
}

}  // namespace

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : result.rows) {
    out << r.axis_name << ',' << fmt(r.axis_value) << ',' << r.algo << ',' << r.trials_ok << ',' << r.trials_failed
        << ',' << fmt(r.mean_rate_bps_hz) << ',' << fmt(r.stderr_rate) << ',' << fmt(r.mean_iters) << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  auto f = open_out(path);
  emit_csv(result, f);
  finish(f, path);
}

void emit_trace_csv(const SweepResult& result, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const TraceRecord& r : result.traces) {
    out << r.run_id << ',' << r.iter << ',' << fmt(r.rate_bps_hz) << ',' << r.subproblem << ',' << fmt(r.objective)
        << ',' << (r.accepted ? 1 : 0) << '\n';
  }
}

void emit_trace_csv(const SweepResult& result, const std::string& path) {
  auto f = open_out(path);
  emit_trace_csv(result, f);
  finish(f, path);
}

void emit_flops_csv(const std::vector<flops::FlopsRow>& rows, std::ostream& out) {
  out << "m,n,flops_cct_sdp,flops_dt_sca\n";
  for (const auto& r : rows) out << r.m << ',' << r.n << ',' << fmt(r.cct) << ',' << fmt(r.dtsca) << '\n';
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  check_header(in, kSweepHeader);
  std::vector<SweepRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw std::runtime_error("malformed sweep row: " + line);
    rows.push_back({f[0], std::stod(f[1]), f[2], std::stoi(f[3]), std::stoi(f[4]), std::stod(f[5]), std::stod(f[6]),
                    std::stod(f[7])});
  }
  return rows;
}

std::vector<TraceRecord> parse_trace_csv(std::istream& in) {
  check_header(in, kTraceHeader);
  std::vector<TraceRecord> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw std::runtime_error("malformed trace row: " + line);
    rows.push_back({f[0], std::stoi(f[1]), std::stod(f[2]), f[3], std::stod(f[4]), f[5] == "1"});
  }
  return rows;
}

}  // namespace rislink::harness
