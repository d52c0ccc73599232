// SPDX-License-Identifier: Apache-2.0

#include "rislink/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rislink/baselines.hpp"
#include "rislink/cct_sdp.hpp"
#include "rislink/dt_sca.hpp"

namespace rislink::harness {

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::CctSdp: return "cct-sdp";
    case Algo::DtSca: return "dt-sca";
    case Algo::RandomPhase: return "random-phase";
    case Algo::NoRis: return "no-ris";
  }
  return "?";
}

std::vector<Algo> parse_algos(const std::string& s) {
  if (s == "all") return {std::begin(kAllAlgos), std::end(kAllAlgos)};
  std::vector<Algo> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    bool found = false;
    for (Algo a : kAllAlgos) {
      if (algo_name(a) == item) {
        out.push_back(a);
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("unknown algorithm: " + item);
  }
  if (out.empty()) throw std::invalid_argument("no algorithm given");
  return out;
}

std::string axis_name(Axis a) { return a == Axis::Ps ? "ps_dbm" : "n"; }

void RunConfig::validate() const {
  if (m < 1) throw std::invalid_argument("RunConfig: M must be >= 1");
  if (trials < 1) throw std::invalid_argument("RunConfig: trials must be >= 1");
  if (ns.empty() || ps_dbm.empty()) throw std::invalid_argument("RunConfig: empty N or Ps list");
  for (int n : ns) {
    if (n < 1) throw std::invalid_argument("RunConfig: N must be >= 1");
  }
  if (axis == Axis::Ps && ns.size() != 1) throw std::invalid_argument("RunConfig: a Ps sweep takes a single N");
  if (axis == Axis::N && ps_dbm.size() != 1) throw std::invalid_argument("RunConfig: an N sweep takes a single Ps");
  if (algos.empty()) throw std::invalid_argument("RunConfig: no algorithm selected");
  if (ao.max_iterations < 1 || ao.randomizations < 0 || !(ao.tolerance >= 0.0)) {
    throw std::invalid_argument("RunConfig: invalid iteration settings");
  }
  link.path_loss.validate();
}

std::size_t RunConfig::num_points() const { return axis == Axis::Ps ? ps_dbm.size() : ns.size(); }

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  return mix64(mix64(mix64(master) ^ point) ^ trial);
}

namespace {

struct PointSetup {
  int n = 0;
  sysmodel::PowerConfig pw;
  double axis_value = 0.0;
};

PointSetup point_setup(const RunConfig& cfg, std::size_t point) {
  PointSetup s;
  s.pw.pr_dbm = cfg.pr_dbm;
  s.pw.sigma2_dbm = cfg.sigma2_dbm;
  if (cfg.axis == Axis::Ps) {
    s.n = cfg.ns.front();
    s.pw.ps_dbm = cfg.ps_dbm.at(point);
    s.axis_value = s.pw.ps_dbm;
  } else {
    s.n = cfg.ns.at(point);
    s.pw.ps_dbm = cfg.ps_dbm.front();
    s.axis_value = s.n;
  }
  return s;
}

std::string run_id(const RunConfig& cfg, std::size_t point, int trial, Algo algo) {
  std::ostringstream os;
  os << algo_name(algo) << '/' << axis_name(cfg.axis) << '=' << point_setup(cfg, point).axis_value << "/t" << trial;
  return os.str();
}

}  // namespace

TrialOutcome run_trial(const RunConfig& cfg, std::size_t point, int trial, Algo algo) {
  const PointSetup s = point_setup(cfg, point);
  const std::uint64_t seed = trial_seed(cfg.seed, point, static_cast<std::uint64_t>(trial));
  TrialOutcome out;
  try {
    channel::Rng rng(seed);
    const auto ch = channel::sample_channels(cfg.link.geometry, cfg.link.path_loss, cfg.m, s.n, rng);
    const auto cc = channel::compose(ch);
    const auto init = sysmodel::initial_state(cc, s.pw, rng);
    switch (algo) {
      case Algo::CctSdp: {
        channel::Rng draws(mix64(seed ^ 0x5ca1ab1eULL));
        AoResult r = cct::optimize(cc, s.pw, init, cfg.ao, draws);
        out.rate = r.trace.best_rate();
        out.iterations = r.trace.iterations;
        out.trace = std::move(r.trace);
        break;
      }
      case Algo::DtSca: {
        AoResult r = dt::optimize(cc, s.pw, init, cfg.ao);
        out.rate = r.trace.best_rate();
        out.iterations = r.trace.iterations;
        out.trace = std::move(r.trace);
        break;
      }
      case Algo::RandomPhase: {
        const auto r = baselines::baseline_random_phase(cc, s.pw, init.v1, init.v2, cfg.ao.solver);
        if (r.status != conic::Status::Optimal) throw std::runtime_error("relay step: " + conic::to_string(r.status));
        out.rate = r.rate;
        break;
      }
      case Algo::NoRis: {
        const auto r = baselines::baseline_no_ris(cc, s.pw, cfg.ao.solver);
        if (r.status != conic::Status::Optimal) throw std::runtime_error("relay step: " + conic::to_string(r.status));
        out.rate = r.rate;
        break;
      }
    }
    out.ok = std::isfinite(out.rate);
    if (!out.ok) out.error = "non-finite rate";
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const std::size_t points = cfg.num_points();
  const std::size_t na = cfg.algos.size();
  const std::size_t per_point = static_cast<std::size_t>(cfg.trials) * na;
  const std::size_t total = points * per_point;

  std::vector<TrialOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t p = k / per_point;
      const std::size_t rem = k % per_point;
      const int trial = static_cast<int>(rem / na);
      outcomes[k] = run_trial(cfg, p, trial, cfg.algos[rem % na]);
      if (!cfg.keep_traces) outcomes[k].trace = {};
    }
  };
  unsigned nthreads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  nthreads = std::max(1u, std::min<unsigned>(nthreads, static_cast<unsigned>(total)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult res;
  for (std::size_t p = 0; p < points; ++p) {
    const PointSetup s = point_setup(cfg, p);
    for (std::size_t ai = 0; ai < na; ++ai) {
      SweepRow row;
      row.axis_name = axis_name(cfg.axis);
      row.axis_value = s.axis_value;
      row.algo = algo_name(cfg.algos[ai]);
      std::vector<double> rates;
      double iters = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        const TrialOutcome& o = outcomes[p * per_point + static_cast<std::size_t>(t) * na + ai];
        if (!o.ok) {
          ++row.trials_failed;
          continue;
        }
        rates.push_back(o.rate);
        iters += o.iterations;
        if (cfg.keep_traces) {
          const std::string id = run_id(cfg, p, t, cfg.algos[ai]);
          int iter = 0;
          for (const TraceRow& tr : o.trace.rows) {
            iter = tr.iteration;
            res.traces.push_back({id, iter, tr.rate, tr.subproblem, tr.objective, tr.accepted});
          }
        }
      }
      row.trials_ok = static_cast<int>(rates.size());
      if (!rates.empty()) {
        double sum = 0.0;
        for (double r : rates) sum += r;
        row.mean_rate_bps_hz = sum / rates.size();
        row.mean_iters = iters / rates.size();
        if (rates.size() > 1) {
          double ss = 0.0;
          for (double r : rates) ss += (r - row.mean_rate_bps_hz) * (r - row.mean_rate_bps_hz);
          row.stderr_rate = std::sqrt(ss / (rates.size() - 1)) / std::sqrt(static_cast<double>(rates.size()));
        }
      }
      res.rows.push_back(row);
      res.rates.push_back(std::move(rates));
    }
  }
  return res;
}

}  // namespace rislink::harness
