// SPDX-License-Identifier: Apache-2.0

#include "rislink/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rislink::channel {

namespace {

std::pair<const Point3*, const Point3*> endpoints(const Geometry& g, Link link) {
  switch (link) {
    case Link::SourceRis: return {&g.source, &g.ris};
    case Link::SourceRelay: return {&g.source, &g.relay};
    case Link::RisRelay: return {&g.ris, &g.relay};
    case Link::RisDestination: return {&g.ris, &g.destination};
    case Link::RelayDestination: return {&g.relay, &g.destination};
  }
  throw std::invalid_argument("link_distance: unknown link id");
}

ComplexVector draw_vector(Eigen::Index n, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(0.5 * variance);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = scale * linalg::Complex(re, im);
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_numbers(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == ';' || c == '(' || c == ')' || c == '|') c = ' ';
  }
  std::istringstream in(text);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  if (!in.eof()) throw std::invalid_argument("link config: malformed number list '" + text + "'");
  return out;
}

double parse_scalar(const std::string& key, const std::string& value) {
  const auto nums = parse_numbers(value);
  if (nums.size() != 1) throw std::invalid_argument("link config: key '" + key + "' expects one number");
  return nums.front();
}

}  // namespace

std::string link_name(Link link) {
  switch (link) {
    case Link::SourceRis: return "s_ris";
    case Link::SourceRelay: return "s_relay";
    case Link::RisRelay: return "ris_relay";
    case Link::RisDestination: return "ris_d";
    case Link::RelayDestination: return "relay_d";
  }
  return "unknown";
}

void PathLossModel::validate() const {
  if (!(d0 > 0.0)) throw std::invalid_argument("PathLossModel: d0 must be positive");
  for (double a : alpha) {
    if (!(a > 0.0)) throw std::invalid_argument("PathLossModel: path-loss exponents must be positive");
  }
}

void ChannelSet::validate() const {
  const auto m = h_sr.size();
  const auto n = h_si.size();
  if (m < 1 || n < 1 || H_ir.rows() != m || H_ir.cols() != n || h_rd.size() != m || h_id.size() != n) {
    throw std::invalid_argument("ChannelSet: inconsistent dimensions");
  }
}

double path_loss_db(double distance_m, double alpha, const PathLossModel& model) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("path_loss_db: distance must be positive");
  return model.pl0_db - 10.0 * alpha * std::log10(distance_m / model.d0);
}

double link_distance(const Geometry& geom, Link link) {
  const auto [a, b] = endpoints(geom, link);
  const double d = (*a - *b).norm();
  if (!(d > 0.0)) throw std::invalid_argument("link_distance: coincident endpoints on link " + link_name(link));
  return d;
}

double link_gain(const Geometry& geom, const PathLossModel& model, Link link) {
  const double pl = path_loss_db(link_distance(geom, link), model.exponent(link), model);
  return std::pow(10.0, pl / 10.0);
}

ChannelSet sample_channels(const Geometry& geom, const PathLossModel& model, Eigen::Index relay_antennas,
                           Eigen::Index ris_elements, Rng& rng) {
  if (relay_antennas < 1 || ris_elements < 1) {
    throw std::invalid_argument("sample_channels: M and N must be >= 1");
  }
  model.validate();
  const double g_sr = link_gain(geom, model, Link::SourceRelay);
  const double g_si = link_gain(geom, model, Link::SourceRis);
  const double g_ir = link_gain(geom, model, Link::RisRelay);
  const double g_rd = link_gain(geom, model, Link::RelayDestination);
  const double g_id = link_gain(geom, model, Link::RisDestination);

  ChannelSet ch;
  ch.h_sr = draw_vector(relay_antennas, g_sr, rng);
  ch.h_si = draw_vector(ris_elements, g_si, rng);
  ch.H_ir = linalg::unvec(draw_vector(relay_antennas * ris_elements, g_ir, rng), relay_antennas, ris_elements);
  ch.h_rd = draw_vector(relay_antennas, g_rd, rng);
  ch.h_id = draw_vector(ris_elements, g_id, rng);
  return ch;
}

CompositeChannels compose(const ChannelSet& ch) {
  ch.validate();
  const auto m = ch.relay_antennas();
  const auto n = ch.ris_elements();
  CompositeChannels cc;
  cc.H_sir.resize(m, n + 1);
  cc.H_sir.leftCols(n) = ch.H_ir * ch.h_si.asDiagonal();
  cc.H_sir.col(n) = ch.h_sr;
  cc.H_rid.resize(n + 1, m);
  cc.H_rid.topRows(n) = ch.h_id.conjugate().asDiagonal() * ch.H_ir.adjoint();
  cc.H_rid.row(n) = ch.h_rd.adjoint();
  return cc;
}

LinkConfig parse_link_config(std::istream& in) {
  LinkConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("link config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "positions") {
      const auto p = parse_numbers(value);
      if (p.size() != 12) throw std::invalid_argument("link config: positions expects 12 numbers (S D RIS relay)");
      cfg.geometry.source = Point3(p[0], p[1], p[2]);
      cfg.geometry.destination = Point3(p[3], p[4], p[5]);
      cfg.geometry.ris = Point3(p[6], p[7], p[8]);
      cfg.geometry.relay = Point3(p[9], p[10], p[11]);
    } else if (key == "pl0_db") {
      cfg.path_loss.pl0_db = parse_scalar(key, value);
    } else if (key == "d0") {
      cfg.path_loss.d0 = parse_scalar(key, value);
    } else if (key.rfind("alpha.", 0) == 0) {
      const std::string which = key.substr(6);
      bool found = false;
      for (Link link : kAllLinks) {
        if (link_name(link) == which) {
          cfg.path_loss.alpha[static_cast<std::size_t>(link)] = parse_scalar(key, value);
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("link config: unknown link '" + which + "'");
    } else {
      throw std::invalid_argument("link config: unknown key '" + key + "'");
    }
  }
  cfg.path_loss.validate();
  for (Link link : kAllLinks) link_distance(cfg.geometry, link);
  return cfg;
}

LinkConfig load_link_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open link config '" + path + "'");
  return parse_link_config(in);
}

}  // namespace rislink::channel
