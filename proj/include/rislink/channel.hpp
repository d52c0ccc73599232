// SPDX-License-Identifier: Apache-2.0
//
// Link geometry, log-distance path loss, Rayleigh channel draws and the
// composite (direct + cascaded) channels of the RIS-aided relay link.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include "rislink/linalg.hpp"

namespace rislink::channel {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using Point3 = Eigen::Vector3d;
using Rng = std::mt19937_64;

enum class Link { SourceRis, SourceRelay, RisRelay, RisDestination, RelayDestination };

inline constexpr std::array<Link, 5> kAllLinks = {Link::SourceRis, Link::SourceRelay, Link::RisRelay,
                                                  Link::RisDestination, Link::RelayDestination};

std::string link_name(Link link);

struct Geometry {
  Point3 source{0.0, 0.0, 0.0};
  Point3 destination{0.0, 100.0, 0.0};
  Point3 ris{-10.0, 50.0, 20.0};
  Point3 relay{10.0, 50.0, 10.0};
};

struct PathLossModel {
  double pl0_db = -30.0;
  double d0 = 1.0;
  // Indexed by Link.
  std::array<double, 5> alpha = {2.0, 3.5, 2.0, 2.0, 3.5};

  double exponent(Link link) const { return alpha[static_cast<std::size_t>(link)]; }
  void validate() const;
};

struct LinkConfig {
  Geometry geometry;
  PathLossModel path_loss;
};

// h_sr (M), h_si (N), H_ir (M x N), h_rd (M), h_id (N).
struct ChannelSet {
  ComplexVector h_sr;
  ComplexVector h_si;
  ComplexMatrix H_ir;
  ComplexVector h_rd;
  ComplexVector h_id;

  Eigen::Index relay_antennas() const { return h_sr.size(); }
  Eigen::Index ris_elements() const { return h_si.size(); }
  void validate() const;
};

// H_sir = [H_ir diag(h_si), h_sr] is M x (N+1);
// H_rid = [diag(h_id^H) H_ir^H ; h_rd^H] is (N+1) x M.
struct CompositeChannels {
  ComplexMatrix H_sir;
  ComplexMatrix H_rid;

  Eigen::Index relay_antennas() const { return H_sir.rows(); }
  Eigen::Index ris_elements() const { return H_sir.cols() - 1; }
};

// PL0 - 10 alpha log10(d / d0), in dB. Throws for d <= 0.
double path_loss_db(double distance_m, double alpha, const PathLossModel& model);

double link_distance(const Geometry& geom, Link link);

// Linear-scale channel power gain of a link, 10^(PL/10).
double link_gain(const Geometry& geom, const PathLossModel& model, Link link);

// Every entry CN(0, link_gain). Draw order: h_sr, h_si, H_ir (column-major),
// h_rd, h_id.
ChannelSet sample_channels(const Geometry& geom, const PathLossModel& model, Eigen::Index relay_antennas,
                           Eigen::Index ris_elements, Rng& rng);

CompositeChannels compose(const ChannelSet& ch);

// Plain-text `key = value` format. Recognized keys: positions (12 numbers,
// S D RIS relay, x y z each), pl0_db, d0, alpha.s_ris, alpha.s_relay,
// alpha.ris_relay, alpha.ris_d, alpha.relay_d. `#` starts a comment. Missing
// keys keep their defaults.
LinkConfig parse_link_config(std::istream& in);
LinkConfig load_link_config(const std::string& path);

}  // namespace rislink::channel
