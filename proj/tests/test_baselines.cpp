// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "rislink/baselines.hpp"

using namespace rislink;
using namespace rislink::baselines;

namespace {

struct Fixture {
  sysmodel::PowerConfig pw;
  channel::CompositeChannels cc;
  Fixture() {
    const channel::LinkConfig link;
    channel::Rng rng(201);
    cc = channel::compose(channel::sample_channels(link.geometry, link.path_loss, 2, 8, rng));
  }
};

}  // namespace

TEST_CASE("stripping the surface keeps the direct links") {
  const Fixture f;
  const auto s = strip_ris(f.cc);
  CHECK(s.H_sir.leftCols(8).norm() == 0.0);
  CHECK(s.H_rid.topRows(8).norm() == 0.0);
  CHECK(s.H_sir.col(8) == f.cc.H_sir.col(8));
  CHECK(s.H_rid.row(8) == f.cc.H_rid.row(8));
}

TEST_CASE("random-phase reference") {
  const Fixture f;
  channel::Rng r1(7), r2(7);
  const BaselineResult a = baseline_random_phase(f.cc, f.pw, r1);
  const BaselineResult b = baseline_random_phase(f.cc, f.pw, r2);
  REQUIRE(a.status == conic::Status::Optimal);
  CHECK(a.rate == b.rate);
  CHECK(a.state.v1 == b.state.v1);
  CHECK(sysmodel::is_power_feasible(a.state, f.cc, f.pw));
  CHECK(sysmodel::is_anchored_unit_modulus(a.state.v1));
  CHECK(a.rate == doctest::Approx(sysmodel::rate(sysmodel::snr(a.state, f.cc, f.pw))).epsilon(1e-12));
  // Optimizing A never loses to the starting beamformer.
  const sysmodel::SolutionState start{sysmodel::scale_to_budget(linalg::ComplexMatrix::Identity(2, 2), a.state.v1,
                                                                f.cc, f.pw),
                                      a.state.v1, a.state.v2};
  CHECK(a.snr >= sysmodel::snr(start, f.cc, f.pw));
}

TEST_CASE("relay-only reference ignores the phases") {
  const Fixture f;
  const BaselineResult base = baseline_no_ris(f.cc, f.pw);
  REQUIRE(base.status == conic::Status::Optimal);
  const auto stripped = strip_ris(f.cc);
  CHECK(sysmodel::is_power_feasible(base.state, stripped, f.pw));
  channel::Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    const auto v1 = sysmodel::random_anchored_phases(8, rng);
    const auto v2 = sysmodel::random_anchored_phases(8, rng);
    const BaselineResult other = optimize_relay(stripped, f.pw, v1, v2);
    REQUIRE(other.status == conic::Status::Optimal);
    CHECK(other.rate == doctest::Approx(base.rate).epsilon(1e-9));
  }
}
