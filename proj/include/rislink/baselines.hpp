// SPDX-License-Identifier: Apache-2.0
//
// Reference configurations: random RIS phases and a relay-only link. Both
// still optimize the relay beamformer for the phases they are given.

#pragma once

#include "rislink/channel.hpp"
#include "rislink/conic.hpp"
#include "rislink/sysmodel.hpp"

namespace rislink::baselines {

using channel::CompositeChannels;
using sysmodel::PowerConfig;
using sysmodel::SolutionState;

struct BaselineResult {
  SolutionState state;
  double snr = 0.0;
  double rate = 0.0;
  conic::Status status = conic::Status::Optimal;
};

// Zeroes every RIS-dependent entry of the composite channels so only the
// direct source-relay and relay-destination links remain.
CompositeChannels strip_ris(const CompositeChannels& cc);

// Optimizes A for fixed phases, starting from A = c I at full power.
BaselineResult optimize_relay(const CompositeChannels& cc, const PowerConfig& pw, const linalg::ComplexVector& v1,
                              const linalg::ComplexVector& v2, const conic::SolverSettings& settings = {});

// Keeps the given (random) phases and optimizes A.
BaselineResult baseline_random_phase(const CompositeChannels& cc, const PowerConfig& pw,
                                     const linalg::ComplexVector& v1, const linalg::ComplexVector& v2,
                                     const conic::SolverSettings& settings = {});

// Draws random anchored phases from rng, then as above.
BaselineResult baseline_random_phase(const CompositeChannels& cc, const PowerConfig& pw, channel::Rng& rng,
                                     const conic::SolverSettings& settings = {});

// Evaluated on strip_ris(cc); the phases are irrelevant and set to all ones.
BaselineResult baseline_no_ris(const CompositeChannels& cc, const PowerConfig& pw,
                               const conic::SolverSettings& settings = {});

}  // namespace rislink::baselines
