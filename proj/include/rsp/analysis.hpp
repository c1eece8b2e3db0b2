#pragma once

#include <array>
#include <cstdint>

#include "rsp/protocol.hpp"

// Exact branch/success accounting and seeded Monte Carlo estimation,
// plus the brute-force decomposition oracle used to cross-check the
// protocol against its closed forms.

namespace rsp {

struct BranchReport {
  std::array<double, 4> branch_probability{};  // indexed by Outcome
  std::array<double, 4> branch_success{};      // zero on uncorrectable branches
  double total_success = 0.0;
};

/// Exact per-branch probabilities and joint success probabilities,
/// computed from the simulated amplitudes (not from printed closed
/// forms). The total is checked against 2(ac)^2 before returning.
BranchReport exact_branch_report(const TargetState& t, const ChannelPair& ch);

/// The closed-form total success probability 2(ac)^2.
double closed_form_success(const ChannelPair& ch);

struct MonteCarloSummary {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimated_rate = 0.0;
  double standard_error = 0.0;  // sqrt(p(1-p)/N)
  std::uint64_t seed = 0;
};

/// Samples full protocol runs. Per-trial randomness is derived from
/// (seed, trial index) alone, so the summary is bit-identical for a
/// given seed regardless of evaluation order.
MonteCarloSummary monte_carlo(const TargetState& t, const ChannelPair& ch,
                              std::uint64_t trials, std::uint64_t seed);

/// Rebuilds the channel state as sum_k basis_k (x) residual_k and returns
/// the max entrywise deviation from the original. Verifies that the
/// four-branch decomposition is an identity (including the conjugated
/// coefficients on the uncorrectable branches).
double oracle_reconstruct(const TargetState& t, const ChannelPair& ch);

}  // namespace rsp
