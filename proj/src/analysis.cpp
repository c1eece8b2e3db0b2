#include "rsp/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsp {

double closed_form_success(const ChannelPair& ch) {
  const double ac = ch.a() * ch.c();
  return 2.0 * ac * ac;
}

BranchReport exact_branch_report(const TargetState& t, const ChannelPair& ch) {
  const MeasurementBasis basis = build_measurement_basis(t);
  const StateVector channel_state = build_channel_state(ch);
  const std::array<int, 2> sender_qubits = {0, 1};
  const std::array<int, 2> receiver_qubits = {0, 1};
  const std::array<int, 1> aux_qubit = {2};

  BranchReport report;
  for (Outcome o : kAllOutcomes) {
    const int k = static_cast<int>(o);
    Projection proj =
        project_subsystem(channel_state, basis.vector(o), sender_qubits);
    report.branch_probability[k] = proj.probability;
    if (!is_correctable(o) || proj.probability == 0.0) continue;

    const StateVector corrected = apply_unitary(
        proj.residual.normalized_copy(), *bob_primary_correction(o),
        receiver_qubits);
    const StateVector evolved =
        apply_unitary(tensor(corrected, StateVector::basis_state(1, 0)),
                      build_aux_unitary(ch, o), std::array<int, 3>{0, 1, 2});
    const double aux0 =
        project_subsystem(evolved, StateVector::basis_state(1, 0), aux_qubit)
            .probability;
    report.branch_success[k] = proj.probability * aux0;
  }

  for (double s : report.branch_success) report.total_success += s;
  const double closed = closed_form_success(ch);
  if (std::abs(report.total_success - closed) > 1e-10) {
    throw std::logic_error(
        "exact_branch_report: computed success " +
        std::to_string(report.total_success) +
        " disagrees with the closed form " + std::to_string(closed));
  }
  return report;
}

MonteCarloSummary monte_carlo(const TargetState& t, const ChannelPair& ch,
                              std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) {
    throw std::invalid_argument("monte_carlo: trials must be at least 1");
  }
  std::uint64_t successes = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    RandomStream rng = RandomStream::for_trial(seed, i);
    if (run_protocol(t, ch, rng).success) ++successes;
  }
  const double rate =
      static_cast<double>(successes) / static_cast<double>(trials);
  const double se =
      std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
  return MonteCarloSummary{trials, successes, rate, se, seed};
}

double oracle_reconstruct(const TargetState& t, const ChannelPair& ch) {
  const MeasurementBasis basis = build_measurement_basis(t);
  const StateVector channel_state = build_channel_state(ch);
  const std::array<int, 2> sender_qubits = {0, 1};

  std::vector<Amplitude> reconstruction(channel_state.dim(), Amplitude{});
  for (Outcome o : kAllOutcomes) {
    Projection proj =
        project_subsystem(channel_state, basis.vector(o), sender_qubits);
    const StateVector term = tensor(basis.vector(o), proj.residual);
    for (std::size_t k = 0; k < term.dim(); ++k) {
      reconstruction[k] += term.amp(k);
    }
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < channel_state.dim(); ++k) {
    worst = std::max(worst, std::abs(reconstruction[k] - channel_state.amp(k)));
  }
  return worst;
}

}  // namespace rsp
