#include "rsp/protocol.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace rsp {

namespace {

constexpr double kRoot2Inv = 0.70710678118654752440;

// Kronecker product of two 2x2 matrices, row major.
UnitaryMatrix kron2(const std::array<Amplitude, 4>& left,
                    const std::array<Amplitude, 4>& right) {
  UnitaryMatrix u(4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) {
          u.at(2 * i + k, 2 * j + l) = left[2 * i + j] * right[2 * k + l];
        }
      }
    }
  }
  return u;
}

StateVector two_qubit_state(Amplitude a00, Amplitude a01, Amplitude a10,
                            Amplitude a11, bool normalized) {
  return StateVector(2, {a00, a01, a10, a11}, normalized);
}

AliceMeasurement measure_branch(const StateVector& channel_state,
                                const MeasurementBasis& basis, Outcome o,
                                double probability) {
  const std::array<int, 2> sender_qubits = {0, 1};
  Projection proj =
      project_subsystem(channel_state, basis.vector(o), sender_qubits);
  return AliceMeasurement{o, proj.residual.normalized_copy(), probability};
}

}  // namespace

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Phi:
      return "phi";
    case Outcome::PhiPerp:
      return "phi-perp";
    case Outcome::Psi:
      return "psi";
    case Outcome::PsiPerp:
      return "psi-perp";
  }
  return "unknown";
}

std::optional<Outcome> outcome_from_name(const std::string& name) {
  for (Outcome o : kAllOutcomes) {
    if (outcome_name(o) == name) return o;
  }
  return std::nullopt;
}

StateVector TargetState::to_state() const {
  return two_qubit_state(alpha_, beta_, gamma_, delta_, true);
}

TargetState validate_target(Amplitude alpha, Amplitude beta, Amplitude gamma,
                            Amplitude delta) {
  if (std::abs(alpha.imag()) > kInputTol) {
    throw ValidationError("target: alpha must be real");
  }
  if (std::abs(gamma.imag()) > kInputTol) {
    throw ValidationError("target: gamma must be real");
  }
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta) +
                                std::norm(gamma) + std::norm(delta));
  if (std::abs(norm - 1.0) > 1e-6) {
    throw ValidationError("target: coefficient norm " + std::to_string(norm) +
                          " is not within 1e-6 of 1");
  }
  const Amplitude cross = std::conj(beta) * delta;
  if (std::abs(cross.imag()) > kInputTol) {
    throw ValidationError("target: conj(beta)*delta must be real");
  }
  const double scale = 1.0 / norm;
  return TargetState(alpha.real() * scale, beta * scale, gamma.real() * scale,
                     delta * scale);
}

ChannelPair::ChannelPair(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (std::abs(a * a + b * b - 1.0) > kInputTol) {
    throw ValidationError("channel: a^2 + b^2 must equal 1");
  }
  if (std::abs(c * c + d * d - 1.0) > kInputTol) {
    throw ValidationError("channel: c^2 + d^2 must equal 1");
  }
  if (std::abs(a) > std::abs(b) + kInputTol) {
    throw ValidationError("channel: |a| must not exceed |b|");
  }
  if (std::abs(c) > std::abs(d) + kInputTol) {
    throw ValidationError("channel: |c| must not exceed |d|");
  }
}

ChannelPair ChannelPair::from_ac(double a, double c) {
  if (a < 0.0 || a > kRoot2Inv + kInputTol) {
    throw ValidationError("channel: a must lie in [0, 1/sqrt 2]");
  }
  if (c < 0.0 || c > kRoot2Inv + kInputTol) {
    throw ValidationError("channel: c must lie in [0, 1/sqrt 2]");
  }
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  const double d = std::sqrt(std::max(0.0, 1.0 - c * c));
  return ChannelPair(a, b, c, d);
}

ChannelPair ChannelPair::epr() {
  return ChannelPair(kRoot2Inv, kRoot2Inv, kRoot2Inv, kRoot2Inv);
}

MeasurementBasis build_measurement_basis(const TargetState& t) {
  const double alpha = t.alpha();
  const Amplitude beta = t.beta();
  const double gamma = t.gamma();
  const Amplitude delta = t.delta();
  return MeasurementBasis({
      two_qubit_state(alpha, beta, gamma, delta, true),
      two_qubit_state(-std::conj(delta), gamma, -std::conj(beta), alpha, true),
      two_qubit_state(gamma, delta, -alpha, -beta, true),
      two_qubit_state(std::conj(beta), -alpha, -std::conj(delta), gamma, true),
  });
}

StateVector build_channel_state(const ChannelPair& ch) {
  const StateVector pair12 =
      two_qubit_state(ch.a(), 0.0, 0.0, ch.b(), true);
  const StateVector pair34 =
      two_qubit_state(ch.c(), 0.0, 0.0, ch.d(), true);
  // Particle order after the tensor is (1,2,3,4); swap the middle qubits
  // so the sender holds the two most significant ones.
  const std::array<int, 4> to_1324 = {0, 2, 1, 3};
  return permute_qubits(tensor(pair12, pair34), to_1324);
}

AliceMeasurement alice_measure(const StateVector& channel_state,
                               const MeasurementBasis& basis, Outcome forced) {
  const std::array<int, 2> sender_qubits = {0, 1};
  Projection proj =
      project_subsystem(channel_state, basis.vector(forced), sender_qubits);
  if (proj.probability == 0.0) {
    throw DegenerateBranchError("alice_measure: forced outcome " +
                                outcome_name(forced) +
                                " has zero probability");
  }
  return AliceMeasurement{forced, proj.residual.normalized_copy(),
                          proj.probability};
}

AliceMeasurement alice_measure(const StateVector& channel_state,
                               const MeasurementBasis& basis,
                               RandomStream& rng) {
  const std::array<int, 2> sender_qubits = {0, 1};
  std::array<double, 4> probabilities{};
  for (Outcome o : kAllOutcomes) {
    probabilities[static_cast<int>(o)] =
        project_subsystem(channel_state, basis.vector(o), sender_qubits)
            .probability;
  }
  const double u = rng.next_uniform();
  double cumulative = 0.0;
  Outcome chosen = Outcome::Phi;
  for (Outcome o : kAllOutcomes) {
    const double p = probabilities[static_cast<int>(o)];
    cumulative += p;
    if (p == 0.0) continue;
    chosen = o;  // if u lands past the total (float slop) the last nonzero branch stands
    if (u < cumulative) break;
  }
  return measure_branch(channel_state, basis, chosen,
                        probabilities[static_cast<int>(chosen)]);
}

std::optional<UnitaryMatrix> bob_primary_correction(Outcome outcome) {
  const std::array<Amplitude, 4> bit_flip = {0.0, 1.0, 1.0, 0.0};
  const std::array<Amplitude, 4> phase_flip = {1.0, 0.0, 0.0, -1.0};
  switch (outcome) {
    case Outcome::PhiPerp:
      // (|0><1| + |1><0|) (x) (|0><1| - |1><0|)
      return kron2(bit_flip, {0.0, 1.0, -1.0, 0.0});
    case Outcome::PsiPerp:
      // (|0><0| - |1><1|) (x) (-|0><1| + |1><0|)
      return kron2(phase_flip, {0.0, -1.0, 1.0, 0.0});
    case Outcome::Phi:
    case Outcome::Psi:
      return std::nullopt;
  }
  return std::nullopt;
}

UnitaryMatrix build_aux_unitary(const ChannelPair& ch, Outcome outcome) {
  if (!is_correctable(outcome)) {
    throw std::invalid_argument(
        "build_aux_unitary: no auxiliary stage for outcome " +
        outcome_name(outcome));
  }
  const double ratio_full = (ch.a() * ch.c()) / (ch.b() * ch.d());
  const double ratio_ab = ch.a() / ch.b();
  const double ratio_cd = ch.c() / ch.d();
  std::array<double, 4> ratios{};
  if (outcome == Outcome::PhiPerp) {
    ratios = {ratio_full, ratio_ab, ratio_cd, 1.0};
  } else {
    ratios = {ratio_cd, 1.0, ratio_full, ratio_ab};
  }
  UnitaryMatrix u(8);
  for (std::size_t block = 0; block < 4; ++block) {
    const double r = ratios[block];
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    const std::size_t row = 2 * block;
    u.at(row, row) = r;
    u.at(row, row + 1) = s;
    u.at(row + 1, row) = s;
    u.at(row + 1, row + 1) = -r;
  }
  return u;
}

namespace {

AuxStageResult aux_stage_impl(const StateVector& corrected_state,
                              const ChannelPair& ch, Outcome outcome,
                              std::optional<AuxOutcome> forced,
                              RandomStream* rng) {
  if (!is_correctable(outcome)) {
    throw std::invalid_argument("bob_aux_stage: outcome " +
                                outcome_name(outcome) +
                                " has no auxiliary stage");
  }
  const StateVector with_aux =
      tensor(corrected_state, StateVector::basis_state(1, 0));
  const UnitaryMatrix collective = build_aux_unitary(ch, outcome);
  const std::array<int, 3> all_three = {0, 1, 2};
  const StateVector evolved = apply_unitary(with_aux, collective, all_three);

  const std::array<int, 1> aux_qubit = {2};
  Projection on_zero =
      project_subsystem(evolved, StateVector::basis_state(1, 0), aux_qubit);
  Projection on_one =
      project_subsystem(evolved, StateVector::basis_state(1, 1), aux_qubit);

  AuxOutcome chosen;
  if (forced.has_value()) {
    chosen = *forced;
    const double p =
        (chosen == AuxOutcome::Aux0) ? on_zero.probability : on_one.probability;
    if (p == 0.0) {
      throw DegenerateBranchError(
          "bob_aux_stage: forced auxiliary outcome has zero probability");
    }
  } else {
    chosen = (rng->next_uniform() < on_zero.probability || on_one.probability == 0.0)
                 ? AuxOutcome::Aux0
                 : AuxOutcome::Aux1;
  }
  Projection& picked = (chosen == AuxOutcome::Aux0) ? on_zero : on_one;
  return AuxStageResult{chosen, picked.residual.normalized_copy(),
                        picked.probability};
}

}  // namespace

AuxStageResult bob_aux_stage(const StateVector& corrected_state,
                             const ChannelPair& ch, Outcome outcome,
                             AuxOutcome forced) {
  return aux_stage_impl(corrected_state, ch, outcome, forced, nullptr);
}

AuxStageResult bob_aux_stage(const StateVector& corrected_state,
                             const ChannelPair& ch, Outcome outcome,
                             RandomStream& rng) {
  return aux_stage_impl(corrected_state, ch, outcome, std::nullopt, &rng);
}

ProtocolResult run_protocol(const TargetState& t, const ChannelPair& ch,
                            RandomStream& rng, const RunOptions& options) {
  const MeasurementBasis basis = build_measurement_basis(t);
  const StateVector channel_state = build_channel_state(ch);

  const AliceMeasurement alice =
      options.forced_alice.has_value()
          ? alice_measure(channel_state, basis, *options.forced_alice)
          : alice_measure(channel_state, basis, rng);

  const StateVector target_state = t.to_state();
  const std::optional<UnitaryMatrix> correction =
      bob_primary_correction(alice.outcome);

  if (!correction.has_value()) {
    // Uncorrectable branch: the receiver keeps the collapsed state.
    return ProtocolResult{alice.outcome,
                          alice.probability,
                          false,
                          std::nullopt,
                          std::nullopt,
                          alice.bob_state,
                          fidelity_up_to_phase(alice.bob_state, target_state),
                          false};
  }

  const std::array<int, 2> receiver_qubits = {0, 1};
  const StateVector corrected =
      apply_unitary(alice.bob_state, *correction, receiver_qubits);

  const AuxStageResult aux =
      options.forced_aux.has_value()
          ? bob_aux_stage(corrected, ch, alice.outcome, *options.forced_aux)
          : bob_aux_stage(corrected, ch, alice.outcome, rng);

  const bool success = aux.outcome == AuxOutcome::Aux0;
  return ProtocolResult{alice.outcome,
                        alice.probability,
                        true,
                        aux.outcome,
                        aux.conditional_probability,
                        aux.final_state,
                        fidelity_up_to_phase(aux.final_state, target_state),
                        success};
}

}  // namespace rsp
