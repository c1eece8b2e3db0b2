#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "rsp/qstate.hpp"
#include "rsp/random.hpp"

// The remote-preparation protocol: input validation, the sender's
// two-qubit measurement, the receiver's correction and auxiliary-unitary
// stages, and a full single-run driver. All operations are pure; the only
// randomness is the explicit stream passed in.

namespace rsp {

// Tolerance for user-facing input constraints. Looser than the internal
// algebraic tolerances because inputs come from users and files.
inline constexpr double kInputTol = 1e-9;

/// Input constraint violation; the message names the violated constraint.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A forced measurement outcome has zero probability on this state.
class DegenerateBranchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The sender's four measurement outcomes. The label itself is the
/// two-bit classical message sent to the receiver.
enum class Outcome { Phi = 0, PhiPerp = 1, Psi = 2, PsiPerp = 3 };

inline constexpr std::array<Outcome, 4> kAllOutcomes = {
    Outcome::Phi, Outcome::PhiPerp, Outcome::Psi, Outcome::PsiPerp};

/// Only the two "perp" branches admit a correction for general complex
/// coefficients.
inline bool is_correctable(Outcome o) {
  return o == Outcome::PhiPerp || o == Outcome::PsiPerp;
}

std::string outcome_name(Outcome o);
std::optional<Outcome> outcome_from_name(const std::string& name);

/// Result of measuring the auxiliary qubit; Aux0 means success.
enum class AuxOutcome { Aux0 = 0, Aux1 = 1 };

/// The two-qubit state the sender wants prepared:
/// alpha|00> + beta|01> + gamma|10> + delta|11>, with alpha and gamma
/// real and conj(beta)*delta real. Always stored with unit norm.
class TargetState {
 public:
  double alpha() const { return alpha_; }
  Amplitude beta() const { return beta_; }
  double gamma() const { return gamma_; }
  Amplitude delta() const { return delta_; }

  StateVector to_state() const;

 private:
  friend TargetState validate_target(Amplitude alpha, Amplitude beta,
                                     Amplitude gamma, Amplitude delta);
  TargetState(double alpha, Amplitude beta, double gamma, Amplitude delta)
      : alpha_(alpha), beta_(beta), gamma_(gamma), delta_(delta) {}

  double alpha_;
  Amplitude beta_;
  double gamma_;
  Amplitude delta_;
};

/// Checks the coefficient constraints at kInputTol and rescales to unit
/// norm when the input norm is within 1e-6 of 1. Throws ValidationError
/// naming the violated constraint otherwise.
TargetState validate_target(Amplitude alpha, Amplitude beta, Amplitude gamma,
                            Amplitude delta);

/// The two entangled channel pairs a|00>+b|11> and c|00>+d|11>, real
/// coefficients with a^2+b^2 = c^2+d^2 = 1 and |a| <= |b|, |c| <= |d|.
/// The ordering constraint keeps b and d away from zero (both >= 1/sqrt 2),
/// so the ratios in the auxiliary unitaries are always well defined.
class ChannelPair {
 public:
  ChannelPair(double a, double b, double c, double d);

  /// Derives b = sqrt(1-a^2), d = sqrt(1-c^2); requires a, c in
  /// [0, 1/sqrt 2] so the ordering constraint holds automatically.
  static ChannelPair from_ac(double a, double c);

  /// Both pairs maximally entangled: a = b = c = d = 1/sqrt 2.
  static ChannelPair epr();

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

 private:
  double a_, b_, c_, d_;
};

/// The sender's orthonormal measurement basis, built from the target
/// coefficients. Orthonormality is exactly what the TargetState reality
/// constraints guarantee.
class MeasurementBasis {
 public:
  explicit MeasurementBasis(std::array<StateVector, 4> vectors)
      : vectors_(std::move(vectors)) {}

  const StateVector& vector(Outcome o) const {
    return vectors_[static_cast<int>(o)];
  }

 private:
  std::array<StateVector, 4> vectors_;
};

/// Basis vectors on the sender's qubits:
///   Phi     = ( alpha,  beta,   gamma,  delta)
///   PhiPerp = (-delta*, gamma, -beta*,  alpha)
///   Psi     = ( gamma,  delta, -alpha, -beta)
///   PsiPerp = ( beta*, -alpha, -delta*, gamma)
MeasurementBasis build_measurement_basis(const TargetState& t);

/// The 4-qubit channel state in particle order (1,3,2,4): the tensor of
/// the two pairs followed by the middle-qubit swap, so the sender's
/// qubits are the two most significant.
StateVector build_channel_state(const ChannelPair& ch);

struct AliceMeasurement {
  Outcome outcome;
  StateVector bob_state;  // normalized residual on the receiver's qubits
  double probability;
};

/// Projects the forced outcome's basis vector; throws DegenerateBranchError
/// if that branch has zero probability.
AliceMeasurement alice_measure(const StateVector& channel_state,
                               const MeasurementBasis& basis, Outcome forced);

/// Draws one of the four outcomes with its exact branch probability.
AliceMeasurement alice_measure(const StateVector& channel_state,
                               const MeasurementBasis& basis,
                               RandomStream& rng);

/// Correction conditioned on the classical message. PhiPerp and PsiPerp
/// map to fixed two-qubit unitaries; Phi and Psi return nullopt because
/// no target-independent correction exists for complex coefficients.
std::optional<UnitaryMatrix> bob_primary_correction(Outcome outcome);

/// The 8x8 block-diagonal collective unitary on (receiver qubits, aux).
/// Each 2x2 block is the reflection [[r, s], [s, -r]] with s = sqrt(1-r^2);
/// the block ratios r depend on the branch. Throws std::invalid_argument
/// for uncorrectable outcomes.
UnitaryMatrix build_aux_unitary(const ChannelPair& ch, Outcome outcome);

struct AuxStageResult {
  AuxOutcome outcome;
  StateVector final_state;  // normalized, on the receiver's two qubits
  double conditional_probability;
};

/// Appends the auxiliary qubit in |0>, applies the collective unitary and
/// measures the auxiliary qubit. Aux0 leaves the target on the receiver's
/// qubits; Aux1 is the failure residual.
AuxStageResult bob_aux_stage(const StateVector& corrected_state,
                             const ChannelPair& ch, Outcome outcome,
                             AuxOutcome forced);
AuxStageResult bob_aux_stage(const StateVector& corrected_state,
                             const ChannelPair& ch, Outcome outcome,
                             RandomStream& rng);

/// Full trace of one protocol run.
struct ProtocolResult {
  Outcome alice_outcome;
  double alice_probability = 0.0;
  bool corrected = false;
  std::optional<AuxOutcome> aux_outcome;
  std::optional<double> aux_probability;
  StateVector final_bob_state;
  double fidelity_to_target = 0.0;
  bool success = false;
};

/// Forced choices for deterministic runs; anything left empty is drawn
/// from the stream.
struct RunOptions {
  std::optional<Outcome> forced_alice;
  std::optional<AuxOutcome> forced_aux;
};

/// One full protocol run: basis and channel construction, the sender's
/// measurement, the receiver's correction and (on correctable branches)
/// the auxiliary stage. success means a correctable branch ended in Aux0.
ProtocolResult run_protocol(const TargetState& t, const ChannelPair& ch,
                            RandomStream& rng, const RunOptions& options = {});

}  // namespace rsp
