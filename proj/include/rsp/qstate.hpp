#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Minimal exact complex linear algebra for small multi-qubit state vectors.
// Everything here is a pure function of its inputs; values are immutable
// after construction and safe to share across threads.

namespace rsp {

using Amplitude = std::complex<double>;

// Largest register any operation will produce.
inline constexpr int kMaxQubits = 5;

// Tolerance for the norm-1 invariant of normalized states.
inline constexpr double kNormTol = 1e-10;

// Tolerance for algebraic identities (unitarity, norm preservation).
inline constexpr double kAlgebraTol = 1e-12;

/// Dense state vector over n labeled qubits.
///
/// Index convention: qubit 0 is the most significant bit of the array
/// index, so for qubits (p, q, r) the amplitude of |pqr> sits at
/// index 4p + 2q + r. Unnormalized vectors (projection residuals) are a
/// first-class tagged variant; they are never silently rescaled.
class StateVector {
 public:
  StateVector(int n_qubits, std::vector<Amplitude> amps, bool normalized);

  /// |index> on n_qubits qubits.
  static StateVector basis_state(int n_qubits, std::size_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  bool is_normalized() const { return normalized_; }
  const std::vector<Amplitude>& amps() const { return amps_; }
  Amplitude amp(std::size_t index) const { return amps_[index]; }

  double norm_sq() const;

  /// Rescales to unit norm and tags the result normalized.
  StateVector normalized_copy() const;

 private:
  int n_qubits_;
  std::vector<Amplitude> amps_;
  bool normalized_;
};

/// Square complex matrix of power-of-two dimension, row major.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(std::size_t dim);
  static UnitaryMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Amplitude at(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  Amplitude& at(std::size_t row, std::size_t col) {
    return entries_[row * dim_ + col];
  }
  const std::vector<Amplitude>& entries() const { return entries_; }

 private:
  std::size_t dim_;
  std::vector<Amplitude> entries_;
};

/// Kronecker product; left's qubits become the most significant ones.
/// Throws std::length_error if the combined register exceeds kMaxQubits.
StateVector tensor(const StateVector& left, const StateVector& right);

/// Relabels qubits: the qubit at position i moves to position perm[i].
/// perm must be a bijection on 0..n-1. Pure bit shuffling, no arithmetic.
StateVector permute_qubits(const StateVector& state, std::span<const int> perm);

/// Applies u to the listed qubits (targets[0] maps to u's most significant
/// index bit). u.dim() must equal 2^targets.size().
StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          std::span<const int> targets);

struct Projection {
  StateVector residual;  // unnormalized, on the remaining qubits
  double probability;    // squared norm of the residual
};

/// Partial inner product <bra|_targets |state>. The bra amplitudes are
/// conjugated; targets[0] maps to bra's most significant index bit. The
/// residual keeps the remaining qubits in their original relative order.
Projection project_subsystem(const StateVector& state, const StateVector& bra,
                             std::span<const int> targets);

/// |<x|y>|^2; invariant under a global phase on either argument.
double fidelity_up_to_phase(const StateVector& x, const StateVector& y);

/// True iff max entrywise |U'U - I| <= tol.
bool check_unitary(const UnitaryMatrix& u, double tol);

}  // namespace rsp
