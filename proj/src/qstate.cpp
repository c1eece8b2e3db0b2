#include "rsp/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsp {

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void require_finite(const std::vector<Amplitude>& amps) {
  for (const Amplitude& a : amps) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("StateVector: non-finite amplitude");
    }
  }
}

// Bit position of qubit q inside an n-qubit index (qubit 0 most significant).
int bit_pos(int n_qubits, int qubit) { return n_qubits - 1 - qubit; }

}  // namespace

StateVector::StateVector(int n_qubits, std::vector<Amplitude> amps,
                         bool normalized)
    : n_qubits_(n_qubits), amps_(std::move(amps)), normalized_(normalized) {
  if (n_qubits_ < 1) {
    throw std::invalid_argument("StateVector: need at least one qubit");
  }
  if (n_qubits_ > kMaxQubits) {
    throw std::length_error("StateVector: " + std::to_string(n_qubits_) +
                            " qubits exceeds the supported maximum of " +
                            std::to_string(kMaxQubits));
  }
  if (amps_.size() != (std::size_t{1} << n_qubits_)) {
    throw std::invalid_argument("StateVector: amplitude count " +
                                std::to_string(amps_.size()) +
                                " does not match qubit count");
  }
  require_finite(amps_);
  if (normalized_ && std::abs(norm_sq() - 1.0) > kNormTol) {
    throw std::invalid_argument(
        "StateVector: tagged normalized but squared norm is " +
        std::to_string(norm_sq()));
  }
}

StateVector StateVector::basis_state(int n_qubits, std::size_t index) {
  std::vector<Amplitude> amps(std::size_t{1} << n_qubits, Amplitude{});
  amps.at(index) = 1.0;
  return StateVector(n_qubits, std::move(amps), true);
}

double StateVector::norm_sq() const {
  double total = 0.0;
  for (const Amplitude& a : amps_) total += std::norm(a);
  return total;
}

StateVector StateVector::normalized_copy() const {
  const double n2 = norm_sq();
  if (n2 <= 0.0) {
    throw std::domain_error("StateVector: cannot normalize the zero vector");
  }
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<Amplitude> amps(amps_);
  for (Amplitude& a : amps) a *= scale;
  return StateVector(n_qubits_, std::move(amps), true);
}

UnitaryMatrix::UnitaryMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim, Amplitude{}) {
  if (!is_power_of_two(dim) || dim < 2 ||
      dim > (std::size_t{1} << kMaxQubits)) {
    throw std::invalid_argument("UnitaryMatrix: dimension must be a power of "
                                "two within the supported range");
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
  UnitaryMatrix u(dim);
  for (std::size_t i = 0; i < dim; ++i) u.at(i, i) = 1.0;
  return u;
}

StateVector tensor(const StateVector& left, const StateVector& right) {
  const int n = left.n_qubits() + right.n_qubits();
  if (n > kMaxQubits) {
    throw std::length_error("tensor: combined qubit count " +
                            std::to_string(n) +
                            " exceeds the supported maximum of " +
                            std::to_string(kMaxQubits));
  }
  std::vector<Amplitude> amps(left.dim() * right.dim());
  for (std::size_t i = 0; i < left.dim(); ++i) {
    for (std::size_t j = 0; j < right.dim(); ++j) {
      amps[i * right.dim() + j] = left.amp(i) * right.amp(j);
    }
  }
  return StateVector(n, std::move(amps),
                     left.is_normalized() && right.is_normalized());
}

StateVector permute_qubits(const StateVector& state,
                           std::span<const int> perm) {
  const int n = state.n_qubits();
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("permute_qubits: permutation size mismatch");
  }
  std::vector<int> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]++) {
      throw std::invalid_argument(
          "permute_qubits: map is not a bijection on qubit indices");
    }
  }
  std::vector<Amplitude> amps(state.dim());
  for (std::size_t k = 0; k < state.dim(); ++k) {
    std::size_t moved = 0;
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = (k >> bit_pos(n, q)) & 1u;
      moved |= bit << bit_pos(n, perm[q]);
    }
    amps[moved] = state.amp(k);
  }
  return StateVector(n, std::move(amps), state.is_normalized());
}

StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          std::span<const int> targets) {
  const int n = state.n_qubits();
  const int t = static_cast<int>(targets.size());
  if (u.dim() != (std::size_t{1} << t)) {
    throw std::invalid_argument(
        "apply_unitary: matrix dimension does not match target count");
  }
  std::vector<int> seen(n, 0);
  for (int q : targets) {
    if (q < 0 || q >= n || seen[q]++) {
      throw std::invalid_argument("apply_unitary: targets must be distinct "
                                  "qubit indices in range");
    }
  }

  // Index bit masks for each target, most significant sub-index bit first.
  std::vector<std::size_t> masks(t);
  std::size_t target_mask = 0;
  for (int m = 0; m < t; ++m) {
    masks[m] = std::size_t{1} << bit_pos(n, targets[m]);
    target_mask |= masks[m];
  }

  const std::size_t tdim = u.dim();
  std::vector<Amplitude> out(state.dim(), Amplitude{});
  for (std::size_t base = 0; base < state.dim(); ++base) {
    if (base & target_mask) continue;  // visit each block once
    for (std::size_t row = 0; row < tdim; ++row) {
      std::size_t row_index = base;
      for (int m = 0; m < t; ++m) {
        if ((row >> (t - 1 - m)) & 1u) row_index |= masks[m];
      }
      Amplitude acc{};
      for (std::size_t col = 0; col < tdim; ++col) {
        std::size_t col_index = base;
        for (int m = 0; m < t; ++m) {
          if ((col >> (t - 1 - m)) & 1u) col_index |= masks[m];
        }
        acc += u.at(row, col) * state.amp(col_index);
      }
      out[row_index] = acc;
    }
  }
  return StateVector(n, std::move(out), state.is_normalized());
}

Projection project_subsystem(const StateVector& state, const StateVector& bra,
                             std::span<const int> targets) {
  const int n = state.n_qubits();
  const int t = static_cast<int>(targets.size());
  if (bra.n_qubits() != t) {
    throw std::invalid_argument(
        "project_subsystem: bra dimension does not match target count");
  }
  if (t >= n) {
    throw std::invalid_argument(
        "project_subsystem: projection must leave at least one qubit");
  }
  std::vector<int> seen(n, 0);
  for (int q : targets) {
    if (q < 0 || q >= n || seen[q]++) {
      throw std::invalid_argument("project_subsystem: targets must be "
                                  "distinct qubit indices in range");
    }
  }
  // Remaining qubits keep their original relative order.
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    if (!seen[q]) rest.push_back(q);
  }

  const int r = n - t;
  std::vector<Amplitude> residual(std::size_t{1} << r, Amplitude{});
  for (std::size_t k = 0; k < state.dim(); ++k) {
    std::size_t sub = 0;
    for (int m = 0; m < t; ++m) {
      sub |= ((k >> bit_pos(n, targets[m])) & 1u) << (t - 1 - m);
    }
    std::size_t rest_index = 0;
    for (int m = 0; m < r; ++m) {
      rest_index |= ((k >> bit_pos(n, rest[m])) & 1u) << (r - 1 - m);
    }
    residual[rest_index] += std::conj(bra.amp(sub)) * state.amp(k);
  }

  StateVector out(r, std::move(residual), false);
  const double probability = out.norm_sq();
  return Projection{std::move(out), probability};
}

double fidelity_up_to_phase(const StateVector& x, const StateVector& y) {
  if (x.n_qubits() != y.n_qubits()) {
    throw std::invalid_argument("fidelity_up_to_phase: qubit count mismatch");
  }
  Amplitude overlap{};
  for (std::size_t k = 0; k < x.dim(); ++k) {
    overlap += std::conj(x.amp(k)) * y.amp(k);
  }
  return std::norm(overlap);
}

bool check_unitary(const UnitaryMatrix& u, double tol) {
  const std::size_t d = u.dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Amplitude acc{};
      for (std::size_t k = 0; k < d; ++k) {
        acc += std::conj(u.at(k, i)) * u.at(k, j);
      }
      if (i == j) acc -= 1.0;
      if (std::abs(acc) > tol) return false;
    }
  }
  return true;
}

}  // namespace rsp
