#pragma once

// Discrete-time quantum walks on even cycles (2-dim coin) and on square tori
// (4-dim coin).
//
// Cycle labeling: positions 0..N-1, odd positions are chain vertices
// (vertex k sits at position 2k-1), even positions are edges, and position 0
// carries the reversing edge that closes the cycle into a finite chain.
// Basis index of |x, c> is 2x + c with c = 0 for a right mover and c = 1 for
// a left mover. One step is U = S C (coin first, then conditional shift).

#include <array>
#include <cstddef>
#include <vector>

#include "qwalk/numerics.hpp"

namespace qwalk::walk {

enum CoinState : int { kRight = 0, kLeft = 1 };

using Matrix2c = Eigen::Matrix2cd;

/// Per-position coin: exp(i phase) * exp(i theta (axis . sigma)).
struct CoinSpec {
  double theta = 0.0;
  std::array<double, 3> axis{0.0, 1.0, 0.0};
  double phase = 0.0;

  /// Throws Error(InvalidParameter) if the axis is not a unit vector or an
  /// angle is not finite.
  void validate() const;
};

Matrix2c coin_unitary(const CoinSpec& spec);

/// Pauli matrices in the (right, left) coin basis.
Matrix2c pauli_x();
Matrix2c pauli_y();
Matrix2c pauli_z();

class CoinProgram {
 public:
  /// The number of specs is the cycle length; it must be even and >= 4.
  explicit CoinProgram(std::vector<CoinSpec> specs);

  std::size_t n_positions() const { return specs_.size(); }
  const CoinSpec& operator[](std::size_t position) const { return specs_[position]; }
  const std::vector<CoinSpec>& specs() const { return specs_; }
  /// Cached 2x2 gates, one per position.
  const std::vector<Matrix2c>& coins() const { return coins_; }

 private:
  std::vector<CoinSpec> specs_;
  std::vector<Matrix2c> coins_;
};

class WalkState {
 public:
  /// |position> (right |R> + left |L>); the coin must be normalized.
  static WalkState localized(std::size_t n_positions, std::size_t position, Complex right,
                             Complex left);
  /// Validates even length and unit norm (1e-10).
  static WalkState from_amplitudes(ComplexVector amplitudes);

  static Eigen::Index index(std::size_t position, int coin) {
    return static_cast<Eigen::Index>(2 * position + static_cast<std::size_t>(coin));
  }

  std::size_t n_positions() const { return static_cast<std::size_t>(amplitudes_.size() / 2); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t position, int coin) const { return amplitudes_(index(position, coin)); }
  Eigen::Vector2cd coin_at(std::size_t position) const;
  double position_probability(std::size_t position) const;
  std::vector<double> position_distribution() const;
  double norm() const { return amplitudes_.norm(); }

 private:
  friend WalkState step(const CoinProgram&, const WalkState&);
  friend WalkState apply_double_step(const WalkState&, const ComplexMatrix&);
  explicit WalkState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {}

  ComplexVector amplitudes_;
};

/// Dense single-step operator S*C of dimension 2N.
ComplexMatrix build_step_operator(const CoinProgram& program);

/// U^2 applied to the state. Throws Error(DimensionMismatch).
WalkState apply_double_step(const WalkState& state, const ComplexMatrix& step_operator);

/// Structured single step: 2x2 coin per position followed by the shift
/// permutation. Agrees with the dense operator to rounding.
WalkState step(const CoinProgram& program, const WalkState& state);
WalkState double_step(const CoinProgram& program, const WalkState& state);

/// States after 0, 1, ..., double_steps double steps.
std::vector<WalkState> evolve_states(const WalkState& initial, const CoinProgram& program,
                                     int double_steps);

/// Occupation probabilities sampled once per double step.
struct TransferTrace {
  std::vector<int> times;
  std::vector<double> p_source;
  std::vector<double> p_target;
  std::vector<double> p_rest;
  /// |<ideal target state | psi(t)>|^2 at every recorded time.
  std::vector<double> coin_fidelity;
  double peak_fidelity = 0.0;
  int peak_time = 0;
  double coin_fidelity_at_peak = 0.0;
  ComplexVector final_state;
};

/// Builds a trace from a state history. The ideal target state is
/// coin_map applied to the normalized coin found at `source` in the first
/// state, placed at `target`. The peak is the earliest time whose target
/// probability is within 1e-12 of the maximum.
TransferTrace summarize_trace(const std::vector<WalkState>& states, std::size_t source,
                              std::size_t target, const Matrix2c& coin_map);

/// Evolves and summarizes against the identity coin map.
TransferTrace evolve(const WalkState& initial, const CoinProgram& program, int double_steps,
                     std::size_t source, std::size_t target);

// --- 2D torus with a 4-dim coin --------------------------------------------

/// Coin basis for the torus walk.
enum TorusCoin : int { kPlusX = 0, kMinusX = 1, kPlusY = 2, kMinusY = 3 };

class TorusWalkState {
 public:
  static TorusWalkState localized(std::size_t side, std::size_t x, std::size_t y,
                                  const Eigen::Vector4cd& coin);
  static TorusWalkState from_amplitudes(std::size_t side, ComplexVector amplitudes);

  static Eigen::Index index(std::size_t side, std::size_t x, std::size_t y, int coin) {
    return static_cast<Eigen::Index>(4 * (x * side + y) + static_cast<std::size_t>(coin));
  }

  std::size_t side() const { return side_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  double site_probability(std::size_t x, std::size_t y) const;
  TorusWalkState advanced(const ComplexMatrix& step_operator) const;

 private:
  TorusWalkState(std::size_t side, ComplexVector amplitudes)
      : side_(side), amplitudes_(std::move(amplitudes)) {}

  std::size_t side_;
  ComplexVector amplitudes_;
};

/// 4x4 Grover coin, (J - 2I)/2 up to sign: -1/2 on the diagonal, 1/2 elsewhere.
ComplexMatrix grover_coin();

/// Dense 4 side^2 operator S2 (I (x) coin4). Throws Error(NotUnitary) when
/// coin4 is not a unitary 4x4 matrix, Error(InvalidParameter) for side < 2.
ComplexMatrix build_torus_step(std::size_t side, const ComplexMatrix& coin4);

}  // namespace qwalk::walk
