#pragma once

// Continuous-time quantum walks on chains and the XX spin-chain oracle.
//
// Coupling convention: the chain Hamiltonian has hopping H_{n,n+1} = J_n.
// The spin oracle uses the per-edge term (J_n / 2)(XX + YY), whose
// single-excitation block is then exactly this chain Hamiltonian. Writing
// J_n (XX + YY) instead would double every hopping.

#include <cstddef>
#include <vector>

#include "qwalk/numerics.hpp"

namespace qwalk::ctqw {

/// Tridiagonal Hermitian chain Hamiltonian. Sites are 0-based here; site j
/// is "site j+1" in the one-based physics labeling.
class ChainHamiltonian {
 public:
  /// hopping[j] is H_{j,j+1}; H_{j+1,j} is its conjugate.
  ChainHamiltonian(std::vector<double> diagonal, std::vector<Complex> hopping);

  std::size_t n_sites() const { return diagonal_.size(); }
  const std::vector<double>& diagonal() const { return diagonal_; }
  const std::vector<Complex>& hopping() const { return hopping_; }

  ComplexMatrix matrix() const;
  /// Same hoppings with every diagonal entry set to zero.
  ChainHamiltonian zero_diagonal() const;
  /// H scaled by a real factor.
  ChainHamiltonian scaled(double factor) const;

 private:
  std::vector<double> diagonal_;
  std::vector<Complex> hopping_;
};

/// Engineered couplings J_n = (lambda/2) sqrt(n (n_sites - n)), n = 1..n_sites-1.
ChainHamiltonian christandl_hamiltonian(std::size_t n_sites, double lambda);

/// Discrete Laplacian: hopping -J, diagonal 2J.
ChainHamiltonian uniform_chain_hamiltonian(std::size_t n_sites, double coupling);

/// exp(-i H t) |initial>.
ComplexVector ctqw_evolve(const ChainHamiltonian& h, const ComplexVector& initial, double t);

/// Site basis vector |site> (0-based).
ComplexVector site_state(std::size_t n_sites, std::size_t site);

// --- spin chain oracle -------------------------------------------------------

inline constexpr std::size_t kMaxSpins = 14;
/// Chains up to this size are evolved in the full 2^n space.
inline constexpr std::size_t kFullSpaceLimit = 10;

struct SpinChainSystem {
  /// couplings[n] couples spins n and n+1 (0-based); n_spins = couplings + 1.
  std::vector<double> couplings;

  std::size_t n_spins() const { return couplings.size() + 1; }
};

/// Result of one oracle evolution. The basis is the computational bitmask
/// with bit j set when spin j points up (little-endian site order).
struct SpinOracleResult {
  /// Fidelity of the receiver's reduced state with alpha|up> + beta|down>.
  double fidelity = 0.0;
  /// <n_j>: probability that spin j points up.
  std::vector<double> excitation_distribution;
  /// Amplitude of |down...down>.
  Complex vacuum_amplitude;
  /// Amplitudes of the one-excitation states |j>, j = 0..n-1.
  std::vector<Complex> single_excitation_amplitudes;
  /// sum_j <sigma_z^j>.
  double total_sigma_z = 0.0;
};

/// Evolves (alpha|up> + beta|down>)_sender (x) |down...down> under the XX
/// Hamiltonian. Sender is spin 0, receiver spin n-1. Chains with more than
/// kFullSpaceLimit spins are evolved in the zero- plus one-excitation
/// sectors only, which the Hamiltonian leaves invariant.
class SpinOracle {
 public:
  /// Throws Error(TooLarge) above kMaxSpins spins.
  explicit SpinOracle(SpinChainSystem system);

  SpinOracleResult evolve(Complex alpha, Complex beta, double t) const;

  std::size_t n_spins() const { return system_.n_spins(); }
  /// Dimension of the space actually evolved (2^n or n+1).
  std::size_t dimension() const { return basis_.size(); }
  bool full_space() const { return full_space_; }
  /// Hamiltonian in the evolved basis.
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  /// Bitmask of each evolved basis state.
  const std::vector<unsigned>& basis() const { return basis_; }

 private:
  SpinChainSystem system_;
  bool full_space_;
  std::vector<unsigned> basis_;
  ComplexMatrix hamiltonian_;
  numerics::HermitianPropagator propagator_;
};

/// Convenience wrapper around SpinOracle.
SpinOracleResult spin_oracle_evolve(const SpinChainSystem& system, Complex alpha, Complex beta,
                                    double t);

/// Chain Hamiltonian whose hoppings equal the spin couplings.
ChainHamiltonian chain_for(const SpinChainSystem& system);

}  // namespace qwalk::ctqw
