#include "qwalk/ctqw.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "qwalk/errors.hpp"

namespace qwalk::ctqw {

ChainHamiltonian::ChainHamiltonian(std::vector<double> diagonal, std::vector<Complex> hopping)
    : diagonal_(std::move(diagonal)), hopping_(std::move(hopping)) {
  if (diagonal_.empty() || hopping_.size() + 1 != diagonal_.size()) {
    std::ostringstream msg;
    msg << "ChainHamiltonian: " << diagonal_.size() << " sites need " << diagonal_.size() - 1
        << " hoppings, got " << hopping_.size();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  for (double d : diagonal_) {
    if (!std::isfinite(d)) throw Error(ErrorCode::InvalidParameter, "ChainHamiltonian: non-finite diagonal");
  }
  for (Complex h : hopping_) {
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) {
      throw Error(ErrorCode::InvalidParameter, "ChainHamiltonian: non-finite hopping");
    }
  }
}

ComplexMatrix ChainHamiltonian::matrix() const {
  const auto n = static_cast<Eigen::Index>(n_sites());
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) h(j, j) = diagonal_[j];
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    h(j, j + 1) = hopping_[j];
    h(j + 1, j) = std::conj(hopping_[j]);
  }
  return h;
}

ChainHamiltonian ChainHamiltonian::zero_diagonal() const {
  return ChainHamiltonian(std::vector<double>(diagonal_.size(), 0.0), hopping_);
}

ChainHamiltonian ChainHamiltonian::scaled(double factor) const {
  std::vector<double> d = diagonal_;
  std::vector<Complex> h = hopping_;
  for (auto& v : d) v *= factor;
  for (auto& v : h) v *= factor;
  return ChainHamiltonian(std::move(d), std::move(h));
}

ChainHamiltonian christandl_hamiltonian(std::size_t n_sites, double lambda) {
  if (n_sites < 2) throw Error(ErrorCode::InvalidParameter, "christandl_hamiltonian: n_sites must be >= 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidParameter, "christandl_hamiltonian: lambda must be positive");
  }
  std::vector<Complex> hopping(n_sites - 1);
  for (std::size_t n = 1; n < n_sites; ++n) {
    hopping[n - 1] = 0.5 * lambda * std::sqrt(static_cast<double>(n * (n_sites - n)));
  }
  return ChainHamiltonian(std::vector<double>(n_sites, 0.0), std::move(hopping));
}

ChainHamiltonian uniform_chain_hamiltonian(std::size_t n_sites, double coupling) {
  if (n_sites < 2) throw Error(ErrorCode::InvalidParameter, "uniform_chain_hamiltonian: n_sites must be >= 2");
  if (coupling == 0.0 || !std::isfinite(coupling)) {
    throw Error(ErrorCode::InvalidParameter, "uniform_chain_hamiltonian: coupling must be nonzero");
  }
  return ChainHamiltonian(std::vector<double>(n_sites, 2.0 * coupling),
                          std::vector<Complex>(n_sites - 1, Complex(-coupling, 0.0)));
}

ComplexVector ctqw_evolve(const ChainHamiltonian& h, const ComplexVector& initial, double t) {
  if (static_cast<std::size_t>(initial.size()) != h.n_sites()) {
    std::ostringstream msg;
    msg << "ctqw_evolve: state has " << initial.size() << " entries, chain has " << h.n_sites();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  return numerics::HermitianPropagator(h.matrix()).evolve(initial, t);
}

ComplexVector site_state(std::size_t n_sites, std::size_t site) {
  if (site >= n_sites) throw Error(ErrorCode::InvalidParameter, "site_state: site outside the chain");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n_sites));
  v(static_cast<Eigen::Index>(site)) = 1.0;
  return v;
}

ChainHamiltonian chain_for(const SpinChainSystem& system) {
  std::vector<Complex> hopping(system.couplings.begin(), system.couplings.end());
  return ChainHamiltonian(std::vector<double>(system.n_spins(), 0.0), std::move(hopping));
}

namespace {

constexpr bool spin_up(unsigned state, std::size_t site) { return (state >> site) & 1u; }

// sigma_y on one spin with up = bit set: Y|up> = i|down>, Y|down> = -i|up>.
Complex y_phase(bool up) { return up ? Complex(0.0, 1.0) : Complex(0.0, -1.0); }

std::vector<unsigned> oracle_basis(std::size_t n_spins, bool full) {
  std::vector<unsigned> basis;
  if (full) {
    basis.resize(std::size_t{1} << n_spins);
    for (unsigned b = 0; b < basis.size(); ++b) basis[b] = b;
  } else {
    basis.push_back(0u);
    for (std::size_t j = 0; j < n_spins; ++j) basis.push_back(1u << j);
  }
  return basis;
}

// sum_n (J_n / 2)(X_n X_{n+1} + Y_n Y_{n+1}) in the given basis, built term by
// term from the Pauli actions.
ComplexMatrix xx_hamiltonian(const SpinChainSystem& system, const std::vector<unsigned>& basis) {
  const std::size_t n = system.n_spins();
  std::vector<long> position(std::size_t{1} << n, -1);
  for (std::size_t i = 0; i < basis.size(); ++i) position[basis[i]] = static_cast<long>(i);

  const auto dim = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const unsigned b = basis[static_cast<std::size_t>(col)];
    for (std::size_t e = 0; e + 1 < n; ++e) {
      const double half_j = 0.5 * system.couplings[e];
      const unsigned flipped = b ^ (1u << e) ^ (1u << (e + 1));
      const Complex xx = 1.0;
      const Complex yy = y_phase(spin_up(b, e)) * y_phase(spin_up(b, e + 1));
      const Complex amp = half_j * (xx + yy);
      if (amp == Complex(0.0, 0.0)) continue;
      const long row = position[flipped];
      if (row < 0) {
        throw Error(ErrorCode::Numerical, "spin oracle: Hamiltonian leaves the evolved sector");
      }
      h(row, col) += amp;
    }
  }
  return h;
}

}  // namespace

SpinOracle::SpinOracle(SpinChainSystem system)
    : system_([&] {
        if (system.n_spins() > kMaxSpins) {
          std::ostringstream msg;
          msg << "spin oracle: " << system.n_spins() << " spins exceeds the limit of " << kMaxSpins;
          throw Error(ErrorCode::TooLarge, msg.str());
        }
        if (system.couplings.empty()) {
          throw Error(ErrorCode::InvalidParameter, "spin oracle: need at least two spins");
        }
        return std::move(system);
      }()),
      full_space_(system_.n_spins() <= kFullSpaceLimit),
      basis_(oracle_basis(system_.n_spins(), full_space_)),
      hamiltonian_(xx_hamiltonian(system_, basis_)),
      propagator_(hamiltonian_) {}

SpinOracleResult SpinOracle::evolve(Complex alpha, Complex beta, double t) const {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidParameter, "spin oracle: |alpha|^2 + |beta|^2 must be 1");
  }
  const std::size_t n = system_.n_spins();
  const std::size_t receiver = n - 1;

  // Sender is spin 0: |up at 0> has bitmask 1, the vacuum has bitmask 0.
  ComplexVector initial = ComplexVector::Zero(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i] == 0u) initial(static_cast<Eigen::Index>(i)) = beta;
    if (basis_[i] == 1u) initial(static_cast<Eigen::Index>(i)) = alpha;
  }
  const ComplexVector psi = propagator_.evolve(initial, t);

  SpinOracleResult out;
  out.excitation_distribution.assign(n, 0.0);
  out.single_excitation_amplitudes.assign(n, Complex(0.0, 0.0));

  // Receiver reduced density matrix, accumulated over the other spins.
  std::vector<Complex> up_part(std::size_t{1} << n, Complex(0.0, 0.0));
  std::vector<Complex> down_part(std::size_t{1} << n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const unsigned b = basis_[i];
    const Complex c = psi(static_cast<Eigen::Index>(i));
    const double p = std::norm(c);
    for (std::size_t j = 0; j < n; ++j) {
      if (spin_up(b, j)) out.excitation_distribution[j] += p;
    }
    if (b == 0u) out.vacuum_amplitude = c;
    for (std::size_t j = 0; j < n; ++j) {
      if (b == (1u << j)) out.single_excitation_amplitudes[j] = c;
    }
    const unsigned rest = b & ~(1u << receiver);
    (spin_up(b, receiver) ? up_part : down_part)[rest] = c;
  }
  double rho_uu = 0.0;
  double rho_dd = 0.0;
  Complex rho_ud = 0.0;
  for (std::size_t r = 0; r < up_part.size(); ++r) {
    rho_uu += std::norm(up_part[r]);
    rho_dd += std::norm(down_part[r]);
    rho_ud += up_part[r] * std::conj(down_part[r]);
  }
  out.fidelity = std::norm(alpha) * rho_uu + std::norm(beta) * rho_dd +
                 2.0 * (std::conj(alpha) * beta * rho_ud).real();
  for (double p : out.excitation_distribution) out.total_sigma_z += 2.0 * p - 1.0;
  return out;
}

SpinOracleResult spin_oracle_evolve(const SpinChainSystem& system, Complex alpha, Complex beta,
                                    double t) {
  return SpinOracle(system).evolve(alpha, beta, t);
}

}  // namespace qwalk::ctqw
