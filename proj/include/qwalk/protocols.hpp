#pragma once

// Coin programs for state-transfer protocols and the conversion of a chain
// CTQW into a cycle DTQW.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "qwalk/ctqw.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::protocols {

inline constexpr std::array<double, 3> kAxisX{1.0, 0.0, 0.0};
inline constexpr std::array<double, 3> kAxisY{0.0, 1.0, 0.0};
inline constexpr std::array<double, 3> kAxisZ{0.0, 0.0, 1.0};

/// The theta = pi/2 coin about y that closes the cycle into a chain.
walk::CoinSpec reversing_coin();

/// Engineered-coupling protocol on an N-cycle (chain of N/2 vertices).
/// Edge position 2k gets theta = arctan(1 / (2 lambda sqrt(k (N/2 - k)))),
/// position 0 is reversing. Vertex coins are the identity unless
/// vertex_theta is given, in which case every vertex uses that angle.
/// The walk tracks christandl_hamiltonian(N/2, 2 lambda) with one double
/// step per unit time.
walk::CoinProgram christandl_program(std::size_t n_cycle, double lambda,
                                     std::optional<double> vertex_theta = std::nullopt);

/// Edge angle used by christandl_program at edge position 2k.
double christandl_edge_angle(std::size_t n_cycle, double lambda, std::size_t k);

enum class EndAxisPlacement {
  kBothEnds,       ///< end_axis at positions 2 and N-2
  kSenderEndOnly,  ///< end_axis at position 2, axis y at N-2
};

/// Weakly coupled ends: theta about y everywhere (vertices included), except
/// positions 2 and N-2 which get pi/2 - epsilon, and the reversing coin at 0.
/// epsilon = pi/2 is accepted and turns the end coins into identities.
walk::CoinProgram weak_coupling_program(std::size_t n_cycle, double theta, double epsilon,
                                        const std::array<double, 3>& end_axis = kAxisY,
                                        EndAxisPlacement placement = EndAxisPlacement::kBothEnds);

/// Free (dispersionless) walk: identity coins plus the reversing coin.
walk::CoinProgram ballistic_program(std::size_t n_cycle);

/// Output of ctqw_to_dtqw. Arrays are indexed by chain site (scalar angles)
/// or by chain bond j = 0..n_sites-2 between sites j and j+1 (mass and
/// vector-potential angles).
struct ConversionResult {
  walk::CoinProgram program;
  std::vector<double> mass_angles;
  std::vector<double> vector_potential_angles;
  std::vector<double> scalar_angles;
  /// Bonds whose hopping has zero real part; they are mapped to a fully
  /// reflective edge (mass angle pi/2, vector-potential angle 0).
  std::vector<std::size_t> degenerate_bonds;
};

/// Converts a chain Hamiltonian with n sites into a 2n-cycle DTQW:
///   mass angle    m = arctan(1 / (2 Re H_{j,j+1}))
///   vector angle  A = arctan(Im H_{j,j+1} / (2 Re H_{j,j+1}))
///   scalar angle  u = arctan(H_jj)
/// Bond j sits on edge position 2(j+1) with the single generator
/// m sigma_y - A sigma_z, stored as angle sqrt(m^2 + A^2) about the axis
/// (0, m, -A)/sqrt(m^2 + A^2). Site j sits on vertex position 2j+1 with
/// theta = 0 and phase u. Position 0 is reversing.
ConversionResult ctqw_to_dtqw(const ctqw::ChainHamiltonian& h);

}  // namespace qwalk::protocols
