#pragma once

// Spectral and dynamical analyses of the walks built by walk/protocols.

#include <cstddef>
#include <vector>

#include "qwalk/ctqw.hpp"
#include "qwalk/numerics.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::analysis {

using walk::TransferTrace;

struct SpectrumReport {
  /// Eigenphases in (-pi, pi], ascending.
  std::vector<double> phases;
  /// Index groups into `phases`; each group is one degenerate eigenvalue.
  std::vector<std::vector<std::size_t>> degeneracy_classes;
  /// Width of the empty arc containing phase 0 (0 if 0 is an eigenphase).
  double gap_at_zero = 0.0;
  /// Width of the empty arc containing phase pi.
  double gap_at_pi = 0.0;
};

/// Spectrum of a unitary (typically the double-step operator U^2).
SpectrumReport spectrum_report(const ComplexMatrix& u2);

/// Same report built from raw phases (any branch); used by spectrum_report.
SpectrumReport spectrum_from_phases(std::vector<double> phases);

/// Length of the arc between circularly consecutive phases that strictly
/// contains `angle`; 0 when `angle` is itself one of the phases.
double gap_containing(const std::vector<double>& sorted_phases, double angle);

/// Largest relative spread (stddev / mean) of consecutive spacings between
/// distinct eigenphases, taken over the bands (0, pi) and (-pi, 0).
double harmonic_spread(const SpectrumReport& report);

/// Trace summary with coin fidelity measured against `coin_map` applied to
/// the initial coin at `source`.
TransferTrace transfer_metrics(const std::vector<walk::WalkState>& states, std::size_t source,
                               std::size_t target, const walk::Matrix2c& coin_map);

/// First double step at which the target probability reaches
/// fraction * (maximum over the trace).
int arrival_time(const TransferTrace& trace, double fraction);

struct HorizonRule {
  int margin = 15;

  /// max(ceil(pi / (2 lambda)), N/2) + margin double steps.
  int horizon(std::size_t n_cycle, double lambda) const;
};

struct SweepReport {
  std::vector<double> lambdas;
  std::vector<double> peak_fidelities;
  std::vector<int> peak_times;
  /// Smallest lambda whose peak fidelity drops below 0.9; NaN if none does.
  double detected_transition = 0.0;
};

inline constexpr double kTransitionThreshold = 0.9;

/// Peak transfer probability from |1,R> to vertex N-1 of christandl_program
/// at each lambda (positive, ascending). Points are evaluated in parallel;
/// output order follows the input.
SweepReport lambda_sweep(std::size_t n_cycle, const std::vector<double>& lambdas,
                         HorizonRule rule = {});

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct PopulationReport {
  /// |<eigenvector|initial>|^2, descending.
  std::vector<double> overlaps;

  double top_sum(std::size_t k) const;
  std::size_t support_count(double threshold) const;
};

/// Squared overlaps of the initial state with the orthonormal eigenvectors
/// of a unitary. Throws Error(DimensionMismatch).
PopulationReport eigenstate_population(const ComplexMatrix& u2, const walk::WalkState& initial);

struct GroverReport {
  /// Fraction of eigenvalues within 1e-8 (in phase) of +1 or -1.
  double fraction_pm1 = 0.0;
  /// Mean origin probability over steps 1..steps, starting from the equal
  /// coin superposition at the origin.
  double time_avg_origin_prob = 0.0;
};

/// Grover walk on a side x side torus; side must be even, 2..8.
GroverReport grover_degeneracy(std::size_t side, int steps = 200);

/// A + 2|J| (cos(phi - 2 pi kx / side) + cos(phi - 2 pi ky / side)) for all
/// kx, ky, sorted ascending.
std::vector<double> grid_eigenvalue_formula(std::size_t side, double mod_j, double phi, double a);

/// Periodic side x side grid CTQW with hopping |J| e^{i phi} in +x and +y
/// and diagonal A. Site (x, y) has index x * side + y.
ComplexMatrix grid_hamiltonian(std::size_t side, double mod_j, double phi, double a);

// --- DTQW vs CTQW tracking ---------------------------------------------------
//
// On vertex k (position 2k-1) define phi_s(k) = (|2k-1,R> + s i |2k-1,L>)/sqrt2
// for s = +1 / -1. When edge coins sit near theta = pi/2, U^2 restricted to
// the s sector acts as (s i)(1 - i H_s) with H_+ = -P conj(H) P and
// H_- = -conj(H), P = diag((-1)^(k-1)). Hence after t double steps
//   <phi_+(k)|psi> ~ i^t (-1)^(k-1) conj(c_k),  <phi_-(k)|psi> ~ (-i)^t conj(c_k)
// where c = exp(-i H t tau)|site 1> and tau is the CTQW time per double step.

/// Vertex-sector state phi_s(vertex), vertex 1-based.
walk::WalkState sector_state(std::size_t n_cycle, std::size_t vertex, int sign);

/// Total weight of a state in the s sector.
double sector_weight(const walk::WalkState& state, int sign);

/// Max over t = 0..double_steps and all vertices of the deviation between
/// the DTQW sector amplitudes and the CTQW prediction above.
double sector_tracking_error(const walk::CoinProgram& program, const ctqw::ChainHamiltonian& h,
                             int sign, int double_steps, double time_per_double_step);

/// Large-mass comparison of christandl_program(N, lambda) against
/// christandl_hamiltonian(N/2, 2 lambda), one double step per unit time,
/// starting in phi_+(1).
double large_mass_check(std::size_t n_cycle, double lambda, int double_steps);

/// Weight kept in the + sector at the transfer peak of christandl_program,
/// starting from phi_+(1) and searching 2 ceil(pi / (2 lambda)) double steps.
double plus_sector_retention(std::size_t n_cycle, double lambda);

/// For each delta: converts delta * H, runs floor(total_time / delta) double
/// steps and returns the + sector tracking error against H itself.
std::vector<double> conversion_convergence(const ctqw::ChainHamiltonian& h,
                                           const std::vector<double>& deltas, double total_time);

/// Double-step horizon for the weak-coupling protocol: ceil(8 / epsilon^2).
int weak_coupling_horizon(double epsilon);

}  // namespace qwalk::analysis
