#include "qwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "qwalk/errors.hpp"
#include "qwalk/protocols.hpp"

namespace qwalk::analysis {

using numerics::kPi;

SpectrumReport spectrum_from_phases(std::vector<double> phases) {
  for (double& p : phases) p = numerics::principal_phase(p);
  std::stable_sort(phases.begin(), phases.end());

  SpectrumReport report;
  report.phases = phases;
  if (phases.empty()) return report;

  std::vector<std::vector<std::size_t>> classes;
  classes.push_back({0});
  for (std::size_t i = 1; i < phases.size(); ++i) {
    if (numerics::circular_distance(phases[i], phases[i - 1]) <= numerics::kDegeneracyTol) {
      classes.back().push_back(i);
    } else {
      classes.push_back({i});
    }
  }
  // A class straddling the branch cut appears at both ends.
  if (classes.size() > 1 &&
      numerics::circular_distance(phases.back(), phases.front()) <= numerics::kDegeneracyTol) {
    auto& last = classes.back();
    last.insert(last.end(), classes.front().begin(), classes.front().end());
    classes.erase(classes.begin());
  }
  report.degeneracy_classes = std::move(classes);
  report.gap_at_zero = gap_containing(phases, 0.0);
  report.gap_at_pi = gap_containing(phases, kPi);
  return report;
}

double gap_containing(const std::vector<double>& sorted_phases, double angle) {
  const std::size_t m = sorted_phases.size();
  if (m == 0) return 2.0 * kPi;
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double start = sorted_phases[i];
    const double end = (i + 1 < m) ? sorted_phases[i + 1] : sorted_phases[0] + 2.0 * kPi;
    const double offset = std::fmod(std::fmod(angle - start, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    const double where = start + offset;
    if (offset > 0.0 && where < end) best = std::max(best, end - start);
  }
  return best;
}

SpectrumReport spectrum_report(const ComplexMatrix& u2) {
  return spectrum_from_phases(numerics::eigenphases(numerics::unitary_eigendecompose(u2)));
}

double harmonic_spread(const SpectrumReport& report) {
  std::vector<double> upper;
  std::vector<double> lower;
  for (const auto& cls : report.degeneracy_classes) {
    double mean = 0.0;
    for (std::size_t i : cls) mean += report.phases[i];
    mean /= static_cast<double>(cls.size());
    if (mean > 0.0 && mean < kPi) upper.push_back(mean);
    if (mean < 0.0 && mean > -kPi) lower.push_back(mean);
  }
  double worst = 0.0;
  for (auto* band : {&upper, &lower}) {
    std::sort(band->begin(), band->end());
    if (band->size() < 3) continue;
    std::vector<double> spacing(band->size() - 1);
    for (std::size_t i = 0; i + 1 < band->size(); ++i) spacing[i] = (*band)[i + 1] - (*band)[i];
    const double mean = std::accumulate(spacing.begin(), spacing.end(), 0.0) / spacing.size();
    double var = 0.0;
    for (double s : spacing) var += (s - mean) * (s - mean);
    var /= static_cast<double>(spacing.size());
    worst = std::max(worst, std::sqrt(var) / mean);
  }
  return worst;
}

TransferTrace transfer_metrics(const std::vector<walk::WalkState>& states, std::size_t source,
                               std::size_t target, const walk::Matrix2c& coin_map) {
  return walk::summarize_trace(states, source, target, coin_map);
}

int arrival_time(const TransferTrace& trace, double fraction) {
  if (trace.p_target.empty()) return -1;
  const double best = *std::max_element(trace.p_target.begin(), trace.p_target.end());
  for (std::size_t t = 0; t < trace.p_target.size(); ++t) {
    if (trace.p_target[t] >= fraction * best) return trace.times[t];
  }
  return -1;
}

int HorizonRule::horizon(std::size_t n_cycle, double lambda) const {
  const int transfer = static_cast<int>(std::ceil(kPi / (2.0 * lambda)));
  return std::max(transfer, static_cast<int>(n_cycle / 2)) + margin;
}

SweepReport lambda_sweep(std::size_t n_cycle, const std::vector<double>& lambdas,
                         HorizonRule rule) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || (i > 0 && lambdas[i] <= lambdas[i - 1])) {
      throw Error(ErrorCode::InvalidParameter, "lambda_sweep: lambdas must be positive and ascending");
    }
  }
  auto point = [n_cycle, rule](double lambda) {
    const auto program = protocols::christandl_program(n_cycle, lambda);
    const auto initial = walk::WalkState::localized(n_cycle, 1, 1.0, 0.0);
    return walk::evolve(initial, program, rule.horizon(n_cycle, lambda), 1, n_cycle - 1);
  };
  std::vector<std::future<TransferTrace>> jobs;
  jobs.reserve(lambdas.size());
  for (double lambda : lambdas) jobs.push_back(std::async(std::launch::async, point, lambda));

  SweepReport report;
  report.lambdas = lambdas;
  report.detected_transition = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const TransferTrace trace = jobs[i].get();
    report.peak_fidelities.push_back(trace.peak_fidelity);
    report.peak_times.push_back(trace.peak_time);
    if (std::isnan(report.detected_transition) && trace.peak_fidelity < kTransitionThreshold) {
      report.detected_transition = lambdas[i];
    }
  }
  return report;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw Error(ErrorCode::InvalidParameter, "log_spaced: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double PopulationReport::top_sum(std::size_t k) const {
  k = std::min(k, overlaps.size());
  return std::accumulate(overlaps.begin(), overlaps.begin() + static_cast<long>(k), 0.0);
}

std::size_t PopulationReport::support_count(double threshold) const {
  return static_cast<std::size_t>(
      std::count_if(overlaps.begin(), overlaps.end(), [&](double p) { return p >= threshold; }));
}

PopulationReport eigenstate_population(const ComplexMatrix& u2, const walk::WalkState& initial) {
  if (u2.cols() != initial.amplitudes().size()) {
    throw Error(ErrorCode::DimensionMismatch, "eigenstate_population: operator and state sizes differ");
  }
  const auto system = numerics::unitary_eigendecompose(u2);
  const ComplexVector coeffs = system.vectors.adjoint() * initial.amplitudes();
  PopulationReport report;
  report.overlaps.resize(static_cast<std::size_t>(coeffs.size()));
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) report.overlaps[i] = std::norm(coeffs(i));
  std::sort(report.overlaps.begin(), report.overlaps.end(), std::greater<>());
  return report;
}

GroverReport grover_degeneracy(std::size_t side, int steps) {
  if (side < 2 || side > 8 || side % 2 != 0) {
    throw Error(ErrorCode::InvalidParameter, "grover_degeneracy: side must be even and in [2, 8]");
  }
  if (steps < 1) throw Error(ErrorCode::InvalidParameter, "grover_degeneracy: steps must be >= 1");
  const ComplexMatrix u = walk::build_torus_step(side, walk::grover_coin());

  const auto phases = numerics::eigenphases(numerics::unitary_eigendecompose(u));
  std::size_t pm1 = 0;
  for (double p : phases) {
    if (numerics::circular_distance(p, 0.0) <= numerics::kDegeneracyTol ||
        numerics::circular_distance(p, kPi) <= numerics::kDegeneracyTol) {
      ++pm1;
    }
  }

  auto state = walk::TorusWalkState::localized(side, 0, 0, Eigen::Vector4cd::Constant(0.5));
  double accumulated = 0.0;
  for (int t = 0; t < steps; ++t) {
    state = state.advanced(u);
    accumulated += state.site_probability(0, 0);
  }
  return GroverReport{static_cast<double>(pm1) / static_cast<double>(phases.size()),
                      accumulated / static_cast<double>(steps)};
}

std::vector<double> grid_eigenvalue_formula(std::size_t side, double mod_j, double phi, double a) {
  if (side < 2) throw Error(ErrorCode::InvalidParameter, "grid_eigenvalue_formula: side must be >= 2");
  std::vector<double> out;
  out.reserve(side * side);
  const double n = static_cast<double>(side);
  for (std::size_t kx = 0; kx < side; ++kx) {
    for (std::size_t ky = 0; ky < side; ++ky) {
      out.push_back(a + 2.0 * mod_j *
                            (std::cos(phi - 2.0 * kPi * static_cast<double>(kx) / n) +
                             std::cos(phi - 2.0 * kPi * static_cast<double>(ky) / n)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ComplexMatrix grid_hamiltonian(std::size_t side, double mod_j, double phi, double a) {
  if (side < 2) throw Error(ErrorCode::InvalidParameter, "grid_hamiltonian: side must be >= 2");
  const auto dim = static_cast<Eigen::Index>(side * side);
  const Complex hop = std::polar(mod_j, phi);
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  auto site = [side](std::size_t x, std::size_t y) { return static_cast<Eigen::Index>(x * side + y); };
  for (std::size_t x = 0; x < side; ++x) {
    for (std::size_t y = 0; y < side; ++y) {
      const auto here = site(x, y);
      h(here, here) += a;
      const auto east = site((x + 1) % side, y);
      const auto north = site(x, (y + 1) % side);
      h(east, here) += hop;
      h(here, east) += std::conj(hop);
      h(north, here) += hop;
      h(here, north) += std::conj(hop);
    }
  }
  return h;
}

walk::WalkState sector_state(std::size_t n_cycle, std::size_t vertex, int sign) {
  if (vertex < 1 || 2 * vertex - 1 >= n_cycle) {
    throw Error(ErrorCode::InvalidParameter, "sector_state: vertex outside the chain");
  }
  const double r = 1.0 / std::sqrt(2.0);
  return walk::WalkState::localized(n_cycle, 2 * vertex - 1, r, Complex(0.0, sign * r));
}

namespace {

Complex sector_amplitude(const walk::WalkState& state, std::size_t vertex, int sign) {
  const std::size_t x = 2 * vertex - 1;
  // <phi_s| = (<R| - s i <L|)/sqrt2
  return (state.amplitude(x, walk::kRight) -
          Complex(0.0, sign) * state.amplitude(x, walk::kLeft)) /
         std::sqrt(2.0);
}

}  // namespace

double sector_weight(const walk::WalkState& state, int sign) {
  double w = 0.0;
  for (std::size_t k = 1; 2 * k - 1 < state.n_positions(); ++k) {
    w += std::norm(sector_amplitude(state, k, sign));
  }
  return w;
}

double sector_tracking_error(const walk::CoinProgram& program, const ctqw::ChainHamiltonian& h,
                             int sign, int double_steps, double time_per_double_step) {
  const std::size_t n_cycle = program.n_positions();
  const std::size_t n_sites = h.n_sites();
  if (2 * n_sites != n_cycle) {
    throw Error(ErrorCode::DimensionMismatch, "sector_tracking_error: cycle must hold 2 x sites positions");
  }
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidParameter, "sector_tracking_error: sign must be +1 or -1");

  const numerics::HermitianPropagator propagator(h.matrix());
  const ComplexVector start = ctqw::site_state(n_sites, 0);
  walk::WalkState state = sector_state(n_cycle, 1, sign);
  double worst = 0.0;
  Complex frame = 1.0;
  const Complex frame_step(0.0, static_cast<double>(sign));
  for (int t = 0; t <= double_steps; ++t) {
    const ComplexVector c = propagator.evolve(start, t * time_per_double_step);
    for (std::size_t k = 1; k <= n_sites; ++k) {
      Complex expected = frame * std::conj(c(static_cast<Eigen::Index>(k - 1)));
      if (sign == 1 && (k - 1) % 2 == 1) expected = -expected;
      worst = std::max(worst, std::abs(sector_amplitude(state, k, sign) - expected));
    }
    state = walk::double_step(program, state);
    frame *= frame_step;
  }
  return worst;
}

double large_mass_check(std::size_t n_cycle, double lambda, int double_steps) {
  return sector_tracking_error(protocols::christandl_program(n_cycle, lambda),
                               ctqw::christandl_hamiltonian(n_cycle / 2, 2.0 * lambda), 1,
                               double_steps, 1.0);
}

double plus_sector_retention(std::size_t n_cycle, double lambda) {
  const auto program = protocols::christandl_program(n_cycle, lambda);
  const int horizon = 2 * static_cast<int>(std::ceil(kPi / (2.0 * lambda)));
  const auto states = walk::evolve_states(sector_state(n_cycle, 1, 1), program, horizon);
  const auto trace = walk::summarize_trace(states, 1, n_cycle - 1, walk::Matrix2c::Identity());
  return sector_weight(states[static_cast<std::size_t>(trace.peak_time)], 1);
}

std::vector<double> conversion_convergence(const ctqw::ChainHamiltonian& h,
                                           const std::vector<double>& deltas, double total_time) {
  std::vector<double> errors;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidParameter, "conversion_convergence: delta must be positive");
    const auto conversion = protocols::ctqw_to_dtqw(h.scaled(delta));
    const int steps = static_cast<int>(std::floor(total_time / delta));
    errors.push_back(sector_tracking_error(conversion.program, h, 1, steps, delta));
  }
  return errors;
}

int weak_coupling_horizon(double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidParameter, "weak_coupling_horizon: epsilon must be positive");
  return static_cast<int>(std::ceil(8.0 / (epsilon * epsilon)));
}

}  // namespace qwalk::analysis
