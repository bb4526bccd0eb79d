#include "qwalk/qwalk.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "qwalk/analysis.hpp"
#include "qwalk/ctqw.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/protocols.hpp"
#include "qwalk/walk.hpp"

using qwalk::Complex;

struct qw_program {
  qwalk::walk::CoinProgram program;
};

struct qw_trace {
  qwalk::walk::TransferTrace trace;
};

struct qw_spectrum {
  qwalk::analysis::SpectrumReport report;
};

struct qw_hamiltonian {
  qwalk::ctqw::ChainHamiltonian h;
};

struct qw_conversion {
  qwalk::protocols::ConversionResult result;
};

namespace {

thread_local std::string g_last_error;

qw_status to_status(qwalk::ErrorCode code) {
  using qwalk::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidParameter: return QW_ERR_INVALID_PARAMETER;
    case ErrorCode::NotHermitian: return QW_ERR_NOT_HERMITIAN;
    case ErrorCode::NotUnitary: return QW_ERR_NOT_UNITARY;
    case ErrorCode::Nonsquare: return QW_ERR_NONSQUARE;
    case ErrorCode::DimensionMismatch: return QW_ERR_DIMENSION_MISMATCH;
    case ErrorCode::TooLarge: return QW_ERR_TOO_LARGE;
    case ErrorCode::Numerical: return QW_ERR_NUMERICAL;
  }
  return QW_ERR_INTERNAL;
}

qw_status fail(qw_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
qw_status guarded(F&& body) {
  try {
    return body();
  } catch (const qwalk::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QW_ERR_INTERNAL, "unknown error");
  }
}

#define QW_REQUIRE(ptr)                                                 \
  do {                                                                  \
    if ((ptr) == nullptr) return fail(QW_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

Complex to_cpp(qw_complex z) { return {z.re, z.im}; }
qw_complex to_c(Complex z) { return {z.real(), z.imag()}; }

std::size_t checked_size(int n, const char* what) {
  if (n < 0) throw qwalk::Error(qwalk::ErrorCode::InvalidParameter, std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(n);
}

template <class T, class... Args>
qw_status emit(T** out, Args&&... args) {
  *out = new T{std::forward<Args>(args)...};
  return QW_OK;
}

}  // namespace

extern "C" {

const char* qw_version(void) { return "0.1.0"; }

const char* qw_last_error(void) { return g_last_error.c_str(); }

const char* qw_status_name(qw_status status) {
  switch (status) {
    case QW_OK: return "ok";
    case QW_ERR_INVALID_PARAMETER: return "invalid parameter";
    case QW_ERR_NOT_HERMITIAN: return "not Hermitian";
    case QW_ERR_NOT_UNITARY: return "not unitary";
    case QW_ERR_NONSQUARE: return "non-square matrix";
    case QW_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case QW_ERR_TOO_LARGE: return "problem too large";
    case QW_ERR_NUMERICAL: return "numerical failure";
    case QW_ERR_NULL_ARGUMENT: return "null argument";
    case QW_ERR_OUT_OF_RANGE: return "index out of range";
    case QW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// --- programs ----------------------------------------------------------------

qw_status qw_program_christandl(int n_cycle, double lambda, qw_program** out) {
  QW_REQUIRE(out);
  return guarded([&] {
    return emit(out, qwalk::protocols::christandl_program(checked_size(n_cycle, "n_cycle"), lambda));
  });
}

qw_status qw_program_weak_coupling(int n_cycle, double theta, double epsilon,
                                   const double end_axis[3], int sender_end_only,
                                   qw_program** out) {
  QW_REQUIRE(out);
  QW_REQUIRE(end_axis);
  return guarded([&] {
    using qwalk::protocols::EndAxisPlacement;
    const std::array<double, 3> axis{end_axis[0], end_axis[1], end_axis[2]};
    return emit(out, qwalk::protocols::weak_coupling_program(
                         checked_size(n_cycle, "n_cycle"), theta, epsilon, axis,
                         sender_end_only ? EndAxisPlacement::kSenderEndOnly
                                         : EndAxisPlacement::kBothEnds));
  });
}

qw_status qw_program_ballistic(int n_cycle, qw_program** out) {
  QW_REQUIRE(out);
  return guarded([&] {
    return emit(out, qwalk::protocols::ballistic_program(checked_size(n_cycle, "n_cycle")));
  });
}

qw_status qw_program_create(int n_cycle, const double* thetas, const double* axes,
                            const double* phases, qw_program** out) {
  QW_REQUIRE(thetas);
  QW_REQUIRE(axes);
  QW_REQUIRE(phases);
  QW_REQUIRE(out);
  return guarded([&] {
    const std::size_t n = checked_size(n_cycle, "n_cycle");
    std::vector<qwalk::walk::CoinSpec> specs(n);
    for (std::size_t x = 0; x < n; ++x) {
      specs[x].theta = thetas[x];
      specs[x].axis = {axes[3 * x], axes[3 * x + 1], axes[3 * x + 2]};
      specs[x].phase = phases[x];
    }
    return emit(out, qwalk::walk::CoinProgram(std::move(specs)));
  });
}

qw_status qw_program_size(const qw_program* program, int* n_cycle) {
  QW_REQUIRE(program);
  QW_REQUIRE(n_cycle);
  *n_cycle = static_cast<int>(program->program.n_positions());
  return QW_OK;
}

qw_status qw_program_coin(const qw_program* program, int position, double* theta,
                          double axis[3], double* phase) {
  QW_REQUIRE(program);
  if (position < 0 || static_cast<std::size_t>(position) >= program->program.n_positions()) {
    return fail(QW_ERR_OUT_OF_RANGE, "position outside the cycle");
  }
  const auto& spec = program->program[static_cast<std::size_t>(position)];
  if (theta) *theta = spec.theta;
  if (axis) {
    for (int i = 0; i < 3; ++i) axis[i] = spec.axis[i];
  }
  if (phase) *phase = spec.phase;
  return QW_OK;
}

void qw_program_destroy(qw_program* program) { delete program; }

// --- traces ------------------------------------------------------------------

qw_status qw_simulate(const qw_program* program, int source, int target, qw_complex alpha,
                      qw_complex beta, int double_steps, const qw_complex* coin_map,
                      qw_trace** out) {
  QW_REQUIRE(program);
  QW_REQUIRE(out);
  return guarded([&] {
    const auto& prog = program->program;
    const std::size_t n = prog.n_positions();
    const std::size_t src = checked_size(source, "source");
    const std::size_t dst = checked_size(target, "target");
    qwalk::walk::Matrix2c map = qwalk::walk::Matrix2c::Identity();
    if (coin_map) {
      map << to_cpp(coin_map[0]), to_cpp(coin_map[1]), to_cpp(coin_map[2]), to_cpp(coin_map[3]);
    }
    const auto initial = qwalk::walk::WalkState::localized(n, src, to_cpp(alpha), to_cpp(beta));
    const auto states = qwalk::walk::evolve_states(initial, prog, double_steps);
    return emit(out, qwalk::analysis::transfer_metrics(states, src, dst, map));
  });
}

qw_status qw_trace_length(const qw_trace* trace, size_t* length) {
  QW_REQUIRE(trace);
  QW_REQUIRE(length);
  *length = trace->trace.times.size();
  return QW_OK;
}

qw_status qw_trace_row_at(const qw_trace* trace, size_t index, qw_trace_row* row) {
  QW_REQUIRE(trace);
  QW_REQUIRE(row);
  const auto& t = trace->trace;
  if (index >= t.times.size()) return fail(QW_ERR_OUT_OF_RANGE, "trace row index out of range");
  *row = qw_trace_row{t.times[index], t.p_source[index], t.p_target[index], t.p_rest[index],
                      t.coin_fidelity[index]};
  return QW_OK;
}

qw_status qw_trace_get_summary(const qw_trace* trace, qw_trace_summary* summary) {
  QW_REQUIRE(trace);
  QW_REQUIRE(summary);
  const auto& t = trace->trace;
  *summary = qw_trace_summary{t.peak_fidelity, t.peak_time, t.coin_fidelity_at_peak};
  return QW_OK;
}

qw_status qw_trace_arrival_time(const qw_trace* trace, double fraction, int* time) {
  QW_REQUIRE(trace);
  QW_REQUIRE(time);
  if (!(fraction > 0.0) || fraction > 1.0) return fail(QW_ERR_INVALID_PARAMETER, "fraction must lie in (0, 1]");
  *time = qwalk::analysis::arrival_time(trace->trace, fraction);
  return QW_OK;
}

qw_status qw_trace_final_state(const qw_trace* trace, qw_complex* amplitudes, size_t capacity) {
  QW_REQUIRE(trace);
  QW_REQUIRE(amplitudes);
  const auto& psi = trace->trace.final_state;
  if (capacity < static_cast<size_t>(psi.size())) return fail(QW_ERR_OUT_OF_RANGE, "buffer too small for final state");
  for (Eigen::Index i = 0; i < psi.size(); ++i) amplitudes[i] = to_c(psi(i));
  return QW_OK;
}

void qw_trace_destroy(qw_trace* trace) { delete trace; }

// --- spectra -----------------------------------------------------------------

qw_status qw_spectrum_of_program(const qw_program* program, qw_spectrum** out) {
  QW_REQUIRE(program);
  QW_REQUIRE(out);
  return guarded([&] {
    const qwalk::ComplexMatrix u = qwalk::walk::build_step_operator(program->program);
    return emit(out, qwalk::analysis::spectrum_report(u * u));
  });
}

qw_status qw_spectrum_size(const qw_spectrum* spectrum, size_t* count) {
  QW_REQUIRE(spectrum);
  QW_REQUIRE(count);
  *count = spectrum->report.phases.size();
  return QW_OK;
}

qw_status qw_spectrum_phases(const qw_spectrum* spectrum, double* phases, size_t capacity) {
  QW_REQUIRE(spectrum);
  QW_REQUIRE(phases);
  const auto& p = spectrum->report.phases;
  if (capacity < p.size()) return fail(QW_ERR_OUT_OF_RANGE, "buffer too small for phases");
  std::copy(p.begin(), p.end(), phases);
  return QW_OK;
}

qw_status qw_spectrum_gaps(const qw_spectrum* spectrum, double* gap_at_zero, double* gap_at_pi) {
  QW_REQUIRE(spectrum);
  if (gap_at_zero) *gap_at_zero = spectrum->report.gap_at_zero;
  if (gap_at_pi) *gap_at_pi = spectrum->report.gap_at_pi;
  return QW_OK;
}

qw_status qw_spectrum_class_count(const qw_spectrum* spectrum, size_t* count) {
  QW_REQUIRE(spectrum);
  QW_REQUIRE(count);
  *count = spectrum->report.degeneracy_classes.size();
  return QW_OK;
}

qw_status qw_spectrum_class(const qw_spectrum* spectrum, size_t k, size_t* indices,
                            size_t capacity, size_t* length) {
  QW_REQUIRE(spectrum);
  QW_REQUIRE(length);
  const auto& classes = spectrum->report.degeneracy_classes;
  if (k >= classes.size()) return fail(QW_ERR_OUT_OF_RANGE, "class index out of range");
  *length = classes[k].size();
  if (indices) {
    for (size_t i = 0; i < classes[k].size() && i < capacity; ++i) indices[i] = classes[k][i];
  }
  return QW_OK;
}

qw_status qw_spectrum_harmonic_spread(const qw_spectrum* spectrum, double* spread) {
  QW_REQUIRE(spectrum);
  QW_REQUIRE(spread);
  *spread = qwalk::analysis::harmonic_spread(spectrum->report);
  return QW_OK;
}

void qw_spectrum_destroy(qw_spectrum* spectrum) { delete spectrum; }

qw_status qw_eigenstate_population(const qw_program* program, int position, qw_complex alpha,
                                   qw_complex beta, double* overlaps, size_t capacity) {
  QW_REQUIRE(program);
  QW_REQUIRE(overlaps);
  return guarded([&] {
    const auto& prog = program->program;
    if (capacity < 2 * prog.n_positions()) return fail(QW_ERR_OUT_OF_RANGE, "buffer too small for overlaps");
    const auto initial = qwalk::walk::WalkState::localized(
        prog.n_positions(), checked_size(position, "position"), to_cpp(alpha), to_cpp(beta));
    const qwalk::ComplexMatrix u = qwalk::walk::build_step_operator(prog);
    const auto report = qwalk::analysis::eigenstate_population(u * u, initial);
    std::copy(report.overlaps.begin(), report.overlaps.end(), overlaps);
    return QW_OK;
  });
}

// --- sweep -------------------------------------------------------------------

qw_status qw_lambda_sweep(int n_cycle, const double* lambdas, size_t count, int margin,
                          double* peak_fidelities, int* peak_times, double* detected_transition) {
  QW_REQUIRE(lambdas);
  return guarded([&] {
    if (margin < 0) return fail(QW_ERR_INVALID_PARAMETER, "margin must be non-negative");
    const std::vector<double> grid(lambdas, lambdas + count);
    const auto report = qwalk::analysis::lambda_sweep(checked_size(n_cycle, "n_cycle"), grid,
                                                      qwalk::analysis::HorizonRule{margin});
    for (size_t i = 0; i < count; ++i) {
      if (peak_fidelities) peak_fidelities[i] = report.peak_fidelities[i];
      if (peak_times) peak_times[i] = report.peak_times[i];
    }
    if (detected_transition) *detected_transition = report.detected_transition;
    return QW_OK;
  });
}

// --- Hamiltonians ------------------------------------------------------------

qw_status qw_hamiltonian_christandl(int n_sites, double lambda, qw_hamiltonian** out) {
  QW_REQUIRE(out);
  return guarded([&] {
    return emit(out, qwalk::ctqw::christandl_hamiltonian(checked_size(n_sites, "n_sites"), lambda));
  });
}

qw_status qw_hamiltonian_create(int n_sites, const double* diagonal, const qw_complex* hopping,
                                qw_hamiltonian** out) {
  QW_REQUIRE(diagonal);
  QW_REQUIRE(out);
  return guarded([&] {
    const std::size_t n = checked_size(n_sites, "n_sites");
    if (n < 2) return fail(QW_ERR_INVALID_PARAMETER, "a chain needs at least two sites");
    if (hopping == nullptr) return fail(QW_ERR_NULL_ARGUMENT, "hopping is NULL");
    std::vector<Complex> hop(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) hop[j] = to_cpp(hopping[j]);
    return emit(out, qwalk::ctqw::ChainHamiltonian(std::vector<double>(diagonal, diagonal + n),
                                                   std::move(hop)));
  });
}

qw_status qw_hamiltonian_size(const qw_hamiltonian* h, int* n_sites) {
  QW_REQUIRE(h);
  QW_REQUIRE(n_sites);
  *n_sites = static_cast<int>(h->h.n_sites());
  return QW_OK;
}

qw_status qw_hamiltonian_entries(const qw_hamiltonian* h, double* diagonal, qw_complex* hopping) {
  QW_REQUIRE(h);
  if (diagonal) std::copy(h->h.diagonal().begin(), h->h.diagonal().end(), diagonal);
  if (hopping) {
    for (std::size_t j = 0; j < h->h.hopping().size(); ++j) hopping[j] = to_c(h->h.hopping()[j]);
  }
  return QW_OK;
}

qw_status qw_ctqw_distribution(const qw_hamiltonian* h, int source, double t,
                               double* probabilities, size_t capacity) {
  QW_REQUIRE(h);
  QW_REQUIRE(probabilities);
  return guarded([&] {
    const std::size_t n = h->h.n_sites();
    if (capacity < n) return fail(QW_ERR_OUT_OF_RANGE, "buffer too small for distribution");
    const auto psi = qwalk::ctqw::ctqw_evolve(
        h->h, qwalk::ctqw::site_state(n, checked_size(source, "source")), t);
    for (std::size_t j = 0; j < n; ++j) probabilities[j] = std::norm(psi(static_cast<Eigen::Index>(j)));
    return QW_OK;
  });
}

void qw_hamiltonian_destroy(qw_hamiltonian* h) { delete h; }

qw_status qw_convert(const qw_hamiltonian* h, qw_conversion** out) {
  QW_REQUIRE(h);
  QW_REQUIRE(out);
  return guarded([&] { return emit(out, qwalk::protocols::ctqw_to_dtqw(h->h)); });
}

qw_status qw_conversion_angles(const qw_conversion* conversion, double* mass,
                               double* vector_potential, double* scalar) {
  QW_REQUIRE(conversion);
  const auto& r = conversion->result;
  if (mass) std::copy(r.mass_angles.begin(), r.mass_angles.end(), mass);
  if (vector_potential) std::copy(r.vector_potential_angles.begin(), r.vector_potential_angles.end(), vector_potential);
  if (scalar) std::copy(r.scalar_angles.begin(), r.scalar_angles.end(), scalar);
  return QW_OK;
}

qw_status qw_conversion_degenerate_count(const qw_conversion* conversion, size_t* count) {
  QW_REQUIRE(conversion);
  QW_REQUIRE(count);
  *count = conversion->result.degenerate_bonds.size();
  return QW_OK;
}

qw_status qw_conversion_program(const qw_conversion* conversion, qw_program** out) {
  QW_REQUIRE(conversion);
  QW_REQUIRE(out);
  return guarded([&] { return emit(out, conversion->result.program); });
}

void qw_conversion_destroy(qw_conversion* conversion) { delete conversion; }

// --- Grover & oracle ---------------------------------------------------------

qw_status qw_grover(int side, int steps, double* fraction_pm1, double* time_avg_origin_prob) {
  return guarded([&] {
    const auto report = qwalk::analysis::grover_degeneracy(checked_size(side, "side"), steps);
    if (fraction_pm1) *fraction_pm1 = report.fraction_pm1;
    if (time_avg_origin_prob) *time_avg_origin_prob = report.time_avg_origin_prob;
    return QW_OK;
  });
}

qw_status qw_spin_oracle(const double* couplings, size_t n_couplings, qw_complex alpha,
                         qw_complex beta, double t, qw_oracle_result* result, double* excitation,
                         double* ctqw) {
  QW_REQUIRE(couplings);
  QW_REQUIRE(result);
  return guarded([&] {
    qwalk::ctqw::SpinChainSystem system{std::vector<double>(couplings, couplings + n_couplings)};
    const auto r = qwalk::ctqw::spin_oracle_evolve(system, to_cpp(alpha), to_cpp(beta), t);
    *result = qw_oracle_result{r.fidelity, r.total_sigma_z, to_c(r.vacuum_amplitude)};
    const std::size_t n = system.n_spins();
    if (excitation) std::copy(r.excitation_distribution.begin(), r.excitation_distribution.end(), excitation);
    if (ctqw) {
      const auto psi = qwalk::ctqw::ctqw_evolve(qwalk::ctqw::chain_for(system),
                                                qwalk::ctqw::site_state(n, 0), t);
      for (std::size_t j = 0; j < n; ++j) ctqw[j] = std::norm(psi(static_cast<Eigen::Index>(j)));
    }
    return QW_OK;
  });
}

}  // extern "C"
