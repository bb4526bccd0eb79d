/*
 * C interface to the qwalk simulation library.
 *
 * Objects are opaque handles created by qw_*_create/qw_*_<protocol> calls and
 * released with the matching qw_*_destroy. Every fallible call returns a
 * qw_status; on failure qw_last_error() describes the problem for the
 * calling thread until the next failing call on that thread.
 *
 * Cycle positions are 0-based; odd positions are chain vertices.
 */
#ifndef QWALK_QWALK_H
#define QWALK_QWALK_H

#include <stddef.h>

#if defined(QWALK_BUILDING_LIBRARY)
#define QWALK_API __attribute__((visibility("default")))
#else
#define QWALK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qw_status {
  QW_OK = 0,
  QW_ERR_INVALID_PARAMETER = 1,
  QW_ERR_NOT_HERMITIAN = 2,
  QW_ERR_NOT_UNITARY = 3,
  QW_ERR_NONSQUARE = 4,
  QW_ERR_DIMENSION_MISMATCH = 5,
  QW_ERR_TOO_LARGE = 6,
  QW_ERR_NUMERICAL = 7,
  QW_ERR_NULL_ARGUMENT = 8,
  QW_ERR_OUT_OF_RANGE = 9,
  QW_ERR_INTERNAL = 10
} qw_status;

typedef struct qw_complex {
  double re;
  double im;
} qw_complex;

typedef struct qw_program qw_program;
typedef struct qw_trace qw_trace;
typedef struct qw_spectrum qw_spectrum;
typedef struct qw_hamiltonian qw_hamiltonian;
typedef struct qw_conversion qw_conversion;

QWALK_API const char* qw_version(void);
QWALK_API const char* qw_last_error(void);
QWALK_API const char* qw_status_name(qw_status status);

/* --- coin programs ------------------------------------------------------- */

QWALK_API qw_status qw_program_christandl(int n_cycle, double lambda, qw_program** out);
/* sender_end_only != 0 places end_axis at position 2 only (axis y at N-2). */
QWALK_API qw_status qw_program_weak_coupling(int n_cycle, double theta, double epsilon,
                                             const double end_axis[3], int sender_end_only,
                                             qw_program** out);
QWALK_API qw_status qw_program_ballistic(int n_cycle, qw_program** out);
/* thetas, axes (3 per position) and phases each hold n_cycle entries. */
QWALK_API qw_status qw_program_create(int n_cycle, const double* thetas, const double* axes,
                                      const double* phases, qw_program** out);
QWALK_API qw_status qw_program_size(const qw_program* program, int* n_cycle);
QWALK_API qw_status qw_program_coin(const qw_program* program, int position, double* theta,
                                    double axis[3], double* phase);
QWALK_API void qw_program_destroy(qw_program* program);

/* --- transfer simulation ------------------------------------------------- */

typedef struct qw_trace_row {
  int t;
  double p_source;
  double p_target;
  double p_rest;
  double coin_fidelity;
} qw_trace_row;

typedef struct qw_trace_summary {
  double peak_fidelity;
  int peak_time;
  double coin_fidelity_at_peak;
} qw_trace_summary;

/*
 * Starts from (alpha|source,R> + beta|source,L>) and records one row per
 * double step. coin_map (row-major 2x2) defines the ideal target coin;
 * NULL means identity.
 */
QWALK_API qw_status qw_simulate(const qw_program* program, int source, int target,
                                qw_complex alpha, qw_complex beta, int double_steps,
                                const qw_complex* coin_map, qw_trace** out);
QWALK_API qw_status qw_trace_length(const qw_trace* trace, size_t* length);
QWALK_API qw_status qw_trace_row_at(const qw_trace* trace, size_t index, qw_trace_row* row);
QWALK_API qw_status qw_trace_get_summary(const qw_trace* trace, qw_trace_summary* summary);
/* First double step whose target probability reaches fraction * max. */
QWALK_API qw_status qw_trace_arrival_time(const qw_trace* trace, double fraction, int* time);
/* Final state, 2 * n_cycle amplitudes indexed 2x + c. */
QWALK_API qw_status qw_trace_final_state(const qw_trace* trace, qw_complex* amplitudes,
                                         size_t capacity);
QWALK_API void qw_trace_destroy(qw_trace* trace);

/* --- spectra ------------------------------------------------------------- */

/* Spectrum of the double-step operator U^2 of a program. */
QWALK_API qw_status qw_spectrum_of_program(const qw_program* program, qw_spectrum** out);
QWALK_API qw_status qw_spectrum_size(const qw_spectrum* spectrum, size_t* count);
QWALK_API qw_status qw_spectrum_phases(const qw_spectrum* spectrum, double* phases,
                                       size_t capacity);
QWALK_API qw_status qw_spectrum_gaps(const qw_spectrum* spectrum, double* gap_at_zero,
                                     double* gap_at_pi);
QWALK_API qw_status qw_spectrum_class_count(const qw_spectrum* spectrum, size_t* count);
/* Writes up to capacity indices of class k; *length receives the class size. */
QWALK_API qw_status qw_spectrum_class(const qw_spectrum* spectrum, size_t k, size_t* indices,
                                      size_t capacity, size_t* length);
QWALK_API qw_status qw_spectrum_harmonic_spread(const qw_spectrum* spectrum, double* spread);
QWALK_API void qw_spectrum_destroy(qw_spectrum* spectrum);

/* Squared overlaps of the initial state with the eigenvectors of U^2,
   descending; overlaps must hold 2 * n_cycle values. */
QWALK_API qw_status qw_eigenstate_population(const qw_program* program, int position,
                                             qw_complex alpha, qw_complex beta,
                                             double* overlaps, size_t capacity);

/* --- lambda sweep -------------------------------------------------------- */

/* lambdas ascending; outputs hold count values; detected_transition is NaN
   when no point drops below 0.9. */
QWALK_API qw_status qw_lambda_sweep(int n_cycle, const double* lambdas, size_t count,
                                    int margin, double* peak_fidelities, int* peak_times,
                                    double* detected_transition);

/* --- chain Hamiltonians and conversion ----------------------------------- */

QWALK_API qw_status qw_hamiltonian_christandl(int n_sites, double lambda, qw_hamiltonian** out);
/* diagonal holds n_sites values, hopping n_sites - 1 values H_{j,j+1}. */
QWALK_API qw_status qw_hamiltonian_create(int n_sites, const double* diagonal,
                                          const qw_complex* hopping, qw_hamiltonian** out);
QWALK_API qw_status qw_hamiltonian_size(const qw_hamiltonian* h, int* n_sites);
QWALK_API qw_status qw_hamiltonian_entries(const qw_hamiltonian* h, double* diagonal,
                                           qw_complex* hopping);
/* |<site|exp(-iHt)|source>|^2 for every site, sites 0-based. */
QWALK_API qw_status qw_ctqw_distribution(const qw_hamiltonian* h, int source, double t,
                                         double* probabilities, size_t capacity);
QWALK_API void qw_hamiltonian_destroy(qw_hamiltonian* h);

QWALK_API qw_status qw_convert(const qw_hamiltonian* h, qw_conversion** out);
/* mass and vector hold n_sites - 1 values, scalar n_sites values. */
QWALK_API qw_status qw_conversion_angles(const qw_conversion* conversion, double* mass,
                                         double* vector_potential, double* scalar);
QWALK_API qw_status qw_conversion_degenerate_count(const qw_conversion* conversion,
                                                   size_t* count);
/* New program handle owned by the caller. */
QWALK_API qw_status qw_conversion_program(const qw_conversion* conversion, qw_program** out);
QWALK_API void qw_conversion_destroy(qw_conversion* conversion);

/* --- 2D Grover walk ------------------------------------------------------ */

QWALK_API qw_status qw_grover(int side, int steps, double* fraction_pm1,
                              double* time_avg_origin_prob);

/* --- spin chain oracle --------------------------------------------------- */

typedef struct qw_oracle_result {
  double fidelity;
  double total_sigma_z;
  qw_complex vacuum_amplitude;
} qw_oracle_result;

/* couplings holds n_spins - 1 values. excitation and ctqw each hold n_spins
   values: the spin-chain <n_j> and |<j|exp(-iHt)|0>|^2 of the matching
   chain (either may be NULL). */
QWALK_API qw_status qw_spin_oracle(const double* couplings, size_t n_couplings,
                                   qw_complex alpha, qw_complex beta, double t,
                                   qw_oracle_result* result, double* excitation, double* ctqw);

#ifdef __cplusplus
}
#endif

#endif /* QWALK_QWALK_H */
