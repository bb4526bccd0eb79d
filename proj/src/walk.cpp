#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk::walk {

namespace {

constexpr double kStateNormTol = 1e-10;
constexpr double kPeakTieTol = 1e-12;

void require_unit_norm(double norm, const char* what) {
  if (!std::isfinite(norm) || std::abs(norm * norm - 1.0) > kStateNormTol) {
    std::ostringstream msg;
    msg << what << ": state norm^2 = " << norm * norm << ", expected 1";
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
}

}  // namespace

void CoinSpec::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(phase)) {
    throw Error(ErrorCode::InvalidParameter, "CoinSpec: theta and phase must be finite");
  }
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "CoinSpec: rotation axis must be a unit vector, |n| = " << norm;
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
}

Matrix2c pauli_x() {
  Matrix2c m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix2c pauli_y() {
  Matrix2c m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Matrix2c pauli_z() {
  Matrix2c m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix2c coin_unitary(const CoinSpec& spec) {
  spec.validate();
  // exp(i theta n.sigma) = cos(theta) I + i sin(theta) n.sigma
  const double c = std::cos(spec.theta);
  const double s = std::sin(spec.theta);
  const auto& n = spec.axis;
  const Complex i_s(0.0, s);
  Matrix2c m;
  m(0, 0) = c + i_s * n[2];
  m(1, 1) = c - i_s * n[2];
  m(0, 1) = i_s * Complex(n[0], -n[1]);
  m(1, 0) = i_s * Complex(n[0], n[1]);
  return std::exp(Complex(0.0, spec.phase)) * m;
}

CoinProgram::CoinProgram(std::vector<CoinSpec> specs) : specs_(std::move(specs)) {
  const std::size_t n = specs_.size();
  if (n < 4 || n % 2 != 0) {
    std::ostringstream msg;
    msg << "CoinProgram: cycle length must be even and >= 4, got " << n;
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
  coins_.reserve(n);
  for (const auto& spec : specs_) coins_.push_back(coin_unitary(spec));
}

WalkState WalkState::localized(std::size_t n_positions, std::size_t position, Complex right,
                               Complex left) {
  if (n_positions < 2 || position >= n_positions) {
    throw Error(ErrorCode::InvalidParameter, "WalkState: position outside the cycle");
  }
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(2 * n_positions));
  amps(index(position, kRight)) = right;
  amps(index(position, kLeft)) = left;
  require_unit_norm(amps.norm(), "WalkState::localized");
  return WalkState(std::move(amps));
}

WalkState WalkState::from_amplitudes(ComplexVector amplitudes) {
  if (amplitudes.size() < 4 || amplitudes.size() % 2 != 0) {
    throw Error(ErrorCode::InvalidParameter, "WalkState: amplitude count must be even");
  }
  if (!amplitudes.allFinite()) {
    throw Error(ErrorCode::InvalidParameter, "WalkState: non-finite amplitude");
  }
  require_unit_norm(amplitudes.norm(), "WalkState::from_amplitudes");
  return WalkState(std::move(amplitudes));
}

Eigen::Vector2cd WalkState::coin_at(std::size_t position) const {
  return Eigen::Vector2cd(amplitude(position, kRight), amplitude(position, kLeft));
}

double WalkState::position_probability(std::size_t position) const {
  return std::norm(amplitude(position, kRight)) + std::norm(amplitude(position, kLeft));
}

std::vector<double> WalkState::position_distribution() const {
  std::vector<double> out(n_positions());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = position_probability(x);
  return out;
}

ComplexMatrix build_step_operator(const CoinProgram& program) {
  const std::size_t n = program.n_positions();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (std::size_t x = 0; x < n; ++x) {
    const Matrix2c& coin = program.coins()[x];
    const std::size_t right = (x + 1) % n;
    const std::size_t left = (x + n - 1) % n;
    for (int c = 0; c < 2; ++c) {
      const auto col = WalkState::index(x, c);
      u(WalkState::index(right, kRight), col) += coin(kRight, c);
      u(WalkState::index(left, kLeft), col) += coin(kLeft, c);
    }
  }
  return u;
}

WalkState apply_double_step(const WalkState& state, const ComplexMatrix& step_operator) {
  if (step_operator.rows() != step_operator.cols() ||
      step_operator.cols() != state.amplitudes().size()) {
    std::ostringstream msg;
    msg << "apply_double_step: operator " << step_operator.rows() << "x" << step_operator.cols()
        << " does not act on a state of dimension " << state.amplitudes().size();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  ComplexVector once = step_operator * state.amplitudes();
  return WalkState(step_operator * once);
}

WalkState step(const CoinProgram& program, const WalkState& state) {
  const std::size_t n = program.n_positions();
  if (state.n_positions() != n) {
    throw Error(ErrorCode::DimensionMismatch, "step: program and state sizes differ");
  }
  const ComplexVector& in = state.amplitudes();
  ComplexVector out(in.size());
  for (std::size_t x = 0; x < n; ++x) {
    const Matrix2c& coin = program.coins()[x];
    const Complex r = in(WalkState::index(x, kRight));
    const Complex l = in(WalkState::index(x, kLeft));
    out(WalkState::index((x + 1) % n, kRight)) = coin(0, 0) * r + coin(0, 1) * l;
    out(WalkState::index((x + n - 1) % n, kLeft)) = coin(1, 0) * r + coin(1, 1) * l;
  }
  return WalkState(std::move(out));
}

WalkState double_step(const CoinProgram& program, const WalkState& state) {
  return step(program, step(program, state));
}

std::vector<WalkState> evolve_states(const WalkState& initial, const CoinProgram& program,
                                     int double_steps) {
  if (double_steps < 0) {
    throw Error(ErrorCode::InvalidParameter, "evolve: double_steps must be >= 0");
  }
  if (initial.n_positions() != program.n_positions()) {
    throw Error(ErrorCode::DimensionMismatch, "evolve: program and state sizes differ");
  }
  std::vector<WalkState> states;
  states.reserve(static_cast<std::size_t>(double_steps) + 1);
  states.push_back(initial);
  for (int t = 0; t < double_steps; ++t) states.push_back(double_step(program, states.back()));
  return states;
}

TransferTrace summarize_trace(const std::vector<WalkState>& states, std::size_t source,
                              std::size_t target, const Matrix2c& coin_map) {
  if (states.empty()) throw Error(ErrorCode::InvalidParameter, "summarize_trace: no states");
  const std::size_t n = states.front().n_positions();
  if (source >= n || target >= n) {
    throw Error(ErrorCode::InvalidParameter, "summarize_trace: source/target outside the cycle");
  }

  Eigen::Vector2cd initial_coin = states.front().coin_at(source);
  const double coin_norm = initial_coin.norm();
  Eigen::Vector2cd ideal_coin = Eigen::Vector2cd::Zero();
  if (coin_norm > 0.0) ideal_coin = coin_map * (initial_coin / coin_norm);

  TransferTrace trace;
  const std::size_t count = states.size();
  trace.times.reserve(count);
  trace.p_source.reserve(count);
  trace.p_target.reserve(count);
  trace.p_rest.reserve(count);
  trace.coin_fidelity.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    const WalkState& s = states[t];
    if (s.n_positions() != n) throw Error(ErrorCode::DimensionMismatch, "summarize_trace: mixed sizes");
    double rest = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (x != source && x != target) rest += s.position_probability(x);
    }
    trace.times.push_back(static_cast<int>(t));
    trace.p_source.push_back(s.position_probability(source));
    trace.p_target.push_back(source == target ? 0.0 : s.position_probability(target));
    trace.p_rest.push_back(rest);
    trace.coin_fidelity.push_back(std::norm(ideal_coin.dot(s.coin_at(target))));
  }

  const double best = *std::max_element(trace.p_target.begin(), trace.p_target.end());
  for (std::size_t t = 0; t < count; ++t) {
    if (trace.p_target[t] >= best - kPeakTieTol) {
      trace.peak_time = static_cast<int>(t);
      break;
    }
  }
  trace.peak_fidelity = trace.p_target[static_cast<std::size_t>(trace.peak_time)];
  trace.coin_fidelity_at_peak = trace.coin_fidelity[static_cast<std::size_t>(trace.peak_time)];
  trace.final_state = states.back().amplitudes();
  return trace;
}

TransferTrace evolve(const WalkState& initial, const CoinProgram& program, int double_steps,
                     std::size_t source, std::size_t target) {
  return summarize_trace(evolve_states(initial, program, double_steps), source, target,
                         Matrix2c::Identity());
}

// --- torus -------------------------------------------------------------------

TorusWalkState TorusWalkState::localized(std::size_t side, std::size_t x, std::size_t y,
                                         const Eigen::Vector4cd& coin) {
  if (side < 2 || x >= side || y >= side) {
    throw Error(ErrorCode::InvalidParameter, "TorusWalkState: site outside the torus");
  }
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(4 * side * side));
  for (int c = 0; c < 4; ++c) amps(index(side, x, y, c)) = coin(c);
  require_unit_norm(amps.norm(), "TorusWalkState::localized");
  return TorusWalkState(side, std::move(amps));
}

TorusWalkState TorusWalkState::from_amplitudes(std::size_t side, ComplexVector amplitudes) {
  if (side < 2 || amplitudes.size() != static_cast<Eigen::Index>(4 * side * side)) {
    throw Error(ErrorCode::DimensionMismatch, "TorusWalkState: amplitude count must be 4 side^2");
  }
  require_unit_norm(amplitudes.norm(), "TorusWalkState::from_amplitudes");
  return TorusWalkState(side, std::move(amplitudes));
}

double TorusWalkState::site_probability(std::size_t x, std::size_t y) const {
  double p = 0.0;
  for (int c = 0; c < 4; ++c) p += std::norm(amplitudes_(index(side_, x, y, c)));
  return p;
}

TorusWalkState TorusWalkState::advanced(const ComplexMatrix& step_operator) const {
  if (step_operator.cols() != amplitudes_.size() || step_operator.rows() != amplitudes_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "TorusWalkState: operator size mismatch");
  }
  return TorusWalkState(side_, step_operator * amplitudes_);
}

ComplexMatrix grover_coin() {
  ComplexMatrix g = ComplexMatrix::Constant(4, 4, Complex(0.5, 0.0));
  g.diagonal().setConstant(Complex(-0.5, 0.0));
  return g;
}

ComplexMatrix build_torus_step(std::size_t side, const ComplexMatrix& coin4) {
  if (side < 2) throw Error(ErrorCode::InvalidParameter, "build_torus_step: side must be >= 2");
  if (coin4.rows() != 4 || coin4.cols() != 4) {
    throw Error(ErrorCode::Nonsquare, "build_torus_step: coin must be 4x4");
  }
  if (numerics::unitarity_residual(coin4) > 1e-12) {
    throw Error(ErrorCode::NotUnitary, "build_torus_step: coin is not unitary");
  }
  const auto dim = static_cast<Eigen::Index>(4 * side * side);
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (std::size_t x = 0; x < side; ++x) {
    for (std::size_t y = 0; y < side; ++y) {
      const std::size_t xs[4] = {(x + 1) % side, (x + side - 1) % side, x, x};
      const std::size_t ys[4] = {y, y, (y + 1) % side, (y + side - 1) % side};
      for (int c = 0; c < 4; ++c) {
        const auto col = TorusWalkState::index(side, x, y, c);
        for (int out = 0; out < 4; ++out) {
          u(TorusWalkState::index(side, xs[out], ys[out], out), col) += coin4(out, c);
        }
      }
    }
  }
  return u;
}

}  // namespace qwalk::walk
