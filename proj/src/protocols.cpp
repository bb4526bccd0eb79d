#include "qwalk/protocols.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk::protocols {

using numerics::kPi;
using walk::CoinProgram;
using walk::CoinSpec;

namespace {

void require_cycle(std::size_t n_cycle, std::size_t minimum, const char* what) {
  if (n_cycle < minimum || n_cycle % 2 != 0) {
    std::ostringstream msg;
    msg << what << ": cycle length must be even and >= " << minimum << ", got " << n_cycle;
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
}

CoinSpec about(const std::array<double, 3>& axis, double theta) {
  CoinSpec spec;
  spec.theta = theta;
  spec.axis = axis;
  return spec;
}

}  // namespace

CoinSpec reversing_coin() { return about(kAxisY, kPi / 2.0); }

double christandl_edge_angle(std::size_t n_cycle, double lambda, std::size_t k) {
  const double half = static_cast<double>(n_cycle / 2);
  const double gamma = std::sqrt(static_cast<double>(k) * (half - static_cast<double>(k)));
  return std::atan(1.0 / (2.0 * lambda * gamma));
}

CoinProgram christandl_program(std::size_t n_cycle, double lambda,
                               std::optional<double> vertex_theta) {
  require_cycle(n_cycle, 6, "christandl_program");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidParameter, "christandl_program: lambda must be positive");
  }
  std::vector<CoinSpec> specs(n_cycle);
  for (std::size_t x = 1; x < n_cycle; ++x) {
    if (x % 2 == 1) {
      specs[x] = about(kAxisY, vertex_theta.value_or(0.0));
    } else {
      specs[x] = about(kAxisY, christandl_edge_angle(n_cycle, lambda, x / 2));
    }
  }
  specs[0] = reversing_coin();
  return CoinProgram(std::move(specs));
}

CoinProgram weak_coupling_program(std::size_t n_cycle, double theta, double epsilon,
                                  const std::array<double, 3>& end_axis,
                                  EndAxisPlacement placement) {
  require_cycle(n_cycle, 8, "weak_coupling_program");
  if (!(epsilon > 0.0) || epsilon > kPi / 2.0) {
    throw Error(ErrorCode::InvalidParameter, "weak_coupling_program: epsilon must lie in (0, pi/2]");
  }
  if (!std::isfinite(theta)) throw Error(ErrorCode::InvalidParameter, "weak_coupling_program: theta must be finite");
  std::vector<CoinSpec> specs(n_cycle, about(kAxisY, theta));
  specs[0] = reversing_coin();
  specs[2] = about(end_axis, kPi / 2.0 - epsilon);
  specs[n_cycle - 2] = about(placement == EndAxisPlacement::kBothEnds ? end_axis : kAxisY,
                             kPi / 2.0 - epsilon);
  return CoinProgram(std::move(specs));
}

CoinProgram ballistic_program(std::size_t n_cycle) {
  require_cycle(n_cycle, 4, "ballistic_program");
  std::vector<CoinSpec> specs(n_cycle);
  specs[0] = reversing_coin();
  return CoinProgram(std::move(specs));
}

ConversionResult ctqw_to_dtqw(const ctqw::ChainHamiltonian& h) {
  const std::size_t n_sites = h.n_sites();
  if (n_sites < 2) throw Error(ErrorCode::InvalidParameter, "ctqw_to_dtqw: need at least two sites");
  const std::size_t n_cycle = 2 * n_sites;

  std::vector<double> mass(n_sites - 1);
  std::vector<double> vector_potential(n_sites - 1);
  std::vector<double> scalar(n_sites);
  std::vector<std::size_t> degenerate;
  std::vector<CoinSpec> specs(n_cycle);

  for (std::size_t j = 0; j < n_sites; ++j) {
    scalar[j] = std::atan(h.diagonal()[j]);
    CoinSpec vertex;
    vertex.theta = 0.0;
    vertex.phase = scalar[j];
    specs[2 * j + 1] = vertex;
  }
  for (std::size_t j = 0; j + 1 < n_sites; ++j) {
    const Complex hop = h.hopping()[j];
    if (hop.real() == 0.0) {
      // arctan(1/(2 Re)) -> pi/2 as Re -> 0; the vector potential is undefined.
      mass[j] = kPi / 2.0;
      vector_potential[j] = 0.0;
      degenerate.push_back(j);
    } else {
      mass[j] = std::atan(1.0 / (2.0 * hop.real()));
      vector_potential[j] = std::atan(hop.imag() / (2.0 * hop.real()));
    }
    const double angle = std::hypot(mass[j], vector_potential[j]);
    CoinSpec edge;
    edge.theta = angle;
    if (angle > 0.0) edge.axis = {0.0, mass[j] / angle, 0.0 - vector_potential[j] / angle};
    specs[2 * (j + 1)] = edge;
  }
  specs[0] = reversing_coin();

  return ConversionResult{CoinProgram(std::move(specs)), std::move(mass),
                          std::move(vector_potential), std::move(scalar), std::move(degenerate)};
}

}  // namespace qwalk::protocols
