#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwalk/qwalk.h"

namespace qwalk_cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

struct Failure : std::runtime_error {
  Failure(int code, const std::string& message) : std::runtime_error(message), exit_code(code) {}
  int exit_code;
};

[[noreturn]] void invalid(const std::string& flag, const std::string& what) {
  throw Failure(kExitValidation, flag + ": " + what);
}

void check(qw_status status) {
  if (status == QW_OK) return;
  const std::string message = std::string(qw_status_name(status)) + ": " + qw_last_error();
  switch (status) {
    case QW_ERR_INVALID_PARAMETER:
    case QW_ERR_OUT_OF_RANGE:
    case QW_ERR_TOO_LARGE:
      throw Failure(kExitValidation, message);
    default:
      throw Failure(kExitNumerical, message);
  }
}

struct ProgramDeleter { void operator()(qw_program* p) const { qw_program_destroy(p); } };
struct TraceDeleter { void operator()(qw_trace* p) const { qw_trace_destroy(p); } };
struct SpectrumDeleter { void operator()(qw_spectrum* p) const { qw_spectrum_destroy(p); } };
struct HamiltonianDeleter { void operator()(qw_hamiltonian* p) const { qw_hamiltonian_destroy(p); } };
struct ConversionDeleter { void operator()(qw_conversion* p) const { qw_conversion_destroy(p); } };

using Program = std::unique_ptr<qw_program, ProgramDeleter>;
using Trace = std::unique_ptr<qw_trace, TraceDeleter>;
using Spectrum = std::unique_ptr<qw_spectrum, SpectrumDeleter>;
using Hamiltonian = std::unique_ptr<qw_hamiltonian, HamiltonianDeleter>;
using Conversion = std::unique_ptr<qw_conversion, ConversionDeleter>;

// --- output ------------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& os, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) { os << "{}"; return; }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(key).dump() << ": ";
        write_json(os, value, depth + 1);
      }
      os << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { os << "[]"; return; }
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      if (scalars) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], depth + 1);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], depth + 1);
      }
      os << '\n' << close << ']';
      return;
    }
    default:
      os << j.dump();
  }
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Report {
  std::string command;
  Json params = Json::object();
  Json data = Json::object();
  std::optional<Table> table;
};

std::string render(const Report& report, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    if (!report.table) invalid("--format", "csv is not available for " + report.command);
    const Table& t = *report.table;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        if (row[i].is_number_float()) {
          const double v = row[i].get<double>();
          os << (std::isfinite(v) ? format_double(v) : "nan");
        } else {
          os << row[i].dump();
        }
      }
      os << '\n';
    }
    return os.str();
  }
  Json doc = Json::object();
  doc["meta"] = {{"command", report.command}, {"params", report.params}, {"version", qw_version()}};
  doc["data"] = report.data;
  write_json(os, doc, 0);
  os << '\n';
  return os.str();
}

void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Failure(kExitNumerical, "cannot open " + tmp.string() + " for writing");
    f << content;
    f.close();
    if (!f) throw Failure(kExitNumerical, "failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

// --- parsing helpers ---------------------------------------------------------

struct Coin {
  double ar = 1, ai = 0, br = 0, bi = 0;
};

std::pair<double, double> parse_complex(const std::string& flag, const std::string& text) {
  std::istringstream in(text);
  double re = 0, im = 0;
  char comma = 0;
  if (!(in >> re)) invalid(flag, "expected 're' or 're,im', got '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) invalid(flag, "expected 're' or 're,im', got '" + text + "'");
  }
  std::string rest;
  if (in >> rest) invalid(flag, "trailing characters in '" + text + "'");
  return {re, im};
}

Coin initial_coin(const std::string& name, const std::string& alpha, const std::string& beta) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "right" || name == "plus-z") return {1, 0, 0, 0};
  if (name == "left" || name == "minus-z") return {0, 0, 1, 0};
  if (name == "plus-x") return {r, 0, r, 0};
  if (name == "minus-x") return {r, 0, -r, 0};
  if (name == "plus-y") return {r, 0, 0, r};
  if (name == "minus-y") return {r, 0, 0, -r};
  // custom
  const auto [ar, ai] = parse_complex("--alpha", alpha);
  const auto [br, bi] = parse_complex("--beta", beta);
  const double norm = std::sqrt(ar * ar + ai * ai + br * br + bi * bi);
  if (!(norm > 0.0) || !std::isfinite(norm)) invalid("--alpha", "coin amplitudes must not both vanish");
  return {ar / norm, ai / norm, br / norm, bi / norm};
}

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      invalid(flag, "'" + item + "' is not a number");
    }
  }
  if (values.empty()) invalid(flag, "expected a comma-separated list of numbers");
  return values;
}

Json coin_json(const Coin& c) {
  return {{"alpha", {c.ar, c.ai}}, {"beta", {c.br, c.bi}}};
}

Json trace_data(qw_trace* trace, Table& table) {
  size_t length = 0;
  check(qw_trace_length(trace, &length));
  Json t = Json::array(), ps = Json::array(), pt = Json::array(), pr = Json::array(),
       cf = Json::array();
  table.columns = {"t", "p_source", "p_target", "p_rest", "coin_fidelity"};
  for (size_t i = 0; i < length; ++i) {
    qw_trace_row row;
    check(qw_trace_row_at(trace, i, &row));
    t.push_back(row.t);
    ps.push_back(row.p_source);
    pt.push_back(row.p_target);
    pr.push_back(row.p_rest);
    cf.push_back(row.coin_fidelity);
    table.rows.push_back({row.t, row.p_source, row.p_target, row.p_rest, row.coin_fidelity});
  }
  qw_trace_summary summary;
  check(qw_trace_get_summary(trace, &summary));
  Json data = Json::object();
  data["peak_fidelity"] = summary.peak_fidelity;
  data["peak_time"] = summary.peak_time;
  data["coin_fidelity_at_peak"] = summary.coin_fidelity_at_peak;
  data["trace"] = {{"t", t}, {"p_source", ps}, {"p_target", pt}, {"p_rest", pr},
                   {"coin_fidelity", cf}};
  return data;
}

void require_vertex(const std::string& flag, long position, long n) {
  if (position < 1 || position >= n || position % 2 == 0) {
    invalid(flag, "must be an odd cycle position in [1, " + std::to_string(n - 1) + "], got " +
                      std::to_string(position));
  }
}

void require_cycle(long n, long minimum) {
  if (n < minimum || n % 2 != 0) {
    invalid("--n", "cycle length must be even and >= " + std::to_string(minimum) + ", got " +
                       std::to_string(n));
  }
}

void require_positive(const std::string& flag, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) invalid(flag, "must be positive");
}

std::array<double, 3> axis_vector(const std::string& name) {
  if (name == "x") return {1, 0, 0};
  if (name == "y") return {0, 1, 0};
  return {0, 0, 1};
}

// --- options -----------------------------------------------------------------

struct Options {
  long n = 30;
  double lambda = 0.03;
  std::optional<long> steps;
  std::string initial = "right";
  std::string alpha = "1";
  std::string beta = "0";
  std::optional<long> source;
  std::optional<long> target;
  std::string format = "json";
  std::string output;
  std::string protocol = "christandl";
  std::string coin_map = "identity";
  std::string theta = "pi/4";
  std::string epsilon = "pi/2N";
  std::string end_axis = "y";
  bool sender_end_only = false;
  double lambda_min = 0.005;
  double lambda_max = 5.0;
  long points = 40;
  std::optional<long> margin;
  std::string input;
  long side = 4;
  std::string couplings;
  std::optional<double> time;
};

void add_format_output(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--output", o.output, "Report path (relative to QWALK_OUTPUT_DIR if set)");
}

void add_coin(CLI::App* app, Options& o) {
  app->add_option("--initial-coin", o.initial, "Initial coin state")
      ->check(CLI::IsMember({"right", "left", "plus-x", "minus-x", "plus-y", "minus-y", "plus-z",
                             "minus-z", "custom"}));
  app->add_option("--alpha", o.alpha, "Custom amplitude of the right-moving coin, 're,im'");
  app->add_option("--beta", o.beta, "Custom amplitude of the left-moving coin, 're,im'");
}

Coin resolve_coin(const Options& o) { return initial_coin(o.initial, o.alpha, o.beta); }

Json coin_params(const Options& o, const Coin& c) {
  Json p = coin_json(c);
  p["initial_coin"] = o.initial;
  return p;
}

int default_christandl_steps(double lambda) {
  return 2 * static_cast<int>(std::ceil(kPi / (2.0 * lambda)));
}

long steps_or(const Options& o, long fallback) {
  const long steps = o.steps.value_or(fallback);
  if (steps < 0) invalid("--steps", "must be non-negative");
  if (steps > 10000000) invalid("--steps", "too many steps");
  return steps;
}

// --- commands ----------------------------------------------------------------

Program make_protocol(const Options& o, const std::string& which) {
  qw_program* raw = nullptr;
  if (which == "ballistic") {
    require_cycle(o.n, 4);
    check(qw_program_ballistic(static_cast<int>(o.n), &raw));
  } else if (which == "weakcoupling") {
    require_cycle(o.n, 8);
    const double theta = parse_angle(o.theta, o.n);
    const double epsilon = parse_angle(o.epsilon, o.n);
    if (!(epsilon > 0.0) || epsilon > kPi / 2.0) invalid("--epsilon", "must lie in (0, pi/2]");
    const auto axis = axis_vector(o.end_axis);
    check(qw_program_weak_coupling(static_cast<int>(o.n), theta, epsilon, axis.data(),
                                   o.sender_end_only ? 1 : 0, &raw));
  } else {
    require_cycle(o.n, 6);
    require_positive("--lambda", o.lambda);
    check(qw_program_christandl(static_cast<int>(o.n), o.lambda, &raw));
  }
  return Program(raw);
}

Report run_transfer(const Options& o, const std::string& command, const std::string& protocol,
                    long default_steps) {
  Program program = make_protocol(o, protocol);
  const Coin coin = resolve_coin(o);
  const long source = o.source.value_or(1);
  const long target = o.target.value_or(o.n - 1);
  require_vertex("--source", source, o.n);
  require_vertex("--target", target, o.n);
  const long steps = steps_or(o, default_steps);

  std::vector<qw_complex> map;
  if (o.coin_map == "sigma-x") map = {{0, 0}, {1, 0}, {1, 0}, {0, 0}};
  else if (o.coin_map == "sigma-y") map = {{0, 0}, {0, -1}, {0, 1}, {0, 0}};
  else if (o.coin_map == "sigma-z") map = {{1, 0}, {0, 0}, {0, 0}, {-1, 0}};

  qw_trace* raw = nullptr;
  check(qw_simulate(program.get(), static_cast<int>(source), static_cast<int>(target),
                    {coin.ar, coin.ai}, {coin.br, coin.bi}, static_cast<int>(steps),
                    map.empty() ? nullptr : map.data(), &raw));
  Trace trace(raw);

  Report report;
  report.command = command;
  report.params["n"] = o.n;
  report.params["protocol"] = protocol;
  if (protocol == "christandl") report.params["lambda"] = o.lambda;
  if (protocol == "weakcoupling") {
    report.params["theta"] = parse_angle(o.theta, o.n);
    report.params["epsilon"] = parse_angle(o.epsilon, o.n);
    report.params["end_axis"] = o.end_axis;
    report.params["sender_end_only"] = o.sender_end_only;
  }
  report.params["steps"] = steps;
  report.params["source"] = source;
  report.params["target"] = target;
  report.params["coin"] = coin_params(o, coin);
  report.params["coin_map"] = o.coin_map;
  Table table;
  report.data = trace_data(trace.get(), table);
  report.table = std::move(table);

  if (protocol == "weakcoupling") {
    int arrival = 0;
    check(qw_trace_arrival_time(trace.get(), 0.95, &arrival));
    std::vector<double> overlaps(2 * static_cast<std::size_t>(o.n));
    check(qw_eigenstate_population(program.get(), static_cast<int>(source), {coin.ar, coin.ai},
                                   {coin.br, coin.bi}, overlaps.data(), overlaps.size()));
    double top4 = 0.0;
    for (std::size_t i = 0; i < 4 && i < overlaps.size(); ++i) top4 += overlaps[i];
    report.data["arrival_time"] = arrival;
    report.data["top4_population"] = top4;
    report.data["population"] = overlaps;
  }
  return report;
}

Report run_spectrum(const Options& o) {
  Program program = make_protocol(o, o.protocol);
  qw_spectrum* raw = nullptr;
  check(qw_spectrum_of_program(program.get(), &raw));
  Spectrum spectrum(raw);

  size_t count = 0;
  check(qw_spectrum_size(spectrum.get(), &count));
  std::vector<double> phases(count);
  check(qw_spectrum_phases(spectrum.get(), phases.data(), phases.size()));
  double gap_zero = 0, gap_pi = 0, spread = 0;
  check(qw_spectrum_gaps(spectrum.get(), &gap_zero, &gap_pi));
  check(qw_spectrum_harmonic_spread(spectrum.get(), &spread));
  size_t n_classes = 0;
  check(qw_spectrum_class_count(spectrum.get(), &n_classes));

  Json classes = Json::array();
  std::vector<long> class_of(count, -1);
  for (size_t k = 0; k < n_classes; ++k) {
    size_t length = 0;
    check(qw_spectrum_class(spectrum.get(), k, nullptr, 0, &length));
    std::vector<size_t> idx(length);
    check(qw_spectrum_class(spectrum.get(), k, idx.data(), idx.size(), &length));
    classes.push_back(idx);
    for (size_t i : idx) class_of[i] = static_cast<long>(k);
  }

  Report report;
  report.command = "spectrum";
  report.params["n"] = o.n;
  report.params["protocol"] = o.protocol;
  if (o.protocol == "christandl") report.params["lambda"] = o.lambda;
  if (o.protocol == "weakcoupling") {
    report.params["theta"] = parse_angle(o.theta, o.n);
    report.params["epsilon"] = parse_angle(o.epsilon, o.n);
  }
  report.data["phases"] = phases;
  report.data["degeneracy_classes"] = classes;
  report.data["gap_at_zero"] = gap_zero;
  report.data["gap_at_pi"] = gap_pi;
  report.data["harmonic_spread"] = spread;
  Table table;
  table.columns = {"index", "phase", "class"};
  for (size_t i = 0; i < count; ++i) table.rows.push_back({i, phases[i], class_of[i]});
  report.table = std::move(table);
  return report;
}

Report run_sweep(const Options& o) {
  require_cycle(o.n, 6);
  require_positive("--lambda-min", o.lambda_min);
  require_positive("--lambda-max", o.lambda_max);
  if (o.lambda_max < o.lambda_min) invalid("--lambda-max", "must not be below --lambda-min");
  if (o.points < 1 || o.points > 100000) invalid("--points", "must lie in [1, 100000]");
  const long margin = o.margin.value_or(o.n / 2);
  if (margin < 0) invalid("--margin", "must be non-negative");

  const std::size_t count = static_cast<std::size_t>(o.points);
  std::vector<double> lambdas(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    lambdas[i] = std::exp(std::log(o.lambda_min) + f * (std::log(o.lambda_max) - std::log(o.lambda_min)));
  }
  lambdas.front() = o.lambda_min;
  if (count > 1) lambdas.back() = o.lambda_max;
  std::vector<double> fidelities(count);
  std::vector<int> times(count);
  double transition = 0.0;
  check(qw_lambda_sweep(static_cast<int>(o.n), lambdas.data(), count, static_cast<int>(margin),
                        fidelities.data(), times.data(), &transition));

  Report report;
  report.command = "sweep";
  report.params["n"] = o.n;
  report.params["lambda_min"] = o.lambda_min;
  report.params["lambda_max"] = o.lambda_max;
  report.params["points"] = o.points;
  report.params["margin"] = margin;
  report.data["lambdas"] = lambdas;
  report.data["peak_fidelities"] = fidelities;
  report.data["peak_times"] = times;
  report.data["detected_transition"] = transition;
  Table table;
  table.columns = {"lambda", "peak_fidelity", "peak_time"};
  for (std::size_t i = 0; i < count; ++i) table.rows.push_back({lambdas[i], fidelities[i], times[i]});
  report.table = std::move(table);
  return report;
}

Hamiltonian hamiltonian_from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) invalid("--input", "cannot read '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(f);
  } catch (const std::exception& e) {
    invalid("--input", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.contains("diagonal") || !doc.contains("hopping")) {
    invalid("--input", "expected keys 'diagonal' and 'hopping'");
  }
  std::vector<double> diagonal;
  std::vector<qw_complex> hopping;
  try {
    diagonal = doc["diagonal"].get<std::vector<double>>();
    for (const auto& h : doc["hopping"]) {
      if (h.is_number()) hopping.push_back({h.get<double>(), 0.0});
      else hopping.push_back({h.at(0).get<double>(), h.at(1).get<double>()});
    }
  } catch (const std::exception& e) {
    invalid("--input", std::string("malformed Hamiltonian: ") + e.what());
  }
  if (diagonal.size() < 2 || hopping.size() + 1 != diagonal.size()) {
    invalid("--input", "need n >= 2 diagonal entries and n - 1 hoppings");
  }
  qw_hamiltonian* raw = nullptr;
  check(qw_hamiltonian_create(static_cast<int>(diagonal.size()), diagonal.data(), hopping.data(), &raw));
  return Hamiltonian(raw);
}

Report run_convert(const Options& o) {
  Report report;
  report.command = "convert";
  Hamiltonian h;
  if (!o.input.empty()) {
    h = hamiltonian_from_file(o.input);
    report.params["input"] = o.input;
  } else {
    // christandl_program(N, lambda) corresponds to the chain with N/2 sites at 2 lambda.
    require_cycle(o.n, 4);
    require_positive("--lambda", o.lambda);
    qw_hamiltonian* raw = nullptr;
    check(qw_hamiltonian_christandl(static_cast<int>(o.n / 2), 2.0 * o.lambda, &raw));
    h.reset(raw);
    report.params["n"] = o.n;
    report.params["lambda"] = o.lambda;
  }
  int sites = 0;
  check(qw_hamiltonian_size(h.get(), &sites));
  qw_conversion* raw_conv = nullptr;
  check(qw_convert(h.get(), &raw_conv));
  Conversion conversion(raw_conv);
  std::vector<double> mass(sites - 1), vector_potential(sites - 1), scalar(sites);
  check(qw_conversion_angles(conversion.get(), mass.data(), vector_potential.data(), scalar.data()));
  size_t degenerate = 0;
  check(qw_conversion_degenerate_count(conversion.get(), &degenerate));
  qw_program* raw_program = nullptr;
  check(qw_conversion_program(conversion.get(), &raw_program));
  Program program(raw_program);

  Table table;
  table.columns = {"position", "theta", "axis_x", "axis_y", "axis_z", "phase"};
  Json coins = Json::array();
  for (int x = 0; x < 2 * sites; ++x) {
    double theta = 0, axis[3] = {0, 0, 0}, phase = 0;
    check(qw_program_coin(program.get(), x, &theta, axis, &phase));
    table.rows.push_back({x, theta, axis[0], axis[1], axis[2], phase});
    coins.push_back({{"position", x}, {"theta", theta}, {"axis", {axis[0], axis[1], axis[2]}},
                     {"phase", phase}});
  }
  report.data["n_sites"] = sites;
  report.data["mass_angles"] = mass;
  report.data["vector_potential_angles"] = vector_potential;
  report.data["scalar_angles"] = scalar;
  report.data["degenerate_bonds"] = degenerate;
  report.data["coins"] = coins;
  report.table = std::move(table);
  return report;
}

Report run_grover(const Options& o) {
  if (o.side < 2 || o.side > 8 || o.side % 2 != 0) invalid("--side", "must be even and in [2, 8]");
  const long steps = steps_or(o, 200);
  if (steps < 1) invalid("--steps", "must be positive");
  double fraction = 0, average = 0;
  check(qw_grover(static_cast<int>(o.side), static_cast<int>(steps), &fraction, &average));
  Report report;
  report.command = "grover2d";
  report.params["side"] = o.side;
  report.params["steps"] = steps;
  const double uniform = 1.0 / static_cast<double>(o.side * o.side);
  report.data["fraction_pm1"] = fraction;
  report.data["time_avg_origin_prob"] = average;
  report.data["uniform_prob"] = uniform;
  Table table;
  table.columns = {"side", "steps", "fraction_pm1", "time_avg_origin_prob", "uniform_prob"};
  table.rows.push_back({o.side, steps, fraction, average, uniform});
  report.table = std::move(table);
  return report;
}

Report run_oracle(const Options& o) {
  std::vector<double> couplings;
  Report report;
  report.command = "oracle";
  double t = 0.0;
  if (!o.couplings.empty()) {
    couplings = parse_list("--couplings", o.couplings);
    if (!o.time) invalid("--time", "required together with --couplings");
    t = *o.time;
    report.params["couplings"] = couplings;
  } else {
    if (o.n < 2) invalid("--n", "need at least two spins");
    require_positive("--lambda", o.lambda);
    qw_hamiltonian* raw = nullptr;
    check(qw_hamiltonian_christandl(static_cast<int>(o.n), o.lambda, &raw));
    Hamiltonian h(raw);
    std::vector<qw_complex> hop(static_cast<std::size_t>(o.n - 1));
    check(qw_hamiltonian_entries(h.get(), nullptr, hop.data()));
    for (const auto& z : hop) couplings.push_back(z.re);
    t = o.time.value_or(kPi / o.lambda);
    report.params["n"] = o.n;
    report.params["lambda"] = o.lambda;
  }
  if (!std::isfinite(t)) invalid("--time", "must be finite");
  const auto [ar, ai] = parse_complex("--alpha", o.alpha);
  const auto [br, bi] = parse_complex("--beta", o.beta);
  const double norm = std::sqrt(ar * ar + ai * ai + br * br + bi * bi);
  if (!(norm > 0.0)) invalid("--alpha", "state amplitudes must not both vanish");
  const qw_complex alpha{ar / norm, ai / norm}, beta{br / norm, bi / norm};

  const std::size_t spins = couplings.size() + 1;
  std::vector<double> excitation(spins), ctqw(spins);
  qw_oracle_result result;
  check(qw_spin_oracle(couplings.data(), couplings.size(), alpha, beta, t, &result,
                       excitation.data(), ctqw.data()));
  report.params["time"] = t;
  report.params["alpha"] = {alpha.re, alpha.im};
  report.params["beta"] = {beta.re, beta.im};
  report.data["fidelity"] = result.fidelity;
  report.data["total_sigma_z"] = result.total_sigma_z;
  report.data["vacuum_amplitude"] = {result.vacuum_amplitude.re, result.vacuum_amplitude.im};
  report.data["excitation"] = excitation;
  report.data["ctqw"] = ctqw;
  Table table;
  table.columns = {"site", "excitation", "ctqw"};
  for (std::size_t j = 0; j < spins; ++j) table.rows.push_back({j, excitation[j], ctqw[j]});
  report.table = std::move(table);
  return report;
}

fs::path resolve_output(const std::string& output, const std::string& command,
                        const std::string& format) {
  const char* root = std::getenv("QWALK_OUTPUT_DIR");
  if (!output.empty()) {
    fs::path p(output);
    if (p.is_relative() && root && *root) p = fs::path(root) / p;
    return p;
  }
  if (root && *root) return fs::path(root) / (command + "." + format);
  return {};
}

}  // namespace

double parse_angle(const std::string& text, long n) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  const auto pi_at = s.find("pi");
  if (pi_at == std::string::npos) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw Failure(kExitValidation, "angle '" + text + "' is not a number or multiple of pi");
  }
  auto number = [&](const std::string& part, double fallback) {
    if (part.empty()) return fallback;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size()) throw Failure(kExitValidation, "cannot parse angle '" + text + "'");
    return v;
  };
  std::string coefficient = s.substr(0, pi_at);
  if (!coefficient.empty() && coefficient.back() == '*') coefficient.pop_back();
  if (coefficient == "-") coefficient = "-1";
  const double c = number(coefficient, 1.0);
  std::string rest = s.substr(pi_at + 2);
  double denominator = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw Failure(kExitValidation, "cannot parse angle '" + text + "'");
    rest = rest.substr(1);
    double factor = 1.0;
    if (!rest.empty() && rest.back() == 'N') {
      if (n <= 0) throw Failure(kExitValidation, "angle '" + text + "' needs --n");
      factor = static_cast<double>(n);
      rest.pop_back();
      if (!rest.empty() && rest.back() == '*') rest.pop_back();
    } else if (rest.empty()) {
      throw Failure(kExitValidation, "cannot parse angle '" + text + "'");
    }
    denominator = number(rest, 1.0) * factor;
    if (denominator == 0.0) throw Failure(kExitValidation, "angle '" + text + "' divides by zero");
  }
  return c * kPi / denominator;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum walk state transfer simulations", "qwalk"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Transfer along a cycle walk, one row per double step");
  simulate->add_option("--n", o.n, "Cycle length");
  simulate->add_option("--lambda", o.lambda, "Coupling scale of the engineered chain");
  simulate->add_option("--steps", o.steps, "Number of double steps");
  simulate->add_option("--protocol", o.protocol)->check(CLI::IsMember({"christandl", "ballistic"}));
  simulate->add_option("--source", o.source, "Odd cycle position of the sender");
  simulate->add_option("--target", o.target, "Odd cycle position of the receiver");
  simulate->add_option("--coin-map", o.coin_map, "Ideal map from sent to received coin")
      ->check(CLI::IsMember({"identity", "sigma-x", "sigma-y", "sigma-z"}));
  add_coin(simulate, o);
  add_format_output(simulate, o);

  auto* spectrum = app.add_subcommand("spectrum", "Eigenphases of the double-step operator");
  spectrum->add_option("--n", o.n, "Cycle length");
  spectrum->add_option("--lambda", o.lambda);
  spectrum->add_option("--protocol", o.protocol)
      ->check(CLI::IsMember({"christandl", "ballistic", "weakcoupling"}));
  spectrum->add_option("--theta", o.theta, "Bulk coin angle (weakcoupling)");
  spectrum->add_option("--epsilon", o.epsilon, "End coupling reduction (weakcoupling)");
  add_format_output(spectrum, o);

  auto* sweep = app.add_subcommand("sweep", "Peak transfer probability over log-spaced lambda");
  sweep->add_option("--n", o.n, "Cycle length");
  sweep->add_option("--lambda-min", o.lambda_min);
  sweep->add_option("--lambda-max", o.lambda_max);
  sweep->add_option("--points", o.points);
  sweep->add_option("--margin", o.margin, "Extra double steps beyond the expected transfer time");
  add_format_output(sweep, o);

  auto* weak = app.add_subcommand("weakcoupling", "Transfer through weakly coupled chain ends");
  weak->add_option("--n", o.n, "Cycle length");
  weak->add_option("--theta", o.theta, "Bulk coin angle");
  weak->add_option("--epsilon", o.epsilon, "End coupling reduction, e.g. pi/2N");
  weak->add_option("--steps", o.steps, "Number of double steps (default ceil(8/epsilon^2))");
  weak->add_option("--end-axis", o.end_axis, "Rotation axis of the end coins")
      ->check(CLI::IsMember({"x", "y", "z"}));
  weak->add_flag("--sender-end-only", o.sender_end_only, "Apply --end-axis at the sender end only");
  weak->add_option("--source", o.source);
  weak->add_option("--target", o.target);
  add_coin(weak, o);
  add_format_output(weak, o);

  auto* convert = app.add_subcommand("convert", "Coin program simulating a chain Hamiltonian");
  convert->add_option("--n", o.n, "Cycle length of the Christandl chain to convert");
  convert->add_option("--lambda", o.lambda);
  convert->add_option("--input", o.input, "JSON file with 'diagonal' and 'hopping' ([re, im] pairs)");
  add_format_output(convert, o);

  auto* grover = app.add_subcommand("grover2d", "Grover walk on a torus");
  grover->add_option("--side", o.side, "Torus side length");
  grover->add_option("--steps", o.steps, "Steps averaged over");
  add_format_output(grover, o);

  auto* oracle = app.add_subcommand("oracle", "XX spin chain transfer against the matching chain walk");
  oracle->add_option("--n", o.n, "Number of spins for the engineered chain");
  oracle->add_option("--lambda", o.lambda);
  oracle->add_option("--couplings", o.couplings, "Comma-separated couplings (overrides --n/--lambda)");
  oracle->add_option("--time", o.time, "Evolution time (default pi/lambda)");
  oracle->add_option("--alpha", o.alpha, "Amplitude of the sender's up state, 're,im'");
  oracle->add_option("--beta", o.beta, "Amplitude of the sender's down state, 're,im'");
  add_format_output(oracle, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qwalk: " << e.what() << '\n';
    return kExitValidation;
  }
  try {
    Report report;
    if (simulate->parsed()) {
      const long fallback = o.protocol == "ballistic" ? o.n : default_christandl_steps(o.lambda);
      if (o.protocol != "ballistic") require_positive("--lambda", o.lambda);
      report = run_transfer(o, "simulate", o.protocol, fallback);
    } else if (spectrum->parsed()) {
      report = run_spectrum(o);
    } else if (sweep->parsed()) {
      report = run_sweep(o);
    } else if (weak->parsed()) {
      require_cycle(o.n, 8);
      const double epsilon = parse_angle(o.epsilon, o.n);
      if (!(epsilon > 0.0) || epsilon > kPi / 2.0) invalid("--epsilon", "must lie in (0, pi/2]");
      report = run_transfer(o, "weakcoupling", "weakcoupling",
                            static_cast<long>(std::ceil(8.0 / (epsilon * epsilon))));
    } else if (convert->parsed()) {
      report = run_convert(o);
    } else if (grover->parsed()) {
      report = run_grover(o);
    } else {
      if (oracle->count("--n") == 0) o.n = 8;
      report = run_oracle(o);
    }
    const std::string text = render(report, o.format);
    const fs::path path = resolve_output(o.output, report.command, o.format);
    if (path.empty()) {
      out << text;
    } else {
      write_atomically(path, text);
    }
    return kExitOk;
  } catch (const Failure& f) {
    err << "qwalk: " << f.what() << '\n';
    return f.exit_code;
  } catch (const fs::filesystem_error& e) {
    err << "qwalk: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace qwalk_cli
