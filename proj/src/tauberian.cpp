#include "weyllab/tauberian.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "weyllab/error.hpp"
#include "weyllab/io.hpp"

namespace weyllab {

void AtomicMeasure::validate() const {
  if (atoms.empty()) throw Error(ErrorCode::domain, "measure has no atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].position >= 0.0) || !std::isfinite(atoms[i].position)) {
      throw Error(ErrorCode::domain, "atom positions must be finite and nonnegative");
    }
    if (!(atoms[i].mass > 0.0) || !std::isfinite(atoms[i].mass)) {
      throw Error(ErrorCode::domain, "atom masses must be finite and positive");
    }
    if (i > 0 && !(atoms[i].position > atoms[i - 1].position)) {
      throw Error(ErrorCode::domain, "atom positions must be strictly increasing");
    }
  }
  if (tail && (!(tail->coef >= 0.0) || !(tail->exponent >= 0.0))) {
    throw Error(ErrorCode::domain, "tail model needs C >= 0 and gamma >= 0");
  }
}

double AtomicMeasure::atom_mass() const {
  CompensatedSum sum;
  for (const auto& a : atoms) sum += a.mass;
  return sum.value();
}

AtomicMeasure squares_measure(std::int64_t count) {
  if (count < 1) throw Error(ErrorCode::domain, "count must be >= 1");
  AtomicMeasure nu;
  nu.atoms.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) nu.atoms.push_back({static_cast<double>(k * k), 1.0});
  return nu;
}

AtomicMeasure linear_measure(std::int64_t count) {
  if (count < 1) throw Error(ErrorCode::domain, "count must be >= 1");
  AtomicMeasure nu;
  nu.atoms.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) nu.atoms.push_back({static_cast<double>(k), 1.0});
  nu.tail = PowerTail{1.0, 1.0};
  return nu;
}

AtomicMeasure lacunary_measure(int count) {
  if (count < 1 || count > 500) throw Error(ErrorCode::domain, "lacunary count must lie in [1, 500]");
  AtomicMeasure nu;
  for (int k = 0; k < count; ++k) nu.atoms.push_back({std::ldexp(1.0, 2 * k), std::ldexp(1.0, k)});
  return nu;
}

AtomicMeasure dirac_measure() {
  AtomicMeasure nu;
  nu.atoms.push_back({0.0, 1.0});
  nu.tail = PowerTail{0.0, 0.0};
  return nu;
}

std::vector<PowerLawSample> random_power_law_family(int count, std::uint64_t seed, std::int64_t atoms) {
  if (count < 0 || atoms < 2) throw Error(ErrorCode::domain, "invalid random family size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> beta_dist(1.0, 3.0);
  std::uniform_real_distribution<double> mass_dist(0.5, 2.0);
  std::vector<PowerLawSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PowerLawSample sample;
    sample.beta = beta_dist(rng);
    sample.gamma = 1.0 / sample.beta;
    sample.measure.atoms.reserve(static_cast<std::size_t>(atoms));
    for (std::int64_t k = 0; k < atoms; ++k) {
      sample.measure.atoms.push_back({std::pow(static_cast<double>(k), sample.beta), mass_dist(rng)});
    }
    out.push_back(std::move(sample));
  }
  return out;
}

double laplace_direct(const AtomicMeasure& nu, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "Laplace transform needs t > 0");
  nu.validate();
  CompensatedSum sum;
  for (const auto& a : nu.atoms) sum += a.mass * std::exp(-t * a.position);
  if (nu.tail) sum += nu.tail->laplace_beyond(nu.last_position(), t);
  return sum.value();
}

double laplace_cavalieri(const AtomicMeasure& nu, double t, double quad_tol) {
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "Laplace transform needs t > 0");
  nu.validate();
  // nu([0, y]) = S_i on [x_i, x_{i+1}); t int S_i e^{-ty} dy = S_i (e^{-t x_i} - e^{-t x_{i+1}}).
  CompensatedSum total;
  CompensatedSum step;
  for (std::size_t i = 0; i + 1 < nu.atoms.size(); ++i) {
    step += nu.atoms[i].mass;
    const double x0 = nu.atoms[i].position;
    const double x1 = nu.atoms[i + 1].position;
    total += step.value() * std::exp(-t * x0) * -std::expm1(-t * (x1 - x0));
  }
  step += nu.atoms.back().mass;
  const double last = nu.last_position();
  total += step.value() * std::exp(-t * last);
  if (nu.tail && nu.tail->coef > 0.0) {
    // t int_last^inf C (y^g - last^g) e^{-ty} dy
    const double g = nu.tail->exponent;
    const double z = t * last;
    const double upper = boost::math::tgamma(g + 1.0, z) * std::pow(t, -g);
    total += nu.tail->coef * (upper - std::pow(last, g) * std::exp(-z));
  }
  const double cavalieri = total.value();
  const double direct = laplace_direct(nu, t);
  if (std::fabs(cavalieri - direct) > quad_tol * (1.0 + std::fabs(direct))) {
    std::ostringstream os;
    os << "Cavalieri form " << format_double(cavalieri) << " differs from direct sum " << format_double(direct);
    throw Error(ErrorCode::disagreement, os.str());
  }
  return cavalieri;
}

double counting(const AtomicMeasure& nu, double lambda) {
  nu.validate();
  const double last = nu.last_position();
  if (lambda > last && !nu.tail) {
    std::ostringstream os;
    os << "lambda " << lambda << " lies beyond the last atom " << last << " and no tail model is given";
    throw Error(ErrorCode::coverage, os.str());
  }
  CompensatedSum sum;
  for (const auto& a : nu.atoms) {
    if (a.position > lambda) break;
    sum += a.mass;
  }
  if (lambda > last) {
    sum += nu.tail->coef * (std::pow(lambda, nu.tail->exponent) - std::pow(last, nu.tail->exponent));
  }
  return sum.value();
}

namespace {

void check_decreasing(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw Error(ErrorCode::domain, std::string("empty ") + what);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw Error(ErrorCode::domain, std::string(what) + " must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1])) throw Error(ErrorCode::domain, std::string(what) + " must decrease");
  }
}

void check_increasing(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw Error(ErrorCode::domain, std::string("empty ") + what);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw Error(ErrorCode::domain, std::string(what) + " must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorCode::domain, std::string(what) + " must increase");
  }
}

double tail_half_min(const std::vector<double>& v) {
  return *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
}

double tail_half_max(const std::vector<double>& v) {
  return *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
}

}  // namespace

AbelEstimate abel_limit_estimate(const AtomicMeasure& nu, double gamma, const std::vector<double>& t_grid) {
  nu.validate();
  if (!(gamma >= 0.0)) throw Error(ErrorCode::domain, "gamma must be >= 0");
  check_decreasing(t_grid, "t grid");
  AbelEstimate out;
  out.t = t_grid;
  const double mass = nu.atom_mass();
  for (double t : t_grid) {
    const double transform = laplace_direct(nu, t);
    if (!nu.tail && mass * std::exp(-t * nu.last_position()) > 1e-12 * transform) {
      std::ostringstream os;
      os << "atoms up to " << nu.last_position() << " do not resolve the transform at t=" << t;
      throw Error(ErrorCode::coverage, os.str());
    }
    out.values.push_back(std::pow(t, gamma) * transform);
  }
  out.trend = summarize_sweep(out.t, out.values);
  out.limit_estimate = out.trend.last;
  return out;
}

CountingEstimate counting_limit_estimate(const AtomicMeasure& nu, double gamma,
                                         const std::vector<double>& lambda_grid) {
  nu.validate();
  if (!(gamma >= 0.0)) throw Error(ErrorCode::domain, "gamma must be >= 0");
  check_increasing(lambda_grid, "lambda grid");
  CountingEstimate out;
  out.lambda = lambda_grid;
  for (double lambda : lambda_grid) out.values.push_back(counting(nu, lambda) / std::pow(lambda, gamma));
  out.trend = summarize_sweep(out.lambda, out.values);
  out.liminf_estimate = tail_half_min(out.values);
  out.limsup_estimate = tail_half_max(out.values);
  return out;
}

bool AuditReport::all_hold() const noexcept {
  return abelian_limsup.holds && abelian_liminf.holds && tauberian_e.holds && liminf_positive.holds;
}

AuditReport one_sided_audit(const AtomicMeasure& nu, double gamma, const std::vector<double>& t_grid,
                            const std::vector<double>& lambda_grid, double tolerance) {
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::domain, "tolerance must be >= 0");
  AuditReport r;
  r.gamma = gamma;
  r.tolerance = tolerance;
  r.abel = abel_limit_estimate(nu, gamma, t_grid);
  r.count = counting_limit_estimate(nu, gamma, lambda_grid);
  const double g1 = std::tgamma(gamma + 1.0);
  const double a_sup = tail_half_max(r.abel.values);
  const double a_inf = tail_half_min(r.abel.values);

  auto upper = [&](const char* name, double lhs, double rhs) {
    return AuditCheck{name, lhs <= rhs + tolerance * std::fabs(rhs), lhs, rhs, rhs - lhs};
  };
  auto lower = [&](const char* name, double lhs, double rhs) {
    return AuditCheck{name, lhs >= rhs - tolerance * std::fabs(rhs), lhs, rhs, lhs - rhs};
  };
  r.abelian_limsup = upper("abelian_limsup", a_sup, g1 * r.count.limsup_estimate);
  r.abelian_liminf = lower("abelian_liminf", a_inf, g1 * r.count.liminf_estimate);
  r.tauberian_e = upper("tauberian_factor_e", r.count.limsup_estimate, std::exp(1.0) * a_sup);
  const bool transform_bounded = a_inf > 0.0 && std::isfinite(a_sup);
  r.liminf_positive = AuditCheck{"liminf_positive", !transform_bounded || r.count.liminf_estimate > 0.0,
                                 r.count.liminf_estimate, 0.0, r.count.liminf_estimate};
  return r;
}

AuditGrids default_audit_grids(const AtomicMeasure& nu, int count) {
  nu.validate();
  double t_lo = 1e-6;
  if (!nu.tail) {
    const double mass = nu.atom_mass();
    const double last = nu.last_position();
    if (!(last > 0.0)) throw Error(ErrorCode::coverage, "an untailed measure needs atoms away from 0");
    t_lo = std::max(t_lo, (std::log(std::max(mass, 1.0)) + 40.0) / last);
  }
  const double t_hi = std::min(1.0, 100.0 * t_lo);
  AuditGrids g;
  g.t = make_grid(t_hi, t_lo, count, GridScale::log);
  for (double t : g.t) g.lambda.push_back(1.0 / t);
  return g;
}

KaramataCheck karamata_crosscheck(const AtomicMeasure& nu, double gamma, const std::vector<double>& t_grid,
                                  const std::vector<double>& lambda_grid) {
  const AbelEstimate abel = abel_limit_estimate(nu, gamma, t_grid);
  const CountingEstimate count = counting_limit_estimate(nu, gamma, lambda_grid);
  KaramataCheck k;
  k.gamma = gamma;
  k.a_estimate = abel.limit_estimate;
  k.c_estimate = count.trend.last;
  k.relation_residual = std::fabs(k.a_estimate - k.c_estimate * std::tgamma(gamma + 1.0));
  const double twice = 2.0 * gamma;
  if (twice >= 1.0 && std::fabs(twice - std::round(twice)) < 1e-12) {
    const int dim = static_cast<int>(std::lround(twice));
    const double factor = unit_ball_volume(dim) / std::pow(kPi, 0.5 * dim);
    k.ball_form_residual = std::fabs(k.c_estimate - k.a_estimate * factor);
  }
  return k;
}

KaramataCheck karamata_crosscheck(const AtomicMeasure& nu, double gamma) {
  auto t = make_grid(1e-2, 1e-6, 9, GridScale::log);
  auto lambda = make_grid(1e2, 1e6, 9, GridScale::log);
  return karamata_crosscheck(nu, gamma, t, lambda);
}

std::string measure_to_csv(const AtomicMeasure& nu) {
  std::ostringstream os;
  if (nu.tail) {
    os << "# tail_coef=" << format_double(nu.tail->coef) << '\n';
    os << "# tail_exponent=" << format_double(nu.tail->exponent) << '\n';
  }
  os << "position,mass\n";
  for (const auto& a : nu.atoms) os << format_double(a.position) << ',' << format_double(a.mass) << '\n';
  return os.str();
}

namespace {

double parse_number(std::string_view text, std::size_t line) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::config, "line " + std::to_string(line) + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

AtomicMeasure measure_from_csv(const std::string& text) {
  AtomicMeasure nu;
  std::optional<double> coef, exponent;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view row(raw);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (row.empty()) continue;
    if (row.front() == '#') {
      const auto eq = row.find('=');
      if (eq == std::string_view::npos) continue;
      std::string_view key = row.substr(1, eq - 1);
      while (!key.empty() && key.front() == ' ') key.remove_prefix(1);
      if (key == "tail_coef") coef = parse_number(row.substr(eq + 1), line);
      if (key == "tail_exponent") exponent = parse_number(row.substr(eq + 1), line);
      continue;
    }
    if (row.starts_with("position")) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::config, "line " + std::to_string(line) + ": expected 'position,mass'");
    }
    nu.atoms.push_back({parse_number(row.substr(0, comma), line), parse_number(row.substr(comma + 1), line)});
  }
  if (coef.has_value() != exponent.has_value()) {
    throw Error(ErrorCode::config, "tail_coef and tail_exponent must be given together");
  }
  if (coef) nu.tail = PowerTail{*coef, *exponent};
  nu.validate();
  return nu;
}

namespace {

nlohmann::ordered_json check_json(const AuditCheck& c) {
  nlohmann::ordered_json j;
  j["holds"] = c.holds;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["slack"] = c.slack;
  return j;
}

nlohmann::ordered_json trend_json(const Trend& t) {
  nlohmann::ordered_json j;
  j["last"] = t.last;
  j["log_slope"] = t.log_slope;
  j["tail_min"] = t.tail_min;
  j["tail_max"] = t.tail_max;
  return j;
}

}  // namespace

nlohmann::ordered_json audit_to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["gamma"] = r.gamma;
  j["tolerance"] = r.tolerance;
  j["all_hold"] = r.all_hold();
  nlohmann::ordered_json verdicts;
  verdicts[r.abelian_limsup.name] = check_json(r.abelian_limsup);
  verdicts[r.abelian_liminf.name] = check_json(r.abelian_liminf);
  verdicts[r.tauberian_e.name] = check_json(r.tauberian_e);
  verdicts[r.liminf_positive.name] = check_json(r.liminf_positive);
  j["verdicts"] = verdicts;
  nlohmann::ordered_json abel;
  abel["t"] = r.abel.t;
  abel["values"] = r.abel.values;
  abel["trend"] = trend_json(r.abel.trend);
  abel["limit_estimate"] = r.abel.limit_estimate;
  j["transform"] = abel;
  nlohmann::ordered_json count;
  count["lambda"] = r.count.lambda;
  count["values"] = r.count.values;
  count["trend"] = trend_json(r.count.trend);
  count["liminf_estimate"] = r.count.liminf_estimate;
  count["limsup_estimate"] = r.count.limsup_estimate;
  j["counting"] = count;
  return j;
}

nlohmann::ordered_json karamata_to_json(const KaramataCheck& k) {
  nlohmann::ordered_json j;
  j["gamma"] = k.gamma;
  j["a_estimate"] = k.a_estimate;
  j["c_estimate"] = k.c_estimate;
  j["relation_residual"] = k.relation_residual;
  if (k.ball_form_residual) j["ball_form_residual"] = *k.ball_form_residual;
  return j;
}

}  // namespace weyllab
