#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weyllab/numerics.hpp"

namespace weyllab {

struct Atom {
  double position = 0.0;
  double mass = 1.0;
  bool operator==(const Atom&) const = default;
};

/// Nonnegative atomic measure, optionally continued past its last atom by a
/// power law nu([0, lambda]) = nu([0, x_last]) + C (lambda^g - x_last^g).
/// Without a tail the atoms are all that is known, and sweeps must stay where
/// the truncation cannot be felt.
struct AtomicMeasure {
  std::vector<Atom> atoms;
  std::optional<PowerTail> tail;

  void validate() const;
  double last_position() const { return atoms.back().position; }
  double atom_mass() const;
  bool operator==(const AtomicMeasure&) const = default;
};

/// delta_{k^2}, k = 0..count-1.
AtomicMeasure squares_measure(std::int64_t count);
/// delta_k, k = 0..count-1, continued by the tail N ~ lambda.
AtomicMeasure linear_measure(std::int64_t count);
/// Masses 2^k at positions 4^k, k = 0..count-1.
AtomicMeasure lacunary_measure(int count);
/// delta_0 with an empty tail: a complete finite measure.
AtomicMeasure dirac_measure();

struct PowerLawSample {
  AtomicMeasure measure;
  double beta = 1.0;
  double gamma = 1.0;  // 1 / beta, the counting exponent
};

/// Positions k^beta (k = 0..atoms-1) with beta uniform in [1, 3] and masses
/// uniform in [0.5, 2], drawn from a fixed-seed generator.
std::vector<PowerLawSample> random_power_law_family(int count, std::uint64_t seed = 20240607,
                                                    std::int64_t atoms = 5000);

/// nu-hat(t) = sum mass e^{-t position} plus the tail's analytic contribution.
double laplace_direct(const AtomicMeasure& nu, double t);
/// Same transform through t int_0^inf nu([0, y]) e^{-t y} dy, integrated
/// exactly on each step of the counting function. Throws disagreement when
/// the two differ by more than quad_tol (1 + |nu-hat|).
double laplace_cavalieri(const AtomicMeasure& nu, double t, double quad_tol = 1e-10);
/// nu([0, lambda]); throws coverage beyond the last atom without a tail.
double counting(const AtomicMeasure& nu, double lambda);

struct AbelEstimate {
  std::vector<double> t;
  std::vector<double> values;  // t^gamma nu-hat(t)
  Trend trend;
  double limit_estimate = 0.0;
};

/// Throws coverage when the unseen continuation of an untailed measure could
/// move nu-hat(t) by more than 1e-12 relative.
AbelEstimate abel_limit_estimate(const AtomicMeasure& nu, double gamma, const std::vector<double>& t_grid);

struct CountingEstimate {
  std::vector<double> lambda;
  std::vector<double> values;  // nu([0, lambda]) / lambda^gamma
  Trend trend;
  double liminf_estimate = 0.0;
  double limsup_estimate = 0.0;
};

CountingEstimate counting_limit_estimate(const AtomicMeasure& nu, double gamma,
                                         const std::vector<double>& lambda_grid);

struct AuditCheck {
  std::string name;
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs for upper bounds, lhs - rhs for lower bounds
};

struct AuditReport {
  double gamma = 0.0;
  double tolerance = 0.05;
  AbelEstimate abel;
  CountingEstimate count;
  AuditCheck abelian_limsup;   // limsup t^g nu-hat <= Gamma(g+1) limsup count
  AuditCheck abelian_liminf;   // liminf t^g nu-hat >= Gamma(g+1) liminf count
  AuditCheck tauberian_e;      // limsup count <= e limsup t^g nu-hat
  AuditCheck liminf_positive;  // liminf count > 0 when 0 < liminf, limsup < inf for the transform
  bool all_hold() const noexcept;
};

/// Relative slack `tolerance` is granted to checks (i)-(iii).
AuditReport one_sided_audit(const AtomicMeasure& nu, double gamma, const std::vector<double>& t_grid,
                            const std::vector<double>& lambda_grid, double tolerance = 0.05);

struct AuditGrids {
  std::vector<double> t;
  std::vector<double> lambda;  // reciprocals of t, increasing
};

/// Log grid in t ending where an untailed measure is still truncation-sound
/// (never below 1e-6), with lambda = 1 / t.
AuditGrids default_audit_grids(const AtomicMeasure& nu, int count = 17);

struct KaramataCheck {
  double gamma = 0.0;
  double a_estimate = 0.0;  // lim t^g nu-hat
  double c_estimate = 0.0;  // lim nu([0, lambda]) / lambda^g
  double relation_residual = 0.0;             // |a - C Gamma(g+1)|
  std::optional<double> ball_form_residual;   // |C - a omega_k / pi^{k/2}| when g = k/2
};

KaramataCheck karamata_crosscheck(const AtomicMeasure& nu, double gamma, const std::vector<double>& t_grid,
                                  const std::vector<double>& lambda_grid);
/// Grids t = 1e-2..1e-6 and lambda = 1e2..1e6, nine log points each.
KaramataCheck karamata_crosscheck(const AtomicMeasure& nu, double gamma);

std::string measure_to_csv(const AtomicMeasure& nu);
/// `position,mass` rows; optional `# tail_coef=` and `# tail_exponent=` lines.
AtomicMeasure measure_from_csv(const std::string& text);

nlohmann::ordered_json audit_to_json(const AuditReport& report);
nlohmann::ordered_json karamata_to_json(const KaramataCheck& check);

}  // namespace weyllab
