#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "weyllab/model_spaces.hpp"

namespace weyllab {

struct SpectralLevel {
  double lambda = 0.0;
  std::int64_t multiplicity = 1;
  bool operator==(const SpectralLevel&) const = default;
};

/// Eigenvalues with multiplicities. Every eigenvalue <= complete_up_to is
/// listed with its full multiplicity. complete_up_to may exceed the largest
/// listed eigenvalue when a solver has certified that no eigenvalue lies in
/// between (suspension spectra are complete up to their lambda_max).
class Spectrum {
 public:
  Spectrum() = default;
  /// Entries must be strictly increasing with nonnegative lambdas and positive
  /// multiplicities.
  Spectrum(std::vector<SpectralLevel> entries, double complete_up_to);

  /// Sorts, merges eigenvalues closer than 1e-9 (1 + lambda), sums multiplicities.
  static Spectrum from_levels(std::vector<SpectralLevel> levels, double complete_up_to);
  static Spectrum from_values(std::span<const double> values, double complete_up_to);

  const std::vector<SpectralLevel>& entries() const noexcept { return entries_; }
  double complete_up_to() const noexcept { return complete_up_to_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::int64_t total_multiplicity() const noexcept;

  /// N(lambda): eigenvalues <= lambda counted with multiplicity.
  std::int64_t counting(double lambda) const;
  /// i-th smallest eigenvalue with multiplicity, i >= 1.
  double ith_eigenvalue(std::int64_t i) const;

  bool operator==(const Spectrum&) const = default;

 private:
  std::vector<SpectralLevel> entries_;
  double complete_up_to_ = 0.0;
};

/// Relative tolerance used when merging coincident eigenvalues.
inline constexpr double kMergeTolerance = 1e-9;

/// Closed-form spectra: k(k+p) on weighted intervals, (2 pi k / L)^2 on
/// circles and the Hermite spectrum on Gaussian space. `count` is the number
/// of distinct levels.
Spectrum oracle_spectrum(const ModelSpace& space, int count);

/// Oracle spectrum with every level <= lambda_max.
Spectrum oracle_spectrum_up_to(const ModelSpace& space, double lambda_max);

std::string to_csv(const Spectrum& spectrum);
Spectrum spectrum_from_csv(const std::string& text);

}  // namespace weyllab
