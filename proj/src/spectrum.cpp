#include "weyllab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "detail/overloaded.hpp"
#include "weyllab/error.hpp"
#include "weyllab/io.hpp"
#include "weyllab/numerics.hpp"

namespace weyllab {

using detail::Overloaded;

Spectrum::Spectrum(std::vector<SpectralLevel> entries, double complete_up_to)
    : entries_(std::move(entries)), complete_up_to_(complete_up_to) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i].lambda >= 0.0) || !std::isfinite(entries_[i].lambda)) {
      throw Error(ErrorCode::domain, "eigenvalues must be finite and nonnegative");
    }
    if (entries_[i].multiplicity < 1) throw Error(ErrorCode::domain, "multiplicity must be >= 1");
    if (i > 0 && !(entries_[i].lambda > entries_[i - 1].lambda)) {
      throw Error(ErrorCode::domain, "spectrum entries must be strictly increasing");
    }
  }
  if (!std::isfinite(complete_up_to_)) throw Error(ErrorCode::domain, "complete_up_to must be finite");
}

Spectrum Spectrum::from_levels(std::vector<SpectralLevel> levels, double complete_up_to) {
  std::sort(levels.begin(), levels.end(), [](const SpectralLevel& a, const SpectralLevel& b) {
    return a.lambda < b.lambda || (a.lambda == b.lambda && a.multiplicity < b.multiplicity);
  });
  std::vector<SpectralLevel> merged;
  merged.reserve(levels.size());
  // Clusters are anchored at their first member so merging cannot chain.
  double anchor = 0.0;
  for (const auto& level : levels) {
    if (!merged.empty() && level.lambda - anchor <= kMergeTolerance * (1.0 + anchor)) {
      merged.back().multiplicity += level.multiplicity;
    } else {
      merged.push_back(level);
      anchor = level.lambda;
    }
  }
  // Tiny negative values are solver noise around a zero mode.
  for (auto& level : merged) {
    if (level.lambda < 0.0 && level.lambda > -1e-8) level.lambda = 0.0;
  }
  return Spectrum(std::move(merged), complete_up_to);
}

Spectrum Spectrum::from_values(std::span<const double> values, double complete_up_to) {
  std::vector<SpectralLevel> levels;
  levels.reserve(values.size());
  for (double v : values) levels.push_back({v, 1});
  return from_levels(std::move(levels), complete_up_to);
}

std::int64_t Spectrum::total_multiplicity() const noexcept {
  std::int64_t total = 0;
  for (const auto& e : entries_) total += e.multiplicity;
  return total;
}

std::int64_t Spectrum::counting(double lambda) const {
  if (lambda > complete_up_to_) {
    std::ostringstream os;
    os << "lambda " << lambda << " exceeds complete_up_to " << complete_up_to_;
    throw Error(ErrorCode::out_of_range, os.str());
  }
  std::int64_t n = 0;
  for (const auto& e : entries_) {
    if (e.lambda > lambda) break;
    n += e.multiplicity;
  }
  return n;
}

double Spectrum::ith_eigenvalue(std::int64_t i) const {
  if (i < 1) throw Error(ErrorCode::out_of_range, "eigenvalue index starts at 1");
  std::int64_t seen = 0;
  for (const auto& e : entries_) {
    seen += e.multiplicity;
    if (seen >= i) return e.lambda;
  }
  throw Error(ErrorCode::out_of_range, "eigenvalue index exceeds listed multiplicity");
}

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Exact: each partial product is itself a binomial coefficient.
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

}  // namespace

Spectrum oracle_spectrum(const ModelSpace& space, int count) {
  validate(space);
  if (count < 1) throw Error(ErrorCode::domain, "count must be >= 1");
  std::vector<SpectralLevel> levels;
  levels.reserve(count);
  std::visit(Overloaded{
                 [&](const WeightedInterval& s) {
                   for (int k = 0; k < count; ++k) levels.push_back({k * (k + s.exponent), 1});
                 },
                 [&](const Circle& s) {
                   levels.push_back({0.0, 1});
                   for (int k = 1; k < count; ++k) {
                     const double w = 2.0 * kPi * k / s.length;
                     levels.push_back({w * w, 2});
                   }
                 },
                 [&](const SuspensionTower&) {
                   throw Error(ErrorCode::unsupported_variant,
                               "tower spectra come from suspension_spectrum");
                 },
                 [&](const Gaussian& s) {
                   for (int m = 0; m < count; ++m) {
                     levels.push_back({static_cast<double>(m), binomial(m + s.dim - 1, s.dim - 1)});
                   }
                 },
             },
             space);
  const double last = levels.back().lambda;
  return Spectrum(std::move(levels), last);
}

Spectrum oracle_spectrum_up_to(const ModelSpace& space, double lambda_max) {
  validate(space);
  if (!(lambda_max >= 0.0)) throw Error(ErrorCode::domain, "lambda_max must be nonnegative");
  const int count = std::visit(
      Overloaded{
          [&](const WeightedInterval& s) {
            // k(k+p) <= lambda_max
            const double k = 0.5 * (-s.exponent + std::sqrt(s.exponent * s.exponent + 4.0 * lambda_max));
            int n = static_cast<int>(std::floor(k)) + 1;
            while (n * (n + s.exponent) <= lambda_max) ++n;
            return n;
          },
          [&](const Circle& s) {
            return static_cast<int>(std::floor(std::sqrt(lambda_max) * s.length / (2.0 * kPi))) + 1;
          },
          [&](const SuspensionTower&) -> int {
            throw Error(ErrorCode::unsupported_variant, "tower spectra come from suspension_spectrum");
          },
          [&](const Gaussian&) { return static_cast<int>(std::floor(lambda_max)) + 1; },
      },
      space);
  // One extra level so that complete_up_to reaches past lambda_max; the
  // estimate above can land one short through rounding.
  Spectrum spectrum = oracle_spectrum(space, count + 1);
  for (int extra = 2; spectrum.entries().back().lambda <= lambda_max; ++extra) {
    spectrum = oracle_spectrum(space, count + extra);
  }
  return spectrum;
}

std::string to_csv(const Spectrum& spectrum) {
  std::ostringstream os;
  os << "lambda,multiplicity\n";
  for (const auto& e : spectrum.entries()) {
    os << format_double(e.lambda) << ',' << e.multiplicity << '\n';
  }
  os << "# complete_up_to=" << format_double(spectrum.complete_up_to()) << '\n';
  return os.str();
}

Spectrum spectrum_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SpectralLevel> levels;
  double complete = std::numeric_limits<double>::quiet_NaN();
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# complete_up_to=", 0) == 0) {
      complete = std::stod(line.substr(17));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != "lambda,multiplicity") {
        throw Error(ErrorCode::config, "line 1: expected header 'lambda,multiplicity'");
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::config, "line " + std::to_string(line_no) + ": expected two fields");
    }
    try {
      levels.push_back({std::stod(line.substr(0, comma)), std::stoll(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw Error(ErrorCode::config, "line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (std::isnan(complete)) throw Error(ErrorCode::config, "missing '# complete_up_to=' trailer");
  return Spectrum(std::move(levels), complete);
}

}  // namespace weyllab
