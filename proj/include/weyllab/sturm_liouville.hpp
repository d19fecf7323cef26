#pragma once

#include <cstdint>
#include <vector>

#include "weyllab/model_spaces.hpp"
#include "weyllab/spectrum.hpp"

namespace weyllab {

/// phi'' + a cot(t) phi' + (lambda - mu / sin^2 t) phi = 0 on (0, pi), with the
/// bounded (Friedrichs) solution selected at both singular endpoints.
/// mu = 0 is the weighted-interval problem -(w u')' = lambda w u, w = sin^a.
struct RadialProblem {
  double exponent = 0.0;  // a
  double mu = 0.0;        // separation constant from the base space
};

struct PruferOptions {
  double epsilon = 1e-6;  // integration starts at this distance from the endpoint
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

/// Frobenius exponent of the bounded solution phi ~ t^s at t = 0.
double frobenius_exponent(const RadialProblem& problem);

/// Prufer phase theta(pi/2) of the solution regular at t = 0, written for the
/// Liouville normal form v = sin^{a/2} phi. Eigenvalue k satisfies
/// theta(pi/2) = (k + 1) pi / 2 (even or odd about pi/2 by symmetry).
double prufer_phase(const RadialProblem& problem, double lambda, const PruferOptions& options = {});

/// Number of eigenvalues <= lambda.
std::int64_t radial_count(const RadialProblem& problem, double lambda, const PruferOptions& options = {});

/// k-th eigenvalue (k >= 0) by bisection on the phase condition within [lo, hi].
double radial_eigenvalue(const RadialProblem& problem, int k, double lo, double hi, double tol,
                         const PruferOptions& options = {});

/// lambda_k of the weighted interval by Prufer shooting, bracketed by
/// [0, 4 (k + p + 2)^2].
double prufer_eigenvalue(const WeightedInterval& space, int k, double tol = 1e-10,
                         const PruferOptions& options = {});

/// First `count` eigenvalues of the weighted interval by Prufer shooting.
Spectrum prufer_spectrum(const WeightedInterval& space, int count, double tol = 1e-10,
                         const PruferOptions& options = {});

struct SuspensionOptions {
  PruferOptions prufer{};
  double tol = 1e-9;  // relative bracket width for each radial eigenvalue
  unsigned threads = 1;
};

/// Spectrum of the spherical suspension with radial measure sin^a t dt over a
/// base with spectrum `base`: every eigenvalue <= lambda_max with summed
/// multiplicities. Requires base.complete_up_to() >= lambda_max, since base
/// modes with mu > lambda_max only contribute radial eigenvalues > lambda_max.
Spectrum suspension_spectrum(const Spectrum& base, double radial_exponent, double lambda_max,
                             const SuspensionOptions& options = {});

/// Tower spectrum: WeightedInterval(base_exponent) oracle suspended
/// (levels - 1) times with radial exponent 1.
Spectrum tower_spectrum(const SuspensionTower& tower, double lambda_max,
                        const SuspensionOptions& options = {});

}  // namespace weyllab
