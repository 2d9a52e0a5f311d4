#pragma once

#include <functional>
#include <vector>

#include "lbp/trilean.hpp"

namespace lbp {

/// Tolerances and truncation policy for all improper integrals in the library.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 48;          // bisection depth of the adaptive rule
    int max_blocks = 1200;       // geometric blocks for improper integrals
    double block_ratio = 0.5;    // shrink/growth factor of the blocks
    double indeterminate_band = 0.02;  // +-band around critical exponents
};

using Fn = std::function<double(double)>;

/// One application of the 15-point Gauss--Kronrod rule on [a,b].
/// Returns the Kronrod value; *err_est receives |Kronrod - Gauss|.
double gauss_kronrod_15(const Fn& f, double a, double b, double* err_est = nullptr);

/// Adaptive quadrature on a finite interval. Integrand must be finite on (a,b);
/// integrable endpoint singularities should go through integrate_to_zero.
double integrate(const Fn& f, double a, double b, const QuadratureConfig& cfg = {});

/// Result of an improper integral with its truncation diagnostics.
struct ImproperResult {
    double value = 0.0;
    double tail_estimate = 0.0;  // estimated mass beyond the last block
    double last_edge = 0.0;      // where integration stopped
    int blocks = 0;
    bool converged = false;
};

/// integral_{a}^{inf} f, by geometrically growing blocks with a power/exponential
/// tail estimate. Throws truncation_error when the blocks do not decay.
ImproperResult integrate_to_inf(const Fn& f, double a, const QuadratureConfig& cfg = {});

/// integral_{0}^{b} f where f may have an integrable singularity at 0.
ImproperResult integrate_to_zero(const Fn& f, double b, const QuadratureConfig& cfg = {});

/// ln of integral_a^b exp(log_f(z)) dz, evaluated without leaving log space.
/// Safe when log_f spans hundreds of units across the interval (it is sampled
/// on GK15 nodes and offset by the maximum).
double log_integral_segment(const Fn& log_f, double a, double b);

/// ln(e^a + e^b)
double log_add(double a, double b);

/// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Divergence analysis of an improper integral from its log-integrand.
///
/// Primary rule: fit p in log f ~ p * log z over the outermost sampled decades;
/// compare against the critical exponent -1. When p lands inside the
/// indeterminate band, refit the slowly varying part z*f(z) against ln|ln z|
/// (integrals of |ln z|^q / z converge iff q < -1). Only when both fits land
/// in their bands is the result Undecidable.
struct TailAnalysis {
    Decision diverges;        // Yes = integral infinite
    double exponent = 0.0;    // primary fitted exponent
    double log_exponent = 0.0;// secondary fitted exponent (slowly varying part)
    bool used_secondary = false;
};

/// Behaviour of integral_0 f near 0: samples log_f on z = z_hi * ratio^k down to z_lo.
TailAnalysis classify_at_zero(const Fn& log_f, double z_hi, double z_lo,
                              const QuadratureConfig& cfg = {});

/// Behaviour of integral^inf f: samples log_f on z = z_lo * ratio^-k up to z_hi.
TailAnalysis classify_at_inf(const Fn& log_f, double z_lo, double z_hi,
                             const QuadratureConfig& cfg = {});

} // namespace lbp
