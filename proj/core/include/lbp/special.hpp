#pragma once

namespace lbp {

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, x > 0.
/// Series for small x, continued fraction for large x; ~1e-15 relative.
double expint_e1(double x);

/// log(Gamma(x)) for x > 0.
double log_gamma(double x);

} // namespace lbp
