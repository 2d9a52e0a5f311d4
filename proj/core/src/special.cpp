#include "lbp/special.hpp"

#include <cmath>

#include "lbp/errors.hpp"

namespace lbp {

double expint_e1(double x) {
    if (!(x > 0.0)) throw domain_error("expint_e1: x must be positive");
    if (x <= 1.0) {
        // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
        constexpr double kEulerGamma = 0.57721566490153286060651209008240;
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -x / k;
            double add = -term / k;
            sum += add;
            if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-300)) break;
        }
        return -kEulerGamma - std::log(x) + sum;
    }
    // Lentz continued fraction: E1(x) = e^{-x} / (x + 1/(1 + 1/(x + 2/(1 + ...))))
    double b = x + 1.0;
    double c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i <= 200; ++i) {
        double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

double log_gamma(double x) { return std::lgamma(x); }

} // namespace lbp
