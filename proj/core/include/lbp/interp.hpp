#pragma once

#include <cstddef>
#include <vector>

namespace lbp {

/// Piecewise cubic Hermite interpolant on a strictly increasing grid.
///
/// Two construction modes:
///  - monotone(x, y): Fritsch--Carlson limited slopes; preserves monotone data
///    (used for tabulated tails and inverse lookups).
///  - with_slopes(x, y, dy): exact nodal derivatives; fourth-order accurate for
///    smooth functions (used for cached special functions whose derivative is
///    known in closed form, e.g. m' = psi/omega).
class CubicHermite {
public:
    CubicHermite() = default;

    static CubicHermite monotone(std::vector<double> x, std::vector<double> y);
    static CubicHermite with_slopes(std::vector<double> x, std::vector<double> y,
                                    std::vector<double> dy);

    double operator()(double xq) const;
    double derivative(double xq) const;

    /// Inverse lookup for monotone increasing data: smallest x with f(x) = yq,
    /// by bisection on the interpolant (callers refine with Newton when they
    /// have the exact derivative).
    double inverse(double yq) const;

    bool empty() const { return x_.empty(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    double y_front() const { return y_.front(); }
    double y_back() const { return y_.back(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

private:
    std::size_t segment(double xq) const;

    std::vector<double> x_, y_, d_;  // nodes, values, nodal slopes
};

} // namespace lbp
