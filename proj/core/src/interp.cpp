#include "lbp/interp.hpp"

#include <algorithm>
#include <cmath>

#include "lbp/errors.hpp"

namespace lbp {

namespace {

void check_grid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw domain_error("interpolation grid needs >= 2 matching nodes");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw domain_error("interpolation grid must be strictly increasing");
}

} // namespace

CubicHermite CubicHermite::monotone(std::vector<double> x, std::vector<double> y) {
    check_grid(x, y);
    std::size_t n = x.size();
    std::vector<double> h(n - 1), del(n - 1), d(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        del[k] = (y[k + 1] - y[k]) / h[k];
    }
    // Fritsch--Carlson: harmonic-mean slopes, flattened across local extrema
    d[0] = del[0];
    d[n - 1] = del[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (del[k - 1] * del[k] <= 0.0) {
            d[k] = 0.0;
        } else {
            double w1 = 2.0 * h[k] + h[k - 1];
            double w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    CubicHermite out;
    out.x_ = std::move(x);
    out.y_ = std::move(y);
    out.d_ = std::move(d);
    return out;
}

CubicHermite CubicHermite::with_slopes(std::vector<double> x, std::vector<double> y,
                                       std::vector<double> dy) {
    check_grid(x, y);
    if (dy.size() != x.size())
        throw domain_error("with_slopes: slope array size mismatch");
    CubicHermite out;
    out.x_ = std::move(x);
    out.y_ = std::move(y);
    out.d_ = std::move(dy);
    return out;
}

std::size_t CubicHermite::segment(double xq) const {
    if (xq <= x_.front()) return 0;
    if (xq >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double CubicHermite::operator()(double xq) const {
    std::size_t k = segment(xq);
    double h = x_[k + 1] - x_[k];
    double t = (xq - x_[k]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1;
    double h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2;
    double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
}

double CubicHermite::derivative(double xq) const {
    std::size_t k = segment(xq);
    double h = x_[k + 1] - x_[k];
    double t = (xq - x_[k]) / h;
    double t2 = t * t;
    double g00 = (6 * t2 - 6 * t) / h;
    double g10 = 3 * t2 - 4 * t + 1;
    double g01 = (-6 * t2 + 6 * t) / h;
    double g11 = 3 * t2 - 2 * t;
    return g00 * y_[k] + g10 * d_[k] + g01 * y_[k + 1] + g11 * d_[k + 1];
}

double CubicHermite::inverse(double yq) const {
    if (yq <= y_.front()) return x_.front();
    if (yq >= y_.back()) return x_.back();
    // locate segment by nodal values, then bisect the cubic
    auto it = std::upper_bound(y_.begin(), y_.end(), yq);
    std::size_t k = static_cast<std::size_t>(it - y_.begin()) - 1;
    double lo = x_[k], hi = x_[k + 1];
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((*this)(mid) < yq)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * (std::abs(hi) + 1.0)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace lbp
