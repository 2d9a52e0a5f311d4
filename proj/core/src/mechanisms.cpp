#include "lbp/mechanisms.hpp"

#include <algorithm>
#include <cmath>

#include "lbp/errors.hpp"
#include "lbp/special.hpp"

namespace lbp {

namespace {

template <class... Ts>
struct overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

void validate_levy(const LevyMeasureSpec& levy) {
    std::visit(
        overload{
            [](const NoJumps&) {},
            [](const StableJumps& s) {
                bool alpha_ok = (s.alpha > 0.0 && s.alpha < 1.0) ||
                                (s.alpha > 1.0 && s.alpha < 2.0);
                if (!alpha_ok || !(s.c_alpha > 0.0))
                    throw domain_error(
                        "stable jumps need alpha in (0,1) u (1,2) and c_alpha > 0");
            },
            [](const GammaTailJumps& g) {
                if (!(g.shape > 0.0) || !(g.rate > 0.0))
                    throw domain_error("gamma jumps need shape > 0 and rate > 0");
            },
            [](const CompoundPoissonExpJumps& c) {
                if (!(c.rate > 0.0) || !(c.mean_jump > 0.0))
                    throw domain_error("cpexp jumps need rate > 0 and mean_jump > 0");
            },
            [](const TabulatedTail& t) {
                if (t.x.size() != t.tail.size() || t.x.size() < 2)
                    throw domain_error("tabulated tail needs >= 2 (x, tail) pairs");
                if (!(t.x.front() > 0.0))
                    throw domain_error("tabulated tail abscissae must be positive");
                for (std::size_t i = 1; i < t.x.size(); ++i) {
                    if (!(t.x[i] > t.x[i - 1]))
                        throw domain_error("tabulated tail abscissae must increase");
                    if (t.tail[i] > t.tail[i - 1])
                        throw domain_error("tabulated tail values must not increase");
                }
                for (double v : t.tail)
                    if (!(v > 0.0))
                        throw domain_error("tabulated tail values must be positive");
                if (!(t.exp0 >= 0.0 && t.exp0 < 2.0))
                    throw domain_error("tabulated tail exponent at 0 must be in [0,2)");
                if (!(t.expinf >= 0.0))
                    throw domain_error("tabulated tail exponent at inf must be >= 0");
            }},
        levy);
}

// stable density constant: mu(du) = C u^{-1-alpha} du
double stable_density_const(const StableJumps& s) {
    if (s.alpha < 1.0)
        return s.alpha * s.c_alpha / std::tgamma(1.0 - s.alpha);
    return s.c_alpha * s.alpha * (s.alpha - 1.0) / std::tgamma(2.0 - s.alpha);
}

} // namespace

BranchingMechanism::BranchingMechanism(double b, double gamma2, LevyMeasureSpec levy)
    : b_(b), gamma2_(gamma2), levy_(std::move(levy)) {
    if (!std::isfinite(b_) || !std::isfinite(gamma2_) || gamma2_ < 0.0)
        throw domain_error("mechanism needs finite b and gamma2 >= 0");
    validate_levy(levy_);
    if (const auto* t = std::get_if<TabulatedTail>(&levy_)) {
        std::vector<double> lx(t->x.size()), lt(t->x.size());
        for (std::size_t i = 0; i < t->x.size(); ++i) {
            lx[i] = std::log(t->x[i]);
            lt[i] = std::log(t->tail[i]);
        }
        log_tail_interp_ = CubicHermite::monotone(std::move(lx), std::move(lt));
    }
}

bool BranchingMechanism::has_jumps() const {
    return !std::holds_alternative<NoJumps>(levy_);
}

bool BranchingMechanism::finite_variation_jumps() const {
    return std::visit(
        overload{[](const NoJumps&) { return true; },
                 [](const StableJumps& s) { return s.alpha < 1.0; },
                 [](const GammaTailJumps&) { return true; },
                 [](const CompoundPoissonExpJumps&) { return true; },
                 [](const TabulatedTail& t) { return t.exp0 < 1.0; }},
        levy_);
}

double BranchingMechanism::tail_mass(double x) const {
    if (!(x > 0.0)) throw domain_error("tail_mass: x must be positive");
    return std::visit(
        overload{[](const NoJumps&) { return 0.0; },
                 [x](const StableJumps& s) {
                     double c = stable_density_const(s);
                     return c / s.alpha * std::pow(x, -s.alpha);
                 },
                 [x](const GammaTailJumps& g) { return g.shape * expint_e1(g.rate * x); },
                 [x](const CompoundPoissonExpJumps& c) {
                     return c.rate * std::exp(-x / c.mean_jump);
                 },
                 [this, x](const TabulatedTail& t) {
                     if (x < t.x.front())
                         return t.tail.front() * std::pow(x / t.x.front(), -t.exp0);
                     if (x > t.x.back())
                         return t.tail.back() * std::pow(x / t.x.back(), -t.expinf);
                     return std::exp((*log_tail_interp_)(std::log(x)));
                 }},
        levy_);
}

double BranchingMechanism::jump_psi(double z) const {
    return std::visit(
        overload{[](const NoJumps&) { return 0.0; },
                 [z](const StableJumps& s) {
                     double v = s.c_alpha * std::pow(z, s.alpha);
                     return s.alpha < 1.0 ? -v : v;
                 },
                 [z](const GammaTailJumps& g) {
                     return -g.shape * std::log1p(z / g.rate);
                 },
                 [z](const CompoundPoissonExpJumps& c) {
                     double theta = 1.0 / c.mean_jump;
                     return -c.rate * z / (theta + z);
                 },
                 [this, z](const TabulatedTail& t) {
                     if (z == 0.0) return 0.0;
                     // tail-form Laplace identities; both integrands decay
                     // exponentially past u ~ 1/z
                     QuadratureConfig cfg;
                     cfg.abs_tol = 1e-13;
                     cfg.rel_tol = 1e-11;
                     if (t.exp0 < 1.0) {
                         // -z int_0^inf e^{-zu} mu_bar(u) du
                         auto f = [this, z](double u) {
                             return std::exp(-z * u) * tail_mass(u);
                         };
                         double pivot = std::min(1.0 / z, t.x.back());
                         double v = integrate_to_zero(f, pivot, cfg).value +
                                    integrate_to_inf(f, pivot, cfg).value;
                         return -z * v;
                     }
                     // +z int_0^inf (1 - e^{-zu}) mu_bar(u) du
                     auto f = [this, z](double u) {
                         return -std::expm1(-z * u) * tail_mass(u);
                     };
                     double pivot = std::min(1.0 / z, t.x.back());
                     double v = integrate_to_zero(f, pivot, cfg).value +
                                integrate_to_inf(f, pivot, cfg).value;
                     return z * v;
                 }},
        levy_);
}

double BranchingMechanism::psi(double z) const {
    if (z < 0.0) throw domain_error("psi: z must be non-negative");
    if (z == 0.0) return 0.0;
    double v = -b_ * z + gamma2_ * z * z + jump_psi(z);
    if (!std::isfinite(v)) throw numeric_error("psi: non-finite value");
    return v;
}

double BranchingMechanism::tail_integral(double z) const {
    if (!(z >= 0.0)) throw domain_error("tail_integral: z must be >= 0");
    if (z == 0.0) return 0.0;
    if (!finite_variation_jumps())
        throw domain_error("tail_integral: tail not integrable at 0");
    return std::visit(
        overload{[](const NoJumps&) { return 0.0; },
                 [z](const StableJumps& s) {
                     double c = stable_density_const(s);
                     return c / s.alpha * std::pow(z, 1.0 - s.alpha) / (1.0 - s.alpha);
                 },
                 [z](const GammaTailJumps& g) {
                     return g.shape *
                            (z * expint_e1(g.rate * z) - std::expm1(-g.rate * z) / g.rate);
                 },
                 [z](const CompoundPoissonExpJumps& c) {
                     double theta = 1.0 / c.mean_jump;
                     return -c.rate * std::expm1(-theta * z) / theta;
                 },
                 [this, z](const TabulatedTail&) {
                     QuadratureConfig cfg;
                     cfg.abs_tol = 1e-13;
                     cfg.rel_tol = 1e-11;
                     return integrate_to_zero([this](double u) { return tail_mass(u); },
                                              z, cfg)
                         .value;
                 }},
        levy_);
}

double BranchingMechanism::small_jump_mean(double eps) const {
    double e = std::min(eps, 1.0);
    if (!(e > 0.0)) throw domain_error("small_jump_mean: eps must be positive");
    if (!finite_variation_jumps())
        throw domain_error("small_jump_mean: jumps have infinite variation");
    return std::visit(
        overload{[](const NoJumps&) { return 0.0; },
                 [e](const StableJumps& s) {
                     double c = stable_density_const(s);
                     return c * std::pow(e, 1.0 - s.alpha) / (1.0 - s.alpha);
                 },
                 [e](const GammaTailJumps& g) {
                     return -g.shape * std::expm1(-g.rate * e) / g.rate;
                 },
                 [e](const CompoundPoissonExpJumps& c) {
                     double theta = 1.0 / c.mean_jump;
                     return c.rate * (1.0 - std::exp(-theta * e) * (1.0 + theta * e)) /
                            theta;
                 },
                 [this, e](const TabulatedTail&) {
                     return tail_integral(e) - e * tail_mass(e);
                 }},
        levy_);
}

double BranchingMechanism::large_jump_mean_above(double eps) const {
    if (!(eps > 0.0)) throw domain_error("large_jump_mean_above: eps must be positive");
    return std::visit(
        overload{[](const NoJumps&) { return 0.0; },
                 [eps](const StableJumps& s) {
                     if (s.alpha < 1.0)
                         throw domain_error(
                             "large_jump_mean_above: finite-variation family");
                     double c = stable_density_const(s);
                     return c * std::pow(eps, 1.0 - s.alpha) / (s.alpha - 1.0);
                 },
                 [](const GammaTailJumps&) -> double {
                     throw domain_error("large_jump_mean_above: finite-variation family");
                 },
                 [](const CompoundPoissonExpJumps&) -> double {
                     throw domain_error("large_jump_mean_above: finite-variation family");
                 },
                 [this, eps](const TabulatedTail& t) {
                     if (t.exp0 < 1.0)
                         throw domain_error(
                             "large_jump_mean_above: finite-variation family");
                     if (t.expinf <= 1.0)
                         throw domain_error(
                             "large_jump_mean_above: infinite mean jump size");
                     QuadratureConfig cfg;
                     double tail =
                         integrate_to_inf([this](double u) { return tail_mass(u); }, eps,
                                          cfg)
                             .value;
                     return eps * tail_mass(eps) + tail;
                 }},
        levy_);
}

double BranchingMechanism::sim_drift(double eps) const {
    if (!has_jumps()) return b_;
    if (finite_variation_jumps()) return b_ + small_jump_mean(eps);
    return b_ - large_jump_mean_above(std::min(eps, 1.0));
}

double BranchingMechanism::jump_rate(double eps) const {
    if (!has_jumps()) return 0.0;
    return tail_mass(eps);
}

double BranchingMechanism::sample_jump(PathRng& rng, double eps) const {
    double total = tail_mass(eps);
    return std::visit(
        overload{[](const NoJumps&) -> double {
                     throw domain_error("sample_jump: mechanism has no jumps");
                 },
                 [&rng, eps](const StableJumps& s) {
                     return eps * std::pow(rng.uniform(), -1.0 / s.alpha);
                 },
                 [&rng, eps](const CompoundPoissonExpJumps& c) {
                     return eps + c.mean_jump * rng.exponential();
                 },
                 [this, &rng, eps, total](const auto&) {
                     // generic inverse of the monotone tail by log-bisection
                     double target = total * rng.uniform();
                     double lo = eps, hi = eps;
                     while (tail_mass(hi) > target) {
                         hi *= 2.0;
                         if (hi > 1e300) return hi;
                     }
                     for (int i = 0; i < 200; ++i) {
                         double mid = std::sqrt(lo * hi);
                         if (tail_mass(mid) > target)
                             lo = mid;
                         else
                             hi = mid;
                         if (hi - lo <= 1e-12 * hi) break;
                     }
                     return std::sqrt(lo * hi);
                 }},
        levy_);
}

MechanismClass classify(const BranchingMechanism& mech, double z_max) {
    if (mech.gamma2() == 0.0 && mech.finite_variation_jumps() && mech.b() >= 0.0)
        return {MechanismClass::Kind::Subordinator, mech.b(), 0.0};

    // locate the last sign change of psi on a geometric grid, then bisect
    const double z_lo = 1e-8;
    const int per_decade = 8;
    int decades = static_cast<int>(std::ceil(std::log10(z_max / z_lo)));
    double last_nonpos = -1.0, first_pos_after = -1.0;
    bool last_pos = mech.psi(z_lo) > 0.0;
    if (!last_pos) last_nonpos = z_lo;
    for (int i = 1; i <= decades * per_decade; ++i) {
        double z = z_lo * std::pow(10.0, static_cast<double>(i) / per_decade);
        if (z > z_max) z = z_max;
        bool pos = mech.psi(z) > 0.0;
        if (!pos) {
            last_nonpos = z;
            first_pos_after = -1.0;
        } else if (first_pos_after < 0.0) {
            first_pos_after = z;
        }
        last_pos = pos;
        if (z >= z_max) break;
    }
    if (!last_pos)
        throw solver_error("classify: psi not positive anywhere below z_max; "
                           "no General threshold found");
    if (last_nonpos < 0.0)
        return {MechanismClass::Kind::General, 0.0, 0.0};

    double lo = last_nonpos, hi = first_pos_after;
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(lo * hi);
        if (mech.psi(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return {MechanismClass::Kind::General, 0.0, 0.5 * (lo + hi)};
}

bool check_grey(const BranchingMechanism& mech, const QuadratureConfig& cfg) {
    MechanismClass mc = classify(mech);
    if (mc.is_subordinator())
        throw domain_error("check_grey: requires a General mechanism");
    double z_lo = std::max(1.0, 4.0 * mc.theta) * 10.0;
    double z_hi = z_lo * 1e10;
    auto log_f = [&mech](double z) { return -std::log(mech.psi(z)); };
    TailAnalysis ta = classify_at_inf(log_f, z_lo, z_hi, cfg);
    if (ta.diverges.value == Trilean::Undecidable)
        throw undecidable_error("check_grey: exponent in indeterminate band",
                                ta.exponent);
    return ta.diverges.value == Trilean::No;
}

bool check_log_moment(const BranchingMechanism& mech, const QuadratureConfig& cfg) {
    if (const auto* t = std::get_if<TabulatedTail>(&mech.levy())) {
        if (t->expinf > cfg.indeterminate_band) return true;
        // Declared exponent ~ 0: decide from the trend of int mu_bar(u)/u du
        // over the last decades of the table itself.
        double z_hi = t->x.back();
        double z_lo = std::max(t->x.front(), z_hi / 1e4);
        if (!(z_hi > 4.0 * z_lo))
            throw undecidable_error(
                "check_log_moment: table too short to resolve a flat tail", t->expinf);
        auto log_f = [&mech](double u) {
            return std::log(mech.tail_mass(u)) - std::log(u);
        };
        TailAnalysis ta = classify_at_inf(log_f, z_lo, z_hi, cfg);
        if (ta.diverges.value == Trilean::Undecidable)
            throw undecidable_error(
                "check_log_moment: tabulated tail exponent in indeterminate band",
                ta.exponent);
        return ta.diverges.value == Trilean::No;
    }
    // every closed parametric family has an exponentially bounded or
    // polynomially decaying tail with finite log-moment
    return true;
}

ModelSpec::ModelSpec(BranchingMechanism mech, double sigma_, double c_)
    : mechanism(std::move(mech)), sigma(sigma_), c(c_) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw domain_error("model: sigma must be finite and >= 0");
    if (!(c >= 0.0) || !std::isfinite(c))
        throw domain_error("model: c must be finite and >= 0");
}

double ModelSpec::omega(double x) const {
    if (x < 0.0) throw domain_error("omega: x must be non-negative");
    return c * x + 0.5 * sigma * sigma * x * x;
}

double psi(const BranchingMechanism& mech, double z) { return mech.psi(z); }
double tail_mass(const BranchingMechanism& mech, double x) { return mech.tail_mass(x); }
double omega(const ModelSpec& model, double x) { return model.omega(x); }

} // namespace lbp
