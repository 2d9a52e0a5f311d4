#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lbp/interp.hpp"
#include "lbp/quadrature.hpp"
#include "lbp/rng.hpp"
#include "lbp/trilean.hpp"

namespace lbp {

// ---------------------------------------------------------------------------
// Levy measure families, represented by their tail mu_bar(x) = mu(x, inf).
// ---------------------------------------------------------------------------

struct NoJumps {};

/// Stable jumps normalized so the jump part of psi is exactly -+ c_alpha z^alpha
/// (minus for alpha in (0,1), plus for alpha in (1,2); linear terms folded).
struct StableJumps {
    double alpha;    // in (0,1) u (1,2)
    double c_alpha;  // > 0
};

/// Gamma-subordinator jumps: mu(du) = shape * u^{-1} e^{-rate u} du.
struct GammaTailJumps {
    double shape;  // a > 0
    double rate;   // r > 0
};

/// Compound Poisson with Exp jumps: total rate rho, mean jump size 1/theta.
struct CompoundPoissonExpJumps {
    double rate;       // rho > 0
    double mean_jump;  // 1/theta > 0
};

/// Tail given on a grid with power-law continuation at both ends:
/// mu_bar(x) = tail[0] * (x/x[0])^{-exp0} below the grid and
/// mu_bar(x) = tail[n-1] * (x/x[n-1])^{-expinf} above it.
/// Exponents are user-supplied, not fitted.
struct TabulatedTail {
    std::vector<double> x;     // strictly increasing, positive
    std::vector<double> tail;  // non-increasing, positive
    double exp0 = 0.0;         // in [0,2)
    double expinf = 0.0;       // >= 0
};

using LevyMeasureSpec =
    std::variant<NoJumps, StableJumps, GammaTailJumps, CompoundPoissonExpJumps,
                 TabulatedTail>;

// ---------------------------------------------------------------------------
// Branching mechanism psi and the model around it.
// ---------------------------------------------------------------------------

/// Branching mechanism psi(z) = -b z + gamma2 z^2 + (jump part).
///
/// The jump part is stored in the family's natural normalization:
///  - finite-variation families contribute -int (1-e^{-zu}) mu(du), so that for
///    gamma2 = 0 and b >= 0 the mechanism is the subordinator form with
///    drift delta = b;
///  - infinite-variation families (stable alpha > 1, tabulated exp0 > 1)
///    contribute the fully compensated int (e^{-zu} - 1 + zu) mu(du).
/// Both are reparameterizations of the usual Levy--Khintchine form (the linear
/// difference is absorbed into b).
class BranchingMechanism {
public:
    BranchingMechanism(double b, double gamma2, LevyMeasureSpec levy);

    double b() const { return b_; }
    double gamma2() const { return gamma2_; }
    const LevyMeasureSpec& levy() const { return levy_; }

    bool has_jumps() const;
    bool finite_variation_jumps() const;

    /// psi(z); closed forms for parametric families, tail quadrature otherwise.
    double psi(double z) const;

    /// mu_bar(x) = mu(x, inf), x > 0.
    double tail_mass(double x) const;

    /// int_0^z mu_bar(u) du (finite-variation families only).
    double tail_integral(double z) const;

    /// int_0^{min(eps,1)} u mu(du); the drift absorbed when jumps below eps
    /// are dropped from a simulation of the compensated SDE.
    double small_jump_mean(double eps) const;

    /// int_{min(eps,1)}^inf u mu(du) for infinite-variation families.
    double large_jump_mean_above(double eps) const;

    /// Drift coefficient for an Euler scheme that simulates only jumps >= eps.
    double sim_drift(double eps) const;

    /// Jump intensity of the truncated process: mu_bar(eps).
    double jump_rate(double eps) const;

    /// Sample a jump size from mu conditioned on (eps, inf).
    double sample_jump(PathRng& rng, double eps) const;

private:
    double jump_psi(double z) const;

    double b_;
    double gamma2_;
    LevyMeasureSpec levy_;
    // tabulated tails interpolate ln mu_bar against ln x
    std::optional<CubicHermite> log_tail_interp_;
};

/// Mechanism classification per the drift/positivity dichotomy.
struct MechanismClass {
    enum class Kind { Subordinator, General };
    Kind kind;
    double delta = 0.0;  // subordinator drift (kind == Subordinator)
    double theta = 0.0;  // psi(z) > 0 for z >= theta (kind == General)

    bool is_subordinator() const { return kind == Kind::Subordinator; }
};

/// Subordinator iff gamma2 = 0, jumps have finite variation and delta = b >= 0;
/// otherwise General with theta located by geometric scan plus bisection.
/// Throws solver_error when psi never turns positive below z_max.
MechanismClass classify(const BranchingMechanism& mech, double z_max = 1e10);

/// Grey's condition int^inf dz/psi(z) < inf, by tail-exponent analysis.
/// Throws undecidable_error when both refinement levels land in the band.
bool check_grey(const BranchingMechanism& mech, const QuadratureConfig& cfg = {});

/// Log-moment condition int_1^inf log(u) mu(du) < inf.
bool check_log_moment(const BranchingMechanism& mech,
                      const QuadratureConfig& cfg = {});

/// Mechanism in a Brownian environment with logistic competition.
struct ModelSpec {
    BranchingMechanism mechanism;
    double sigma = 0.0;  // environment volatility, >= 0
    double c = 0.0;      // competition rate, >= 0

    ModelSpec(BranchingMechanism mech, double sigma_, double c_);

    double sigma2() const { return sigma * sigma; }
    /// omega(x) = c x + sigma^2 x^2 / 2
    double omega(double x) const;
};

/// Free-function forms matching the rest of the library's call style.
double psi(const BranchingMechanism& mech, double z);
double tail_mass(const BranchingMechanism& mech, double x);
double omega(const ModelSpec& model, double x);

} // namespace lbp
