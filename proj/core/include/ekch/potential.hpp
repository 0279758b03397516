#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace ekch {

/// Interaction potential F = F1 + F2 with F1 convex nonnegative of k-growth
/// and F2 bounded together with its first two derivatives. Each part carries
/// evaluators for derivative orders 0..3.
struct PotentialSpec {
    std::string name;
    double growth_k = 2.0;
    std::array<std::function<double(double)>, 4> f1;
    std::array<std::function<double(double)>, 4> f2;

    double F(double u) const { return f1[0](u) + f2[0](u); }
    double dF(double u) const { return f1[1](u) + f2[1](u); }
    double d2F(double u) const { return f1[2](u) + f2[2](u); }
    double d3F(double u) const { return f1[3](u) + f2[3](u); }
    /// s = 2k/(k-1) and its conjugate s' = s/(s-1).
    double implied_s() const { return 2.0 * growth_k / (growth_k - 1.0); }
    double implied_s_conj() const {
        double s = implied_s();
        return s / (s - 1.0);
    }
};

/// F(u) = u^2 (u-1)^2 on the working range. Split: F1 = u^4 + u^2 (convex),
/// F2 = -2u^3 saturated by a C^3 clamp outside [-2,3] so that F2, F2', F2''
/// and u F2''' stay bounded on all of R.
PotentialSpec builtin_double_well();

/// F(u) = |u|^gamma, gamma > 2; F2 = 0. Derivatives at u = 0 take the
/// one-sided limit value 0.
PotentialSpec builtin_power(double gamma);

struct PressureParams {
    double eta; // pressure carries the rho^2/(2 eta^2) term
};

/// p(rho) = rho F'(rho) - F(rho) + rho^2/(2 eta^2)
double pressure(const PotentialSpec& spec, PressureParams pp, double rho);
/// p'(rho) = rho (F''(rho) + 1/eta^2)
double pressure_prime(const PotentialSpec& spec, PressureParams pp, double rho);

/// Second-order Taylor remainders F(rho|P), p(rho|P).
double relative_potential(const PotentialSpec& spec, double rho, double P);
double relative_pressure(const PotentialSpec& spec, PressureParams pp, double rho, double P);

struct BoundReport {
    double range = 0.0;
    std::size_t samples = 0;
    // p(rho|P) <= c_rel F(rho|P) + (c_rel + 1/eta^2) |rho-P|^2
    double c_rel = 0.0;
    std::size_t violations_rel = 0;
    bool unbounded_rel = false;
    // |rho F'(rho)| <= c_abs (F(rho) + rho^2 + 1)
    double c_abs = 0.0;
    std::size_t violations_abs = 0;
    bool unbounded_abs = false;

    bool unbounded() const { return unbounded_rel || unbounded_abs; }
};

/// Samples (rho, P) uniformly on (0, R]^2 and fits the smallest constants
/// (bisection, 1e-3 relative) with zero violations. Constants capped at 1e6;
/// reaching the cap flags the corresponding inequality as unbounded.
BoundReport check_pressure_bounds(const PotentialSpec& spec, PressureParams pp, double range_R,
                                  std::size_t samples, std::uint64_t seed = 12345);

struct AssumptionReport {
    double sup_f2pp = 0.0;       // sampled sup |F2''|
    double c_p = 0.0;
    double margin = 0.0;         // 1 - c_p * sup|F2''|
    bool pass = false;           // margin > 0
    double sup_uf1p_ratio = 0.0; // sampled sup |u F1'| / (F1 + 1)
    double sup_uf1ppp_ratio = 0.0; // sampled sup |u F1'''| / (F1'' + 1)
};

/// Checks ||F2''||_inf < 1/C_P on a dense sample and reports the margin
/// kappa = 1 - C_P sup|F2''|; also reports the sampled growth-condition
/// ratios of F1 on (0, range_R].
AssumptionReport validate_assumption(const PotentialSpec& spec, double c_p, double range_R);

} // namespace ekch
