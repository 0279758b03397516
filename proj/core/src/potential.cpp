#include "ekch/potential.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ekch/errors.hpp"

namespace ekch {

namespace {

// C^3 saturating map: identity on [lo, hi], constant outside a transition
// zone of width ~w on each side. Built from sigma(x) = 1 - exp(-(x + x^2/2 +
// x^3/3)), which matches the identity to third order at x = 0 and tends to 1.
struct SaturatingClamp {
    double lo, hi, w;

    struct Jet {
        double h, h1, h2, h3;
    };

    Jet eval(double u) const {
        if (u >= lo && u <= hi) return {u, 1.0, 0.0, 0.0};
        bool above = u > hi;
        double x = above ? (u - hi) / w : (lo - u) / w;
        double q = x + 0.5 * x * x + x * x * x / 3.0;
        double q1 = 1.0 + x + x * x;
        double q2 = 1.0 + 2.0 * x;
        double q3 = 2.0;
        double e = std::exp(-q);
        double s1 = q1 * e;
        double s2 = (q2 - q1 * q1) * e;
        double s3 = (q3 - 3.0 * q1 * q2 + q1 * q1 * q1) * e;
        Jet j;
        if (above) {
            j.h = hi + w * (1.0 - e);
            j.h1 = s1;
            j.h2 = s2 / w;
            j.h3 = s3 / (w * w);
        } else {
            j.h = lo - w * (1.0 - e);
            j.h1 = s1;
            j.h2 = -s2 / w;
            j.h3 = s3 / (w * w);
        }
        return j;
    }
};

constexpr double kConstantCap = 1e6;

} // namespace

PotentialSpec builtin_double_well() {
    PotentialSpec spec;
    spec.name = "double_well";
    spec.growth_k = 4.0;
    spec.f1 = {
        [](double u) { return u * u * u * u + u * u; },
        [](double u) { return 4.0 * u * u * u + 2.0 * u; },
        [](double u) { return 12.0 * u * u + 2.0; },
        [](double u) { return 24.0 * u; },
    };
    // F2 = -2u^3 composed with the clamp; F = F1 + F2 equals u^2(u-1)^2
    // exactly on [-2, 3].
    SaturatingClamp clamp{-2.0, 3.0, 1.0};
    auto g0 = [](double h) { return -2.0 * h * h * h; };
    auto g1 = [](double h) { return -6.0 * h * h; };
    auto g2 = [](double h) { return -12.0 * h; };
    auto g3 = [](double) { return -12.0; };
    spec.f2 = {
        [=](double u) { return g0(clamp.eval(u).h); },
        [=](double u) {
            auto j = clamp.eval(u);
            return g1(j.h) * j.h1;
        },
        [=](double u) {
            auto j = clamp.eval(u);
            return g2(j.h) * j.h1 * j.h1 + g1(j.h) * j.h2;
        },
        [=](double u) {
            auto j = clamp.eval(u);
            return g3(j.h) * j.h1 * j.h1 * j.h1 + 3.0 * g2(j.h) * j.h1 * j.h2 + g1(j.h) * j.h3;
        },
    };
    return spec;
}

PotentialSpec builtin_power(double gamma) {
    if (!(gamma > 2.0)) throw config_error("builtin_power requires gamma > 2");
    PotentialSpec spec;
    spec.name = "power";
    spec.growth_k = gamma;
    auto zero = [](double) { return 0.0; };
    spec.f1 = {
        [gamma](double u) { return std::pow(std::abs(u), gamma); },
        [gamma](double u) {
            if (u == 0.0) return 0.0;
            return gamma * std::pow(std::abs(u), gamma - 1.0) * (u > 0 ? 1.0 : -1.0);
        },
        [gamma](double u) {
            if (u == 0.0) return 0.0;
            return gamma * (gamma - 1.0) * std::pow(std::abs(u), gamma - 2.0);
        },
        [gamma](double u) {
            if (u == 0.0) return 0.0;
            return gamma * (gamma - 1.0) * (gamma - 2.0) * std::pow(std::abs(u), gamma - 3.0) *
                   (u > 0 ? 1.0 : -1.0);
        },
    };
    spec.f2 = {zero, zero, zero, zero};
    return spec;
}

double pressure(const PotentialSpec& spec, PressureParams pp, double rho) {
    return rho * spec.dF(rho) - spec.F(rho) + rho * rho / (2.0 * pp.eta * pp.eta);
}

double pressure_prime(const PotentialSpec& spec, PressureParams pp, double rho) {
    return rho * (spec.d2F(rho) + 1.0 / (pp.eta * pp.eta));
}

double relative_potential(const PotentialSpec& spec, double rho, double P) {
    return spec.F(rho) - spec.F(P) - spec.dF(P) * (rho - P);
}

double relative_pressure(const PotentialSpec& spec, PressureParams pp, double rho, double P) {
    return pressure(spec, pp, rho) - pressure(spec, pp, P) -
           pressure_prime(spec, pp, P) * (rho - P);
}

namespace {

struct Constraint {
    double a; // needs a <= C * b
    double b;
};

// Smallest C in [0, cap] with zero violations, found by bisection to 1e-3
// relative; returns false if even the cap violates some sample.
bool fit_constant(const std::vector<Constraint>& cons, double& c_out, std::size_t& violations) {
    auto count_violations = [&](double c) {
        std::size_t bad = 0;
        for (const auto& k : cons) {
            double rhs = c * k.b;
            double slack = 1e-12 * (std::abs(k.a) + std::abs(rhs) + 1.0);
            if (k.a > rhs + slack) ++bad;
        }
        return bad;
    };
    if (count_violations(kConstantCap) > 0) {
        c_out = kConstantCap;
        violations = count_violations(kConstantCap);
        return false;
    }
    double lo = 0.0, hi = kConstantCap;
    if (count_violations(lo) == 0) {
        c_out = 0.0;
        violations = 0;
        return true;
    }
    while (hi - lo > 1e-3 * std::max(1.0, hi)) {
        double mid = 0.5 * (lo + hi);
        if (count_violations(mid) == 0) hi = mid;
        else lo = mid;
    }
    c_out = hi;
    violations = count_violations(hi);
    return true;
}

} // namespace

BoundReport check_pressure_bounds(const PotentialSpec& spec, PressureParams pp, double range_R,
                                  std::size_t samples, std::uint64_t seed) {
    if (!(range_R > 0.0)) throw config_error("check_pressure_bounds: range_R must be positive");
    BoundReport rep;
    rep.range = range_R;
    rep.samples = samples;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double inv_eta2 = 1.0 / (pp.eta * pp.eta);

    std::vector<Constraint> rel, abs;
    rel.reserve(samples);
    abs.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        double rho = range_R * (1.0 - unit(rng)); // in (0, R]
        double P = range_R * (1.0 - unit(rng));
        double dsq = (rho - P) * (rho - P);
        // p(rho|P) <= C F(rho|P) + (C + 1/eta^2) dsq  <=>  a <= C b
        rel.push_back({relative_pressure(spec, pp, rho, P) - inv_eta2 * dsq,
                       relative_potential(spec, rho, P) + dsq});
        abs.push_back({std::abs(rho * spec.dF(rho)),
                       spec.F(rho) + rho * rho + 1.0});
    }
    rep.unbounded_rel = !fit_constant(rel, rep.c_rel, rep.violations_rel);
    rep.unbounded_abs = !fit_constant(abs, rep.c_abs, rep.violations_abs);
    return rep;
}

AssumptionReport validate_assumption(const PotentialSpec& spec, double c_p, double range_R) {
    AssumptionReport rep;
    rep.c_p = c_p;
    // F2'' is clamped outside a bounded zone for the built-ins; sweep a range
    // generously covering both the clamp zone and the requested range.
    double lo = std::min(-8.0, -range_R - 8.0);
    double hi = std::max(8.0, range_R + 8.0);
    const int n = 40001;
    for (int i = 0; i < n; ++i) {
        double u = lo + (hi - lo) * i / (n - 1);
        rep.sup_f2pp = std::max(rep.sup_f2pp, std::abs(spec.f2[2](u)));
    }
    const int m = 4001;
    for (int i = 1; i <= m; ++i) {
        double u = range_R * i / m;
        rep.sup_uf1p_ratio =
            std::max(rep.sup_uf1p_ratio, std::abs(u * spec.f1[1](u)) / (spec.f1[0](u) + 1.0));
        rep.sup_uf1ppp_ratio =
            std::max(rep.sup_uf1ppp_ratio, std::abs(u * spec.f1[3](u)) / (spec.f1[2](u) + 1.0));
    }
    rep.margin = 1.0 - c_p * rep.sup_f2pp;
    rep.pass = rep.margin > 0.0;
    return rep;
}

} // namespace ekch
