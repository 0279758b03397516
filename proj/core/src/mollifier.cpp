#include "ekch/mollifier.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ekch {

namespace {

double profile_value(KernelProfile p, double r) {
    if (r >= 1.0) return 0.0;
    switch (p) {
        case KernelProfile::quartic: {
            double t = 1.0 - r * r;
            return t * t;
        }
        case KernelProfile::bump:
            return std::exp(-1.0 / (1.0 - r * r));
    }
    return 0.0;
}

// Axis index of flattened slot i.
int axis_index(const TorusGrid& g, std::size_t i, int axis) {
    if (g.dim == 1) return static_cast<int>(i);
    return axis == 0 ? static_cast<int>(i / g.n) : static_cast<int>(i % g.n);
}

std::size_t flat_mirror(const TorusGrid& g, std::size_t i, int axis) {
    if (g.dim == 1) {
        int j = static_cast<int>(i);
        return static_cast<std::size_t>(j == 0 ? 0 : g.n - j);
    }
    int j0 = static_cast<int>(i / g.n);
    int j1 = static_cast<int>(i % g.n);
    if (axis == 0) j0 = (j0 == 0) ? 0 : g.n - j0;
    else j1 = (j1 == 0) ? 0 : g.n - j1;
    return static_cast<std::size_t>(j0) * g.n + j1;
}

// First moment along `axis`, accumulated over mirror pairs so that a
// radially symmetric sample set cancels exactly.
double paired_first_moment(const ScalarField& k, int axis) {
    const TorusGrid& g = k.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        int j = axis_index(g, i, axis);
        if (j == 0) continue;
        int jm = g.n - j;
        double y = g.offset(j);
        if (j < jm) {
            s += y * (k[i] - k[flat_mirror(g, i, axis)]);
        } else if (j == jm) {
            s += y * k[i]; // Nyquist offset -L/2; kernel vanishes there (eta < L/2)
        }
    }
    return s * g.cell_volume();
}

double paired_offdiag_moment(const ScalarField& k) {
    const TorusGrid& g = k.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        int j0 = axis_index(g, i, 0);
        if (j0 == 0) continue;
        int j0m = g.n - j0;
        int j1 = axis_index(g, i, 1);
        double y0 = g.offset(j0);
        double y1 = g.offset(j1);
        if (j0 < j0m) {
            s += y0 * y1 * (k[i] - k[flat_mirror(g, i, 0)]);
        } else if (j0 == j0m) {
            s += y0 * y1 * k[i];
        }
    }
    return s * g.cell_volume();
}

} // namespace

MollifierKernel build_kernel(const std::function<double(double)>& radial_profile, double eta,
                             const TorusGrid& grid) {
    double dx = grid.spacing();
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw resolution_error("kernel radius eta must be positive");
    if (eta < 4.0 * dx)
        throw resolution_error("kernel under-resolved: eta = " + std::to_string(eta) +
                               " < 4*dx = " + std::to_string(4.0 * dx));
    if (eta >= 0.5 * grid.length)
        throw support_error("kernel support would wrap: eta = " + std::to_string(eta) +
                            " >= L/2 = " + std::to_string(0.5 * grid.length));

    MollifierKernel kern;
    kern.grid = grid;
    kern.eta = eta;
    kern.values = make_field(grid);

    for (std::size_t i = 0; i < kern.values.size(); ++i) {
        double y0 = grid.offset(axis_index(grid, i, 0));
        double y1 = grid.dim == 2 ? grid.offset(axis_index(grid, i, 1)) : 0.0;
        double r = std::sqrt(y0 * y0 + y1 * y1) / eta;
        kern.values[i] = r < 1.0 ? radial_profile(r) : 0.0;
        if (kern.values[i] < 0.0)
            throw numeric_error("kernel profile must be nonnegative");
    }

    double raw_mass = integrate(kern.values);
    if (!(raw_mass > 0.0)) throw numeric_error("kernel profile vanishes on all sample points");
    for (double& v : kern.values.values) v /= raw_mass;

    kern.moments.m0 = integrate(kern.values);
    for (int c = 0; c < grid.dim; ++c) {
        kern.moments.m1[c] = paired_first_moment(kern.values, c);
        double s = 0.0;
        for (std::size_t i = 0; i < kern.values.size(); ++i) {
            double y = grid.offset(axis_index(grid, i, c));
            s += y * y * kern.values[i];
        }
        kern.moments.m2_diag[c] = s * grid.cell_volume();
    }
    if (grid.dim == 2) kern.moments.m2_offdiag = paired_offdiag_moment(kern.values);

    double m2_axis = 0.0;
    for (int c = 0; c < grid.dim; ++c) m2_axis += kern.moments.m2_diag[c];
    m2_axis /= grid.dim;
    kern.diffusivity = grid.dim * (m2_axis / (eta * eta)) / 2.0;

    kern.hat = forward(kern.values);
    return kern;
}

MollifierKernel build_kernel(KernelProfile profile, double eta, const TorusGrid& grid) {
    return build_kernel([profile](double r) { return profile_value(profile, r); }, eta, grid);
}

ScalarField circular_convolve(const ScalarField& f, const MollifierKernel& kern) {
    ensure_same_grid(f.grid, kern.grid, "circular_convolve");
    ensure_finite(f, "circular_convolve input");
    Spectrum fhat = forward(f);
    double w = f.grid.cell_volume();
    for (std::size_t m = 0; m < fhat.size(); ++m) fhat[m] *= kern.hat[m] * w;
    return inverse(fhat);
}

ScalarField apply_B_eta(const MollifierKernel& kern, const ScalarField& rho) {
    ensure_same_grid(rho.grid, kern.grid, "apply_B_eta");
    ensure_finite(rho, "apply_B_eta input");
    Spectrum rhat = forward(rho);
    double w = rho.grid.cell_volume();
    double inv_eta2 = 1.0 / (kern.eta * kern.eta);
    for (std::size_t m = 0; m < rhat.size(); ++m)
        rhat[m] *= (1.0 - w * kern.hat[m]) * inv_eta2;
    return inverse(rhat);
}

double nonlocal_dirichlet_form(const MollifierKernel& kern, const ScalarField& f) {
    ensure_same_grid(f.grid, kern.grid, "nonlocal_dirichlet_form");
    ScalarField conv = circular_convolve(f, kern);
    double quad = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) quad += f[i] * (f[i] - conv[i]);
    return quad * f.grid.cell_volume() / (2.0 * kern.eta * kern.eta);
}

PoincareEstimate estimate_poincare_constant(const MollifierKernel& kern) {
    PoincareEstimate est;
    est.eta = kern.eta;
    est.grid = kern.grid;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_mode = 0;
    double eta2 = kern.eta * kern.eta;
    for (std::size_t m = 1; m < kern.hat.size(); ++m) {
        double gap = 1.0 - kern.w_hat(m);
        if (gap <= 1e-13)
            throw singular_kernel_error("w_hat = 1 at nonzero mode " + std::to_string(m) +
                                        "; Poincare inequality degenerates on this grid/eta");
        double ratio = 2.0 * eta2 / gap;
        if (ratio > best) {
            best = ratio;
            best_mode = m;
        }
    }
    est.c_p = best;
    est.extremal_mode = best_mode;
    return est;
}

KernelDerivNorms kernel_derivative_sup_norms(const MollifierKernel& kern) {
    KernelDerivNorms out;
    VectorField g = gradient(kern.values);
    for (const auto& comp : g.components)
        for (double v : comp) out.grad_sup = std::max(out.grad_sup, std::abs(v));
    for (int a = 0; a < kern.grid.dim; ++a)
        for (int b = a; b < kern.grid.dim; ++b) {
            Spectrum s = forward(kern.values);
            for (std::size_t m = 0; m < s.size(); ++m) {
                auto kd = wavevector_deriv(kern.grid, m);
                s[m] *= -kd[a] * kd[b];
            }
            ScalarField d2 = inverse(s);
            for (double v : d2.values) out.hess_sup = std::max(out.hess_sup, std::abs(v));
        }
    return out;
}

} // namespace ekch
