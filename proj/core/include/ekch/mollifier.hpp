#pragma once

#include <array>
#include <functional>
#include <string>

#include "ekch/grid.hpp"
#include "ekch/spectral.hpp"

namespace ekch {

enum class KernelProfile { bump, quartic };

/// Raw moments of the discrete kernel measured with the dx^d weight.
/// m1 and m2_offdiag are accumulated over mirror pairs, so radial symmetry
/// cancels exactly and any residual flags a sampling asymmetry.
struct KernelMoments {
    double m0 = 0.0;
    std::array<double, 2> m1 = {0.0, 0.0};
    std::array<double, 2> m2_diag = {0.0, 0.0};
    double m2_offdiag = 0.0;
};

/// Discrete mollifier w_eta sampled at grid offsets, unit mass after
/// renormalization, support inside the ball of radius eta.
///
/// diffusivity is D with the unscaled-profile normalization: the measured
/// per-axis second moment scales like (2D/d)*eta^2, so
/// D = dim * (m2_axis/eta^2) / 2 and (rho - w*rho)/eta^2 approximates
/// -D*Laplacian (exact statement in 1D).
struct MollifierKernel {
    TorusGrid grid;
    double eta = 0.0;
    ScalarField values;
    KernelMoments moments;
    double diffusivity = 0.0;
    Spectrum hat; // cached unnormalized DFT of values

    /// Discrete Fourier coefficient of the kernel as a measure:
    /// w_hat(0) = m0 = 1, |w_hat| <= 1.
    double w_hat(std::size_t mode) const { return grid.cell_volume() * hat[mode].real(); }
    /// Eigenvalue of B_eta on the mode: (1 - w_hat)/eta^2.
    double b_eigenvalue(std::size_t mode) const { return (1.0 - w_hat(mode)) / (eta * eta); }
};

MollifierKernel build_kernel(KernelProfile profile, double eta, const TorusGrid& grid);
/// Custom radial profile on [0,1] (relative radius); zeroed at r >= 1 and
/// renormalized discretely.
MollifierKernel build_kernel(const std::function<double(double)>& radial_profile, double eta,
                             const TorusGrid& grid);

ScalarField circular_convolve(const ScalarField& f, const MollifierKernel& kern);

/// B_eta[rho] = (rho - w_eta * rho)/eta^2; annihilates constants, symmetric
/// positive semidefinite as a quadratic form.
ScalarField apply_B_eta(const MollifierKernel& kern, const ScalarField& rho);

/// (1/(4 eta^2)) iint w_eta(x-y) |f(x)-f(y)|^2 dx dy, evaluated through the
/// expansion (1/(2 eta^2)) [ int f^2 - int f (w_eta * f) ].
double nonlocal_dirichlet_form(const MollifierKernel& kern, const ScalarField& f);

struct PoincareEstimate {
    double c_p = 0.0;
    double eta = 0.0;
    TorusGrid grid;
    std::size_t extremal_mode = 0; // half-spectrum slot attaining the maximum
};

/// Sharp discrete constant C_P = max_{k != 0} 2 eta^2 / (1 - w_hat(k)); by
/// Parseval the inequality ||f - mean||^2 <= C_P * dirichlet_form(f) then
/// holds for every grid field, with equality on the extremal mode.
PoincareEstimate estimate_poincare_constant(const MollifierKernel& kern);

struct KernelDerivNorms {
    double grad_sup = 0.0; // sup |grad w_eta|
    double hess_sup = 0.0; // sup over entries of |D^2 w_eta|
};
KernelDerivNorms kernel_derivative_sup_norms(const MollifierKernel& kern);

} // namespace ekch
