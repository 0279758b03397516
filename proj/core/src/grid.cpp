#include "ekch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ekch/spectral.hpp"

namespace ekch {

TorusGrid make_grid(int dim, int n, double length) {
    if (dim != 1 && dim != 2)
        throw dimension_error("grid dim must be 1 or 2, got " + std::to_string(dim));
    if (n < 8) throw dimension_error("grid needs n >= 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw dimension_error("grid side length must be positive and finite");
    return TorusGrid{dim, n, length};
}

ScalarField make_field(const TorusGrid& grid, double fill) {
    return ScalarField{grid, std::vector<double>(grid.point_count(), fill)};
}

VectorField make_vector_field(const TorusGrid& grid, double fill) {
    VectorField v{grid, {}};
    v.components.assign(grid.dim, std::vector<double>(grid.point_count(), fill));
    return v;
}

void ensure_finite(const ScalarField& f, const char* what) {
    for (double x : f.values)
        if (!std::isfinite(x)) throw numeric_error(std::string("non-finite value in ") + what);
}

void ensure_finite(const VectorField& v, const char* what) {
    for (const auto& comp : v.components)
        for (double x : comp)
            if (!std::isfinite(x)) throw numeric_error(std::string("non-finite value in ") + what);
}

void ensure_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
    if (!(a == b)) throw dimension_error(std::string("grid mismatch in ") + what);
}

VectorField gradient(const ScalarField& f) {
    ensure_finite(f, "gradient input");
    Spectrum fhat = forward(f);
    VectorField out = make_vector_field(f.grid);
    for (int c = 0; c < f.grid.dim; ++c) {
        Spectrum ghat{f.grid, std::vector<std::complex<double>>(fhat.size())};
        for (std::size_t m = 0; m < fhat.size(); ++m) {
            double k = wavevector_deriv(f.grid, m)[c];
            ghat[m] = std::complex<double>(0.0, k) * fhat[m];
        }
        out.components[c] = inverse(ghat).values;
    }
    return out;
}

ScalarField divergence(const VectorField& v) {
    ensure_finite(v, "divergence input");
    if (v.dim() != v.grid.dim) throw dimension_error("vector field component count != grid dim");
    Spectrum acc{v.grid, std::vector<std::complex<double>>(spectrum_size(v.grid), {0.0, 0.0})};
    for (int c = 0; c < v.grid.dim; ++c) {
        Spectrum vhat = forward(ScalarField{v.grid, v.components[c]});
        for (std::size_t m = 0; m < acc.size(); ++m) {
            double k = wavevector_deriv(v.grid, m)[c];
            acc[m] += std::complex<double>(0.0, k) * vhat[m];
        }
    }
    return inverse(acc);
}

ScalarField laplacian(const ScalarField& f) {
    ensure_finite(f, "laplacian input");
    Spectrum fhat = forward(f);
    for (std::size_t m = 0; m < fhat.size(); ++m) fhat[m] *= -ksq(f.grid, m);
    return inverse(fhat);
}

ScalarField circular_convolve(const ScalarField& f, const ScalarField& kernel) {
    ensure_same_grid(f.grid, kernel.grid, "circular_convolve");
    ensure_finite(f, "circular_convolve input");
    Spectrum fhat = forward(f);
    Spectrum khat = forward(kernel);
    double w = f.grid.cell_volume();
    for (std::size_t m = 0; m < fhat.size(); ++m) fhat[m] *= khat[m] * w;
    return inverse(fhat);
}

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values) s += x;
    return s * f.grid.cell_volume();
}

double mean(const ScalarField& f) { return integrate(f) / f.grid.volume(); }

double norm_l1(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values) s += std::abs(x);
    return s * f.grid.cell_volume();
}

double norm_l2(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values) s += x * x;
    return std::sqrt(s * f.grid.cell_volume());
}

double norm_linf(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values) s = std::max(s, std::abs(x));
    return s;
}

double dot(const ScalarField& a, const ScalarField& b) {
    ensure_same_grid(a.grid, b.grid, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid.cell_volume();
}

} // namespace ekch
