#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ekch/errors.hpp"

namespace ekch {

/// Uniform periodic grid on the flat torus [0,L)^d, d in {1,2}.
/// Index i and i+n address the same point on every axis.
struct TorusGrid {
    int dim = 1;
    int n = 8;           // points per axis
    double length = 1.0; // side length L, equal on all axes

    double spacing() const { return length / n; }
    std::size_t point_count() const {
        return dim == 1 ? static_cast<std::size_t>(n)
                        : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    }
    double cell_volume() const {
        double dx = spacing();
        return dim == 1 ? dx : dx * dx;
    }
    double volume() const { return dim == 1 ? length : length * length; }

    /// Coordinate of index i along one axis, in [0,L).
    double coord(int i) const { return spacing() * i; }
    /// Signed minimal periodic displacement of index i from the origin.
    double offset(int i) const { return (i <= n / 2) ? spacing() * i : spacing() * (i - n); }

    bool operator==(const TorusGrid&) const = default;
};

TorusGrid make_grid(int dim, int n, double length = 1.0);

/// Grid-sampled real scalar field, row-major in 2D (x-index varies fastest
/// along the second axis).
struct ScalarField {
    TorusGrid grid;
    std::vector<double> values;

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

/// One real component array per grid dimension.
struct VectorField {
    TorusGrid grid;
    std::vector<std::vector<double>> components;

    int dim() const { return static_cast<int>(components.size()); }
};

ScalarField make_field(const TorusGrid& grid, double fill = 0.0);
VectorField make_vector_field(const TorusGrid& grid, double fill = 0.0);

/// Throws numeric_error if any entry is NaN/Inf.
void ensure_finite(const ScalarField& f, const char* what);
void ensure_finite(const VectorField& v, const char* what);
void ensure_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what);

// Spectral (Fourier-collocation) differential operators. Exact for
// band-limited fields below Nyquist; odd-derivative Nyquist mode is zeroed.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);

/// Periodic convolution (integral sense, carries the dx^d weight):
/// out(x) = sum_j kernel(x - x_j) f(x_j) dx^d, evaluated via DFT.
ScalarField circular_convolve(const ScalarField& f, const ScalarField& kernel);

// Discrete Lebesgue integrals and norms with the dx^d weight
// (norm_linf is the unweighted max).
double integrate(const ScalarField& f);
double mean(const ScalarField& f);
double norm_l1(const ScalarField& f);
double norm_l2(const ScalarField& f);
double norm_linf(const ScalarField& f);

double dot(const ScalarField& a, const ScalarField& b); // integral of a*b

} // namespace ekch
