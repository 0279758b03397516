#pragma once

#include <complex>
#include <vector>

#include "ekch/grid.hpp"

namespace ekch {

/// Half-spectrum (real-to-complex) Fourier coefficients of a real field.
/// Unnormalized FFTW convention: inverse(forward(f)) = n^d * f; the inverse
/// here divides by n^d so the pair round-trips.
/// 1D layout: modes m = 0..n/2. 2D layout: (m0, m1), m0 = 0..n-1 full,
/// m1 = 0..n/2 half, row-major with m1 fastest.
struct Spectrum {
    TorusGrid grid;
    std::vector<std::complex<double>> coeff;

    std::size_t size() const { return coeff.size(); }
    std::complex<double>& operator[](std::size_t i) { return coeff[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return coeff[i]; }
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

std::size_t spectrum_size(const TorusGrid& grid);

/// Angular wavenumber vector of half-spectrum slot `idx`.
std::array<double, 2> wavevector(const TorusGrid& grid, std::size_t idx);
/// |k|^2 of slot `idx`.
double ksq(const TorusGrid& grid, std::size_t idx);
/// First-derivative multipliers: i*k with the Nyquist mode zeroed per axis.
std::array<double, 2> wavevector_deriv(const TorusGrid& grid, std::size_t idx);

/// Number of real field values each half-spectrum slot represents (1 for
/// self-conjugate slots, 2 otherwise); Parseval weights.
double hermitian_weight(const TorusGrid& grid, std::size_t idx);

} // namespace ekch
