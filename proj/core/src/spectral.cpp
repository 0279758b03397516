#include "ekch/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace ekch {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// Plan creation is not thread-safe in FFTW; execution via the new-array API
// is. Plans are cached per grid shape and executed on thread-local scratch
// buffers that share fftw_malloc alignment with the planning buffers.
PlanPair get_plans(const TorusGrid& g) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::size_t nreal = g.point_count();
    std::size_t ncplx = spectrum_size(g);
    double* r = fftw_alloc_real(nreal);
    fftw_complex* c = fftw_alloc_complex(ncplx);
    PlanPair p;
    if (g.dim == 1) {
        p.fwd = fftw_plan_dft_r2c_1d(g.n, r, c, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_c2r_1d(g.n, c, r, FFTW_ESTIMATE);
    } else {
        p.fwd = fftw_plan_dft_r2c_2d(g.n, g.n, r, c, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_c2r_2d(g.n, g.n, c, r, FFTW_ESTIMATE);
    }
    fftw_free(r);
    fftw_free(c);
    cache[key] = p;
    return p;
}

struct Scratch {
    double* r = nullptr;
    fftw_complex* c = nullptr;
    std::size_t nreal = 0, ncplx = 0;

    void reserve(std::size_t nr, std::size_t nc) {
        if (nr > nreal) {
            fftw_free(r);
            r = fftw_alloc_real(nr);
            nreal = nr;
        }
        if (nc > ncplx) {
            fftw_free(c);
            c = fftw_alloc_complex(nc);
            ncplx = nc;
        }
    }
    ~Scratch() {
        fftw_free(r);
        fftw_free(c);
    }
};

thread_local Scratch tls;

} // namespace

std::size_t spectrum_size(const TorusGrid& grid) {
    std::size_t half = static_cast<std::size_t>(grid.n / 2 + 1);
    return grid.dim == 1 ? half : static_cast<std::size_t>(grid.n) * half;
}

Spectrum forward(const ScalarField& f) {
    const TorusGrid& g = f.grid;
    PlanPair plans = get_plans(g);
    std::size_t nreal = g.point_count();
    std::size_t ncplx = spectrum_size(g);
    tls.reserve(nreal, ncplx);
    std::memcpy(tls.r, f.values.data(), nreal * sizeof(double));
    fftw_execute_dft_r2c(plans.fwd, tls.r, tls.c);
    Spectrum s{g, std::vector<std::complex<double>>(ncplx)};
    std::memcpy(s.coeff.data(), tls.c, ncplx * sizeof(fftw_complex));
    return s;
}

ScalarField inverse(const Spectrum& s) {
    const TorusGrid& g = s.grid;
    PlanPair plans = get_plans(g);
    std::size_t nreal = g.point_count();
    std::size_t ncplx = spectrum_size(g);
    tls.reserve(nreal, ncplx);
    std::memcpy(tls.c, s.coeff.data(), ncplx * sizeof(fftw_complex));
    fftw_execute_dft_c2r(plans.bwd, tls.c, tls.r);
    ScalarField f = make_field(g);
    double scale = 1.0 / static_cast<double>(nreal);
    for (std::size_t i = 0; i < nreal; ++i) f.values[i] = tls.r[i] * scale;
    return f;
}

std::array<double, 2> wavevector(const TorusGrid& grid, std::size_t idx) {
    double k0 = 2.0 * M_PI / grid.length;
    if (grid.dim == 1) {
        return {k0 * static_cast<double>(idx), 0.0};
    }
    std::size_t half = static_cast<std::size_t>(grid.n / 2 + 1);
    int m0 = static_cast<int>(idx / half);
    int m1 = static_cast<int>(idx % half);
    if (m0 > grid.n / 2) m0 -= grid.n;
    return {k0 * m0, k0 * m1};
}

double ksq(const TorusGrid& grid, std::size_t idx) {
    auto k = wavevector(grid, idx);
    return k[0] * k[0] + k[1] * k[1];
}

std::array<double, 2> wavevector_deriv(const TorusGrid& grid, std::size_t idx) {
    auto k = wavevector(grid, idx);
    bool even = grid.n % 2 == 0;
    double k_nyq = 2.0 * M_PI / grid.length * (grid.n / 2);
    if (even) {
        if (grid.dim == 1) {
            if (idx == static_cast<std::size_t>(grid.n / 2)) k[0] = 0.0;
        } else {
            std::size_t half = static_cast<std::size_t>(grid.n / 2 + 1);
            int m0 = static_cast<int>(idx / half);
            int m1 = static_cast<int>(idx % half);
            if (m0 == grid.n / 2) k[0] = 0.0;
            if (m1 == grid.n / 2) k[1] = 0.0;
            (void)k_nyq;
        }
    }
    return k;
}

double hermitian_weight(const TorusGrid& grid, std::size_t idx) {
    bool even = grid.n % 2 == 0;
    int half_m = grid.n / 2;
    if (grid.dim == 1) {
        int m = static_cast<int>(idx);
        bool self = (m == 0) || (even && m == half_m);
        return self ? 1.0 : 2.0;
    }
    std::size_t half = static_cast<std::size_t>(grid.n / 2 + 1);
    int m1 = static_cast<int>(idx % half);
    bool self_col = (m1 == 0) || (even && m1 == half_m);
    return self_col ? 1.0 : 2.0;
}

} // namespace ekch
