#include "ekch/ch_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ekch/quadrature.hpp"

namespace ekch {

namespace {

// C^2 monotone ramp s(x) = x^3 (2 - x) on [0,1]: s(0)=s'(0)=s''(0)=0,
// s(1)=1, s'(1)=2, s''(1)=0.
double ramp(double x) { return x * x * x * (2.0 - x); }
double ramp_prime(double x) { return x * x * (6.0 - 4.0 * x); }

} // namespace

double truncation_T_delta(double rho, double delta) {
    if (delta == 0.0) return rho > 0.0 ? rho : 0.0;
    if (rho <= 0.0) return 0.5 * delta;
    if (rho >= delta) return rho;
    return 0.5 * delta + 0.5 * delta * ramp(rho / delta);
}

double truncation_T_delta_prime(double rho, double delta) {
    if (delta == 0.0) return rho > 0.0 ? 1.0 : 0.0;
    if (rho <= 0.0) return 0.0;
    if (rho >= delta) return 1.0;
    return 0.5 * ramp_prime(rho / delta);
}

double phi_delta_prime(const PotentialSpec& spec, double eta, double rho, double delta) {
    return truncation_T_delta(rho, delta) * (1.0 / (eta * eta) + spec.d2F(rho));
}

double phi_delta(const PotentialSpec& spec, double eta, double rho, double delta) {
    double inv_eta2 = 1.0 / (eta * eta);
    // Ellipticity scan of 1/eta^2 + F'' on [0, rho] (or [rho, 0]).
    double lo = std::min(0.0, rho), hi = std::max(0.0, rho);
    const int nscan = 1025;
    for (int i = 0; i < nscan; ++i) {
        double s = lo + (hi - lo) * i / (nscan - 1);
        double coeff = inv_eta2 + spec.d2F(s);
        if (coeff < -1e-12 * inv_eta2 && truncation_T_delta(s, delta) > 0.0)
            throw ellipticity_error("1/eta^2 + F'' negative at s = " + std::to_string(s) +
                                    "; eta too large for the potential's concavity");
    }
    auto integrand = [&](double s) {
        return truncation_T_delta(s, delta) * (inv_eta2 + spec.d2F(s));
    };
    return adaptive_simpson(integrand, 0.0, rho, 1e-10);
}

namespace {

// Fast pointwise phi_delta for solver loops.
// For rho >= delta the integral is closed-form:
//   int_0^r s (1/eta^2 + F''(s)) ds = r^2/(2 eta^2) + r F'(r) - F(r) + F(0),
// plus a constant correction from [0, delta].
struct PhiEval {
    const PotentialSpec& spec;
    double eta2;
    double delta;
    double f_at_0, df_at_0;
    double corr = 0.0; // int_0^delta (T_delta(s) - s)(1/eta^2 + F'') ds

    PhiEval(const PotentialSpec& s, double eta, double d)
        : spec(s), eta2(eta * eta), delta(d), f_at_0(s.F(0.0)), df_at_0(s.dF(0.0)) {
        if (delta > 0.0) {
            auto g = [&](double u) {
                return (truncation_T_delta(u, delta) - u) * (1.0 / eta2 + spec.d2F(u));
            };
            corr = adaptive_simpson(g, 0.0, delta, 1e-18, 50);
        }
    }

    double untruncated(double r) const {
        return 0.5 * r * r / eta2 + r * spec.dF(r) - spec.F(r) + f_at_0;
    }

    double operator()(double r) const {
        if (delta == 0.0) return untruncated(r);
        if (r >= delta) return untruncated(r) + corr;
        if (r <= 0.0) return 0.5 * delta * (r / eta2 + spec.dF(r) - df_at_0);
        auto g = [&](double u) {
            return truncation_T_delta(u, delta) * (1.0 / eta2 + spec.d2F(u));
        };
        return adaptive_simpson(g, 0.0, r, 1e-14, 50);
    }
};

double max_ksq(const TorusGrid& g) {
    double kax = M_PI * g.n / g.length;
    return g.dim * kax * kax;
}

class NlchStepper {
  public:
    NlchStepper(const NLCHParams& p, const TorusGrid& g)
        : p_(p), grid_(g), phi_(p.potential, p.kernel.eta, p.mobility_delta) {
        ensure_same_grid(g, p.kernel.grid, "nlch solver");
        eta2_ = p.kernel.eta * p.kernel.eta;
        nspec_ = spectrum_size(g);
        symbol_.resize(nspec_);
        expz_.resize(nspec_);
        dtphi1_.resize(nspec_);
        dtphi2_.resize(nspec_);
    }

    CHState step(const CHState& state, double dt) {
        const ScalarField& rho = state.rho;
        ensure_tables(mean_from(rho), dt);

        Spectrum rhat = forward(rho);
        Spectrum n0 = n_hat(rhat, rho);

        Spectrum ahat{grid_, std::vector<std::complex<double>>(nspec_)};
        for (std::size_t m = 0; m < nspec_; ++m)
            ahat[m] = expz_[m] * rhat[m] + dtphi1_[m] * n0[m];
        ScalarField a = inverse(ahat);
        Spectrum na = n_hat(ahat, a);

        for (std::size_t m = 0; m < nspec_; ++m)
            ahat[m] += dtphi2_[m] * (na[m] - n0[m]);
        CHState out{inverse(ahat), state.time + dt};
        for (double v : out.rho.values)
            if (!std::isfinite(v))
                throw numeric_error("nlch solver diverged (NaN) at t = " +
                                    std::to_string(out.time));
        return out;
    }

    double auto_dt(const CHState& state) {
        const ScalarField& rho = state.rho;
        double rbar = mean_from(rho);
        double tbar = truncation_T_delta(rbar, p_.mobility_delta);
        double inv_eta2 = 1.0 / eta2_;
        double phip_bar = tbar * (inv_eta2 + p_.potential.d2F(rbar));
        double dev_phip = 0.0, dev_t = 0.0;
        for (double r : rho.values) {
            double coeff = inv_eta2 + p_.potential.d2F(r);
            double t = truncation_T_delta(r, p_.mobility_delta);
            if (coeff < -1e-12 * inv_eta2 && t > 0.0)
                throw ellipticity_error("1/eta^2 + F'' negative on solver range");
            dev_phip = std::max(dev_phip, std::abs(t * coeff - phip_bar));
            dev_t = std::max(dev_t, std::abs(t - tbar));
        }
        if (last_max_b_ < 0.0) refresh_max_b(rho);
        double k2 = max_ksq(grid_);
        double kax = M_PI * grid_.n / grid_.length;
        double remainder_rate = k2 * (dev_phip + dev_t * inv_eta2) +
                                kax * last_max_b_ * 2.0 + 1e-12;
        double dt = p_.cfl_parabolic * 2.0 / remainder_rate;
        double dt_adv = last_max_b_ > 0.0
                            ? p_.cfl_advective * grid_.spacing() / last_max_b_
                            : dt;
        return std::min(dt, dt_adv);
    }

  private:
    double mean_from(const ScalarField& rho) const {
        double s = 0.0;
        for (double v : rho.values) s += v;
        return s / static_cast<double>(rho.size());
    }

    void refresh_max_b(const ScalarField& rho) {
        Spectrum rhat = forward(rho);
        last_max_b_ = max_b_from(rhat);
    }

    double max_b_from(const Spectrum& rhat) {
        double w = grid_.cell_volume();
        double bmax = 0.0;
        for (int c = 0; c < grid_.dim; ++c) {
            Spectrum bh{grid_, std::vector<std::complex<double>>(nspec_)};
            for (std::size_t m = 0; m < nspec_; ++m) {
                double k = wavevector_deriv(grid_, m)[c];
                bh[m] = std::complex<double>(0.0, k) * (w * p_.kernel.hat[m]) * rhat[m] / eta2_;
            }
            ScalarField b = inverse(bh);
            for (double v : b.values) bmax = std::max(bmax, std::abs(v));
        }
        return bmax;
    }

    void ensure_tables(double rbar, double dt) {
        if (rbar == cached_mean_ && dt == cached_dt_) return;
        double tbar = truncation_T_delta(rbar, p_.mobility_delta);
        double f2bar = p_.potential.d2F(rbar);
        for (std::size_t m = 0; m < nspec_; ++m) {
            double beta = p_.kernel.b_eigenvalue(m);
            symbol_[m] = -ksq(grid_, m) * tbar * (f2bar + beta);
            double z = symbol_[m] * dt;
            double e = std::exp(z);
            expz_[m] = e;
            if (std::abs(z) < 1e-2) {
                dtphi1_[m] = dt * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 +
                                   z * z * z * z / 120.0);
                dtphi2_[m] = dt * (0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 +
                                   z * z * z * z / 720.0);
            } else {
                dtphi1_[m] = dt * (e - 1.0) / z;
                dtphi2_[m] = dt * (e - 1.0 - z) / (z * z);
            }
        }
        cached_mean_ = rbar;
        cached_dt_ = dt;
    }

    // Remainder N(rho) = RHS(rho) - L rho in Fourier space; refreshes the
    // cached sup |b| used by auto_dt.
    Spectrum n_hat(const Spectrum& rhat, const ScalarField& rho) {
        double w = grid_.cell_volume();
        double bmax = 0.0;
        std::vector<ScalarField> b(grid_.dim);
        for (int c = 0; c < grid_.dim; ++c) {
            Spectrum bh{grid_, std::vector<std::complex<double>>(nspec_)};
            for (std::size_t m = 0; m < nspec_; ++m) {
                double k = wavevector_deriv(grid_, m)[c];
                bh[m] = std::complex<double>(0.0, k) * (w * p_.kernel.hat[m]) * rhat[m] / eta2_;
            }
            b[c] = inverse(bh);
            for (double v : b[c].values) bmax = std::max(bmax, std::abs(v));
        }
        last_max_b_ = bmax;

        ScalarField phiv = make_field(grid_);
        for (std::size_t i = 0; i < rho.size(); ++i) phiv[i] = phi_(rho[i]);
        Spectrum phat = forward(phiv);

        Spectrum n{grid_, std::vector<std::complex<double>>(nspec_)};
        for (std::size_t m = 0; m < nspec_; ++m)
            n[m] = -ksq(grid_, m) * phat[m] - symbol_[m] * rhat[m];

        ScalarField flux = make_field(grid_);
        for (int c = 0; c < grid_.dim; ++c) {
            for (std::size_t i = 0; i < rho.size(); ++i)
                flux[i] = truncation_T_delta(rho[i], p_.mobility_delta) * b[c][i];
            Spectrum fh = forward(flux);
            for (std::size_t m = 0; m < nspec_; ++m) {
                double k = wavevector_deriv(grid_, m)[c];
                n[m] -= std::complex<double>(0.0, k) * fh[m];
            }
        }
        return n;
    }

    NLCHParams p_;
    TorusGrid grid_;
    PhiEval phi_;
    double eta2_;
    std::size_t nspec_;
    std::vector<double> symbol_, expz_, dtphi1_, dtphi2_;
    double cached_mean_ = std::numeric_limits<double>::quiet_NaN();
    double cached_dt_ = -1.0;
    double last_max_b_ = -1.0;
};

} // namespace

CHState step_nlch(const CHState& state, const NLCHParams& params, double dt) {
    if (!(dt > 0.0)) throw step_size_error("nlch step requires dt > 0");
    NlchStepper stepper(params, state.rho.grid);
    double dt_max = stepper.auto_dt(state) / std::max(params.cfl_parabolic, 1e-12);
    if (dt > dt_max * 1.0000001)
        throw step_size_error("nlch dt = " + std::to_string(dt) +
                              " exceeds the remainder stability bound " + std::to_string(dt_max));
    return stepper.step(state, dt);
}

double nlch_auto_dt(const CHState& state, const NLCHParams& params) {
    NlchStepper stepper(params, state.rho.grid);
    return stepper.auto_dt(state);
}

CHState step_lch(const CHState& state, const LCHParams& params, double dt) {
    const ScalarField& rho = state.rho;
    const TorusGrid& g = rho.grid;
    std::size_t nspec = spectrum_size(g);
    double dbar = params.diffusivity;

    Spectrum rhat = forward(rho);
    double rbar = rhat[0].real() / static_cast<double>(g.point_count());

    ScalarField fp = make_field(g);
    for (std::size_t i = 0; i < rho.size(); ++i) fp[i] = params.potential.dF(rho[i]);
    Spectrum fphat = forward(fp);

    // mu = -D Lap rho + F'(rho)
    Spectrum muhat{g, std::vector<std::complex<double>>(nspec)};
    for (std::size_t m = 0; m < nspec; ++m)
        muhat[m] = dbar * ksq(g, m) * rhat[m] + fphat[m];

    Spectrum divhat{g, std::vector<std::complex<double>>(nspec, {0.0, 0.0})};
    ScalarField flux = make_field(g);
    for (int c = 0; c < g.dim; ++c) {
        Spectrum gm{g, std::vector<std::complex<double>>(nspec)};
        for (std::size_t m = 0; m < nspec; ++m) {
            double k = wavevector_deriv(g, m)[c];
            gm[m] = std::complex<double>(0.0, k) * muhat[m];
        }
        ScalarField gmu = inverse(gm);
        for (std::size_t i = 0; i < rho.size(); ++i) flux[i] = rho[i] * gmu[i];
        Spectrum fh = forward(flux);
        for (std::size_t m = 0; m < nspec; ++m) {
            double k = wavevector_deriv(g, m)[c];
            divhat[m] += std::complex<double>(0.0, k) * fh[m];
        }
    }

    // Stabilized splitting: -D rbar Lap^2 implicit, remainder explicit.
    for (std::size_t m = 0; m < nspec; ++m) {
        double s = rbar * dbar * ksq(g, m) * ksq(g, m);
        rhat[m] = (rhat[m] + dt * (divhat[m] + s * rhat[m])) / (1.0 + dt * s);
    }
    CHState out{inverse(rhat), state.time + dt};
    for (double v : out.rho.values)
        if (!std::isfinite(v))
            throw numeric_error("lch solver diverged (NaN) at t = " + std::to_string(out.time));
    return out;
}

double lch_auto_dt(const CHState& state, const LCHParams& params) {
    double coeff = 0.0;
    for (double r : state.rho.values)
        coeff = std::max(coeff, std::abs(r * params.potential.d2F(r)));
    double k2 = max_ksq(state.rho.grid);
    return params.dt_factor * 2.0 / (k2 * coeff + 1.0);
}

namespace {

void record_ch(Trajectory& traj, const CHState& s, const ObserverOptions& obs,
               const std::function<double(const ScalarField&)>& energy_fn) {
    traj.series.times.push_back(s.time);
    traj.series.mass.push_back(integrate(s.rho));
    traj.series.energy.push_back(energy_fn(s.rho));
    traj.series.kinetic.push_back(0.0);
    traj.series.dissipation.push_back(0.0);
    if (obs.store_states) traj.samples.push_back({s.time, s.rho, std::nullopt});
    if (obs.callback) obs.callback(s.time, s.rho);
}

} // namespace

double energy_nlch(const ScalarField& rho, const MollifierKernel& kern,
                   const PotentialSpec& spec) {
    double fint = 0.0;
    for (double r : rho.values) fint += spec.F(r);
    return fint * rho.grid.cell_volume() + nonlocal_dirichlet_form(kern, rho);
}

double energy_lch(const ScalarField& rho, double diffusivity, const PotentialSpec& spec) {
    double fint = 0.0;
    for (double r : rho.values) fint += spec.F(r);
    fint *= rho.grid.cell_volume();
    VectorField g = gradient(rho);
    double gsq = 0.0;
    for (const auto& comp : g.components)
        for (double v : comp) gsq += v * v;
    gsq *= rho.grid.cell_volume();
    return fint + 0.5 * diffusivity * gsq;
}

Trajectory run_nlch(const CHState& initial, const NLCHParams& params, double T,
                    const ObserverOptions& obs) {
    if (!(T > 0.0)) throw step_size_error("run_nlch requires T > 0");
    ensure_finite(initial.rho, "nlch initial data");
    NlchStepper stepper(params, initial.rho.grid);
    auto energy_fn = [&](const ScalarField& r) {
        return energy_nlch(r, params.kernel, params.potential);
    };
    Trajectory traj;
    traj.grid = initial.rho.grid;
    CHState s = initial;
    record_ch(traj, s, obs, energy_fn);
    double t_end = initial.time + T;
    std::size_t since_record = 0;
    while (s.time < t_end - 1e-14 * T) {
        double dt = std::min(stepper.auto_dt(s), t_end - s.time);
        s = stepper.step(s, dt);
        ++traj.steps_taken;
        if (++since_record == static_cast<std::size_t>(std::max(obs.stride, 1))) {
            record_ch(traj, s, obs, energy_fn);
            since_record = 0;
        }
    }
    if (since_record != 0 || traj.series.times.back() < s.time)
        record_ch(traj, s, obs, energy_fn);
    return traj;
}

Trajectory run_lch(const CHState& initial, const LCHParams& params, double T,
                   const ObserverOptions& obs) {
    if (!(T > 0.0)) throw step_size_error("run_lch requires T > 0");
    ensure_finite(initial.rho, "lch initial data");
    auto energy_fn = [&](const ScalarField& r) {
        return energy_lch(r, params.diffusivity, params.potential);
    };
    Trajectory traj;
    traj.grid = initial.rho.grid;
    CHState s = initial;
    record_ch(traj, s, obs, energy_fn);
    double t_end = initial.time + T;
    std::size_t since_record = 0;
    while (s.time < t_end - 1e-14 * T) {
        double dt = std::min(lch_auto_dt(s, params), t_end - s.time);
        s = step_lch(s, params, dt);
        ++traj.steps_taken;
        if (++since_record == static_cast<std::size_t>(std::max(obs.stride, 1))) {
            record_ch(traj, s, obs, energy_fn);
            since_record = 0;
        }
    }
    if (since_record != 0 || traj.series.times.back() < s.time)
        record_ch(traj, s, obs, energy_fn);
    return traj;
}

EnvelopeReport max_principle_envelope(const Trajectory& traj, const MollifierKernel& kern,
                                      double atol) {
    if (traj.samples.empty())
        throw precondition_error("max_principle_envelope needs stored states");
    EnvelopeReport rep;
    rep.atol = atol;
    const TorusGrid& g = traj.grid;
    double w = g.cell_volume();
    double eta2 = kern.eta * kern.eta;

    double sig_lo = *std::min_element(traj.samples.front().rho.values.begin(),
                                      traj.samples.front().rho.values.end());
    double sig_hi = *std::max_element(traj.samples.front().rho.values.begin(),
                                      traj.samples.front().rho.values.end());

    double accum = 0.0;
    double prev_t = traj.samples.front().time;
    double prev_divb = 0.0;
    bool first = true;
    for (const auto& samp : traj.samples) {
        // div b = Lap(w_eta * rho)/eta^2, spectrally
        Spectrum rhat = forward(samp.rho);
        for (std::size_t m = 0; m < rhat.size(); ++m)
            rhat[m] *= -ksq(g, m) * (w * kern.hat[m]) / eta2;
        ScalarField divb = inverse(rhat);
        double divb_inf = norm_linf(divb);

        double dt_s = samp.time - prev_t;
        if (!first) accum += 0.5 * dt_s * (prev_divb + divb_inf);
        prev_t = samp.time;
        prev_divb = divb_inf;
        first = false;

        double lo = sig_lo * std::exp(-accum);
        double hi = sig_hi * std::exp(accum);
        double hi_lit = sig_lo * std::exp(accum);
        double rmin = *std::min_element(samp.rho.values.begin(), samp.rho.values.end());
        double rmax = *std::max_element(samp.rho.values.begin(), samp.rho.values.end());

        rep.times.push_back(samp.time);
        rep.lower.push_back(lo);
        rep.upper.push_back(hi);
        rep.lower_lit.push_back(lo);
        rep.upper_lit.push_back(hi_lit);
        rep.rho_min.push_back(rmin);
        rep.rho_max.push_back(rmax);
        rep.div_b_inf.push_back(divb_inf);

        double slack_lo = atol + 2.0 * dt_s * divb_inf * lo;
        double slack_hi = atol + 2.0 * dt_s * divb_inf * hi;
        double lo_margin = (lo - rmin) - slack_lo;
        double hi_margin = (rmax - hi) - slack_hi;
        rep.worst_lower_margin = std::max(rep.worst_lower_margin, lo_margin);
        rep.worst_upper_margin = std::max(rep.worst_upper_margin, hi_margin);
        if (lo_margin > 0.0) ++rep.violations_lower;
        if (hi_margin > 0.0) ++rep.violations_upper;
        if ((rmax - hi_lit) - (atol + 2.0 * dt_s * divb_inf * hi_lit) > 0.0)
            ++rep.violations_upper_lit;
    }
    return rep;
}

ContractionReport l1_contraction_test(const ScalarField& rho1_0, const ScalarField& rho2_0,
                                      const NLCHParams& params, double T, int stride) {
    ensure_same_grid(rho1_0.grid, rho2_0.grid, "l1_contraction_test");
    ObserverOptions obs;
    obs.stride = stride;
    Trajectory t1 = run_nlch({rho1_0, 0.0}, params, T, obs);
    Trajectory t2 = run_nlch({rho2_0, 0.0}, params, T, obs);

    ContractionReport rep;
    ScalarField diff = make_field(rho1_0.grid);
    double grad2_sup = 0.0;
    for (const auto& s : t1.samples) {
        ScalarField r2 = t2.interp_rho(s.time);
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.rho[i] - r2[i];
        rep.times.push_back(s.time);
        rep.l1_diff.push_back(norm_l1(diff));
        VectorField g2 = gradient(r2);
        double l1g = 0.0;
        for (std::size_t i = 0; i < r2.size(); ++i) {
            double a = 0.0;
            for (int c = 0; c < r2.grid.dim; ++c) a += g2.components[c][i] * g2.components[c][i];
            l1g += std::sqrt(a);
        }
        grad2_sup = std::max(grad2_sup, l1g * r2.grid.cell_volume());
    }
    rep.initial_l1 = rep.l1_diff.front();
    rep.sup_l1 = *std::max_element(rep.l1_diff.begin(), rep.l1_diff.end());

    double scale = norm_l1(rho1_0) + norm_l1(rho2_0);
    if (rep.initial_l1 > 1e-14 * scale) {
        for (std::size_t i = 1; i < rep.times.size(); ++i) {
            double t = rep.times[i] - rep.times.front();
            if (t <= 0.0) continue;
            rep.fitted_rate =
                std::max(rep.fitted_rate, std::log(rep.l1_diff[i] / rep.initial_l1) / t);
            double dt_i = rep.times[i] - rep.times[i - 1];
            if (dt_i > 0.0 && rep.l1_diff[i - 1] > 0.0 && rep.l1_diff[i] > 0.0)
                rep.max_local_rate = std::max(
                    rep.max_local_rate, std::log(rep.l1_diff[i] / rep.l1_diff[i - 1]) / dt_i);
        }
    }

    // Uniqueness-proof constant from measured kernel norms:
    // (||D^2 w||/eta^2)(||rho1||_1 + ||rho2||_1) + (||grad w||/eta^2)||grad rho2||_1
    //   + (||D^2 w||/eta^2)||rho1||_1.
    KernelDerivNorms kn = kernel_derivative_sup_norms(params.kernel);
    double eta2 = params.kernel.eta * params.kernel.eta;
    double m1 = norm_l1(rho1_0), m2 = norm_l1(rho2_0);
    rep.theory_rate =
        kn.hess_sup / eta2 * (m1 + m2) + kn.grad_sup / eta2 * grad2_sup + kn.hess_sup / eta2 * m1;
    return rep;
}

std::vector<double> lch_weak_form_residuals(const Trajectory& traj, const LCHParams& params,
                                            int n_tests) {
    if (traj.samples.size() < 2)
        throw precondition_error("weak-form residuals need stored states");
    const TorusGrid& g = traj.grid;
    double L = g.length;
    double D = params.diffusivity;

    std::vector<ScalarField> tests;
    for (int j = 1; tests.size() < static_cast<std::size_t>(n_tests); ++j) {
        ScalarField c = make_field(g), s = make_field(g);
        for (std::size_t i = 0; i < c.size(); ++i) {
            double x = g.dim == 1 ? g.coord(static_cast<int>(i))
                                  : g.coord(static_cast<int>(i / g.n));
            double y = g.dim == 1 ? 0.0 : g.coord(static_cast<int>(i % g.n));
            c[i] = std::cos(2.0 * M_PI * j * x / L) * (g.dim == 1 ? 1.0 : std::cos(2.0 * M_PI * y / L));
            s[i] = std::sin(2.0 * M_PI * j * x / L) * (g.dim == 1 ? 1.0 : std::cos(2.0 * M_PI * y / L));
        }
        tests.push_back(c);
        if (tests.size() < static_cast<std::size_t>(n_tests)) tests.push_back(s);
    }

    std::vector<double> resid(tests.size());
    for (std::size_t ti = 0; ti < tests.size(); ++ti) {
        const ScalarField& phi = tests[ti];
        VectorField gphi = gradient(phi);
        ScalarField lphi = laplacian(phi);

        auto rhs_at = [&](const ScalarField& rho) {
            VectorField grho = gradient(rho);
            ScalarField lrho = laplacian(rho);
            double acc = 0.0;
            for (std::size_t i = 0; i < rho.size(); ++i) {
                double gg = 0.0;
                for (int c = 0; c < g.dim; ++c) gg += grho.components[c][i] * gphi.components[c][i];
                acc += -D * lrho[i] * gg - D * rho[i] * lrho[i] * lphi[i] -
                       rho[i] * params.potential.d2F(rho[i]) * gg;
            }
            return acc * g.cell_volume();
        };

        double time_integral = 0.0, rhs_scale = 0.0;
        double prev_rhs = rhs_at(traj.samples.front().rho);
        for (std::size_t i = 1; i < traj.samples.size(); ++i) {
            double cur = rhs_at(traj.samples[i].rho);
            double dt = traj.samples[i].time - traj.samples[i - 1].time;
            time_integral += 0.5 * dt * (prev_rhs + cur);
            rhs_scale = std::max({rhs_scale, std::abs(cur), std::abs(prev_rhs)});
            prev_rhs = cur;
        }
        double lhs = dot(traj.samples.back().rho, phi) - dot(traj.samples.front().rho, phi);
        double span = traj.samples.back().time - traj.samples.front().time;
        resid[ti] = std::abs(lhs - time_integral) / (std::abs(lhs) + rhs_scale * span + 1e-30);
    }
    return resid;
}

} // namespace ekch
