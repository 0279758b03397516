#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ekch/grid.hpp"

namespace ekch {

/// Time-indexed diagnostics recorded at observer samples. theta/w2sq are
/// filled only by comparison studies and stay empty otherwise.
struct DiagnosticsSeries {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> energy;
    std::vector<double> kinetic;
    std::vector<double> dissipation; // cumulative (1/eps^2) int rho |u|^2
    std::vector<double> theta;
    std::vector<double> w2sq;

    std::size_t size() const { return times.size(); }
};

struct TrajectorySample {
    double time = 0.0;
    ScalarField rho;
    std::optional<VectorField> momentum;
};

struct Trajectory {
    TorusGrid grid;
    std::vector<TrajectorySample> samples;
    DiagnosticsSeries series;
    std::size_t steps_taken = 0;

    double final_time() const { return samples.empty() ? 0.0 : samples.back().time; }
    /// Density linearly interpolated in time between stored samples.
    ScalarField interp_rho(double t) const;
};

struct ObserverOptions {
    int stride = 50;          // record every `stride` accepted steps
    bool store_states = true; // keep field snapshots (diagnostics always kept)
    std::function<void(double, const ScalarField&)> callback; // optional tap
};

} // namespace ekch
