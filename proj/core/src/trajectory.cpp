#include "ekch/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace ekch {

ScalarField Trajectory::interp_rho(double t) const {
    if (samples.empty()) throw precondition_error("interp_rho on empty trajectory");
    if (t <= samples.front().time) return samples.front().rho;
    if (t >= samples.back().time) return samples.back().rho;
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const TrajectorySample& s, double tt) { return s.time < tt; });
    const TrajectorySample& hi = *it;
    const TrajectorySample& lo = *(it - 1);
    double span = hi.time - lo.time;
    double w = span > 0.0 ? (t - lo.time) / span : 0.0;
    ScalarField out = lo.rho;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * lo.rho[i] + w * hi.rho[i];
    return out;
}

} // namespace ekch
