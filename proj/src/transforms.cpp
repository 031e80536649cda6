#include "dsw/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace dsw::transforms {

std::pair<SpectralField, SpectralField> transform_data(const InitialData& data,
                                                       const ModelParams& params) {
    if (!(data.f.grid() == data.g.grid()))
        throw std::invalid_argument("transform_data: f and g live on different grids");
    SpectralField u0 = data.f;
    SpectralField u1 = data.g;
    for (long i = 0; i < u1.size(); ++i) u1[i] -= params.r * data.f[i];
    return {u0, u1};
}

InitialData untransform_data(const SpectralField& u0, const SpectralField& u1,
                             const ModelParams& params, double epsilon) {
    if (!(u0.grid() == u1.grid()))
        throw std::invalid_argument("untransform_data: grid mismatch");
    InitialData d{u0, u1, epsilon};
    for (long i = 0; i < d.g.size(); ++i) d.g[i] += params.r * u0[i];
    return d;
}

Trajectory untransform_solution(const Trajectory& u_traj, const ModelParams& params) {
    Trajectory phi;
    phi.times = u_traj.times;
    phi.u.reserve(u_traj.u.size());
    phi.ut.reserve(u_traj.ut.size());
    for (size_t j = 0; j < u_traj.times.size(); ++j) {
        const double t = u_traj.times[j];
        if (t < 0.0) throw std::domain_error("untransform_solution: negative time");
        const double w = std::exp(params.r * t);
        SpectralField p = u_traj.u[j];
        p *= w;
        SpectralField pt = u_traj.ut[j];
        for (long i = 0; i < pt.size(); ++i) pt[i] = w * (pt[i] + params.r * u_traj.u[j][i]);
        phi.u.push_back(std::move(p));
        phi.ut.push_back(std::move(pt));
    }
    return phi;
}

}  // namespace dsw::transforms
