#ifndef DSW_TRANSFORMS_HPP
#define DSW_TRANSFORMS_HPP

#include "dsw/model.hpp"
#include "dsw/spectral.hpp"

namespace dsw::transforms {

using spectral::SpectralField;
using spectral::Trajectory;

// Cauchy data of the original problem: phi(0) = f, phi_t(0) = g.
struct InitialData {
    SpectralField f;
    SpectralField g;
    double epsilon = 0.0;
};

// Shifted data: u0 = f, u1 = g - r f.
std::pair<SpectralField, SpectralField> transform_data(const InitialData& data,
                                                       const ModelParams& params);

// Algebraic inverse of transform_data.
InitialData untransform_data(const SpectralField& u0, const SpectralField& u1,
                             const ModelParams& params, double epsilon = 0.0);

// phi(t) = e^{r t} u(t); phi_t = e^{r t} (u_t + r u), per trajectory sample.
Trajectory untransform_solution(const Trajectory& u_traj, const ModelParams& params);

}  // namespace dsw::transforms

#endif
