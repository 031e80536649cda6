#ifndef DSW_KERNELS_HPP
#define DSW_KERNELS_HPP

#include <complex>
#include <string>
#include <vector>

#include "dsw/model.hpp"
#include "dsw/specfun.hpp"

namespace dsw::kernels {

using cplx = std::complex<double>;
using specfun::EvalStrategy;

// Fourier multipliers of the two fundamental solutions at fixed (t, s, |xi|):
//   u-hat(t) = k0 * phi-hat + k1 * psi-hat,  d/dt u-hat = dt_k0 * phi-hat + dt_k1 * psi-hat,
// with Cauchy data (k0, dt_k0, k1, dt_k1)(s) = (1, 0, 0, 1).
struct KernelEval {
    cplx k0;
    cplx dt_k0;
    cplx k1;
    cplx dt_k1;
};

struct KernelEvalEx {
    KernelEval k;
    bool asymptotic = false;  // some special-function call ran its large-|z| path
};

struct ZoneConfig {
    double N = 1.0;
};

enum class Zone { Z1, Z2, Z3 };

// Phase-space zone of (|xi|, s, t); ties resolve to the lowest tag.
Zone zone_of(double xi_mag, double s, double t, const ZoneConfig& cfg = {});

KernelEvalEx khat_dissipation_ex(double mu, double t, double s, double xi_mag,
                                 const EvalStrategy& st = {});
KernelEvalEx khat_mass_ex(double mu, double t, double s, double xi_mag,
                          const EvalStrategy& st = {});
KernelEval khat_dissipation(double mu, double t, double s, double xi_mag,
                            const EvalStrategy& st = {});
KernelEval khat_mass(double mu, double t, double s, double xi_mag, const EvalStrategy& st = {});
KernelEval khat_balanced(double t, double s, double xi_mag);

// Regime dispatcher.
KernelEvalEx khat(const ModelParams& params, double t, double s, double xi_mag,
                  const EvalStrategy& st = {});

// Independent ground truth: adaptive integration of the mode ODE
//   v'' + |xi|^2 e^{-2 tau} v + {mu v' | mu^2 v | 0} = 0
// from tau = s to tau = t for both data columns.
KernelEval khat_oracle(const ModelParams& params, double t, double s, double xi_mag,
                       double tol = 1e-10);

struct SampleSpec {
    int nt = 25;
    int ns = 12;
    int nxi = 40;
    double t_max = 6.0;
    double xi_max = 40.0;
};

struct BoundAudit {
    std::string estimate_id;
    std::string claimed_bound;    // weight description; weighted value should be O(1)
    double fitted_constant = 0.0; // sup over samples of |channel| / claimed bound
    long sample_count = 0;
    double worst_t = 0.0, worst_s = 0.0, worst_xi = 0.0;
    long nan_count = 0;
};

struct BoundReport {
    std::string regime;
    double mu = 0.0;
    std::vector<BoundAudit> audits;

    std::string to_json() const;
};

// Empirical constants for every pointwise multiplier estimate of the regime's
// two estimate propositions, over a (t, s, |xi|) sample grid.
BoundReport audit_multiplier_bounds(const ModelParams& params, double gamma,
                                    const SampleSpec& spec, const EvalStrategy& st = {});

// Least-squares slope of sup_xi |k1(t,0,xi)| against t; the balanced regime
// grows linearly, the other regimes stay bounded.
double sup_k1_growth_slope(const ModelParams& params, double t_lo, double t_hi, int nt,
                           int nxi, double xi_max, const EvalStrategy& st = {});

}  // namespace dsw::kernels

#endif
