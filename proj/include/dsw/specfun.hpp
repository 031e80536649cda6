#ifndef DSW_SPECFUN_HPP
#define DSW_SPECFUN_HPP

#include <complex>

namespace dsw::specfun {

using cplx = std::complex<double>;

// Parameters (b, c) of the confluent hypergeometric equation
//   z w'' + (c - z) w' - b w = 0.
struct KummerParams {
    cplx b;
    cplx c;
};

// Evaluation controls shared by the series and ODE-continuation paths.
struct EvalStrategy {
    double series_threshold = 25.0;  // |z| above which the raw series cancels too hard
    int max_terms = 500;
    double ode_tolerance = 1e-10;

    void validate() const;
};

// True if c sits on the pole set of the Kummer series (0, -1, -2, ...).
bool is_nonpositive_integer(const cplx& c, double tol = 1e-9);

// Pochhammer symbol (a)_k; switches to log-space accumulation for k > 30.
cplx pochhammer(const cplx& a, int k);

// Kummer's function of the first kind, Phi(b, c, z), to relative accuracy
// <= 10 * ode_tolerance: truncated series inside the threshold, ODE
// continuation from a series anchor beyond it (the raw series on large
// imaginary arguments cancels catastrophically); the anchor moves inward
// when the cancellation gauge exceeds the promised accuracy.
cplx kummer_phi(const KummerParams& p, const cplx& z, const EvalStrategy& s = {});

// d/dz Phi(b, c, z) = (b/c) Phi(b+1, c+1, z).
cplx kummer_phi_deriv(const KummerParams& p, const cplx& z, const EvalStrategy& s = {});

// Value and derivative of Phi in one evaluation (one ODE continuation when
// |z| exceeds the series threshold). `asymptotic` reports which path ran.
struct PhiEval {
    cplx value;
    cplx deriv;
    bool asymptotic = false;
};
PhiEval kummer_phi_full(const KummerParams& p, const cplx& z, const EvalStrategy& s = {});

// Second solution of Kummer's equation for non-positive integer c, normalized
// so that W(w2, Psi) = Gamma(2-c)/Gamma(b-c+1) z^{-c} e^z with
// w2(z) = z^{1-c} Phi(b-c+1, 2-c, z).
cplx kummer_psi(const KummerParams& p, const cplx& z, const EvalStrategy& s = {});
PhiEval kummer_psi_full(const KummerParams& p, const cplx& z, const EvalStrategy& s = {});

struct BesselEval {
    double j0;
    double dj0;  // J0' = -J1
    double y0;
    double dy0;  // Y0' = -Y1
};

// J0, Y0 and their first derivatives at tau > 0. Power series below the
// switch point, Hankel asymptotic expansion above it.
BesselEval bessel_j0y0(double tau);

}  // namespace dsw::specfun

#endif
