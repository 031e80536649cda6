#include "dsw/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dsw::specfun {

namespace {

using lcplx = std::complex<long double>;

constexpr long double kSeriesEps = 1e-19L;

[[noreturn]] void no_convergence(const std::string& what) {
    throw std::runtime_error("specfun: no convergence in " + what);
}

struct SeriesResult {
    lcplx value;
    lcplx deriv;
    long double max_term;  // cancellation gauge: roundoff ~ eps * max_term

    double cancellation_error() const {
        const long double scale =
            std::min(std::abs(value), std::abs(deriv)) + 1e-290L;
        return static_cast<double>(kSeriesEps * max_term / scale);
    }
};

// Joint evaluation of the Kummer series and its z-derivative; the derivative
// series is (b/c) Phi(b+1, c+1, z) expanded term by term so both share one loop.
SeriesResult phi_series(const cplx& b, const cplx& c, const cplx& z, int max_terms) {
    const lcplx lb(b.real(), b.imag());
    const lcplx lc(c.real(), c.imag());
    const lcplx lz(z.real(), z.imag());

    lcplx term = 1.0L;
    lcplx sum = 1.0L;
    lcplx dterm = lb / lc;
    lcplx dsum = dterm;
    long double max_term = 1.0L;

    for (int k = 0; k < max_terms; ++k) {
        const long double lk = static_cast<long double>(k);
        term *= (lb + lk) / ((lc + lk) * (lk + 1.0L)) * lz;
        sum += term;
        dterm *= (lb + lk + 1.0L) / ((lc + lk + 1.0L) * (lk + 1.0L)) * lz;
        dsum += dterm;
        max_term = std::max({max_term, std::abs(term), std::abs(dterm)});
        if (std::abs(term) <= kSeriesEps * std::abs(sum) &&
            std::abs(dterm) <= kSeriesEps * (std::abs(dsum) + kSeriesEps)) {
            return {sum, dsum, max_term};
        }
    }
    no_convergence("Kummer series");
}

// Dormand-Prince 5(4) for the two-component complex state (w, w') along the
// straight segment from za to zb. Kummer's equation has its only finite
// singularity at z = 0, which the segment never touches.
struct KummerOdeState {
    std::array<cplx, 2> y;
};

std::array<cplx, 2> kummer_rhs(const cplx& b, const cplx& c, const cplx& z,
                               const std::array<cplx, 2>& y) {
    return {y[1], ((z - c) * y[1] + b * y[0]) / z};
}

std::array<cplx, 2> integrate_kummer(const cplx& b, const cplx& c, const cplx& za,
                                     const cplx& zb, std::array<cplx, 2> y, double rtol) {
    static constexpr double A21 = 1.0 / 5;
    static constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
    static constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
    static constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                            A53 = 64448.0 / 6561, A54 = -212.0 / 729;
    static constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                            A64 = 49.0 / 176, A65 = -5103.0 / 18656;
    static constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                            B5 = -2187.0 / 6784, B6 = 11.0 / 84;
    static constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                            E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                            E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

    const cplx dz = zb - za;
    const double len = std::abs(dz);
    if (len == 0.0) return y;

    auto f = [&](double s, const std::array<cplx, 2>& v) {
        const cplx z = za + s * dz;
        auto d = kummer_rhs(b, c, z, v);
        return std::array<cplx, 2>{dz * d[0], dz * d[1]};
    };

    const double floor_scale =
        1e-10 * std::max({std::abs(y[0]), std::abs(y[1]), 1e-30});
    double s = 0.0;
    double h = std::min(0.1, 1.0 / std::max(1.0, len));
    auto k1 = f(s, y);

    for (int step = 0; step < 200000; ++step) {
        if (s >= 1.0) return y;
        h = std::min(h, 1.0 - s);

        std::array<cplx, 2> yt;
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * A21 * k1[i];
        auto k2 = f(s + h / 5, yt);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        auto k3 = f(s + 3 * h / 10, yt);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        auto k4 = f(s + 4 * h / 5, yt);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        auto k5 = f(s + 8 * h / 9, yt);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        auto k6 = f(s + h, yt);
        std::array<cplx, 2> ynew;
        for (int i = 0; i < 2; ++i)
            ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        auto k7 = f(s + h, ynew);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const cplx e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                                E6 * k6[i] + E7 * k7[i]);
            const double sc =
                rtol * std::max({std::abs(y[i]), std::abs(ynew[i]), floor_scale});
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            s += h;
            y = ynew;
            k1 = k7;  // FSAL
        }
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, fac));
        if (h < 1e-13) no_convergence("Kummer ODE continuation (step underflow)");
    }
    no_convergence("Kummer ODE continuation (step limit)");
}

PhiEval phi_full_impl(const cplx& b, const cplx& c, const cplx& z, const EvalStrategy& st) {
    const double az = std::abs(z);
    const double promised = 10.0 * st.ode_tolerance;
    const bool beyond = az > st.series_threshold;

    // Anchor radius: the threshold (or |z| itself), shrunk while the series
    // cancellation there exceeds the promised accuracy. Raw summation loses
    // ~e^{r} * r^{Re(b-c)} digits, so hostile parameter combinations need a
    // closer anchor than benign ones.
    double ra = std::min(az, st.series_threshold);
    SeriesResult r{};
    cplx za;
    for (;;) {
        za = z * (ra / az);
        r = phi_series(b, c, za, st.max_terms);
        if (r.cancellation_error() <= promised || ra <= 4.0) break;
        ra *= 0.65;
    }

    std::array<cplx, 2> y = {
        cplx(static_cast<double>(r.value.real()), static_cast<double>(r.value.imag())),
        cplx(static_cast<double>(r.deriv.real()), static_cast<double>(r.deriv.imag()))};
    if (ra < az) y = integrate_kummer(b, c, za, z, y, st.ode_tolerance);
    return {y[0], y[1], beyond};
}

double real_gamma(double x) { return std::tgamma(x); }

}  // namespace

void EvalStrategy::validate() const {
    if (!(series_threshold > 0.0)) throw std::invalid_argument("series_threshold must be > 0");
    if (max_terms < 1) throw std::invalid_argument("max_terms must be >= 1");
    if (!(ode_tolerance > 0.0 && ode_tolerance < 1.0))
        throw std::invalid_argument("ode_tolerance must be in (0,1)");
}

bool is_nonpositive_integer(const cplx& c, double tol) {
    if (std::abs(c.imag()) > tol) return false;
    const double r = c.real();
    const double n = std::round(r);
    return std::abs(r - n) <= tol && n <= 0.5;
}

cplx pochhammer(const cplx& a, int k) {
    if (k < 0) throw std::invalid_argument("pochhammer: negative order");
    if (k <= 30) {
        cplx p = 1.0;
        for (int j = 0; j < k; ++j) p *= a + static_cast<double>(j);
        return p;
    }
    cplx lg = 0.0;
    for (int j = 0; j < k; ++j) lg += std::log(a + static_cast<double>(j));
    return std::exp(lg);
}

PhiEval kummer_phi_full(const KummerParams& p, const cplx& z, const EvalStrategy& s) {
    s.validate();
    if (is_nonpositive_integer(p.c))
        throw std::invalid_argument("kummer_phi: c is a non-positive integer");
    if (z == cplx(0.0)) return {cplx(1.0), p.b / p.c, false};
    return phi_full_impl(p.b, p.c, z, s);
}

cplx kummer_phi(const KummerParams& p, const cplx& z, const EvalStrategy& s) {
    return kummer_phi_full(p, z, s).value;
}

cplx kummer_phi_deriv(const KummerParams& p, const cplx& z, const EvalStrategy& s) {
    if (is_nonpositive_integer(p.c + cplx(1.0)))
        throw std::invalid_argument("kummer_phi_deriv: c+1 is a non-positive integer");
    return kummer_phi_full(p, z, s).deriv;
}

PhiEval kummer_psi_full(const KummerParams& p, const cplx& z, const EvalStrategy& s) {
    s.validate();
    if (!is_nonpositive_integer(p.c))
        throw std::invalid_argument("kummer_psi: branch requires c in {0, -1, -2, ...}");
    if (std::abs(p.b.imag()) > 1e-12 || std::abs(p.c.imag()) > 1e-12)
        throw std::invalid_argument("kummer_psi: real parameters expected");
    if (z == cplx(0.0)) throw std::invalid_argument("kummer_psi: z = 0 is singular");

    const double b = p.b.real();
    const double c = p.c.real();

    // Limit of the standard two-Phi connection formula for U as c approaches
    // the integer, taken along the line (c+eps, b+eps/2) so the Gamma poles of
    // the two terms cancel pairwise; the symmetric average removes the O(eps)
    // error. Psi = -U matches the Wronskian normalization stated above.
    const double eps = 1e-5;
    bool asym = false;
    cplx u_val = 0.0, u_der = 0.0;
    for (const double sgn : {+1.0, -1.0}) {
        const double ce = c + sgn * eps;
        const double be = b + sgn * eps / 2.0;
        const double ga = real_gamma(1.0 - ce) / real_gamma(be - ce + 1.0);
        const double gb = real_gamma(ce - 1.0) / real_gamma(be);
        auto p1 = phi_full_impl(be, ce, z, s);
        auto p2 = phi_full_impl(be - ce + 1.0, 2.0 - ce, z, s);
        asym = asym || p1.asymptotic || p2.asymptotic;
        const cplx zp = std::pow(z, cplx(1.0 - ce));
        u_val += ga * p1.value + gb * zp * p2.value;
        u_der += ga * p1.deriv + gb * ((1.0 - ce) * zp / z * p2.value + zp * p2.deriv);
    }
    return {-0.5 * u_val, -0.5 * u_der, asym};
}

cplx kummer_psi(const KummerParams& p, const cplx& z, const EvalStrategy& s) {
    return kummer_psi_full(p, z, s).value;
}

namespace {

constexpr long double kEulerGamma = 0.57721566490153286060651209008240243L;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr double kBesselSwitch = 12.0;

BesselEval bessel_series(double tau) {
    const long double x = tau;
    const long double q = x * x / 4.0L;
    const long double lg = std::log(x / 2.0L);

    // J0 and the H_k-weighted companion giving Y0.
    long double term = 1.0L, j0 = 1.0L, y0sum = 0.0L, hk = 0.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        hk += 1.0L / k;
        j0 += term;
        y0sum += -term * hk;  // (-1)^{k+1} H_k q^k/(k!)^2
        if (std::abs(term) < 1e-20L * (std::abs(j0) + 1.0L)) break;
    }
    // J1 and the (H_k + H_{k+1})-weighted companion giving Y1.
    long double t1 = 1.0L, j1 = 1.0L, y1sum = 1.0L;  // k = 0: weight H_0 + H_1 = 1
    long double hka = 0.0L, hkb = 1.0L;
    for (int k = 1; k < 200; ++k) {
        t1 *= -q / (static_cast<long double>(k) * (k + 1.0L));
        hka += 1.0L / k;
        hkb += 1.0L / (k + 1.0L);
        j1 += t1;
        y1sum += t1 * (hka + hkb);
        if (std::abs(t1) < 1e-20L * (std::abs(j1) + 1.0L)) break;
    }
    j1 *= x / 2.0L;

    const long double y0 = (2.0L / kPiL) * ((lg + kEulerGamma) * j0 + y0sum);
    const long double y1 = (2.0L / kPiL) * ((lg + kEulerGamma) * j1 - 1.0L / x) -
                           (x / (2.0L * kPiL)) * y1sum;
    return {static_cast<double>(j0), static_cast<double>(-j1), static_cast<double>(y0),
            static_cast<double>(-y1)};
}

// Hankel expansion: Z0 ~ sqrt(2/(pi tau)) (P cos/sin chi -/+ Q sin/cos chi).
void hankel_pq(double nu, double tau, long double& P, long double& Q) {
    const long double mu4 = 4.0L * nu * nu;
    const long double x8 = 8.0L * tau;
    long double term = 1.0L;
    P = 1.0L;
    Q = 0.0L;
    long double prev = std::numeric_limits<long double>::max();
    for (int k = 1; k < 60; ++k) {
        term *= (mu4 - (2.0L * k - 1.0L) * (2.0L * k - 1.0L)) / (k * x8);
        if (std::abs(term) > prev) break;  // asymptotic tail started growing
        prev = std::abs(term);
        if (k % 4 == 1) Q += term;
        else if (k % 4 == 2) P -= term;
        else if (k % 4 == 3) Q -= term;
        else P += term;
        if (std::abs(term) < 1e-20L) break;
    }
}

BesselEval bessel_hankel(double tau) {
    const long double x = tau;
    const long double amp = std::sqrt(2.0L / (kPiL * x));
    long double p0, q0, p1, q1;
    hankel_pq(0.0, tau, p0, q0);
    hankel_pq(1.0, tau, p1, q1);
    const long double chi0 = x - kPiL / 4.0L;
    const long double chi1 = x - 3.0L * kPiL / 4.0L;
    const long double j0 = amp * (p0 * std::cos(chi0) - q0 * std::sin(chi0));
    const long double y0 = amp * (p0 * std::sin(chi0) + q0 * std::cos(chi0));
    const long double j1 = amp * (p1 * std::cos(chi1) - q1 * std::sin(chi1));
    const long double y1 = amp * (p1 * std::sin(chi1) + q1 * std::cos(chi1));
    return {static_cast<double>(j0), static_cast<double>(-j1), static_cast<double>(y0),
            static_cast<double>(-y1)};
}

}  // namespace

BesselEval bessel_j0y0(double tau) {
    if (!(tau > 0.0)) throw std::domain_error("bessel_j0y0: tau must be > 0");
    return tau < kBesselSwitch ? bessel_series(tau) : bessel_hankel(tau);
}

}  // namespace dsw::specfun
