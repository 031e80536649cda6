#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dsw/specfun.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace dsw::specfun;
using std::complex;

namespace {

// Independent oracle: direct Pochhammer-quotient summation of the Kummer
// series in extended precision, no recurrences shared with the implementation.
cplx phi_series_oracle(cplx b, cplx c, cplx z, int terms) {
    complex<long double> sum = 0.0L;
    const complex<long double> lb(b.real(), b.imag()), lc(c.real(), c.imag()),
        lz(z.real(), z.imag());
    for (int k = 0; k < terms; ++k) {
        complex<long double> num = 1.0L, den = 1.0L, zp = 1.0L;
        long double fact = 1.0L;
        for (int j = 0; j < k; ++j) {
            num *= lb + (long double)j;
            den *= lc + (long double)j;
            zp *= lz;
            fact *= (long double)(j + 1);
        }
        sum += num / den * zp / fact;
    }
    return {(double)sum.real(), (double)sum.imag()};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_CASE("kummer phi basics") {
    EvalStrategy st;
    CHECK(kummer_phi({cplx(0.7, 0.2), cplx(1.3, -0.4)}, 0.0) == cplx(1.0));
    // b = c collapses the series to exp(z)
    const cplx e1 = kummer_phi({cplx(0.5), cplx(0.5)}, cplx(1.0, 0.0));
    CHECK(rel(e1, cplx(std::exp(1.0))) < 1e-14);
    const cplx ei = kummer_phi({cplx(0.5), cplx(0.5)}, cplx(0.0, 2.0));
    CHECK(rel(ei, std::exp(cplx(0.0, 2.0))) < 1e-13);

    // frozen value, cross-checked against the 60-term direct summation
    const cplx v = kummer_phi({cplx(0.25), cplx(0.5)}, cplx(0.0, 2.0));
    const cplx frozen(0.37268247860155697, 0.58041857101760013);
    CHECK(rel(v, frozen) < 1e-13);
    CHECK(rel(v, phi_series_oracle(0.25, 0.5, cplx(0.0, 2.0), 60)) < 1e-13);

    CHECK_THROWS_AS(kummer_phi({cplx(0.5), cplx(-2.0)}, cplx(1.0)), std::invalid_argument);
}

TEST_CASE("kummer phi derivative") {
    const cplx b(0.3, 0.1), c(1.2, -0.2);
    CHECK(rel(kummer_phi_deriv({b, c}, 0.0), b / c) < 1e-15);
    CHECK(rel(kummer_phi_deriv({cplx(0.5), cplx(0.5)}, cplx(1.0)), cplx(std::exp(1.0))) < 1e-13);

    // central finite difference of the series path
    const cplx z(0.0, 1.5);
    const double h = 1e-6;
    const cplx fd = (kummer_phi({b, c}, z + cplx(h)) - kummer_phi({b, c}, z - cplx(h))) / (2 * h);
    CHECK(rel(kummer_phi_deriv({b, c}, z), fd) < 1e-6);
}

TEST_CASE("kummer phi ODE continuation agrees with series at the seam") {
    EvalStrategy tight;
    tight.series_threshold = 30.0;  // oracle side: pure series
    EvalStrategy low;
    low.series_threshold = 10.0;  // forces the ODE path

    for (double y : {12.0, 18.0, 24.0}) {
        const cplx z(0.0, y);
        for (auto [b, c] : {std::pair<cplx, cplx>{cplx(-0.25), cplx(-0.5)},
                            std::pair<cplx, cplx>{cplx(0.5, 1.3), cplx(1.0, 2.6)}}) {
            auto a = kummer_phi_full({b, c}, z, low);
            auto ref = kummer_phi_full({b, c}, z, tight);
            CHECK(a.asymptotic);
            CHECK(!ref.asymptotic);
            CHECK(rel(a.value, ref.value) < 1e-8);
            CHECK(rel(a.deriv, ref.deriv) < 1e-8);
        }
    }
    // far beyond the threshold only the continuation is viable; the b = c
    // case has the exact value e^z
    const cplx z(0.0, 70.0);
    auto a = kummer_phi_full({cplx(0.5), cplx(0.5)}, z);
    CHECK(a.asymptotic);
    CHECK(rel(a.value, std::exp(z)) < 1e-8);
}

TEST_CASE("kummer ODE residual property") {
    // second derivative by a 16-node contour stencil around z: truncation is
    // O(R^14) for analytic integrands and roundoff is not amplified by 1/h^2
    constexpr int m = 16;
    EvalStrategy st;
    st.ode_tolerance = 1e-12;

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    std::uniform_real_distribution<double> logr(std::log(0.1), std::log(100.0));
    int checked = 0;
    for (int i = 0; checked < 1000 && i < 5000; ++i) {
        const cplx b(unif(rng), unif(rng));
        cplx c(unif(rng), unif(rng));
        if (std::abs(c.imag()) < 0.05 &&
            std::abs(c.real() - std::round(c.real())) < 0.1 && c.real() < 0.5)
            continue;  // keep clear of the pole set
        const double r = std::exp(logr(rng));
        const cplx z = std::polar(r, angle(rng));
        const double R = 0.4 * std::min(1.0, std::abs(z));

        cplx d2 = 0.0;
        for (int j = 0; j < m; ++j) {
            const double th = 2.0 * M_PI * j / m;
            const cplx node = std::polar(R, th);
            d2 += kummer_phi({b, c}, z + node, st) * std::exp(cplx(0.0, -2.0 * th));
        }
        d2 *= 2.0 / (m * R * R);

        const auto mid = kummer_phi_full({b, c}, z, st);
        const cplx resid = z * d2 + (c - z) * mid.deriv - b * mid.value;
        CHECK(std::abs(resid) / (1.0 + std::abs(mid.value)) < 1e-7);
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("dissipation-pair Wronskian identity") {
    // W(w1, w2)(z) = mu z^{mu-1} e^z for w1 = Phi((1-mu)/2, 1-mu, z),
    // w2 = z^mu Phi((1+mu)/2, 1+mu, z), non-integer mu
    for (double mu : {0.31, 0.5, 1.5, 2.25, 2.9}) {
        const KummerParams p1{cplx((1 - mu) / 2), cplx(1 - mu)};
        const KummerParams p2{cplx((1 + mu) / 2), cplx(1 + mu)};
        for (double y : {0.1, 1.0, 7.0, 22.0, 50.0}) {
            const cplx z(0.0, y);
            const auto f1 = kummer_phi_full(p1, z);
            const auto f2 = kummer_phi_full(p2, z);
            const cplx zmu = std::pow(z, cplx(mu));
            const cplx w2 = zmu * f2.value;
            const cplx dw2 = mu * zmu / z * f2.value + zmu * f2.deriv;
            const cplx wr = f1.value * dw2 - w2 * f1.deriv;
            const cplx target = mu * std::pow(z, cplx(mu - 1.0)) * std::exp(z);
            CHECK(rel(wr, target) < 1e-8);
        }
    }
}

TEST_CASE("mass-pair Wronskian identity") {
    // W(w1, w2)(z) = -2 i mu z^{-2 i mu - 1} e^z; |W| is |z|^{-1}-sized on the
    // imaginary axis up to the constant e^{mu pi}
    for (double mu : {0.3, 0.7, 1.3228756555322954, 2.2}) {
        const cplx tim(0.0, 2.0 * mu);
        const KummerParams p1{0.5 * (1.0 + tim), 1.0 + tim};
        const KummerParams p2{0.5 * (1.0 - tim), 1.0 - tim};
        for (double y : {0.2, 1.0, 6.0, 18.0, 45.0}) {
            const cplx z(0.0, y);
            const auto f1 = kummer_phi_full(p1, z);
            const auto f2 = kummer_phi_full(p2, z);
            const cplx zp = std::pow(z, -tim);
            const cplx w2 = zp * f2.value;
            const cplx dw2 = -tim * zp / z * f2.value + zp * f2.deriv;
            const cplx wr = f1.value * dw2 - w2 * f1.deriv;
            const cplx target = -tim * std::pow(z, -tim - 1.0) * std::exp(z);
            CHECK(rel(wr, target) < 1e-8);
            CHECK(std::abs(wr) * y / (2.0 * mu * std::exp(mu * M_PI)) ==
                  doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("psi second solution") {
    for (int mu : {2, 3, 4}) {
        const double b = (1.0 - mu) / 2.0, c = 1.0 - mu;
        const KummerParams pp{cplx(b), cplx(c)};
        const KummerParams p2{cplx((1.0 + mu) / 2.0), cplx(1.0 + mu)};

        SUBCASE("Wronskian normalization") {
            for (double y : {0.5, 3.0, 11.0}) {
                const cplx z(0.0, y);
                const auto ps = kummer_psi_full(pp, z);
                const auto f2 = kummer_phi_full(p2, z);
                const cplx zmu = std::pow(z, cplx(double(mu)));
                const cplx w2 = zmu * f2.value;
                const cplx dw2 = double(mu) * zmu / z * f2.value + zmu * f2.deriv;
                const cplx wr = w2 * ps.deriv - ps.value * dw2;
                const cplx target = std::tgamma(2.0 - c) / std::tgamma(b - c + 1.0) *
                                    std::pow(z, cplx(-c)) * std::exp(z);
                CHECK(rel(wr, target) < 1e-6);
            }
        }
        SUBCASE("small-z magnitude") {
            const cplx z(0.0, 1e-3);
            const double limit = std::tgamma(1.0 - c) / std::tgamma(b - c + 1.0);
            CHECK(std::abs(kummer_psi(pp, z)) ==
                  doctest::Approx(std::abs(limit)).epsilon(1e-2));
        }
        SUBCASE("large-z bound |Psi| <= C |z|^{-b}") {
            double cmax = 0.0, cmin = 1e300;
            for (double y = 20.0; y <= 200.0; y *= 1.3) {
                const cplx z(0.0, y);
                const double fitted = std::abs(kummer_psi(pp, z)) * std::pow(y, b);
                cmax = std::max(cmax, fitted);
                cmin = std::min(cmin, fitted);
            }
            CHECK(std::isfinite(cmax));
            CHECK(cmax / cmin < 5.0);  // bounded oscillation, no growth trend
        }
    }
    CHECK_THROWS_AS(kummer_psi({cplx(0.25), cplx(0.5)}, cplx(0.0, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("bessel j0 y0") {
    CHECK_THROWS_AS(bessel_j0y0(0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_j0y0(-1.0), std::domain_error);

    const auto near0 = bessel_j0y0(1e-8);
    CHECK(near0.j0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(near0.dj0) < 1e-7);

    SUBCASE("Wronskian 2/(pi tau)") {
        for (double tau : {1.0, 5.0, 50.0}) {
            const auto b = bessel_j0y0(tau);
            const double wr = b.j0 * b.dy0 - b.y0 * b.dj0;
            CHECK(std::abs(wr - 2.0 / (M_PI * tau)) / (2.0 / (M_PI * tau)) < 1e-10);
        }
    }
    SUBCASE("agrees with std::cyl_bessel") {
        for (double tau = 0.05; tau < 90.0; tau *= 1.17) {
            const auto b = bessel_j0y0(tau);
            CHECK(std::abs(b.j0 - std::cyl_bessel_j(0.0, tau)) < 2e-11);
            CHECK(std::abs(b.y0 - std::cyl_neumann(0.0, tau)) < 2e-11);
            CHECK(std::abs(b.dj0 + std::cyl_bessel_j(1.0, tau)) < 2e-11);
            CHECK(std::abs(b.dy0 + std::cyl_neumann(1.0, tau)) < 2e-11);
        }
    }
    SUBCASE("large-tau envelope |J0| <= C tau^{-1/2}") {
        double c = 0.0;
        for (double tau = 10.0; tau <= 1000.0; tau *= 1.07) {
            const auto b = bessel_j0y0(tau);
            c = std::max(c, std::abs(b.j0) * std::sqrt(tau));
        }
        CHECK(c < 0.9);  // sqrt(2/pi) ~ 0.7979 plus sampling slack
        CHECK(c > 0.5);
    }
}

TEST_CASE("pochhammer log-space path") {
    const cplx a(1.7, 0.3);
    cplx direct = 1.0;
    for (int j = 0; j < 45; ++j) direct *= a + double(j);
    CHECK(rel(pochhammer(a, 45), direct) < 1e-12);
    CHECK(pochhammer(a, 0) == cplx(1.0));
}
