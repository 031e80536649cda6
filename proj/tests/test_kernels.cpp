#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dsw/kernels.hpp"

#include <cmath>
#include <random>

using namespace dsw;
using namespace dsw::kernels;

namespace {

double rel4(const KernelEval& a, const KernelEval& b) {
    const double scale = std::max({1.0, std::abs(b.k0), std::abs(b.dt_k0), std::abs(b.k1),
                                   std::abs(b.dt_k1)});
    return std::max({std::abs(a.k0 - b.k0), std::abs(a.dt_k0 - b.dt_k0), std::abs(a.k1 - b.k1),
                     std::abs(a.dt_k1 - b.dt_k1)}) /
           scale;
}

ModelParams diss_params(int n, double mu, double p = 3.0) {
    // m from mu = sqrt(n^2 - 4 m^2)
    const double m = std::sqrt((n * n - mu * mu) / 4.0);
    auto mp = derive_params(n, m, p);
    REQUIRE(mp.regime == Regime::DissipationDominant);
    REQUIRE(mp.mu == doctest::Approx(mu).epsilon(1e-12));
    return mp;
}

}  // namespace

TEST_CASE("zone classification") {
    ZoneConfig cfg{2.0};
    CHECK(zone_of(1.0, 0.0, 2.0, cfg) == Zone::Z1);
    CHECK(zone_of(100.0, 0.0, 1.0, cfg) == Zone::Z3);
    CHECK(zone_of(4.0, 0.0, 3.0, cfg) == Zone::Z2);
    // boundary tau0 = N resolves to Z1
    CHECK(zone_of(2.0, 0.0, 1.0, cfg) == Zone::Z1);
    CHECK_THROWS_AS(zone_of(1.0, 2.0, 1.0, cfg), std::domain_error);
}

TEST_CASE("cauchy data at t = s") {
    for (auto mk : {diss_params(3, 1.5), derive_params(3, 2.0, 3.0), derive_params(2, 1.0, 3.0)}) {
        const auto k = khat(mk, 1.25, 1.25, 7.0).k;
        CHECK(k.k0 == cplx(1.0));
        CHECK(k.dt_k0 == cplx(0.0));
        CHECK(k.k1 == cplx(0.0));
        CHECK(k.dt_k1 == cplx(1.0));
    }
}

TEST_CASE("mu = 1 explicit representation") {
    const double xi = 3.0, t = 2.0;
    const auto k = khat_dissipation(1.0, t, 0.0, xi);
    const double theta = xi * (1.0 - std::exp(-t));
    CHECK(k.k1.real() == doctest::Approx(std::sin(theta) / xi).epsilon(1e-14));
    CHECK(k.k0.real() == doctest::Approx(std::cos(theta)).epsilon(1e-14));

    // |xi| -> 0 limit of k1 at s = 0 is 1 - e^{-t}
    const auto k0 = khat_dissipation(1.0, t, 0.0, 1e-9);
    CHECK(k0.k1.real() == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-10));
}

TEST_CASE("frozen cross-checks against high-precision integration") {
    {
        const auto k = khat_dissipation(1.5, 2.0, 0.5, 3.0);
        const KernelEval frozen{{0.31545964138847871, 0.0},
                                {-0.25458220513469661, 0.0},
                                {0.42335117093060014, 0.0},
                                {-0.0075396334996613071, 0.0}};
        CHECK(rel4(k, frozen) < 1e-9);
    }
    {
        const auto k = khat_mass(std::sqrt(1.75), 2.0, 0.0, 5.0);
        const KernelEval frozen{{1.0149237038345323, 0.0},
                                {2.4203510808707036, 0.0},
                                {-0.33107638633878167, 0.0},
                                {0.19575748376308953, 0.0}};
        CHECK(rel4(k, frozen) < 1e-9);
    }
    {
        const auto k = khat_balanced(3.0, 1.0, 10.0);
        const KernelEval frozen{{-2.423172512924365, 0.0},
                                {-0.55537153253389623, 0.0},
                                {-0.11037366957377847, 0.0},
                                {-0.43797888444259757, 0.0}};
        CHECK(rel4(k, frozen) < 1e-9);
    }
    {
        // integer-mu branch through the second solution
        const auto k = khat_dissipation(2.0, 1.5, 0.25, 4.0);
        const KernelEval frozen{{-0.17514664464054262, 0.0},
                                {-0.34222225464678546, 0.0},
                                {0.18096893573988021, 0.0},
                                {-0.11506587211721373, 0.0}};
        CHECK(rel4(k, frozen) < 1e-8);
    }
}

TEST_CASE("oracle closed forms and self-consistency") {
    auto mp = diss_params(3, 1.5);
    const double dt = 1.7;
    const auto k = khat_oracle(mp, dt, 0.0, 0.0);
    CHECK(k.k1.real() == doctest::Approx((1.0 - std::exp(-1.5 * dt)) / 1.5).epsilon(1e-9));
    CHECK(k.k0.real() == doctest::Approx(1.0).epsilon(1e-12));

    const auto a = khat_oracle(mp, 3.0, 0.4, 11.0, 1e-8);
    const auto b = khat_oracle(mp, 3.0, 0.4, 11.0, 5e-9);
    CHECK(rel4(a, b) < 1e-7);
}

TEST_CASE("representation matches oracle across regimes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.0, 6.0), ux(0.0, 40.0), u01(0.0, 1.0);
    std::vector<ModelParams> models = {diss_params(3, 1.5), diss_params(3, 0.5),
                                       diss_params(3, 2.5), derive_params(3, 2.0, 3.0),
                                       derive_params(2, 1.0, 3.0)};
    for (const auto& mp : models) {
        double worst = 0.0;
        for (int i = 0; i < 250; ++i) {
            const double t = ut(rng);
            const double s = t * u01(rng);
            const double xi = ux(rng);
            const auto rep = khat(mp, t, s, xi);
            const auto ora = khat_oracle(mp, t, s, xi, 1e-11);
            worst = std::max(worst, rel4(rep.k, ora) / (rep.asymptotic ? 100.0 : 1.0));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("real output and imaginary contamination") {
    for (const auto& mp : {diss_params(3, 2.5), derive_params(3, 2.0, 3.0)}) {
        for (double xi : {0.3, 4.0, 18.0, 39.0}) {
            const auto k = khat(mp, 4.0, 0.7, xi).k;
            const double scale = std::max({1.0, std::abs(k.k0), std::abs(k.dt_k0),
                                           std::abs(k.k1), std::abs(k.dt_k1)});
            CHECK(std::abs(k.k0.imag()) / scale < 1e-9);
            CHECK(std::abs(k.k1.imag()) / scale < 1e-9);
            CHECK(std::abs(k.dt_k0.imag()) / scale < 1e-9);
            CHECK(std::abs(k.dt_k1.imag()) / scale < 1e-9);
        }
    }
}

TEST_CASE("fundamental-matrix composition") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const auto& mp : {diss_params(3, 1.7), derive_params(3, 2.0, 3.0),
                           derive_params(2, 1.0, 3.0)}) {
        for (int i = 0; i < 40; ++i) {
            const double s = 4.0 * u01(rng);
            const double sig = s + 2.0 * u01(rng);
            const double t = sig + 2.0 * u01(rng);
            const double xi = 30.0 * u01(rng);
            const auto A = khat(mp, t, sig, xi).k;   // sigma -> t
            const auto B = khat(mp, sig, s, xi).k;   // s -> sigma
            const auto C = khat(mp, t, s, xi).k;     // s -> t
            const cplx c00 = A.k0 * B.k0 + A.k1 * B.dt_k0;
            const cplx c10 = A.dt_k0 * B.k0 + A.dt_k1 * B.dt_k0;
            const cplx c01 = A.k0 * B.k1 + A.k1 * B.dt_k1;
            const cplx c11 = A.dt_k0 * B.k1 + A.dt_k1 * B.dt_k1;
            const double scale = std::max({1.0, std::abs(C.k0), std::abs(C.dt_k0),
                                           std::abs(C.k1), std::abs(C.dt_k1)});
            CHECK(std::abs(c00 - C.k0) / scale < 1e-8);
            CHECK(std::abs(c10 - C.dt_k0) / scale < 1e-8);
            CHECK(std::abs(c01 - C.k1) / scale < 1e-8);
            CHECK(std::abs(c11 - C.dt_k1) / scale < 1e-8);
        }
    }
}

TEST_CASE("continuity in mu at the closed form") {
    for (double eps : {1e-4, -1e-4}) {
        double worst = 0.0;
        for (double xi : {0.5, 3.0, 12.0}) {
            const auto a = khat_dissipation(1.0 + eps, 2.5, 0.3, xi);
            const auto b = khat_dissipation(1.0, 2.5, 0.3, xi);
            worst = std::max(worst, rel4(a, b));
        }
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("multiplier bound audit is finite") {
    SampleSpec spec;
    spec.nt = 10;
    spec.ns = 6;
    spec.nxi = 16;
    for (const auto& mp : {diss_params(3, 1.5), diss_params(3, 0.5),
                           derive_params(3, 2.0, 3.0), derive_params(2, 1.0, 3.0)}) {
        const auto rep = audit_multiplier_bounds(mp, 1.0, spec);
        CHECK(!rep.audits.empty());
        for (const auto& a : rep.audits) {
            INFO(a.estimate_id);
            CHECK(std::isfinite(a.fitted_constant));
            CHECK(a.fitted_constant > 0.0);
            CHECK(a.nan_count == 0);
        }
        CHECK(rep.to_json().find("fitted_constant") != std::string::npos);
    }
}

TEST_CASE("balanced sup|k1| grows linearly, dissipative stays bounded") {
    const auto bal = derive_params(2, 1.0, 3.0);
    const double slope = sup_k1_growth_slope(bal, 2.0, 10.0, 9, 200, 40.0);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.15));

    const auto diss = diss_params(3, 1.5);
    const double dslope = sup_k1_growth_slope(diss, 2.0, 10.0, 9, 200, 40.0);
    CHECK(std::abs(dslope) < 0.05);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(khat_dissipation(0.0, 1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(khat_dissipation(1.5, 0.5, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(khat_mass(-1.0, 1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(khat_balanced(1.0, -0.5, 1.0), std::domain_error);
}
