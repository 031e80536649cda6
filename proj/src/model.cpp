#include "dsw/model.hpp"

#include <cmath>
#include <stdexcept>

namespace dsw {

namespace {
constexpr double kBalancedTol = 1e-12;
}

double ModelParams::source_weight(double t) const { return std::exp((p - 1.0) * r * t); }

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::DissipationDominant: return "dissipation-dominant";
        case Regime::Balanced: return "balanced";
        case Regime::MassDominant: return "mass-dominant";
    }
    return "?";
}

ModelParams derive_params(int n, double m, double p) {
    if (n < 1) throw std::domain_error("derive_params: n must be >= 1");
    if (m < 0.0) throw std::domain_error("derive_params: m must be >= 0");
    if (!(p > 1.0)) throw std::domain_error("derive_params: p must be > 1");

    ModelParams mp;
    mp.n = n;
    mp.m = m;
    mp.p = p;
    const double half_n = 0.5 * n;
    if (std::abs(m - half_n) <= kBalancedTol) {
        mp.regime = Regime::Balanced;
        mp.mu = 0.0;
        mp.r = -half_n;
    } else if (m < half_n) {
        mp.regime = Regime::DissipationDominant;
        mp.mu = std::sqrt(static_cast<double>(n) * n - 4.0 * m * m);
        mp.r = (-n + mp.mu) / 2.0;
        mp.zero_mass = (m == 0.0);
    } else {
        mp.regime = Regime::MassDominant;
        mp.mu = std::sqrt(m * m - half_n * half_n);
        mp.r = -half_n;
    }
    return mp;
}

}  // namespace dsw
