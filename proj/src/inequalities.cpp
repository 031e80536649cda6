#include "dsw/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dsw::inequalities {

namespace {

using spectral::fractional_derivative;
using spectral::linf_norm;
using spectral::lp_norm;
using spectral::sobolev_norm;

double riesz_lp(const SpectralField& u, double s, double p) {
    const SpectralField d = fractional_derivative(u, s);
    return p == 2.0 ? sobolev_norm(d, 0.0, false) : lp_norm(d, p);
}

// Pointwise product; exact for half-Nyquist-banded factors.
SpectralField field_product(const SpectralField& u, const SpectralField& v) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument("field_product: grid mismatch");
    auto su = u.to_spatial();
    auto sv = v.to_spatial();
    for (size_t i = 0; i < su.size(); ++i) su[i] *= sv[i];
    return SpectralField::from_spatial(u.grid(), su);
}

void push_ratio(InequalityReport& rep, double lhs, double rhs) {
    ++rep.sample_count;
    if (rhs > 0.0) rep.ratios.push_back(lhs / rhs);
}

}  // namespace

std::vector<SpectralField> make_ensemble(const GridSpec& g, const EnsembleSpec& spec) {
    g.validate();
    std::vector<SpectralField> out;
    out.reserve(spec.count);
    const double fu = g.freq_unit();
    const double xi_hi = fu * g.points_per_axis / 4.0;  // half-Nyquist
    for (int i = 0; i < spec.count; ++i) {
        out.push_back(spectral::band_noise(g, 0.5 * fu, xi_hi, 1.0,
                                           spec.seed * 0x9e3779b97f4a7c15ULL + i, spec.alpha));
    }
    return out;
}

double GNParams::theta(int n) const {
    return (1.0 / p0 - 1.0 / p + s / n) / (1.0 / p0 - 1.0 / p1 + sigma / n);
}

void GNParams::validate(int n) const {
    if (!(p > 1.0 && p0 > 1.0 && p1 > 1.0))
        throw std::invalid_argument("hypothesis violated: p, p0, p1 in (1, inf)");
    if (!(sigma > s && s >= 0.0))
        throw std::invalid_argument("hypothesis violated: 0 <= s < sigma");
    const double th = theta(n);
    if (th < s / sigma - 1e-12 || th > 1.0 + 1e-12)
        throw std::invalid_argument("hypothesis violated: theta outside [s/sigma, 1]");
}

void InequalityReport::finalize() {
    max_ratio = 0.0;
    double sum = 0.0;
    for (double r : ratios) {
        max_ratio = std::max(max_ratio, r);
        sum += r;
    }
    mean_ratio = ratios.empty() ? 0.0 : sum / ratios.size();
}

std::string InequalityReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"inequality_id\":\"" << inequality_id << "\",\"parameters\":\"" << parameters
       << "\",\"sample_count\":" << sample_count << ",\"max_ratio\":" << max_ratio
       << ",\"mean_ratio\":" << mean_ratio << ",\"ratios\":[";
    for (size_t i = 0; i < ratios.size(); ++i) {
        if (i) os << ",";
        os << ratios[i];
    }
    os << "]}";
    return os.str();
}

InequalityReport check_gagliardo_nirenberg(const std::vector<SpectralField>& ensemble,
                                           const GNParams& params) {
    if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
    const int n = ensemble.front().grid().dim;
    params.validate(n);
    const double th = params.theta(n);

    InequalityReport rep;
    rep.inequality_id = "gagliardo-nirenberg";
    {
        std::ostringstream os;
        os << "s=" << params.s << " sigma=" << params.sigma << " p=" << params.p
           << " p0=" << params.p0 << " p1=" << params.p1 << " theta=" << th;
        rep.parameters = os.str();
    }
    for (const auto& u : ensemble) {
        const double lhs = riesz_lp(u, params.s, params.p);
        const double rhs = std::pow(lp_norm(u, params.p0), 1.0 - th) *
                           std::pow(riesz_lp(u, params.sigma, params.p1), th);
        push_ratio(rep, lhs, rhs);
    }
    rep.finalize();
    return rep;
}

InequalityReport check_fractional_leibniz(const std::vector<SpectralField>& us,
                                          const std::vector<SpectralField>& vs, double s,
                                          const LeibnizExponents& e) {
    if (!(s > 0.0)) throw std::invalid_argument("hypothesis violated: s > 0");
    if (std::abs(1.0 / e.p1 + 1.0 / e.p2 - 1.0 / e.r) > 1e-12 ||
        std::abs(1.0 / e.q1 + 1.0 / e.q2 - 1.0 / e.r) > 1e-12)
        throw std::invalid_argument("hypothesis violated: 1/r = 1/p1+1/p2 = 1/q1+1/q2");
    if (us.size() != vs.size()) throw std::invalid_argument("ensemble size mismatch");

    InequalityReport rep;
    rep.inequality_id = "fractional-leibniz";
    {
        std::ostringstream os;
        os << "s=" << s << " r=" << e.r << " p1=" << e.p1 << " p2=" << e.p2 << " q1=" << e.q1
           << " q2=" << e.q2;
        rep.parameters = os.str();
    }
    for (size_t i = 0; i < us.size(); ++i) {
        const SpectralField uv = field_product(us[i], vs[i]);
        const double lhs = riesz_lp(uv, s, e.r);
        const double rhs = riesz_lp(us[i], s, e.p1) * lp_norm(vs[i], e.p2) +
                           lp_norm(us[i], e.q1) * riesz_lp(vs[i], s, e.q2);
        push_ratio(rep, lhs, rhs);
    }
    rep.finalize();
    return rep;
}

InequalityReport check_fractional_chain_rule(const std::vector<SpectralField>& ensemble, double s,
                                             double p, const ChainExponents& e) {
    if (!(p > std::ceil(s)))
        throw std::invalid_argument("hypothesis violated: p > ceil(s)");
    if (std::abs((p - 1.0) / e.r1 + 1.0 / e.r2 - 1.0 / e.r) > 1e-12)
        throw std::invalid_argument("hypothesis violated: 1/r = (p-1)/r1 + 1/r2");

    InequalityReport rep;
    rep.inequality_id = "fractional-chain-rule";
    {
        std::ostringstream os;
        os << "s=" << s << " p=" << p << " r=" << e.r << " r1=" << e.r1 << " r2=" << e.r2;
        rep.parameters = os.str();
    }
    for (const auto& u : ensemble) {
        const SpectralField fu = spectral::nonlinear_power(u, p);
        const double lhs = riesz_lp(fu, s, e.r);
        const double rhs = std::pow(lp_norm(u, e.r1), p - 1.0) * riesz_lp(u, s, e.r2);
        push_ratio(rep, lhs, rhs);
    }
    rep.finalize();
    return rep;
}

InequalityReport check_sobolev_embedding(const std::vector<SpectralField>& ensemble, double q) {
    if (!(q >= 2.0)) throw std::invalid_argument("hypothesis violated: q >= 2");
    if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
    const int n = ensemble.front().grid().dim;
    const double kappa = n * (0.5 - 1.0 / q);

    InequalityReport rep;
    rep.inequality_id = "sobolev-embedding";
    {
        std::ostringstream os;
        os << "q=" << q << " kappa=" << kappa;
        rep.parameters = os.str();
    }
    for (const auto& u : ensemble) {
        const double lhs = q == 2.0 ? sobolev_norm(u, 0.0, false) : lp_norm(u, q);
        const double rhs = sobolev_norm(u, kappa, true);
        push_ratio(rep, lhs, rhs);
    }
    rep.finalize();
    return rep;
}

InequalityReport check_fractional_powers(const std::vector<SpectralField>& ensemble, double p,
                                         double s, double r) {
    if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
    const int n = ensemble.front().grid().dim;
    if (!(s > n / r && s < p))
        throw std::invalid_argument("hypothesis violated: s in (n/r, p)");

    InequalityReport rep;
    rep.inequality_id = "fractional-powers";
    {
        std::ostringstream os;
        os << "p=" << p << " s=" << s << " r=" << r;
        rep.parameters = os.str();
    }
    for (const auto& u : ensemble) {
        const SpectralField fu = spectral::nonlinear_power(u, p);
        const double lhs = riesz_lp(fu, s, r);
        const double rhs = riesz_lp(u, s, r) * std::pow(linf_norm(u), p - 1.0);
        push_ratio(rep, lhs, rhs);
    }
    rep.finalize();
    return rep;
}

}  // namespace dsw::inequalities
