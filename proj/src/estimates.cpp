#include "dsw/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace dsw::estimates {

namespace {

void require(bool ok, const std::string& thm, const std::string& hyp) {
    if (!ok) throw HypothesisViolation(thm, hyp);
}

double upper_energy(int n) { return n >= 3 ? static_cast<double>(n) / (n - 2) : kInf; }

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

}  // namespace

double critical_p(int n, double mu) { return 1.0 + 2.0 / (n - mu); }

const std::vector<TheoremInfo>& theorem_registry() {
    static const std::vector<TheoremInfo> reg = {
        {"3.4", "p > p_{n,mu}, p <= n/(n-2); energy data H^1 x L^2", Regime::DissipationDominant,
         false, false},
        {"3.5", "p > p_{n,mu,gamma} = 1 + 2 gamma/(n-mu), p <= n/(n-2 gamma)",
         Regime::DissipationDominant, true, false},
        {"3.6", "max{p_{n,mu}, ceil(sigma)} < p <= 1 + 2/(n-2 sigma)",
         Regime::DissipationDominant, false, true},
        {"3.6-cor", "max{p_{n,mu}, ceil(sigma)} < p, n <= 2 sigma", Regime::DissipationDominant,
         false, true},
        {"3.7", "max{p_{n,mu}, sigma, 2} < p, sigma > n/2", Regime::DissipationDominant, false,
         true},
        {"3.8", "p > sigma + 1, sigma > n/2", Regime::DissipationDominant, false, true},
        {"3.9", "p > (n+1)/(n-1), p <= n/(n-2); non-effective damping",
         Regime::DissipationDominant, false, false},
        {"3.10", "p > p_{n,gamma} = 1 + 2 gamma/(n-1), p <= n/(n-2 gamma)",
         Regime::DissipationDominant, true, false},
        {"3.11", "max{(n+1)/(n-1), ceil(sigma)} < p <= 1 + 2/(n-2 sigma)",
         Regime::DissipationDominant, false, true},
        {"3.11-cor", "max{(n+1)/(n-1), ceil(sigma)} < p, n <= 2 sigma",
         Regime::DissipationDominant, false, true},
        {"3.12", "max{(n+1)/(n-1), sigma, 2} < p, sigma > n/2", Regime::DissipationDominant,
         false, true},
        {"3.13", "p > sigma + 1; n = 1 (sigma = 1) or n = 2 (sigma in (1,2))",
         Regime::DissipationDominant, false, true},
        {"4.3", "p > (n+1)/(n-1), p <= n/(n-2); energy data", Regime::MassDominant, false, false},
        {"4.4", "p > 1 + 2 gamma/(n-1), p <= n/(n-2 gamma)", Regime::MassDominant, true, false},
        {"4.5", "max{(n+1)/(n-1), ceil(sigma)} < p <= 1 + 2/(n-2 sigma)", Regime::MassDominant,
         false, true},
        {"4.6", "max{(n+1)/(n-1), ceil(sigma)} < p, n <= 2 sigma", Regime::MassDominant, false,
         true},
        {"4.7", "max{(n+1)/(n-1), sigma, 2} < p, sigma > n/2", Regime::MassDominant, false, true},
        {"4.8", "p > sigma + 1; n = 1 (sigma = 1) or n = 2 (sigma in (1,2))",
         Regime::MassDominant, false, true},
        {"5.3", "p > (n+1)/(n-1), p <= n/(n-2); energy data", Regime::Balanced, false, false},
        {"5.4", "p > 1 + 2 gamma/(n-1), p <= n/(n-2 gamma)", Regime::Balanced, true, false},
        {"5.5", "max{(n+1)/(n-1), ceil(sigma)} < p <= 1 + 2/(n-2 sigma)", Regime::Balanced, false,
         true},
        {"5.6", "max{(n+1)/(n-1), ceil(sigma)} < p, n <= 2 sigma", Regime::Balanced, false, true},
        {"5.7", "max{(n+1)/(n-1), sigma, 2} < p, sigma > n/2", Regime::Balanced, false, true},
        {"5.8", "p > sigma + 1; n = 1 (sigma = 1) or n = 2 (sigma in (1,2))", Regime::Balanced,
         false, true},
    };
    return reg;
}

namespace {

// Shared parts of the three regime families: the energy / fractional /
// higher-regularity threshold shapes with a regime-dependent base exponent.
ExponentBounds family_energy(const std::string&, int n, double base) {
    ExponentBounds b;
    b.lower = base;
    b.upper = upper_energy(n);
    b.extra_conditions = {"data f in H^1, g in L^2"};
    return b;
}

ExponentBounds family_fractional(const std::string& id, int n, double gamma, double denom) {
    require(gamma > 0.5 && gamma < 1.0, id, "gamma in (1/2, 1)");
    ExponentBounds b;
    b.lower = 1.0 + 2.0 * gamma / denom;
    b.upper = static_cast<double>(n) / (n - 2.0 * gamma);
    b.extra_conditions = {"data f in H^gamma, g in L^2"};
    if (b.lower >= b.upper) b.empty = true;
    return b;
}

ExponentBounds family_sigma(const std::string& id, int n, double sigma, double base) {
    require(n >= 3, id, "n >= 3");
    require(sigma > 1.0 && 2.0 * sigma < n, id, "sigma in (1, n/2)");
    ExponentBounds b;
    b.lower = std::max(base, std::ceil(sigma));
    b.upper = 1.0 + 2.0 / (n - 2.0 * sigma);
    b.extra_conditions = {"data f in H^sigma, g in H^{sigma-1}", "p > ceil(sigma)"};
    if (b.lower >= b.upper) b.empty = true;
    return b;
}

ExponentBounds family_sigma_cor(const std::string& id, int n, double sigma, double base) {
    require(n >= 3, id, "n >= 3");
    require(2.0 * sigma >= n, id, "n <= 2 sigma");
    ExponentBounds b;
    b.lower = std::max(base, std::ceil(sigma));
    b.upper = kInf;
    b.extra_conditions = {"data f in H^sigma, g in H^{sigma-1}", "p > ceil(sigma)"};
    return b;
}

ExponentBounds family_improve(const std::string& id, int n, double sigma, double base) {
    require(n >= 2, id, "n >= 2");
    require(2.0 * sigma > n, id, "sigma > n/2");
    ExponentBounds b;
    b.lower = std::max({base, sigma, 2.0});
    b.upper = kInf;
    b.extra_conditions = {"data f in H^sigma, g in H^{sigma-1}", "p > max{sigma, 2}"};
    return b;
}

ExponentBounds family_low_dim(const std::string& id, int n, double sigma) {
    const bool ok1 = (n == 1 && sigma == 1.0);
    const bool ok2 = (n == 2 && sigma > 1.0 && sigma < 2.0);
    require(ok1 || ok2, id, "n = 1 with sigma = 1, or n = 2 with sigma in (1, 2)");
    ExponentBounds b;
    b.lower = sigma + 1.0;
    b.upper = kInf;
    b.extra_conditions = {"data f in H^sigma, g in H^{sigma-1}", "p > sigma + 1"};
    return b;
}

}  // namespace

ExponentBounds critical_exponents(const ModelParams& mp, double gs, const std::string& id) {
    const auto& reg = theorem_registry();
    const auto it = std::find_if(reg.begin(), reg.end(),
                                 [&](const TheoremInfo& t) { return t.id == id; });
    if (it == reg.end()) throw std::invalid_argument("critical_exponents: unknown theorem " + id);
    require(mp.regime == it->regime, id, std::string("regime must be ") + regime_name(it->regime));

    const int n = mp.n;
    const double mu = mp.mu;
    const bool diss = mp.regime == Regime::DissipationDominant;
    const double noneff_base = static_cast<double>(n + 1) / (n - 1);

    if (id == "3.4") {
        require(n >= 2, id, "n >= 2");
        require(mu >= 1.0 && mu < 2.0, id, "mu in [1, 2)");
        ExponentBounds b = family_energy(id, n, critical_p(n, mu));
        return b;
    }
    if (id == "3.5") {
        require(n >= 2, id, "n >= 2");
        require(mu >= 1.0 && mu < 2.0 * gs, id, "mu in [1, 2 gamma)");
        return family_fractional(id, n, gs, n - mu);
    }
    if (id == "3.6") {
        require(mu >= 1.0 && mu < 2.0 * gs, id, "mu in [1, 2 sigma)");
        return family_sigma(id, n, gs, critical_p(n, mu));
    }
    if (id == "3.6-cor") {
        require(mu >= 1.0 && mu < n, id, "mu in [1, n)");
        return family_sigma_cor(id, n, gs, critical_p(n, mu));
    }
    if (id == "3.7") {
        require(mu >= 1.0 && mu < n, id, "mu in [1, n)");
        return family_improve(id, n, gs, critical_p(n, mu));
    }
    if (id == "3.8") {
        require(mu >= 1.0 && mu < n, id, "mu in [1, n)");
        require(n >= 2, id, "n >= 2");
        require(2.0 * gs > n, id, "sigma > n/2");
        ExponentBounds b;
        b.lower = gs + 1.0;
        b.upper = kInf;
        b.extra_conditions = {"data f in H^sigma, g in H^{sigma-1}", "p > sigma + 1"};
        return b;
    }
    if (diss && (id == "3.9" || id == "3.10" || id == "3.11" || id == "3.11-cor" ||
                 id == "3.12" || id == "3.13")) {
        require(mu > 0.0 && mu < 1.0, id, "mu in (0, 1) (non-effective damping)");
        if (id == "3.9") {
            require(n >= 2, id, "n >= 2");
            return family_energy(id, n, noneff_base);
        }
        if (id == "3.10") {
            require(n >= 2, id, "n >= 2");
            return family_fractional(id, n, gs, n - 1.0);
        }
        if (id == "3.11") return family_sigma(id, n, gs, noneff_base);
        if (id == "3.11-cor") return family_sigma_cor(id, n, gs, noneff_base);
        if (id == "3.12") return family_improve(id, n, gs, noneff_base);
        return family_low_dim(id, n, gs);
    }
    if (id == "4.3" || id == "5.3") {
        require(n >= 2, id, "n >= 2");
        return family_energy(id, n, noneff_base);
    }
    if (id == "4.4" || id == "5.4") {
        require(n >= 2, id, "n >= 2");
        return family_fractional(id, n, gs, n - 1.0);
    }
    if (id == "4.5" || id == "5.5") return family_sigma(id, n, gs, noneff_base);
    if (id == "4.6" || id == "5.6") return family_sigma_cor(id, n, gs, noneff_base);
    if (id == "4.7" || id == "5.7") return family_improve(id, n, gs, noneff_base);
    if (id == "4.8" || id == "5.8") return family_low_dim(id, n, gs);

    throw std::invalid_argument("critical_exponents: unhandled theorem " + id);
}

RateInfo theoretical_rate(const ModelParams& mp, double gamma, Channel channel,
                          DataClass data_class) {
    if (channel == Channel::Derivative && gamma < 1.0)
        throw HypothesisViolation("decay estimates", "gamma >= 1 for the derivative channel");
    if (gamma < 0.0) throw HypothesisViolation("decay estimates", "gamma >= 0");

    RateInfo r;
    switch (mp.regime) {
        case Regime::DissipationDominant:
            if (mp.mu < 1.0) {
                r.rate = -(mp.n - 1.0) / 2.0;
                if (channel == Channel::Solution && data_class == DataClass::GInHgamma)
                    r.g_term_extra_rate = -(1.0 - mp.mu) / 2.0;
            } else {
                r.rate = (-mp.n + mp.mu) / 2.0;
            }
            break;
        case Regime::MassDominant:
            r.rate = -(mp.n - 1.0) / 2.0;
            break;
        case Regime::Balanced:
            r.rate = -(mp.n - 1.0) / 2.0;
            r.log_correction = true;
            break;
    }
    return r;
}

DecayReport fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms,
                           double window_lo, double window_hi, bool log_correction) {
    if (times.size() != norms.size())
        throw std::invalid_argument("fit_decay_rate: times/norms length mismatch");
    DecayReport rep;
    rep.log_correction = log_correction;
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;

    std::vector<double> xs, ys;
    for (size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < window_lo || t > window_hi) continue;
        if (!(norms[i] > 0.0))
            throw std::invalid_argument("fit_decay_rate: nonpositive norm inside window");
        xs.push_back(t);
        ys.push_back(std::log(norms[i]) - (log_correction ? std::log1p(t) : 0.0));
        rep.times.push_back(t);
        rep.norms.push_back(norms[i]);
    }
    if (xs.size() < 10)
        throw std::invalid_argument("fit_decay_rate: fewer than 10 samples in window");

    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (icept + slope * xs[i]);
        rss += e * e;
    }
    rep.fitted_rate = slope;
    rep.residual = std::sqrt(rss / n);
    return rep;
}

std::string DecayReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"fitted_rate\":" << fitted_rate << ",\"theoretical_rate\":" << theoretical_rate
       << ",\"log_correction\":" << (log_correction ? "true" : "false") << ",\"fit_window\":["
       << window_lo << "," << window_hi << "],\"residual\":" << residual
       << ",\"samples\":" << times.size() << "}";
    return os.str();
}

namespace {

void merge_rows(const std::vector<LandscapeRow>& rows, std::vector<LandscapeRow>& coverage,
                std::vector<LandscapeRow>& gaps) {
    std::vector<LandscapeRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const LandscapeRow& a, const LandscapeRow& b) { return a.lower < b.lower; });
    for (const auto& r : sorted) {
        if (!coverage.empty() && r.lower <= coverage.back().upper) {
            coverage.back().upper = std::max(coverage.back().upper, r.upper);
            coverage.back().witness += " + " + r.witness;
        } else {
            coverage.push_back(r);
        }
    }
    for (size_t i = 0; i + 1 < coverage.size(); ++i) {
        gaps.push_back({coverage[i].upper, coverage[i + 1].lower, "no result applies", ""});
    }
}

}  // namespace

Landscape exponent_landscape(int n) {
    if (n < 2) throw std::invalid_argument("exponent_landscape: n >= 2 required");
    Landscape ls;
    ls.n = n;
    const double p_crit = critical_p(n, 1.0);  // mu = 1

    // Energy + fractional-data results sweep gamma over (1/2, 1]; their union
    // is the low-p interval (n/(n-1), n/(n-2)].
    LandscapeRow low;
    low.lower = static_cast<double>(n) / (n - 1);
    low.upper = upper_energy(n);
    low.witness = "3.4 (gamma = 1) + 3.5 (gamma in (1/2,1))";
    low.regularity = "f in H^gamma, g in L^2";
    ls.rows.push_back(low);

    if (n >= 3) {
        const int k_top = static_cast<int>(std::ceil(n / 2.0));
        for (int k = 2; k < k_top; ++k) {
            // sigma = k realizes ceil(sigma) = k with the largest upper bound
            const double lo = std::max(p_crit, static_cast<double>(k));
            const double hi = 1.0 + 2.0 / (n - 2.0 * k);
            if (lo < hi) {
                ls.rows.push_back({lo, hi, "3.6 (sigma = " + std::to_string(k) + ")",
                                   "f in H^sigma, g in H^{sigma-1}"});
            }
        }
        ls.rows.push_back({std::max(p_crit, static_cast<double>(k_top)), kInf,
                           "3.6 (sigma -> n/2) + 3.6-cor",
                           "f in H^sigma, g in H^{sigma-1}, sigma near n/2"});
    }

    merge_rows(ls.rows, ls.coverage, ls.gaps);
    return ls;
}

namespace {
std::string interval_str(double lo, double hi) {
    std::ostringstream os;
    os << "(" << fmt(lo) << ", " << (std::isinf(hi) ? std::string("inf") : fmt(hi))
       << (std::isinf(hi) ? ")" : "]");
    return os.str();
}
}  // namespace

std::string Landscape::to_json() const {
    std::ostringstream os;
    os.precision(17);
    auto emit = [&](const std::vector<LandscapeRow>& v) {
        os << "[";
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) os << ",";
            os << "{\"lower\":" << v[i].lower << ",\"upper\":";
            if (std::isinf(v[i].upper)) os << "\"inf\"";
            else os << v[i].upper;
            os << ",\"witness\":\"" << v[i].witness << "\",\"regularity\":\"" << v[i].regularity
               << "\"}";
        }
        os << "]";
    };
    os << "{\"n\":" << n << ",\"rows\":";
    emit(rows);
    os << ",\"coverage\":";
    emit(coverage);
    os << ",\"gaps\":";
    emit(gaps);
    os << "}";
    return os.str();
}

std::string Landscape::to_text() const {
    std::ostringstream os;
    os << "admissible exponents, n = " << n << " (mu = 1)\n";
    os << std::left << std::setw(18) << "  interval" << std::setw(40) << "witness"
       << "data\n";
    for (const auto& r : rows)
        os << "  " << std::setw(16) << interval_str(r.lower, r.upper) << std::setw(40) << r.witness
           << r.regularity << "\n";
    os << "coverage:";
    for (const auto& r : coverage) os << " " << interval_str(r.lower, r.upper);
    os << "\ngaps:";
    if (gaps.empty()) os << " none";
    for (const auto& r : gaps) os << " " << interval_str(r.lower, r.upper);
    os << "\n";
    return os.str();
}

}  // namespace dsw::estimates
