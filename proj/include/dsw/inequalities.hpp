#ifndef DSW_INEQUALITIES_HPP
#define DSW_INEQUALITIES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dsw/spectral.hpp"

namespace dsw::inequalities {

using spectral::GridSpec;
using spectral::SpectralField;

// Random real band-limited fields: independent complex Gaussian coefficients
// under the envelope |xi|^{-alpha}, band capped at half-Nyquist, zero mean.
struct EnsembleSpec {
    int count = 100;
    double alpha = 1.0;
    std::uint64_t seed = 1;
};

std::vector<SpectralField> make_ensemble(const GridSpec& g, const EnsembleSpec& spec);

struct GNParams {
    double s = 0.5;
    double sigma = 1.0;
    double p = 2.0, p0 = 2.0, p1 = 2.0;

    // theta = (1/p0 - 1/p + s/n) / (1/p0 - 1/p1 + sigma/n)
    double theta(int n) const;
    void validate(int n) const;  // throws HypothesisViolation-style invalid_argument
};

struct InequalityReport {
    std::string inequality_id;
    std::string parameters;
    long sample_count = 0;
    std::vector<double> ratios;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;

    std::string to_json() const;
    void finalize();
};

InequalityReport check_gagliardo_nirenberg(const std::vector<SpectralField>& ensemble,
                                           const GNParams& params);

// || |D|^s(u v) ||_{L^r} vs || |D|^s u ||_{p1} ||v||_{p2} + ||u||_{q1} || |D|^s v ||_{q2}.
struct LeibnizExponents {
    double r = 1.0, p1 = 2.0, p2 = 2.0, q1 = 2.0, q2 = 2.0;
};
InequalityReport check_fractional_leibniz(const std::vector<SpectralField>& us,
                                          const std::vector<SpectralField>& vs, double s,
                                          const LeibnizExponents& e);

// || |D|^s |u|^p ||_{L^r} vs ||u||_{r1}^{p-1} || |D|^s u ||_{r2}, requires p > ceil(s).
struct ChainExponents {
    double r = 2.0, r1 = 4.0, r2 = 4.0;
};
InequalityReport check_fractional_chain_rule(const std::vector<SpectralField>& ensemble, double s,
                                             double p, const ChainExponents& e);

// ||u||_{L^q} vs ||u||_{Hdot^kappa}, kappa = n(1/2 - 1/q).
InequalityReport check_sobolev_embedding(const std::vector<SpectralField>& ensemble, double q);

// || |u|^p ||_{Hdot^s_r} vs ||u||_{Hdot^s_r} ||u||_inf^{p-1}, s in (n/r, p).
InequalityReport check_fractional_powers(const std::vector<SpectralField>& ensemble, double p,
                                         double s, double r);

}  // namespace dsw::inequalities

#endif
