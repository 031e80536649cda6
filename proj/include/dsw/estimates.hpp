#ifndef DSW_ESTIMATES_HPP
#define DSW_ESTIMATES_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsw/model.hpp"

namespace dsw::estimates {

class HypothesisViolation : public std::invalid_argument {
  public:
    HypothesisViolation(const std::string& theorem, const std::string& hypothesis)
        : std::invalid_argument("hypothesis of " + theorem + " violated: " + hypothesis),
          theorem_id(theorem),
          failed_hypothesis(hypothesis) {}
    std::string theorem_id;
    std::string failed_hypothesis;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Admissible exponent interval (lower, upper]; upper may be +inf.
struct ExponentBounds {
    double lower = 1.0;           // strict
    double upper = kInf;          // inclusive when finite
    bool empty = false;
    std::vector<std::string> extra_conditions;

    bool admits(double p) const { return !empty && p > lower && p <= upper; }
};

// p_{n,mu} = 1 + 2/(n - mu).
double critical_p(int n, double mu);

struct TheoremInfo {
    std::string id;
    std::string statement;   // short threshold description
    Regime regime;
    bool uses_gamma;         // parameter is gamma in (1/2, 1)
    bool uses_sigma;         // parameter is a regularity sigma
};

const std::vector<TheoremInfo>& theorem_registry();

// Exact admissible p-interval of the named global-existence result;
// gamma_or_sigma is ignored by results that take no extra regularity.
ExponentBounds critical_exponents(const ModelParams& params, double gamma_or_sigma,
                                  const std::string& theorem_id);

enum class Channel { Solution, Derivative };
enum class DataClass { GInHgammaMinus1, GInHgamma };

struct RateInfo {
    double rate = 0.0;
    bool log_correction = false;
    double g_term_extra_rate = 0.0;  // additional decay on the g-term, when any
};

// Sharp-decay exponent of the linear a-priori estimates (norms of phi).
RateInfo theoretical_rate(const ModelParams& params, double gamma, Channel channel,
                          DataClass data_class);

struct DecayReport {
    std::vector<double> times;
    std::vector<double> norms;
    double fitted_rate = 0.0;
    double theoretical_rate = std::numeric_limits<double>::quiet_NaN();
    bool log_correction = false;
    double window_lo = 0.0, window_hi = 0.0;
    double residual = 0.0;  // RMS of the linear fit on log(norm)

    std::string to_json() const;
};

// Least-squares slope of log(norm) (log(norm/(1+t)) under the flag) over the
// window; needs at least 10 samples and positive norms.
DecayReport fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms,
                           double window_lo, double window_hi, bool log_correction);

struct LandscapeRow {
    double lower = 0.0;
    double upper = kInf;
    std::string witness;
    std::string regularity;  // data choice realizing the interval
};

struct Landscape {
    int n = 0;
    std::vector<LandscapeRow> rows;      // raw intervals, one per mechanism
    std::vector<LandscapeRow> coverage;  // merged union
    std::vector<LandscapeRow> gaps;      // holes between inf coverage and sup

    std::string to_json() const;
    std::string to_text() const;
};

// Admissible-p landscape at mu = 1 (m = sqrt(n^2-1)/2) across the energy,
// fractional-data and higher-regularity existence results.
Landscape exponent_landscape(int n);

}  // namespace dsw::estimates

#endif
