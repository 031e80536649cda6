#ifndef DSW_MODEL_HPP
#define DSW_MODEL_HPP

namespace dsw {

enum class Regime { DissipationDominant, Balanced, MassDominant };

// Parameters of the shifted model. The shift exponent r and the regime
// parameter mu are derived from (n, m):
//   m < n/2: mu = sqrt(n^2 - 4 m^2), r = (-n + mu)/2   (dominant dissipation)
//   m = n/2: r = -n/2                                   (balanced)
//   m > n/2: mu = sqrt(m^2 - n^2/4), r = -n/2           (dominant mass)
struct ModelParams {
    int n = 1;
    double m = 0.0;
    double p = 2.0;
    Regime regime = Regime::DissipationDominant;
    double mu = 0.0;
    double r = 0.0;
    bool zero_mass = false;  // m = 0 accepted but outside the intended range

    // e^{(p-1) r t}, the weight on the |u|^p source slice at time t.
    double source_weight(double t) const;
};

const char* regime_name(Regime r);

ModelParams derive_params(int n, double m, double p);

}  // namespace dsw

#endif
