#ifndef DSW_SPECTRAL_HPP
#define DSW_SPECTRAL_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsw/kernels.hpp"
#include "dsw/model.hpp"

namespace dsw::spectral {

using cplx = std::complex<double>;

// Uniform periodic grid on [-L, L)^dim. Coefficients are stored in FFT index
// order per axis (k = 0..N/2-1, -N/2..-1) with frequency xi_k = pi k / L.
struct GridSpec {
    int dim = 1;
    int points_per_axis = 8;
    double half_length = 16.0;

    void validate() const;
    long total_points() const;
    double volume() const;        // (2L)^dim
    double freq_unit() const;     // pi / L
    int axis_index(long flat, int axis) const;   // signed k on the given axis
    double xi_mag_sq(long flat) const;
    long ksq_int(long flat) const;  // integer sum of squared indices

    bool operator==(const GridSpec&) const = default;
};

class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const GridSpec& g);

    static SpectralField zeros(const GridSpec& g) { return SpectralField(g); }
    static SpectralField from_spatial(const GridSpec& g, const std::vector<cplx>& samples);
    static SpectralField from_spatial_fn(const GridSpec& g,
                                         const std::function<double(const double*)>& f);

    std::vector<cplx> to_spatial() const;

    const GridSpec& grid() const { return grid_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    std::vector<cplx>& coeffs() { return coeffs_; }
    cplx& operator[](long i) { return coeffs_[i]; }
    const cplx& operator[](long i) const { return coeffs_[i]; }
    long size() const { return static_cast<long>(coeffs_.size()); }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);

    double hermitian_asymmetry() const;  // max |c(-k) - conj(c(k))|
    double imag_fraction_spatial() const;

  private:
    GridSpec grid_;
    std::vector<cplx> coeffs_;
};

// (sum_xi w(xi)^{2 gamma} |u-hat|^2 * (2L)^d)^{1/2}; w = |xi| (homogeneous,
// zero mode dropped) or sqrt(1 + |xi|^2).
double sobolev_norm(const SpectralField& f, double gamma, bool homogeneous);

// Multiplies coefficients by |xi|^s; the zero mode maps to 0.
SpectralField fractional_derivative(const SpectralField& f, double s);

// L^p norm by spatial quadrature on a zero-padded 2x grid (p != 2 is not a
// multiplier norm). L^inf uses a 4x oversampled grid and is a lower bound on
// the true sup.
double lp_norm(const SpectralField& f, double p);
double linf_norm(const SpectralField& f);

// Linear evolution: applies the regime's multipliers mode by mode.
std::pair<SpectralField, SpectralField> apply_kernel(const SpectralField& u0,
                                                     const SpectralField& u1, double t, double s,
                                                     const ModelParams& params,
                                                     const kernels::EvalStrategy& st = {});

struct SolverConfig {
    double dt = 1.0 / 64;
    double t_end = 10.0;
    int picard_max_iters = 12;
    double picard_tol = 1e-10;
    double epsilon = 1e-3;

    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> u;
    std::vector<SpectralField> ut;
};

class BlowUpError : public std::runtime_error {
  public:
    BlowUpError(double t, const std::string& msg) : std::runtime_error(msg), time(t) {}
    double time;
};

// Marching Duhamel solver for u(t) = K0 u0 + K1 u1 + int_0^t e^{(p-1) r s}
// K1(t,s) |u(s)|^p ds: per step the state advances by the two-column
// fundamental matrix plus a trapezoid source increment with a predictor for
// the new endpoint. Every keep_every-th state (and the final one) is stored.
Trajectory duhamel_solve(const SpectralField& u0, const SpectralField& u1,
                         const ModelParams& params, const SolverConfig& cfg, int keep_every = 1,
                         bool source_enabled = true, const kernels::EvalStrategy& st = {});

// |u|^p with zero-padding dealiasing at 2x resolution.
SpectralField nonlinear_power(const SpectralField& u, double p);

// Weighted solution-space norm used by the contraction study; weights follow
// the regime's global-existence space.
struct SolutionSpaceNorm {
    std::string description;
    std::function<double(double tau, const SpectralField& u, const SpectralField& ut)> eval;
};
SolutionSpaceNorm solution_space_norm(const ModelParams& params);

struct PicardResult {
    std::vector<double> distances;  // X-norm of u^{k+1} - u^k
    std::vector<double> ratios;     // distances[k+1] / distances[k]
    double noise_floor = 0.0;       // roundoff scale of the distance measure
    int iterations = 0;
    bool converged = false;
    Trajectory solution;
};

PicardResult picard_iterate(const SpectralField& u0, const SpectralField& u1,
                            const ModelParams& params, const SolverConfig& cfg,
                            const kernels::EvalStrategy& st = {});

// Binary snapshot: uint32 dim, uint32 points_per_axis, float64 half_length,
// then interleaved (re, im) little-endian float64 coefficients in storage order.
void write_snapshot(const std::string& path, const SpectralField& f);
SpectralField read_snapshot(const std::string& path);

// Data builders.
SpectralField gaussian_bump(const GridSpec& g, double amplitude, double width);
SpectralField band_noise(const GridSpec& g, double xi_lo, double xi_hi, double amplitude,
                         std::uint64_t seed, double alpha = 0.0);

}  // namespace dsw::spectral

#endif
