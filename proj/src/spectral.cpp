#include "dsw/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace dsw::spectral {

namespace {

// Plan cache; FFTW planning is not thread-safe, execution on distinct buffers is.
class FftEngine {
  public:
    static FftEngine& instance() {
        static FftEngine e;
        return e;
    }

    void transform(const GridSpec& g, std::vector<cplx>& data, int sign) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mu_);
            Key key{g.dim, g.points_per_axis, sign};
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                int n[3] = {g.points_per_axis, g.points_per_axis, g.points_per_axis};
                auto* buf = reinterpret_cast<fftw_complex*>(data.data());
                plan = fftw_plan_dft(g.dim, n, buf, buf, sign,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(plan, buf, buf);
    }

  private:
    struct Key {
        int dim, n, sign;
        bool operator<(const Key& o) const {
            return std::tie(dim, n, sign) < std::tie(o.dim, o.n, o.sign);
        }
    };
    std::mutex mu_;
    std::map<Key, fftw_plan> plans_;
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void GridSpec::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("GridSpec: dim must be 1, 2 or 3");
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
        throw std::invalid_argument("GridSpec: points_per_axis must be a power of two >= 8");
    if (!(half_length > 0.0)) throw std::invalid_argument("GridSpec: half_length must be > 0");
}

long GridSpec::total_points() const {
    long t = 1;
    for (int d = 0; d < dim; ++d) t *= points_per_axis;
    return t;
}

double GridSpec::volume() const { return std::pow(2.0 * half_length, dim); }

double GridSpec::freq_unit() const { return M_PI / half_length; }

int GridSpec::axis_index(long flat, int axis) const {
    const int n = points_per_axis;
    long rem = flat;
    int idx = 0;
    for (int d = dim - 1; d >= 0; --d) {
        const int j = static_cast<int>(rem % n);
        rem /= n;
        if (d == axis) idx = j;
    }
    return idx < n / 2 ? idx : idx - n;
}

long GridSpec::ksq_int(long flat) const {
    const int n = points_per_axis;
    long rem = flat;
    long ksq = 0;
    for (int d = dim - 1; d >= 0; --d) {
        int j = static_cast<int>(rem % n);
        rem /= n;
        const long k = (j < n / 2) ? j : j - n;
        ksq += k * k;
    }
    return ksq;
}

double GridSpec::xi_mag_sq(long flat) const {
    const double fu = freq_unit();
    return static_cast<double>(ksq_int(flat)) * fu * fu;
}

SpectralField::SpectralField(const GridSpec& g) : grid_(g) {
    g.validate();
    coeffs_.assign(g.total_points(), cplx(0.0));
}

SpectralField SpectralField::from_spatial(const GridSpec& g, const std::vector<cplx>& samples) {
    SpectralField f(g);
    if (static_cast<long>(samples.size()) != g.total_points())
        throw std::invalid_argument("from_spatial: sample count does not match grid");
    f.coeffs_ = samples;
    FftEngine::instance().transform(g, f.coeffs_, FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(g.total_points());
    for (auto& c : f.coeffs_) c *= inv;
    return f;
}

SpectralField SpectralField::from_spatial_fn(const GridSpec& g,
                                             const std::function<double(const double*)>& fn) {
    g.validate();
    const int n = g.points_per_axis;
    const double h = 2.0 * g.half_length / n;
    std::vector<cplx> samples(g.total_points());
    double x[3] = {0, 0, 0};
    for (long flat = 0; flat < g.total_points(); ++flat) {
        long rem = flat;
        for (int d = g.dim - 1; d >= 0; --d) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            x[d] = -g.half_length + j * h;
        }
        samples[flat] = fn(x);
    }
    return from_spatial(g, samples);
}

std::vector<cplx> SpectralField::to_spatial() const {
    std::vector<cplx> out = coeffs_;
    FftEngine::instance().transform(grid_, out, FFTW_BACKWARD);
    return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("field grids do not match");
    for (long i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("field grids do not match");
    for (long i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
}

double SpectralField::hermitian_asymmetry() const {
    const int n = grid_.points_per_axis;
    double worst = 0.0;
    for (long flat = 0; flat < size(); ++flat) {
        long rem = flat, conj_flat = 0, stride = 1;
        for (int d = grid_.dim - 1; d >= 0; --d) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            const int jc = (n - j) % n;
            conj_flat += stride * jc;
            stride *= n;
        }
        worst = std::max(worst, std::abs(coeffs_[flat] - std::conj(coeffs_[conj_flat])));
    }
    return worst;
}

double SpectralField::imag_fraction_spatial() const {
    auto sp = to_spatial();
    double im = 0.0, tot = 0.0;
    for (const auto& v : sp) {
        im += v.imag() * v.imag();
        tot += std::norm(v);
    }
    return tot > 0.0 ? std::sqrt(im / tot) : 0.0;
}

double sobolev_norm(const SpectralField& f, double gamma, bool homogeneous) {
    const auto& g = f.grid();
    double acc = 0.0;
    for (long i = 0; i < f.size(); ++i) {
        const double xisq = g.xi_mag_sq(i);
        double w2g;
        if (homogeneous) {
            if (xisq == 0.0) continue;
            w2g = std::pow(xisq, gamma);
        } else {
            w2g = std::pow(1.0 + xisq, gamma);
        }
        acc += w2g * std::norm(f[i]);
    }
    return std::sqrt(acc * g.volume());
}

SpectralField fractional_derivative(const SpectralField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("fractional_derivative: s must be >= 0");
    SpectralField out = f;
    const auto& g = f.grid();
    for (long i = 0; i < f.size(); ++i) {
        const double xisq = g.xi_mag_sq(i);
        out[i] = (xisq == 0.0) ? cplx(0.0) : out[i] * std::pow(xisq, s / 2.0);
    }
    return out;
}

namespace {

// Zero-padded copy at `factor`x points per axis (spectral interpolation).
SpectralField pad_field(const SpectralField& f, int factor) {
    const auto& g = f.grid();
    GridSpec fine = g;
    fine.points_per_axis = g.points_per_axis * factor;
    SpectralField out(fine);
    const int n = g.points_per_axis;
    const int m = fine.points_per_axis;
    for (long flat = 0; flat < f.size(); ++flat) {
        long rem = flat, fine_flat = 0, stride = 1;
        for (int d = g.dim - 1; d >= 0; --d) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            const int k = (j < n / 2) ? j : j - n;
            const int jf = (k >= 0) ? k : m + k;
            fine_flat += stride * jf;
            stride *= m;
        }
        out[fine_flat] = f[flat];
    }
    return out;
}

SpectralField truncate_field(const SpectralField& fine_f, const GridSpec& coarse) {
    SpectralField out(coarse);
    const int n = coarse.points_per_axis;
    const int m = fine_f.grid().points_per_axis;
    for (long flat = 0; flat < out.size(); ++flat) {
        long rem = flat, fine_flat = 0, stride = 1;
        for (int d = coarse.dim - 1; d >= 0; --d) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            const int k = (j < n / 2) ? j : j - n;
            const int jf = (k >= 0) ? k : m + k;
            fine_flat += stride * jf;
            stride *= m;
        }
        out[flat] = fine_f[fine_flat];
    }
    return out;
}

}  // namespace

double lp_norm(const SpectralField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (p == 2.0) return sobolev_norm(f, 0.0, false);
    SpectralField fine = pad_field(f, 2);
    auto sp = fine.to_spatial();
    const auto& g = fine.grid();
    const double cell = g.volume() / g.total_points();
    double acc = 0.0;
    for (const auto& v : sp) acc += std::pow(std::abs(v), p);
    return std::pow(acc * cell, 1.0 / p);
}

double linf_norm(const SpectralField& f) {
    SpectralField fine = pad_field(f, 4);
    auto sp = fine.to_spatial();
    double m = 0.0;
    for (const auto& v : sp) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Kernel evaluations per step are cached on the integer |k|^2 (frequencies on
// the grid share magnitudes).
struct KernelCache {
    const ModelParams& params;
    const kernels::EvalStrategy& st;
    const GridSpec& grid;
    double t, s;
    std::unordered_map<long, kernels::KernelEval> map;

    const kernels::KernelEval& get(long flat) {
        const long ksq = grid.ksq_int(flat);
        auto it = map.find(ksq);
        if (it != map.end()) return it->second;
        const double xi = std::sqrt(static_cast<double>(ksq)) * grid.freq_unit();
        auto k = kernels::khat(params, t, s, xi, st).k;
        return map.emplace(ksq, k).first->second;
    }
};

}  // namespace

std::pair<SpectralField, SpectralField> apply_kernel(const SpectralField& u0,
                                                     const SpectralField& u1, double t, double s,
                                                     const ModelParams& params,
                                                     const kernels::EvalStrategy& st) {
    if (!(u0.grid() == u1.grid())) throw std::invalid_argument("apply_kernel: grid mismatch");
    if (!(t >= s)) throw std::domain_error("apply_kernel: t >= s required");
    SpectralField u(u0.grid()), ut(u0.grid());
    KernelCache cache{params, st, u0.grid(), t, s, {}};
    for (long i = 0; i < u0.size(); ++i) {
        const auto& k = cache.get(i);
        u[i] = k.k0 * u0[i] + k.k1 * u1[i];
        ut[i] = k.dt_k0 * u0[i] + k.dt_k1 * u1[i];
    }
    return {u, ut};
}

SpectralField nonlinear_power(const SpectralField& u, double p) {
    SpectralField fine = pad_field(u, 2);
    auto sp = fine.to_spatial();
    for (auto& v : sp) v = std::pow(std::abs(v), p);
    SpectralField fine_out = SpectralField::from_spatial(fine.grid(), sp);
    return truncate_field(fine_out, u.grid());
}

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end)
        throw std::invalid_argument("SolverConfig: need 0 < dt <= t_end");
    if (picard_max_iters < 1) throw std::invalid_argument("SolverConfig: picard_max_iters >= 1");
    if (!(picard_tol > 0.0 && picard_tol < 1.0))
        throw std::invalid_argument("SolverConfig: picard_tol in (0,1)");
    if (epsilon < 0.0) throw std::invalid_argument("SolverConfig: epsilon >= 0");
}

namespace {

void check_finite(const SpectralField& f, double t) {
    for (long i = 0; i < f.size(); ++i) {
        const cplx& c = f[i];
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw BlowUpError(t, "duhamel_solve: non-finite field at t = " + std::to_string(t));
    }
}

// March with a caller-supplied source spectrum lookup; empty lookup = linear.
Trajectory march(const SpectralField& u0, const SpectralField& u1, const ModelParams& params,
                 const SolverConfig& cfg, int keep_every, const kernels::EvalStrategy& st,
                 const std::function<SpectralField(int)>* frozen_source, bool source_enabled,
                 double p_exponent) {
    cfg.validate();
    const auto& grid = u0.grid();
    const int nsteps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    if (std::abs(nsteps * cfg.dt - cfg.t_end) > 1e-9 * cfg.t_end + 1e-12)
        throw std::invalid_argument("duhamel_solve: t_end must be a multiple of dt");

    Trajectory traj;
    SpectralField u = u0, ut = u1;
    auto keep = [&](int step, const SpectralField& a, const SpectralField& b) {
        if (step % keep_every == 0 || step == nsteps) {
            traj.times.push_back(step * cfg.dt);
            traj.u.push_back(a);
            traj.ut.push_back(b);
        }
    };
    keep(0, u, ut);

    SpectralField src_n(grid);
    if (source_enabled && !frozen_source) src_n = nonlinear_power(u, p_exponent);

    for (int n = 0; n < nsteps; ++n) {
        const double tn = n * cfg.dt;
        const double tn1 = tn + cfg.dt;
        KernelCache cache{params, st, grid, tn1, tn, {}};
        const double ew_n = params.source_weight(tn);
        const double ew_n1 = params.source_weight(tn1);

        if (!source_enabled) {
            SpectralField nu(grid), nut(grid);
            for (long i = 0; i < u.size(); ++i) {
                const auto& k = cache.get(i);
                nu[i] = k.k0 * u[i] + k.k1 * ut[i];
                nut[i] = k.dt_k0 * u[i] + k.dt_k1 * ut[i];
            }
            u = std::move(nu);
            ut = std::move(nut);
        } else if (frozen_source) {
            const SpectralField sn = (*frozen_source)(n);
            const SpectralField sn1 = (*frozen_source)(n + 1);
            SpectralField nu(grid), nut(grid);
            const double h = 0.5 * cfg.dt;
            for (long i = 0; i < u.size(); ++i) {
                const auto& k = cache.get(i);
                nu[i] = k.k0 * u[i] + k.k1 * ut[i] + h * ew_n * k.k1 * sn[i];
                nut[i] = k.dt_k0 * u[i] + k.dt_k1 * ut[i] + h * (ew_n * k.dt_k1 * sn[i] + ew_n1 * sn1[i]);
            }
            u = std::move(nu);
            ut = std::move(nut);
        } else {
            // predictor: rectangle rule source over the step
            SpectralField pu(grid), put(grid);
            for (long i = 0; i < u.size(); ++i) {
                const auto& k = cache.get(i);
                pu[i] = k.k0 * u[i] + k.k1 * ut[i] + cfg.dt * ew_n * k.k1 * src_n[i];
                put[i] = k.dt_k0 * u[i] + k.dt_k1 * ut[i] + cfg.dt * ew_n * k.dt_k1 * src_n[i];
            }
            const SpectralField src_n1 = nonlinear_power(pu, p_exponent);
            // corrector: trapezoid; K1(t,t) column contributes only to u_t
            SpectralField nu(grid), nut(grid);
            const double h = 0.5 * cfg.dt;
            for (long i = 0; i < u.size(); ++i) {
                const auto& k = cache.get(i);
                nu[i] = k.k0 * u[i] + k.k1 * ut[i] + h * ew_n * k.k1 * src_n[i];
                nut[i] = k.dt_k0 * u[i] + k.dt_k1 * ut[i] +
                         h * (ew_n * k.dt_k1 * src_n[i] + ew_n1 * src_n1[i]);
            }
            u = std::move(nu);
            ut = std::move(nut);
            src_n = nonlinear_power(u, p_exponent);
        }
        check_finite(u, tn1);
        keep(n + 1, u, ut);
    }
    return traj;
}

}  // namespace

Trajectory duhamel_solve(const SpectralField& u0, const SpectralField& u1,
                         const ModelParams& params, const SolverConfig& cfg, int keep_every,
                         bool source_enabled, const kernels::EvalStrategy& st) {
    return march(u0, u1, params, cfg, keep_every, st, nullptr, source_enabled, params.p);
}

SolutionSpaceNorm solution_space_norm(const ModelParams& params) {
    switch (params.regime) {
        case Regime::DissipationDominant:
            if (params.mu >= 1.0) {
                return {"sup_tau { e^tau ||u_t||_L2 + ||u||_H1 }",
                        [](double tau, const SpectralField& u, const SpectralField& ut) {
                            return std::exp(tau) * sobolev_norm(ut, 0.0, false) +
                                   sobolev_norm(u, 1.0, false);
                        }};
            }
            return {"sup_tau { e^{(mu-1)tau/2} ||u||_H1 + e^{mu tau} ||u_t||_L2 }",
                    [mu = params.mu](double tau, const SpectralField& u, const SpectralField& ut) {
                        return std::exp((mu - 1.0) * tau / 2.0) * sobolev_norm(u, 1.0, false) +
                               std::exp(mu * tau) * sobolev_norm(ut, 0.0, false);
                    }};
        case Regime::MassDominant:
            return {"sup_tau { e^{-tau/2}(||u||_L2 + ||grad u||_L2) + ||u_t||_L2 }",
                    [](double tau, const SpectralField& u, const SpectralField& ut) {
                        return std::exp(-tau / 2.0) *
                                   (sobolev_norm(u, 0.0, false) + sobolev_norm(u, 1.0, true)) +
                               sobolev_norm(ut, 0.0, false);
                    }};
        case Regime::Balanced:
            return {"sup_tau { (1+tau)^{-1} e^{-tau/2}(||u||_L2 + ||grad u||_L2) + ||u_t||_L2 }",
                    [](double tau, const SpectralField& u, const SpectralField& ut) {
                        return std::exp(-tau / 2.0) / (1.0 + tau) *
                                   (sobolev_norm(u, 0.0, false) + sobolev_norm(u, 1.0, true)) +
                               sobolev_norm(ut, 0.0, false);
                    }};
    }
    throw std::logic_error("solution_space_norm: unknown regime");
}

PicardResult picard_iterate(const SpectralField& u0, const SpectralField& u1,
                            const ModelParams& params, const SolverConfig& cfg,
                            const kernels::EvalStrategy& st) {
    cfg.validate();
    const auto xnorm = solution_space_norm(params);

    auto xdist = [&](const Trajectory& a, const Trajectory& b) {
        double m = 0.0;
        SpectralField du(a.u.front().grid()), dut(a.u.front().grid());
        for (size_t j = 0; j < a.times.size(); ++j) {
            du = a.u[j];
            du -= b.u[j];
            dut = a.ut[j];
            dut -= b.ut[j];
            m = std::max(m, xnorm.eval(a.times[j], du, dut));
        }
        return m;
    };

    Trajectory lin = duhamel_solve(u0, u1, params, cfg, 1, false, st);
    Trajectory prev = lin;
    double sol_scale = 0.0;
    for (size_t j = 0; j < lin.times.size(); ++j)
        sol_scale = std::max(sol_scale, xnorm.eval(lin.times[j], lin.u[j], lin.ut[j]));

    PicardResult res;
    res.noise_floor = 1e-13 * std::max(sol_scale, 1e-300);

    int bad_streak = 0;
    for (int it = 0; it < cfg.picard_max_iters; ++it) {
        std::vector<SpectralField> sources;
        sources.reserve(prev.times.size());
        for (const auto& uf : prev.u) sources.push_back(nonlinear_power(uf, params.p));
        std::function<SpectralField(int)> lookup = [&](int n) { return sources[n]; };
        Trajectory next = march(u0, u1, params, cfg, 1, st, &lookup, true, params.p);

        const double d = xdist(next, prev);
        res.distances.push_back(d);
        if (res.distances.size() >= 2) {
            const double dp = res.distances[res.distances.size() - 2];
            res.ratios.push_back(dp > 0.0 ? d / dp : 0.0);
        }
        ++res.iterations;
        prev = std::move(next);

        if (d <= std::max(cfg.picard_tol * sol_scale, res.noise_floor)) {
            res.converged = true;
            break;
        }
        if (!res.ratios.empty() && res.ratios.back() > 1.0) {
            if (++bad_streak >= 3)
                throw std::runtime_error("picard_iterate: no contraction (ratio > 1 three times)");
        } else {
            bad_streak = 0;
        }
    }
    res.solution = std::move(prev);
    return res;
}

void write_snapshot(const std::string& path, const SpectralField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    const std::uint32_t dim = f.grid().dim;
    const std::uint32_t pts = f.grid().points_per_axis;
    const double L = f.grid().half_length;
    os.write(reinterpret_cast<const char*>(&dim), 4);
    os.write(reinterpret_cast<const char*>(&pts), 4);
    os.write(reinterpret_cast<const char*>(&L), 8);
    for (long i = 0; i < f.size(); ++i) {
        const double re = f[i].real(), im = f[i].imag();
        os.write(reinterpret_cast<const char*>(&re), 8);
        os.write(reinterpret_cast<const char*>(&im), 8);
    }
}

SpectralField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
    std::uint32_t dim = 0, pts = 0;
    double L = 0.0;
    is.read(reinterpret_cast<char*>(&dim), 4);
    is.read(reinterpret_cast<char*>(&pts), 4);
    is.read(reinterpret_cast<char*>(&L), 8);
    GridSpec g{static_cast<int>(dim), static_cast<int>(pts), L};
    SpectralField f(g);
    for (long i = 0; i < f.size(); ++i) {
        double re = 0.0, im = 0.0;
        is.read(reinterpret_cast<char*>(&re), 8);
        is.read(reinterpret_cast<char*>(&im), 8);
        f[i] = cplx(re, im);
    }
    if (!is) throw std::runtime_error("read_snapshot: truncated file " + path);
    return f;
}

SpectralField gaussian_bump(const GridSpec& g, double amplitude, double width) {
    return SpectralField::from_spatial_fn(g, [&](const double* x) {
        double r2 = 0.0;
        for (int d = 0; d < g.dim; ++d) r2 += x[d] * x[d];
        return amplitude * std::exp(-r2 / (2.0 * width * width));
    });
}

SpectralField band_noise(const GridSpec& g, double xi_lo, double xi_hi, double amplitude,
                         std::uint64_t seed, double alpha) {
    g.validate();
    SpectralField f(g);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = g.points_per_axis;
    // fill independent coefficients, then Hermitian-symmetrize for a real field
    for (long flat = 0; flat < f.size(); ++flat) {
        const double xi = std::sqrt(g.xi_mag_sq(flat));
        const double re = gauss(rng), im = gauss(rng);  // always draw: layout-stable seeds
        if (xi < xi_lo || xi > xi_hi || xi == 0.0) continue;
        const double env = std::pow(xi, -alpha);
        f[flat] = env * cplx(re, im);
    }
    // c(-k) = conj(c(k)); average the two draws so symmetry is exact
    std::vector<cplx> sym(f.size());
    for (long flat = 0; flat < f.size(); ++flat) {
        long rem = flat, conj_flat = 0, stride = 1;
        for (int d = g.dim - 1; d >= 0; --d) {
            const int j = static_cast<int>(rem % n);
            rem /= n;
            conj_flat += stride * ((n - j) % n);
            stride *= n;
        }
        sym[flat] = 0.5 * (f[flat] + std::conj(f[conj_flat]));
    }
    f.coeffs() = std::move(sym);
    const double nrm = sobolev_norm(f, 0.0, false);
    if (nrm > 0.0) f *= amplitude / nrm;
    return f;
}

}  // namespace dsw::spectral
