#include "coolcav/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coolcav/format.hpp"

namespace coolcav {

namespace {

constexpr double kTopLevelThreshold = 1e-6;  // truncation adequacy
constexpr double kGuardProduct = 0.1;        // dt * eta^2 * maxA * M bound

// Tridiagonal birth-death generator with the heating flux out of the top
// level reflected; columns sum to zero by construction. Coefficients are
// stored against a ghost-padded layout (one zero cell at each end) so the
// hot loops have no boundary branches.
class Generator {
  public:
    Generator(const SystemParams& p, RatePair r, int truncation)
        : n_(truncation + 1), up_(n_), diag_(n_), down_(n_) {
        const double e2 = p.eta * p.eta;
        const double ap = e2 * r.a_plus;
        const double am = e2 * r.a_minus;
        for (int m = 0; m < n_; ++m) {
            up_[m] = ap * m;          // inflow from m-1
            down_[m] = am * (m + 1);  // inflow from m+1
            diag_[m] = -(ap * (m + 1) + am * m);
        }
        diag_[n_ - 1] = -am * (n_ - 1);  // reflected: no flux past the top
        down_[n_ - 1] = 0.0;             // multiplies the ghost cell only
    }

    int size() const { return n_; }

    // src/dst point at the first interior cell of padded buffers whose
    // ghost neighbours hold zero.
    void apply(const double* __restrict src, double* __restrict dst) const {
        const double* __restrict up = up_.data();
        const double* __restrict di = diag_.data();
        const double* __restrict dn = down_.data();
        const int n = n_;
        for (int m = 0; m < n; ++m)
            dst[m] = up[m] * src[m - 1] + di[m] * src[m] + dn[m] * src[m + 1];
    }

  private:
    int n_;
    std::vector<double> up_, diag_, down_;
};

// Classic fixed-step RK4 advancing `state` in place by n_steps of size dt.
// Checks the top-level threshold every `check_every` steps; returns false
// when it trips (state holds the offending step's result).
bool rk4_run(std::vector<double>& state, const Generator& gen, double dt,
             long n_steps, long check_every) {
    const int n = gen.size();
    std::vector<double> pv(n + 2, 0.0), k1v(n + 2, 0.0), k2v(n + 2, 0.0),
        k3v(n + 2, 0.0), k4v(n + 2, 0.0), tmpv(n + 2, 0.0);
    std::copy(state.begin(), state.end(), pv.begin() + 1);
    double* __restrict p = pv.data() + 1;
    double* __restrict k1 = k1v.data() + 1;
    double* __restrict k2 = k2v.data() + 1;
    double* __restrict k3 = k3v.data() + 1;
    double* __restrict k4 = k4v.data() + 1;
    double* __restrict tmp = tmpv.data() + 1;
    const double half_dt = 0.5 * dt;
    const double w = dt / 6.0;
    bool ok = true;
    long until_check = check_every;
    for (long s = 0; s < n_steps; ++s) {
        gen.apply(p, k1);
        for (int i = 0; i < n; ++i) tmp[i] = p[i] + half_dt * k1[i];
        gen.apply(tmp, k2);
        for (int i = 0; i < n; ++i) tmp[i] = p[i] + half_dt * k2[i];
        gen.apply(tmp, k3);
        for (int i = 0; i < n; ++i) tmp[i] = p[i] + dt * k3[i];
        gen.apply(tmp, k4);
        for (int i = 0; i < n; ++i)
            p[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (--until_check == 0) {
            until_check = check_every;
            if (p[n - 1] > kTopLevelThreshold) {
                ok = false;
                break;
            }
        }
    }
    std::copy(pv.begin() + 1, pv.end() - 1, state.begin());
    return ok && !(state.back() > kTopLevelThreshold);
}

}  // namespace

double PopulationState::total() const {
    double s = 0.0;
    for (double v : populations) s += v;
    return s;
}

double PopulationState::mean() const {
    double s = 0.0;
    for (size_t m = 0; m < populations.size(); ++m)
        s += static_cast<double>(m) * populations[m];
    return s;
}

bool PopulationState::truncation_ok() const {
    return top_level() < kTopLevelThreshold * total();
}

PopulationState PopulationState::single_level(int m0, int truncation) {
    if (truncation < 1 || m0 < 0 || m0 > truncation)
        throw std::invalid_argument("bad level/truncation");
    PopulationState s;
    s.populations.assign(truncation + 1, 0.0);
    s.populations[m0] = 1.0;
    return s;
}

PopulationState PopulationState::thermal(double mean_m, int truncation) {
    if (truncation < 1 || mean_m < 0.0)
        throw std::invalid_argument("bad mean/truncation");
    PopulationState s;
    s.populations.assign(truncation + 1, 0.0);
    const double r = mean_m / (mean_m + 1.0);
    double w = 1.0, norm = 0.0;
    for (int m = 0; m <= truncation; ++m, w *= r) {
        s.populations[m] = w;
        norm += w;
    }
    for (double& v : s.populations) v /= norm;
    return s;
}

double stable_dt(const SystemParams& p, RatePair rates, int truncation) {
    const double scale = p.eta * p.eta *
                         std::max(rates.a_plus, rates.a_minus) *
                         static_cast<double>(truncation);
    if (scale <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.999 * kGuardProduct / scale;
}

PopulationState step_rate_equation(const PopulationState& s,
                                   const SystemParams& p, RatePair rates,
                                   double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    const int m_top = s.truncation();
    if (m_top < 1) throw std::invalid_argument("truncation must be >= 1");
    const double guard = dt * p.eta * p.eta *
                         std::max(rates.a_plus, rates.a_minus) * m_top;
    if (!(guard < kGuardProduct))
        throw std::invalid_argument("stiffness guard violated: dt too large");

    PopulationState out = s;
    Generator gen(p, rates, m_top);
    rk4_run(out.populations, gen, dt, 1, 1);
    out.time = s.time + dt;
    if (out.top_level() > kTopLevelThreshold * out.total())
        throw TruncationOverflow("top phonon level exceeded threshold");
    return out;
}

Trajectory mean_phonon_trajectory(const PopulationState& s0,
                                  const SystemParams& p, RatePair rates,
                                  std::span<const double> t_grid,
                                  long max_steps) {
    Trajectory traj;
    PopulationState s = s0;
    const Generator gen(p, rates, s.truncation());
    const double dt_max = stable_dt(p, rates, s.truncation());
    long steps_used = 0;

    const auto record = [&]() {
        traj.samples.push_back({s.time, s.mean(), s.populations.front(),
                                s.top_level()});
    };

    for (double t_target : t_grid) {
        if (t_target < s.time)
            throw std::invalid_argument("t_grid must be increasing");
        const double seg = t_target - s.time;
        if (seg > 0.0 && std::isfinite(dt_max)) {
            const long n_needed = static_cast<long>(std::ceil(seg / dt_max));
            const long n = std::min(n_needed, max_steps - steps_used);
            if (n <= 0) {
                traj.stop = StopReason::max_steps;
                break;
            }
            const double dt = seg / static_cast<double>(n_needed);
            const bool ok = rk4_run(s.populations, gen, dt, n,
                                    std::max(1L, n / 64));
            steps_used += n;
            s.time += dt * static_cast<double>(n);
            if (!ok) {
                record();
                traj.stop = StopReason::truncation_overflow;
                break;
            }
            if (n < n_needed) {
                record();
                traj.stop = StopReason::max_steps;
                break;
            }
            s.time = t_target;  // absorb rounding of the substep sum
        } else {
            s.time = t_target;
        }
        record();
    }
    traj.final_state = std::move(s);
    return traj;
}

double fitted_cooling_rate(const Trajectory& traj, double gamma_est,
                           double mean_inf) {
    if (!(gamma_est > 0.0))
        throw std::invalid_argument("fit window requires gamma_est > 0");
    const double t0 = traj.samples.empty() ? 0.0 : traj.samples.front().t;
    const double lo = t0 + 0.5 / gamma_est;
    const double hi = t0 + 3.0 / gamma_est;

    // least squares on ln(mean - mean_inf) vs t
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (const auto& pt : traj.samples) {
        if (pt.t < lo || pt.t > hi) continue;
        const double y = pt.mean_m - mean_inf;
        if (!(y > 0.0)) continue;
        const double ly = std::log(y);
        sx += pt.t;
        sy += ly;
        sxx += pt.t * pt.t;
        sxy += pt.t * ly;
        ++n;
    }
    if (n < 2)
        throw NonConvergence("not enough trajectory samples in fit window");
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw NonConvergence("degenerate fit window");
    const double slope = (n * sxy - sx * sy) / denom;
    return -slope;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,mean_m,p0,pM_tail_mass\n";
    for (const auto& pt : traj.samples) {
        out += format_g17(pt.t);
        out += ',';
        out += format_g17(pt.mean_m);
        out += ',';
        out += format_g17(pt.p0);
        out += ',';
        out += format_g17(pt.top);
        out += '\n';
    }
    return out;
}

}  // namespace coolcav
