// Time evolution of the phonon distribution under the birth-death rate
// equation and extraction of cooling curves from trajectories.

#pragma once

#include <span>
#include <vector>

#include "coolcav/types.hpp"

namespace coolcav {

// Truncated phonon distribution p_0..p_M at a given time.
struct PopulationState {
    std::vector<double> populations;
    double time = 0.0;

    int truncation() const { return static_cast<int>(populations.size()) - 1; }
    double total() const;
    double mean() const;
    double top_level() const { return populations.back(); }
    // Truncation adequacy: top level below 1e-6 of the total mass.
    bool truncation_ok() const;

    // All mass in level m0.
    static PopulationState single_level(int m0, int truncation);
    // Thermal (geometric) distribution with the given mean, renormalized
    // on the truncated basis.
    static PopulationState thermal(double mean_m, int truncation);
};

enum class StopReason { completed, truncation_overflow, max_steps };

struct TrajectoryPoint {
    double t = 0.0;
    double mean_m = 0.0;
    double p0 = 0.0;
    double top = 0.0;  // population of the truncation level
};

struct Trajectory {
    std::vector<TrajectoryPoint> samples;
    StopReason stop = StopReason::completed;
    PopulationState final_state;
};

// One fixed-step 4th-order step of dp_m/dt =
//   eta^2 (m+1) A_- p_{m+1} - eta^2 [(m+1) A_+ + m A_-] p_m
//   + eta^2 m A_+ p_{m-1},
// with the heating flux out of the top level reflected so probability is
// conserved exactly. Requires dt > 0 and the stiffness guard
// dt * eta^2 * max(A_+, A_-) * M < 0.1; throws TruncationOverflow when the
// top level exceeds its adequacy threshold after the step.
PopulationState step_rate_equation(const PopulationState& s,
                                   const SystemParams& p, RatePair rates,
                                   double dt);

// Largest dt satisfying the stiffness guard (with a small safety margin).
double stable_dt(const SystemParams& p, RatePair rates, int truncation);

// Evolve s0 and record (t, <m>_t) at the requested times. t_grid must be
// increasing and start at >= s0.time. A truncation overflow stops the run
// early and is reported in the result instead of thrown, so heating runs
// return their partial trajectory.
Trajectory mean_phonon_trajectory(const PopulationState& s0,
                                  const SystemParams& p, RatePair rates,
                                  std::span<const double> t_grid,
                                  long max_steps = 200000000L);

// Log-linear regression of <m>_t - mean_inf on the window
// t in [0.5, 3] / gamma_est. Returns the fitted decay rate.
double fitted_cooling_rate(const Trajectory& traj, double gamma_est,
                           double mean_inf);

// Trajectory CSV with columns t,mean_m,p0,pM_tail_mass.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace coolcav
