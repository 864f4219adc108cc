// Detuning-plane evaluation of Gamma and <m>: grid sweeps, region
// classification, and profiles along the analytic resonance/interference
// curves. Output is deterministic regardless of worker count.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coolcav/types.hpp"

namespace coolcav {

struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int n = 2;
    double value(int i) const {
        return min + (max - min) * static_cast<double>(i) /
                         static_cast<double>(n - 1);
    }
};

struct SweepGrid {
    AxisSpec delta;      // pump-atom detuning axis (outer, row-major)
    AxisSpec delta_cav;  // pump-cavity detuning axis (inner)
    SystemParams params;
    void validate() const;
    long cells() const { return static_cast<long>(delta.n) * delta_cav.n; }
};

struct SweepCell {
    double delta = 0.0;
    double delta_cav = 0.0;
    double gamma_cool = 0.0;
    std::optional<double> mean_m;  // present iff steady
    bool steady = false;
    bool weak_drive_ok = true;
    bool lamb_dicke_ok = true;
    bool error = false;  // singular point; never aborts the sweep
};

// One cell per grid point in row-major order (delta outer, Delta inner).
// n_threads = 0 picks the hardware concurrency.
std::vector<SweepCell> run_sweep(const SweepGrid& grid, int n_threads = 0);

// CSV with pinned schema
//   delta,Delta,Gamma,mean_m,steady,weak_drive_ok,lamb_dicke_ok
// 17 significant digits, mean_m (and Gamma for error cells) left empty.
std::string sweep_csv(const std::vector<SweepCell>& cells);

// Companion metadata JSON (params, grid, version, wall-clock time).
std::string sweep_metadata_json(const SweepGrid& grid, double wall_ms,
                                long error_cells);

enum class CurveKind { resonance, interference };

struct CurvePoint {
    double delta_cav = 0.0;
    double delta = 0.0;
    double gamma_cool = 0.0;
    std::optional<double> mean_m;
    bool steady = false;
};

struct CurveProfile {
    std::vector<CurvePoint> points;
    int n_skipped = 0;  // samples inside the pole exclusion window
};

// <m> profile along the chosen analytic curve; samples with
// |Delta -+ nu| <= pole_window are flagged and skipped.
CurveProfile curve_profile(const SystemParams& params, CurveKind kind,
                           std::span<const double> delta_cav_samples,
                           double pole_window = 1e-3);

std::string curve_profile_csv(const CurveProfile& profile);

struct RegionBox {
    int delta_lo = 0, delta_hi = 0;        // inclusive index bounds
    int delta_cav_lo = 0, delta_cav_hi = 0;
    long cells = 0;
};

struct RegionSummary {
    long cooling_cells = 0;
    long heating_cells = 0;
    long error_cells = 0;
    std::vector<RegionBox> cooling_regions;  // 4-connected components
    std::vector<RegionBox> heating_regions;
    // Extrema with their coordinates; valid flags false on empty sets.
    bool has_min_mean_m = false;
    double min_mean_m = 0.0, min_mean_m_delta = 0.0, min_mean_m_delta_cav = 0.0;
    bool has_max_gamma = false;
    double max_gamma = 0.0, max_gamma_delta = 0.0, max_gamma_delta_cav = 0.0;
};

RegionSummary classify_regions(const SweepGrid& grid,
                               const std::vector<SweepCell>& cells);

}  // namespace coolcav
