#include "coolcav/sweep.hpp"

#include <algorithm>
#include <thread>

#include <json.hpp>

#include "coolcav/format.hpp"
#include "coolcav/model.hpp"
#include "coolcav/rates.hpp"
#include "coolcav/version.hpp"

namespace coolcav {

void SweepGrid::validate() const {
    params.validate();
    if (delta.n < 2 || delta_cav.n < 2)
        throw std::invalid_argument("grid needs >= 2 points per axis");
    if (!std::isfinite(delta.min) || !std::isfinite(delta.max) ||
        !std::isfinite(delta_cav.min) || !std::isfinite(delta_cav.max))
        throw std::invalid_argument("grid ranges must be finite");
}

namespace {

SweepCell evaluate_cell(const SystemParams& p, double delta, double delta_cav) {
    SweepCell cell;
    cell.delta = delta;
    cell.delta_cav = delta_cav;
    const DetuningPoint d{delta, delta_cav};
    try {
        const CoolingResult res = cooling_from_rates(
            p, to_rate_pair(rate_breakdown(p, d)));
        cell.gamma_cool = res.gamma_cool;
        cell.steady = res.steady;
        cell.mean_m = res.mean_m;
        cell.weak_drive_ok = drive_epsilon(p, d) < 0.1;
        // A heated distribution leaves the Lamb-Dicke window eventually.
        cell.lamb_dicke_ok =
            res.steady && p.eta * std::sqrt(*res.mean_m + 1.0) < 0.3;
    } catch (const Error&) {
        cell.error = true;
    }
    return cell;
}

}  // namespace

std::vector<SweepCell> run_sweep(const SweepGrid& grid, int n_threads) {
    grid.validate();
    const long total = grid.cells();
    std::vector<SweepCell> cells(total);

    int workers = n_threads > 0
                      ? n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(
        std::min<long>(workers, std::max<long>(1, total / 64)));

    const auto work = [&](long begin, long end) {
        for (long idx = begin; idx < end; ++idx) {
            const int i = static_cast<int>(idx / grid.delta_cav.n);
            const int j = static_cast<int>(idx % grid.delta_cav.n);
            cells[idx] = evaluate_cell(grid.params, grid.delta.value(i),
                                       grid.delta_cav.value(j));
        }
    };

    if (workers == 1) {
        work(0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const long chunk = (total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long begin = w * chunk;
            const long end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string out =
        "delta,Delta,Gamma,mean_m,steady,weak_drive_ok,lamb_dicke_ok\n";
    for (const SweepCell& c : cells) {
        out += format_g17(c.delta);
        out += ',';
        out += format_g17(c.delta_cav);
        out += ',';
        if (!c.error) out += format_g17(c.gamma_cool);
        out += ',';
        if (c.mean_m) out += format_g17(*c.mean_m);
        out += ',';
        out += c.steady ? '1' : '0';
        out += ',';
        out += c.weak_drive_ok ? '1' : '0';
        out += ',';
        out += c.lamb_dicke_ok ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string sweep_metadata_json(const SweepGrid& grid, double wall_ms,
                                long error_cells) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["params"] = {{"gamma", grid.params.gamma},
                   {"kappa", grid.params.kappa},
                   {"g", grid.params.g},
                   {"omega_p", grid.params.omega_p},
                   {"eta", grid.params.eta},
                   {"phi", grid.params.phi},
                   {"varphi", grid.params.varphi},
                   {"d0", grid.params.d0}};
    j["grid"] = {
        {"delta", {{"min", grid.delta.min}, {"max", grid.delta.max},
                   {"n", grid.delta.n}}},
        {"Delta", {{"min", grid.delta_cav.min}, {"max", grid.delta_cav.max},
                   {"n", grid.delta_cav.n}}}};
    j["wall_ms"] = wall_ms;
    j["error_cells"] = error_cells;
    return j.dump(2) + "\n";
}

CurveProfile curve_profile(const SystemParams& params, CurveKind kind,
                           std::span<const double> delta_cav_samples,
                           double pole_window) {
    params.validate();
    const double pole = kind == CurveKind::resonance ? -1.0 : 1.0;
    CurveProfile profile;
    for (double dc : delta_cav_samples) {
        if (std::abs(dc - pole) <= pole_window) {
            ++profile.n_skipped;
            continue;
        }
        CurvePoint pt;
        pt.delta_cav = dc;
        pt.delta = kind == CurveKind::resonance
                       ? resonance_curve_delta(params, dc)
                       : interference_curve_delta(params, dc);
        const CoolingResult res =
            cooling_result(params, DetuningPoint{pt.delta, dc});
        pt.gamma_cool = res.gamma_cool;
        pt.steady = res.steady;
        pt.mean_m = res.mean_m;
        profile.points.push_back(pt);
    }
    return profile;
}

std::string curve_profile_csv(const CurveProfile& profile) {
    std::string out = "Delta,delta,Gamma,mean_m,steady\n";
    for (const CurvePoint& pt : profile.points) {
        out += format_g17(pt.delta_cav);
        out += ',';
        out += format_g17(pt.delta);
        out += ',';
        out += format_g17(pt.gamma_cool);
        out += ',';
        if (pt.mean_m) out += format_g17(*pt.mean_m);
        out += ',';
        out += pt.steady ? '1' : '0';
        out += '\n';
    }
    return out;
}

RegionSummary classify_regions(const SweepGrid& grid,
                               const std::vector<SweepCell>& cells) {
    const int ni = grid.delta.n;
    const int nj = grid.delta_cav.n;
    RegionSummary summary;

    std::vector<int> label(cells.size(), -1);
    const auto flood = [&](long start, bool steady_class) {
        RegionBox box;
        box.delta_lo = box.delta_hi = static_cast<int>(start / nj);
        box.delta_cav_lo = box.delta_cav_hi = static_cast<int>(start % nj);
        std::vector<long> stack{start};
        label[start] = 1;
        while (!stack.empty()) {
            const long idx = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(idx / nj);
            const int j = static_cast<int>(idx % nj);
            box.delta_lo = std::min(box.delta_lo, i);
            box.delta_hi = std::max(box.delta_hi, i);
            box.delta_cav_lo = std::min(box.delta_cav_lo, j);
            box.delta_cav_hi = std::max(box.delta_cav_hi, j);
            ++box.cells;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int ii = i + di[k];
                const int jj = j + dj[k];
                if (ii < 0 || ii >= ni || jj < 0 || jj >= nj) continue;
                const long nidx = static_cast<long>(ii) * nj + jj;
                if (label[nidx] != -1 || cells[nidx].error) continue;
                if (cells[nidx].steady != steady_class) continue;
                label[nidx] = 1;
                stack.push_back(nidx);
            }
        }
        return box;
    };

    for (long idx = 0; idx < static_cast<long>(cells.size()); ++idx) {
        const SweepCell& c = cells[idx];
        if (c.error) {
            ++summary.error_cells;
            continue;
        }
        if (c.steady) {
            ++summary.cooling_cells;
            if (!summary.has_min_mean_m || *c.mean_m < summary.min_mean_m) {
                summary.has_min_mean_m = true;
                summary.min_mean_m = *c.mean_m;
                summary.min_mean_m_delta = c.delta;
                summary.min_mean_m_delta_cav = c.delta_cav;
            }
        } else {
            ++summary.heating_cells;
        }
        if (!summary.has_max_gamma || c.gamma_cool > summary.max_gamma) {
            summary.has_max_gamma = true;
            summary.max_gamma = c.gamma_cool;
            summary.max_gamma_delta = c.delta;
            summary.max_gamma_delta_cav = c.delta_cav;
        }
        if (label[idx] == -1)
            (c.steady ? summary.cooling_regions : summary.heating_regions)
                .push_back(flood(idx, c.steady));
    }
    return summary;
}

}  // namespace coolcav
