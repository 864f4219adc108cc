// Analytic heating/cooling rate formulas: the atom-cavity response f,
// excited-state occupation, diffusion, the sideband rates A_+/A_-, the
// cooling rate Gamma with steady-state occupation <m>, and the closed-form
// limits (bad cavity, EIT-like, low cooperativity, sideband/Doppler).

#pragma once

#include <optional>

#include "coolcav/types.hpp"

namespace coolcav {

// Every intermediate rate quantity at one parameter point.
struct RateBreakdown {
    double f0 = 0.0;       // f(Delta, delta_c)
    double f_minus = 0.0;  // f(Delta - nu, delta_c)
    double f_plus = 0.0;   // f(Delta + nu, delta_c)
    double rho_e = 0.0;    // excited-state factor (physical occupation is
                           // rho_e * cos^2 varphi)
    double diffusion = 0.0;      // D = gamma rho_e cos^2(varphi) D0
    double a_gamma_plus = 0.0;   // A_+^(gamma)
    double a_gamma_minus = 0.0;  // A_-^(gamma)
    double a_kappa_plus = 0.0;   // A_+^(kappa)
    double a_kappa_minus = 0.0;  // A_-^(kappa)
    double a_plus = 0.0;         // total heating rate A_+
    double a_minus = 0.0;        // total cooling rate A_-
};

struct CoolingResult {
    double gamma_cool = 0.0;      // Gamma = eta^2 (A_- - A_+), any sign
    std::optional<double> mean_m; // present iff steady
    bool steady = false;          // Gamma > 0
};

// Optimal EIT-like working point at delta = 0.
struct EitOptimum {
    double delta_cav_opt = 0.0;  // g^2 cos^2(varphi)/nu - nu
    double mean_m = 0.0;         // (kappa / 2 Delta_opt)^2
    double gamma_cool = 0.0;     // 2 eta_tilde^2 rho_e g^2 cos^2(varphi)/kappa
};

// Optimal interference working point at delta = nu/2.
struct InterferenceOptimum {
    double delta_opt = 0.0;      // nu/2
    double delta_cav_opt = 0.0;  // 2 g^2 cos^2(varphi)/(3 nu) - nu
    double mean_m = 0.0;         // (9/16C)[1 + cot^2(varphi) D0 / cos^2(phi)]
    double gamma_cool = 0.0;     // eta_tilde^2 rho_e (32/9) g^2 cos^2(varphi)/kappa
};

struct CoolingLimit {
    double mean_m = 0.0;
    double gamma_cool = 0.0;
    bool regime_ok = true;  // gamma vs nu recommendation satisfied
};

struct LimitSummary {
    CoolingLimit sideband;  // delta = -nu, valid for gamma < nu
    CoolingLimit doppler;   // delta = -gamma/2, valid for gamma > nu
};

// Atom-cavity response f(Delta', delta_c) =
//   [Delta'(delta_c + Delta') - (kg/2)(1 + C)]^2
// + [Delta' gamma/2 + (delta_c + Delta') kappa]^2,   always >= 0.
double response_f(const SystemParams& p, double delta_cav, double delta_c);

// rho_e = (Omega_P^2/4) g^2 / f(Delta, delta_c). Throws ResonanceSingular
// when f vanishes (possible only at exactly zero losses).
double excited_population(const SystemParams& p, const DetuningPoint& d);

// All rates at one detuning point. Throws ResonanceSingular on vanishing f.
RateBreakdown rate_breakdown(const SystemParams& p, const DetuningPoint& d);

RatePair to_rate_pair(const RateBreakdown& b);

// Gamma, steady flag, and <m> from an already computed rate pair.
CoolingResult cooling_from_rates(const SystemParams& p, const RatePair& r);

// Convenience: rate_breakdown followed by cooling_from_rates.
CoolingResult cooling_result(const SystemParams& p, const DetuningPoint& d);

// Rates with gamma set to zero (cavity decay as the only loss channel).
RatePair rates_bad_cavity(const SystemParams& p, const DetuningPoint& d);

// EIT-like form of the bad-cavity rates at delta = 0.
RatePair rates_eit(const SystemParams& p, double delta_cav);

// Throws DegenerateOptimum when g cos(varphi) = 0 or Delta_opt = 0.
EitOptimum optimum_eit(const SystemParams& p);

// Throws DegenerateOptimum when the cooperativity vanishes.
InterferenceOptimum optimum_interference(const SystemParams& p);

// Leading-order rates for C << 1,
//   A_+- = A0 [D0 + cos^2(phi) tan^2(varphi)
//              (delta^2 + gamma^2/4) / ((delta -+ nu)^2 + gamma^2/4)].
// The drive normalization A0 depends on Delta through the intracavity
// field amplitude. Throws NodeSingular at cos^2(varphi) = 0.
RatePair rates_low_cooperativity(const SystemParams& p, const DetuningPoint& d);

// Closed-form sideband (delta = -nu) and Doppler (delta = -gamma/2) limits.
// The standing-wave Rabi frequency Omega_SW = 2 g epsilon(Delta) sets the
// Gamma scale; delta_cav fixes epsilon. Throws NodeSingular at an exact node.
LimitSummary limits_sideband_doppler(const SystemParams& p,
                                     double delta_cav = 0.0);

}  // namespace coolcav
