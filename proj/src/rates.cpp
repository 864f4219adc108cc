#include "coolcav/rates.hpp"

#include <cmath>

#include "coolcav/model.hpp"

namespace coolcav {

namespace {

constexpr double nu = 1.0;

// (kappa gamma / 2)(1 +- C) expanded to kappa gamma/2 +- g^2 cos^2(varphi).
// The expanded form stays finite as gamma -> 0 and keeps the curve
// identities exact in floating point.
double strength_sum(const SystemParams& p) {
    return p.loss_product() + p.g2_cos2_varphi();
}
double strength_diff(const SystemParams& p) {
    return p.loss_product() - p.g2_cos2_varphi();
}

double response_f_impl(double delta_cav, double delta_c, double gamma,
                       double kappa, double s_sum) {
    const double shifted = delta_c + delta_cav;
    const double re = delta_cav * shifted - s_sum;
    const double im = delta_cav * gamma / 2.0 + shifted * kappa;
    return re * re + im * im;
}

// Braces of A_+-^(gamma); delta is the unshifted pump-atom detuning.
double gamma_braces(double delta_cav_shifted, double delta, double gamma,
                    double kappa, double s_diff) {
    const double re = delta_cav_shifted * delta - s_diff;
    const double im = delta_cav_shifted * gamma / 2.0 + delta * kappa;
    return re * re + im * im;
}

}  // namespace

double response_f(const SystemParams& p, double delta_cav, double delta_c) {
    return response_f_impl(delta_cav, delta_c, p.gamma, p.kappa,
                           strength_sum(p));
}

double excited_population(const SystemParams& p, const DetuningPoint& d) {
    const double f0 = response_f(p, d.delta_cav, d.delta_c());
    if (f0 <= 0.0)
        throw ResonanceSingular("response f vanished at (Delta, delta_c)");
    return (p.omega_p * p.omega_p / 4.0) * p.g * p.g / f0;
}

RateBreakdown rate_breakdown(const SystemParams& p, const DetuningPoint& d) {
    const double dc = d.delta_c();
    const double s_sum = strength_sum(p);
    const double s_diff = strength_diff(p);
    const double g2c = p.g2_cos2_varphi();

    RateBreakdown b;
    b.f0 = response_f_impl(d.delta_cav, dc, p.gamma, p.kappa, s_sum);
    b.f_minus = response_f_impl(d.delta_cav - nu, dc, p.gamma, p.kappa, s_sum);
    b.f_plus = response_f_impl(d.delta_cav + nu, dc, p.gamma, p.kappa, s_sum);
    if (b.f0 <= 0.0 || b.f_minus <= 0.0 || b.f_plus <= 0.0)
        throw ResonanceSingular("response f vanished at a sideband");

    b.rho_e = (p.omega_p * p.omega_p / 4.0) * p.g * p.g / b.f0;
    b.diffusion = p.gamma * b.rho_e * p.cos2_varphi() * p.d0;

    // A_+ probes f at Delta - nu, A_- at Delta + nu.
    b.a_gamma_plus = p.gamma * b.rho_e / b.f_minus *
                     gamma_braces(d.delta_cav - nu, d.delta, p.gamma, p.kappa,
                                  s_diff);
    b.a_gamma_minus = p.gamma * b.rho_e / b.f_plus *
                      gamma_braces(d.delta_cav + nu, d.delta, p.gamma, p.kappa,
                                   s_diff);

    const double quarter_gamma2 = p.gamma * p.gamma / 4.0;
    const double lor_plus = (d.delta - nu / 2.0) * (d.delta - nu / 2.0) +
                            quarter_gamma2;
    const double lor_minus = (d.delta + nu / 2.0) * (d.delta + nu / 2.0) +
                             quarter_gamma2;
    b.a_kappa_plus = 2.0 * p.kappa * 4.0 * b.rho_e * g2c / b.f_minus * lor_plus;
    b.a_kappa_minus =
        2.0 * p.kappa * 4.0 * b.rho_e * g2c / b.f_plus * lor_minus;

    const double projection = p.cos2_phi() * p.sin2_varphi();
    b.a_plus = b.diffusion + projection * (b.a_gamma_plus + b.a_kappa_plus);
    b.a_minus = b.diffusion + projection * (b.a_gamma_minus + b.a_kappa_minus);
    return b;
}

RatePair to_rate_pair(const RateBreakdown& b) {
    return {b.a_plus, b.a_minus};
}

CoolingResult cooling_from_rates(const SystemParams& p, const RatePair& r) {
    CoolingResult out;
    out.gamma_cool = p.eta * p.eta * (r.a_minus - r.a_plus);
    out.steady = out.gamma_cool > 0.0;
    if (out.steady) out.mean_m = r.a_plus / (r.a_minus - r.a_plus);
    return out;
}

CoolingResult cooling_result(const SystemParams& p, const DetuningPoint& d) {
    return cooling_from_rates(p, to_rate_pair(rate_breakdown(p, d)));
}

RatePair rates_bad_cavity(const SystemParams& p, const DetuningPoint& d) {
    const double g2c = p.g2_cos2_varphi();
    const double g2sc = p.g * p.g * p.sin2_varphi() * p.cos2_varphi();
    // rho_e evaluated at gamma = 0
    const double f0_re = d.delta_cav * d.delta - g2c;
    const double f0_im = d.delta * p.kappa;
    const double f0 = f0_re * f0_re + f0_im * f0_im;
    if (f0 <= 0.0)
        throw ResonanceSingular("gamma=0 response vanished at (Delta, delta)");
    const double rho_e = (p.omega_p * p.omega_p / 4.0) * p.g * p.g / f0;

    const auto rate = [&](double sign) {  // +1 for A_+, -1 for A_-
        const double ds = d.delta - sign * nu;
        const double den_re = (d.delta_cav - sign * nu) * ds - g2c;
        const double den = den_re * den_re + ds * ds * p.kappa * p.kappa;
        if (den <= 0.0)
            throw ResonanceSingular("gamma=0 sideband denominator vanished");
        const double num = 2.0 * d.delta - sign * nu;
        return p.cos2_phi() * rho_e * 2.0 * p.kappa * g2sc * num * num / den;
    };
    return {rate(+1.0), rate(-1.0)};
}

RatePair rates_eit(const SystemParams& p, double delta_cav) {
    const double g2c = p.g2_cos2_varphi();
    const double g2sc = p.g * p.g * p.sin2_varphi() * p.cos2_varphi();
    // delta = 0 implied: rho_e at gamma = 0 reduces to (Omega_P/2)^2 g^2/g2c^2
    const double rho_e = (p.omega_p * p.omega_p / 4.0) * p.g * p.g / (g2c * g2c);
    const auto rate = [&](double sign) {
        const double det = nu * (nu - sign * delta_cav) - g2c;
        const double den = p.kappa * p.kappa * nu * nu + det * det;
        return p.cos2_phi() * rho_e * 2.0 * p.kappa * nu * nu * g2sc / den;
    };
    return {rate(+1.0), rate(-1.0)};
}

EitOptimum optimum_eit(const SystemParams& p) {
    const double g2c = p.g2_cos2_varphi();
    if (g2c == 0.0)
        throw DegenerateOptimum("EIT optimum requires g cos(varphi) != 0");
    EitOptimum opt;
    opt.delta_cav_opt = g2c / nu - nu;
    if (opt.delta_cav_opt == 0.0)
        throw DegenerateOptimum("EIT optimum detuning vanished");
    opt.mean_m = (p.kappa / (2.0 * opt.delta_cav_opt)) *
                 (p.kappa / (2.0 * opt.delta_cav_opt));
    const double eta_tilde2 =
        p.eta * p.eta * p.cos2_phi() * p.sin2_varphi();
    const double rho_e = (p.omega_p * p.omega_p / 4.0) * p.g * p.g / (g2c * g2c);
    opt.gamma_cool = 2.0 * eta_tilde2 * rho_e * g2c / p.kappa;
    return opt;
}

InterferenceOptimum optimum_interference(const SystemParams& p) {
    const double coop = cooperativity(p);
    if (coop <= 0.0)
        throw DegenerateOptimum("interference optimum requires C > 0");
    const double g2c = p.g2_cos2_varphi();

    InterferenceOptimum opt;
    opt.delta_opt = nu / 2.0;
    opt.delta_cav_opt = 2.0 * g2c / (3.0 * nu) - nu;
    const double cot2 = p.cos2_varphi() / p.sin2_varphi();
    opt.mean_m = 9.0 / (16.0 * coop) *
                 (1.0 + cot2 * p.d0 / p.cos2_phi());

    // rho_e at gamma = 0 for (delta = nu/2, Delta_opt)
    const double re = opt.delta_cav_opt * opt.delta_opt - g2c;
    const double im = opt.delta_opt * p.kappa;
    const double rho_e =
        (p.omega_p * p.omega_p / 4.0) * p.g * p.g / (re * re + im * im);
    const double eta_tilde2 = p.eta * p.eta * p.cos2_phi() * p.sin2_varphi();
    opt.gamma_cool = eta_tilde2 * rho_e * (32.0 / 9.0) * g2c / p.kappa;
    return opt;
}

RatePair rates_low_cooperativity(const SystemParams& p,
                                 const DetuningPoint& d) {
    const double cv2 = p.cos2_varphi();
    if (cv2 == 0.0)
        throw NodeSingular("low-C expansion diverges at an exact node");
    // Free-space picture: standing wave with Omega_SW/2 = g |epsilon|.
    const double half_sw2 =
        p.g * p.g * weak_drive_photon_number(p, d);
    const double quarter_gamma2 = p.gamma * p.gamma / 4.0;
    const double carrier = d.delta * d.delta + quarter_gamma2;
    const double rho_e = half_sw2 / carrier;
    const double a0 = p.gamma * rho_e * cv2;
    const double tan2 = p.sin2_varphi() / cv2;

    const auto rate = [&](double sign) {
        const double ds = d.delta - sign * nu;
        return a0 * (p.d0 + p.cos2_phi() * tan2 * carrier /
                                (ds * ds + quarter_gamma2));
    };
    return {rate(+1.0), rate(-1.0)};
}

LimitSummary limits_sideband_doppler(const SystemParams& p, double delta_cav) {
    const double cv2 = p.cos2_varphi();
    if (cv2 == 0.0)
        throw NodeSingular("limit formulas assume cos^2(varphi) != 0");
    const double cot2 = cv2 / p.sin2_varphi();
    const double cp2 = p.cos2_phi();
    const double omega_sw2 =
        4.0 * p.g * p.g *
        weak_drive_photon_number(p, DetuningPoint{0.0, delta_cav});
    const double mech = p.eta * p.eta * p.sin2_varphi() * cp2;

    LimitSummary out;
    const double q = p.gamma / (4.0 * nu);
    out.sideband.mean_m = q * q * (1.0 + 4.0 * cot2 * p.d0 / cp2);
    out.sideband.gamma_cool = mech * omega_sw2 / p.gamma;
    out.sideband.regime_ok = p.gamma < nu;

    out.doppler.mean_m = q * (1.0 + cot2 * p.d0 / cp2) - 0.5;
    out.doppler.gamma_cool =
        mech * 2.0 * nu * omega_sw2 / (p.gamma * p.gamma);
    out.doppler.regime_ok = p.gamma > nu;
    return out;
}

}  // namespace coolcav
