#include "coolcav/model.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace coolcav {

namespace {
constexpr double nu = 1.0;  // trap frequency, the unit of all rates
}

void SystemParams::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
    if (!(g >= 0.0)) throw std::invalid_argument("g must be >= 0");
    if (!(omega_p >= 0.0)) throw std::invalid_argument("omega_p must be >= 0");
    if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
    if (!(d0 >= 0.0)) throw std::invalid_argument("d0 must be >= 0");
    if (!std::isfinite(phi) || !std::isfinite(varphi))
        throw std::invalid_argument("angles must be finite");
}

double cooperativity(const SystemParams& p) {
    return p.g2_cos2_varphi() / p.loss_product();
}

double cooperativity_max(const SystemParams& p) {
    return p.g * p.g / p.loss_product();
}

double weak_drive_photon_number(const SystemParams& p, const DetuningPoint& d) {
    const double half_drive = p.omega_p / 2.0;
    return half_drive * half_drive /
           (d.delta_cav * d.delta_cav + p.kappa * p.kappa);
}

double drive_epsilon(const SystemParams& p, const DetuningPoint& d) {
    return std::sqrt(weak_drive_photon_number(p, d));
}

DressedStates dressed_states(const SystemParams& p, const DetuningPoint& d) {
    using cd = std::complex<double>;
    const double gc = p.g * std::cos(p.varphi);
    const double dc = d.delta_c();

    DressedStates out;
    if (gc == 0.0) {
        out.theta = 0.0;
    } else {
        // tan(2 theta) = 2 g cos(varphi) / delta_c with 2 theta in [0, pi)
        double two_theta = std::atan2(2.0 * gc, dc);
        if (two_theta < 0.0) two_theta += std::numbers::pi;
        out.theta = 0.5 * two_theta;
    }

    const cd a(-d.delta, -p.gamma / 2.0);     // |e,0> diagonal entry
    const cd b(-d.delta_cav, -p.kappa);       // |g,1> diagonal entry
    cd lo, hi;
    if (gc == 0.0) {
        lo = a;
        hi = b;
    } else {
        const cd split =
            std::sqrt((a - b) * (a - b) + cd(4.0 * gc * gc, 0.0));
        lo = (a + b - split) / 2.0;
        hi = (a + b + split) / 2.0;
    }
    if (hi.real() < lo.real() ||
        (hi.real() == lo.real() && hi.imag() < lo.imag()))
        std::swap(hi, lo);
    out.omega_plus = hi;
    out.omega_minus = lo;
    return out;
}

double resonance_curve_delta(const SystemParams& p, double delta_cav) {
    if (delta_cav == -nu)
        throw PoleAtDetuning("resonance curve has a pole at Delta = -nu");
    // (kappa gamma / 2)(1 + C) written as the exact sum of its two terms
    const double strength = p.loss_product() + p.g2_cos2_varphi();
    return strength / (delta_cav + nu) - nu;
}

double interference_curve_delta(const SystemParams& p, double delta_cav) {
    if (delta_cav == nu)
        throw PoleAtDetuning("interference curve has a pole at Delta = nu");
    const double strength = p.loss_product() - p.g2_cos2_varphi();
    return strength / (delta_cav - nu);
}

RegimeFlags check_regime(const SystemParams& p, const DetuningPoint& d,
                         double m_max) {
    RegimeFlags flags;
    flags.weak_drive_ok = drive_epsilon(p, d) < 0.1;
    flags.lamb_dicke_ok =
        m_max >= 0.0 && p.eta * std::sqrt(m_max) < 0.3;
    return flags;
}

}  // namespace coolcav
