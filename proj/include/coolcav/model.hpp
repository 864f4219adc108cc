// Derived quantities of the coupled atom-cavity system: cooperativity,
// intracavity photon number, dressed states, and the two analytic
// detuning curves along which cooling resonances and interference occur.

#pragma once

#include <complex>

#include "coolcav/types.hpp"

namespace coolcav {

// Dressed states of the one-excitation manifold {|e,0>, |g,1>}.
struct DressedStates {
    double theta = 0.0;  // mixing angle, branch [0, pi/2)
    // Complex eigenfrequencies: real part frequency, imaginary part -width.
    std::complex<double> omega_plus;
    std::complex<double> omega_minus;
};

struct RegimeFlags {
    bool weak_drive_ok = true;  // epsilon < 0.1
    bool lamb_dicke_ok = true;  // eta * sqrt(m_max) < 0.3
};

// Effective cooperativity C(varphi) = g^2 cos^2(varphi) / (kappa gamma / 2).
double cooperativity(const SystemParams& p);

// Antinode maximum C0 = g^2 / (kappa gamma / 2).
double cooperativity_max(const SystemParams& p);

// Mean intracavity photon number |Omega_P/2|^2 / (Delta^2 + kappa^2).
double weak_drive_photon_number(const SystemParams& p, const DetuningPoint& d);

// Perturbation parameter epsilon = |Omega_P / 2(Delta + i kappa)|.
double drive_epsilon(const SystemParams& p, const DetuningPoint& d);

// Mixing angle and complex eigenfrequencies of the 2x2 non-Hermitian block
//   [[-delta - i gamma/2,   g cos(varphi)     ],
//    [ g cos(varphi),      -Delta - i kappa   ]],
// eigenvalues ordered by descending real part (ties: descending imag part).
DressedStates dressed_states(const SystemParams& p, const DetuningPoint& d);

// Red-sideband resonance curve delta(Delta) = (kg/2)(1+C)/(Delta+nu) - nu.
// Throws PoleAtDetuning at Delta = -nu.
double resonance_curve_delta(const SystemParams& p, double delta_cav);

// Heating-interference curve delta(Delta) = (kg/2)(1-C)/(Delta-nu).
// Throws PoleAtDetuning at Delta = nu.
double interference_curve_delta(const SystemParams& p, double delta_cav);

// Regime validation; never throws, out-of-regime results are flagged only.
RegimeFlags check_regime(const SystemParams& p, const DetuningPoint& d,
                         double m_max);

}  // namespace coolcav
