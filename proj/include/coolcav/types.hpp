// Core parameter types and the error taxonomy shared by all modules.
//
// All frequencies and rates are expressed in units of the trap frequency
// (nu == 1 internally); times are in units of 1/nu.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace coolcav {

// Domain errors. The CLI maps these onto stable exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Requested analytic curve is evaluated at its pole.
class PoleAtDetuning : public Error {
  public:
    using Error::Error;
};

// The atom-cavity response function f vanished (requires exactly zero losses).
class ResonanceSingular : public Error {
  public:
    using Error::Error;
};

// Expansion breaks down at an exact node of the standing wave.
class NodeSingular : public Error {
  public:
    using Error::Error;
};

// Optimum formula degenerates (vanishing coupling or zero optimal detuning).
class DegenerateOptimum : public Error {
  public:
    using Error::Error;
};

// Population reached the top of the truncated phonon basis.
class TruncationOverflow : public Error {
  public:
    using Error::Error;
};

// Top motional level of the Lindblad solver holds suspicious population.
class TruncationSuspect : public Error {
  public:
    using Error::Error;
};

// Requested Hilbert space exceeds the dense-solver dimension bound.
class DimensionGuard : public Error {
  public:
    using Error::Error;
};

// Iterative solve failed to reach the requested residual.
class NonConvergence : public Error {
  public:
    using Error::Error;
};

// Two slowest relaxation modes are too close to identify the motional one.
class ModeIdentificationAmbiguous : public Error {
  public:
    using Error::Error;
};

// Config file / override parsing failure; carries a line number when known.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_ = 0;
};

class IoError : public Error {
  public:
    using Error::Error;
};

// Physical constants of one setup, all frequencies in trap units.
struct SystemParams {
    double gamma = 1.0;    // atomic linewidth, > 0
    double kappa = 1.0;    // cavity field decay rate, > 0 (photon loss rate 2*kappa)
    double g = 0.0;        // vacuum Rabi frequency, >= 0
    double omega_p = 0.0;  // pump strength Omega_P, >= 0
    double eta = 0.0;      // Lamb-Dicke parameter, >= 0
    double phi = 0.0;      // angle between cavity wave vector and motional axis [rad]
    double varphi = 0.0;   // trap-center phase in the cavity standing wave [rad]
    double d0 = 1.0;       // geometric diffusion factor, order unity

    // Throws std::invalid_argument on violated sign constraints.
    void validate() const;

    double cos2_varphi() const {
        const double c = std::cos(varphi);
        return c * c;
    }
    double sin2_varphi() const {
        const double s = std::sin(varphi);
        return s * s;
    }
    double cos2_phi() const {
        const double c = std::cos(phi);
        return c * c;
    }
    // Position-weighted coupling g^2 cos^2(varphi).
    double g2_cos2_varphi() const { return g * g * cos2_varphi(); }
    // Loss product kappa*gamma/2 entering the cooperativity.
    double loss_product() const { return kappa * gamma / 2.0; }
};

// Pump-atom detuning delta = omega_P - omega_0 and pump-cavity detuning
// Delta = omega_P - omega_c.
struct DetuningPoint {
    double delta = 0.0;
    double delta_cav = 0.0;
    // Cavity-atom detuning delta_c = omega_c - omega_0 = delta - Delta.
    double delta_c() const { return delta - delta_cav; }
};

// Heating/cooling rate pair (A_+, A_-), stored without the eta^2 prefactor.
struct RatePair {
    double a_plus = 0.0;
    double a_minus = 0.0;
};

}  // namespace coolcav
