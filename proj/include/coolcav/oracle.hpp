// Brute-force Lindblad validation of the analytic rates: builds the
// truncated atom + cavity + motion master-equation generator from the
// microscopic Hamiltonian, solves for the steady state, and extracts the
// motional relaxation rate. Independent of every formula in rates.hpp.

#pragma once

#include <Eigen/Dense>

#include "coolcav/types.hpp"

namespace coolcav {

struct OracleConfig {
    int n_cavity = 3;            // cavity Fock levels (>= 2)
    int n_motion = 12;           // motional Fock levels (>= 2 used; >= 4 typical)
    bool include_recoil = false; // spontaneous-emission recoil on the motion
    double recoil_factor = 0.0;  // angular-average factor alpha
    double tol = 1e-8;           // steady-state residual tolerance
    bool exact_cosine = false;   // keep the full cos(eta cos(phi) x + varphi)
    int dim_guard = 512;         // max Hilbert dimension for the dense solver
};

// Operators on {g,e} (x) Fock(n_cavity) (x) Fock(n_motion); index layout is
// i = s * (n_cavity * n_motion) + c * n_motion + m.
class LindbladModel {
  public:
    LindbladModel(const SystemParams& p, const DetuningPoint& d,
                  const OracleConfig& c);

    int dim() const { return dim_; }
    const Eigen::MatrixXcd& hamiltonian() const { return hamiltonian_; }
    const std::vector<Eigen::MatrixXcd>& jump_operators() const {
        return jumps_;
    }
    // dim^2 x dim^2 superoperator acting on column-major vec(rho).
    Eigen::MatrixXcd generator() const;

    const Eigen::MatrixXcd& motion_number() const { return motion_number_; }
    const Eigen::MatrixXcd& cavity_number() const { return cavity_number_; }
    const Eigen::MatrixXcd& excited_projector() const { return excited_; }

    // Diagonal of the partial trace over atom and cavity.
    Eigen::VectorXd motional_populations(const Eigen::MatrixXcd& rho) const;
    double top_motion_population(const Eigen::MatrixXcd& rho) const;
    double top_cavity_population(const Eigen::MatrixXcd& rho) const;

  private:
    int n_cavity_, n_motion_, dim_;
    Eigen::MatrixXcd hamiltonian_;
    std::vector<Eigen::MatrixXcd> jumps_;
    Eigen::MatrixXcd motion_number_, cavity_number_, excited_;
};

struct OracleSteadyState {
    double mean_m = 0.0;
    double residual = 0.0;
    double top_motion_population = 0.0;
    double top_cavity_population = 0.0;
    double excited_population = 0.0;
    double mean_cavity_photons = 0.0;
    double min_eigenvalue = 0.0;  // smallest eigenvalue of rho
    Eigen::MatrixXcd rho;
};

struct OracleRelaxation {
    double rate = 0.0;         // -Re of the slowest nonzero eigenvalue
    double second_rate = 0.0;  // next-slowest estimate (0 when not resolved)
    double motional_weight = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

// Dense null-space solve of the generator. Throws DimensionGuard,
// NonConvergence (residual > tol) and TruncationSuspect (top motional level
// above 1e-4 population).
OracleSteadyState oracle_steady_state(const SystemParams& p,
                                      const DetuningPoint& d,
                                      const OracleConfig& c);

// Slowest nonzero generator eigenvalue restricted to the motional sector,
// found by deflated shift-inverted iteration. Throws NonConvergence and
// ModeIdentificationAmbiguous.
OracleRelaxation oracle_relaxation_rate(const SystemParams& p,
                                        const DetuningPoint& d,
                                        const OracleConfig& c);

}  // namespace coolcav
