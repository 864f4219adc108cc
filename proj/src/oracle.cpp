#include "coolcav/oracle.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace coolcav {

namespace {

constexpr double nu = 1.0;
using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
constexpr cd I{0.0, 1.0};

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

Mat fock_lowering(int n) {
    Mat a = Mat::Zero(n, n);
    for (int m = 1; m < n; ++m) a(m - 1, m) = std::sqrt(double(m));
    return a;
}

Mat number_op(int n) {
    Mat out = Mat::Zero(n, n);
    for (int m = 0; m < n; ++m) out(m, m) = double(m);
    return out;
}

// Trace of vec(rho) without unpacking.
cd vec_trace(const Vec& v, int dim) {
    cd t = 0.0;
    for (int k = 0; k < dim; ++k) t += v(Eigen::Index(k) * dim + k);
    return t;
}

Mat unvec(const Vec& v, int dim) {
    return Eigen::Map<const Mat>(v.data(), dim, dim);
}

}  // namespace

LindbladModel::LindbladModel(const SystemParams& p, const DetuningPoint& d,
                             const OracleConfig& c)
    : n_cavity_(c.n_cavity), n_motion_(c.n_motion),
      dim_(2 * c.n_cavity * c.n_motion) {
    if (c.n_cavity < 2 || c.n_motion < 1)
        throw std::invalid_argument("oracle truncations too small");
    if (dim_ > c.dim_guard)
        throw DimensionGuard("Hilbert dimension " + std::to_string(dim_) +
                             " exceeds guard " + std::to_string(c.dim_guard));

    const Mat id2 = Mat::Identity(2, 2);
    const Mat idc = Mat::Identity(n_cavity_, n_cavity_);
    const Mat idm = Mat::Identity(n_motion_, n_motion_);
    Mat sigma_minus = Mat::Zero(2, 2);
    sigma_minus(0, 1) = 1.0;  // |g><e|
    Mat excited2 = Mat::Zero(2, 2);
    excited2(1, 1) = 1.0;

    const Mat a = fock_lowering(n_cavity_);
    const Mat b = fock_lowering(n_motion_);
    const Mat x = b + b.adjoint();  // position quadrature b + b^dag

    // Position-dependent coupling g cos(eta cos(phi) x + varphi) on the
    // motional factor, expanded to first order in eta unless exact_cosine.
    const double cphi = std::cos(p.phi);
    Mat coupling_m;
    if (c.exact_cosine) {
        Eigen::SelfAdjointEigenSolver<Mat> es(p.eta * cphi * x);
        Eigen::VectorXd cosvals = es.eigenvalues();
        for (int i = 0; i < cosvals.size(); ++i)
            cosvals(i) = std::cos(cosvals(i) + p.varphi);
        coupling_m = es.eigenvectors() * cosvals.asDiagonal() *
                     es.eigenvectors().adjoint();
        coupling_m *= p.g;
    } else {
        coupling_m = p.g * (std::cos(p.varphi) * idm -
                            p.eta * cphi * std::sin(p.varphi) * x);
    }

    hamiltonian_ = kron(id2, kron(idc, nu * number_op(n_motion_)));
    hamiltonian_ += kron(-d.delta * excited2, kron(idc, idm));
    hamiltonian_ += kron(id2, kron(-d.delta_cav * number_op(n_cavity_), idm));
    hamiltonian_ +=
        kron(id2, kron((p.omega_p / 2.0) * (a + Mat(a.adjoint())), idm));
    const Mat raise_and_absorb =
        kron(Mat(sigma_minus.adjoint()), kron(a, coupling_m));
    hamiltonian_ += raise_and_absorb + Mat(raise_and_absorb.adjoint());

    // Cavity photons leak at 2 kappa; the dipole decays at gamma. Recoil on
    // the motion enters as a first-order kick split over two balanced
    // channels so the direction-odd terms cancel, as they do under the
    // angular average of the emission pattern.
    jumps_.push_back(std::sqrt(2.0 * p.kappa) * kron(id2, kron(a, idm)));
    if (c.include_recoil && c.recoil_factor > 0.0) {
        const Mat kick = I * p.eta * std::sqrt(c.recoil_factor) * x;
        jumps_.push_back(std::sqrt(p.gamma / 2.0) *
                         kron(sigma_minus, kron(idc, Mat(idm - kick))));
        jumps_.push_back(std::sqrt(p.gamma / 2.0) *
                         kron(sigma_minus, kron(idc, Mat(idm + kick))));
    } else {
        jumps_.push_back(std::sqrt(p.gamma) * kron(sigma_minus, kron(idc, idm)));
    }

    motion_number_ = kron(id2, kron(idc, number_op(n_motion_)));
    cavity_number_ = kron(id2, kron(number_op(n_cavity_), idm));
    excited_ = kron(excited2, kron(idc, idm));
}

Mat LindbladModel::generator() const {
    const int n = dim_;
    const Mat id = Mat::Identity(n, n);
    Mat gen = -I * (kron(id, hamiltonian_) -
                    kron(hamiltonian_.transpose(), id));
    for (const Mat& L : jumps_) {
        const Mat LdL = L.adjoint() * L;
        gen += kron(L.conjugate(), L);
        gen -= 0.5 * kron(id, LdL);
        gen -= 0.5 * kron(LdL.transpose(), id);
    }
    return gen;
}

Eigen::VectorXd LindbladModel::motional_populations(const Mat& rho) const {
    Eigen::VectorXd pops = Eigen::VectorXd::Zero(n_motion_);
    for (int s = 0; s < 2; ++s)
        for (int c = 0; c < n_cavity_; ++c)
            for (int m = 0; m < n_motion_; ++m) {
                const int i = (s * n_cavity_ + c) * n_motion_ + m;
                pops(m) += rho(i, i).real();
            }
    return pops;
}

double LindbladModel::top_motion_population(const Mat& rho) const {
    return motional_populations(rho)(n_motion_ - 1);
}

double LindbladModel::top_cavity_population(const Mat& rho) const {
    double pop = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int m = 0; m < n_motion_; ++m) {
            const int i = (s * n_cavity_ + (n_cavity_ - 1)) * n_motion_ + m;
            pop += rho(i, i).real();
        }
    return pop;
}

namespace {

double rate_scale(const SystemParams& p) {
    return std::max({p.gamma, 2.0 * p.kappa, nu});
}

}  // namespace

OracleSteadyState oracle_steady_state(const SystemParams& p,
                                      const DetuningPoint& d,
                                      const OracleConfig& c) {
    const LindbladModel model(p, d, c);
    const int dim = model.dim();
    const Eigen::Index n = Eigen::Index(dim) * dim;
    Mat gen = model.generator();

    // Null vector via one row replaced by the trace constraint tr(rho) = 1.
    Mat sys = gen;
    sys.row(0).setZero();
    for (int k = 0; k < dim; ++k) sys(0, Eigen::Index(k) * dim + k) = 1.0;
    Vec rhs = Vec::Zero(n);
    rhs(0) = 1.0;
    const Eigen::PartialPivLU<Eigen::Ref<Mat>> lu(sys);  // in place
    Vec rho_vec = lu.solve(rhs);

    Mat rho = unvec(rho_vec, dim);
    rho = 0.5 * (rho + Mat(rho.adjoint()));
    rho /= rho.trace().real();
    rho_vec = Eigen::Map<const Vec>(rho.data(), n);

    OracleSteadyState out;
    out.residual = (gen * rho_vec).norm() / (rho_vec.norm() * rate_scale(p));
    if (!(out.residual <= c.tol))
        throw NonConvergence("steady-state residual " +
                             std::to_string(out.residual) + " above tol");

    out.rho = rho;
    out.mean_m = (model.motion_number() * rho).trace().real();
    out.top_motion_population = model.top_motion_population(rho);
    out.top_cavity_population = model.top_cavity_population(rho);
    out.excited_population = (model.excited_projector() * rho).trace().real();
    out.mean_cavity_photons = (model.cavity_number() * rho).trace().real();
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();

    if (c.n_motion > 1 && out.top_motion_population > 1e-4)
        throw TruncationSuspect("top motional level population " +
                                std::to_string(out.top_motion_population));
    return out;
}

namespace {

// Fraction of a mode matrix living on motional populations.
double mode_motional_weight(const LindbladModel& model, const Mat& mode,
                            int n_motion) {
    const int dim = model.dim();
    const int blocks = dim / n_motion;
    double diag2 = 0.0;
    for (int m = 0; m < n_motion; ++m) {
        cd q = 0.0;
        for (int blk = 0; blk < blocks; ++blk) {
            const int i = blk * n_motion + m;
            q += mode(i, i);
        }
        diag2 += std::norm(q);
    }
    return std::sqrt(diag2) / mode.norm();
}

}  // namespace

OracleRelaxation oracle_relaxation_rate(const SystemParams& p,
                                        const DetuningPoint& d,
                                        const OracleConfig& c) {
    const LindbladModel model(p, d, c);
    const int dim = model.dim();
    const Eigen::Index n = Eigen::Index(dim) * dim;
    const Mat gen = model.generator();

    const double scale = rate_scale(p);
    const double mu = 1e-12 * scale;
    Mat shifted = gen;
    shifted.diagonal().array() -= mu;
    const Eigen::PartialPivLU<Eigen::Ref<Mat>> lu(shifted);  // in place

    std::mt19937_64 rng(0x636f6f6cULL);
    std::normal_distribution<double> gauss;
    const auto random_vec = [&]() {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cd(gauss(rng), gauss(rng));
        return v;
    };

    // Stationary direction for deflation, from undeflated inverse iteration.
    Vec v0 = random_vec().normalized();
    for (int it = 0; it < 30; ++it) {
        Vec w = lu.solve(v0).normalized();
        const double drift = (w - w.dot(v0) * v0).norm();
        v0 = w;
        if (drift < 1e-13) break;
    }
    // Left null vector of the generator is the trace functional vec(1).
    Vec l0 = Vec::Zero(n);
    for (int k = 0; k < dim; ++k) l0(Eigen::Index(k) * dim + k) = 1.0;
    const cd tr0 = vec_trace(v0, dim);
    const bool spectral = std::abs(tr0) > 1e-8;
    const auto deflate_right = [&](Vec& v) {
        if (spectral)
            v -= (vec_trace(v, dim) / tr0) * v0;
        else
            v -= v0.dot(v) * v0;  // degenerate kernel: drop found direction
    };
    const auto deflate_left = [&](Vec& u) {
        if (spectral)
            u -= (v0.dot(u) / v0.dot(l0)) * l0;
        else
            u -= l0.dot(u) / cd(l0.squaredNorm()) * l0;
    };

    struct ModeResult {
        Vec v;
        cd lambda = 0.0;
        double abs_resid = 0.0;
        int iterations = 0;
        bool converged = false;
    };
    const auto iterate_mode = [&](const Vec& v1, const Vec& u1,
                                  int max_iter, double rtol) {
        ModeResult res;
        Vec v = random_vec();
        deflate_right(v);
        v.normalize();
        const bool second_stage = v1.size() > 0;
        cd lambda_prev = 0.0;
        for (int it = 1; it <= max_iter; ++it) {
            Vec w = lu.solve(v);
            deflate_right(w);
            if (second_stage) w -= (u1.dot(w) / u1.dot(v1)) * v1;
            w.normalize();
            const Vec gw = gen * w;
            const cd lambda = w.dot(gw);
            res.abs_resid = (gw - lambda * w).norm();
            res.lambda = lambda;
            res.iterations = it;
            v = w;
            const bool settled =
                it > 2 &&
                std::abs(lambda - lambda_prev) <
                    rtol * std::max(std::abs(lambda), mu);
            const bool accurate = res.abs_resid < 1e-5 * std::abs(lambda) ||
                                  res.abs_resid < 1e-9 * scale;
            if (settled && accurate) {
                res.converged = true;
                break;
            }
            lambda_prev = lambda;
        }
        res.v = std::move(v);
        return res;
    };

    const ModeResult first = iterate_mode(Vec(), Vec(), 400, 1e-10);
    if (!first.converged &&
        first.abs_resid > 1e-3 * std::max(std::abs(first.lambda), mu))
        throw NonConvergence("relaxation mode iteration stalled, |residual| " +
                             std::to_string(first.abs_resid));

    OracleRelaxation out;
    out.rate = -first.lambda.real();
    out.iterations = first.iterations;
    out.residual = first.abs_resid / scale;
    out.motional_weight =
        mode_motional_weight(model, unvec(first.v, dim), c.n_motion);

    if (spectral) {
        // Left eigenvector via adjoint solves, then a deflated second pass
        // for the next-slowest rate (ambiguity check only).
        Vec u = random_vec().normalized();
        for (int it = 0; it < 60; ++it) {
            u = lu.adjoint().solve(u);
            deflate_left(u);
            u.normalize();
        }
        const ModeResult second = iterate_mode(first.v, u, 120, 1e-7);
        if (second.converged) {
            out.second_rate = -second.lambda.real();
            const double wt2 =
                mode_motional_weight(model, unvec(second.v, dim), c.n_motion);
            const double gap = std::abs(out.second_rate - out.rate) /
                               std::max(std::abs(out.rate), mu);
            // a conserved sector (both rates essentially zero) is not an
            // identification problem
            const bool conserved = std::abs(out.rate) < 1e-8 * scale &&
                                   std::abs(out.second_rate) < 1e-8 * scale;
            if (!conserved && gap < 0.05 && out.motional_weight > 0.5 &&
                wt2 > 0.5)
                throw ModeIdentificationAmbiguous(
                    "two slowest modes within 5% both couple to motion");
        }
    }
    return out;
}

}  // namespace coolcav
