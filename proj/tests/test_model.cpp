#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "coolcav/model.hpp"
#include "coolcav/rates.hpp"

using namespace coolcav;
using std::numbers::pi;

namespace {

SystemParams fig3_right() {
    SystemParams p;
    p.gamma = 10.0;
    p.kappa = 0.025;
    p.varphi = 0.45 * pi;
    p.phi = 0.0;
    p.omega_p = 0.01;
    p.eta = 0.05;
    p.d0 = 1.0;
    // g chosen so the effective cooperativity is 15
    p.g = std::sqrt(15.0 * p.loss_product() / p.cos2_varphi());
    return p;
}

SystemParams fig5_geometry(double coop) {
    SystemParams p;
    p.gamma = 0.15;
    p.kappa = 4.5;
    p.varphi = pi / 3.0;
    p.phi = 0.0;
    p.omega_p = 0.1;
    p.eta = 0.05;
    p.d0 = 1.0;
    p.g = std::sqrt(coop * p.loss_product() / p.cos2_varphi());
    return p;
}

}  // namespace

TEST_CASE("cooperativity: zero coupling and node give zero") {
    SystemParams p = fig3_right();
    p.g = 0.0;
    CHECK(cooperativity(p) == 0.0);

    p = fig3_right();
    p.varphi = pi / 2.0;  // node up to the rounding of pi/2
    CHECK(cooperativity(p) < 1e-25);
}

TEST_CASE("cooperativity: round trip to the figure value") {
    const SystemParams p = fig3_right();
    CHECK(cooperativity(p) == doctest::Approx(15.0).epsilon(1e-13));
    CHECK(cooperativity_max(p) >= cooperativity(p));
}

TEST_CASE("cooperativity is periodic and even in varphi") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> angle(-2.0 * pi, 2.0 * pi);
    for (int i = 0; i < 200; ++i) {
        SystemParams p = fig3_right();
        p.varphi = angle(rng);
        const double c0 = cooperativity(p);
        SystemParams q = p;
        q.varphi = -p.varphi;
        CHECK(cooperativity(q) == doctest::Approx(c0).epsilon(1e-12));
        q.varphi = p.varphi + pi;
        CHECK(cooperativity(q) == doctest::Approx(c0).epsilon(1e-9));
        CHECK(c0 <= cooperativity_max(p) * (1.0 + 1e-12));
    }
}

TEST_CASE("weak drive photon number") {
    SystemParams p = fig3_right();

    SUBCASE("no pump") {
        p.omega_p = 0.0;
        CHECK(weak_drive_photon_number(p, {0.0, 3.0}) == 0.0);
    }
    SUBCASE("resonant drive at omega_p = 2 kappa") {
        p.omega_p = 2.0 * p.kappa;
        CHECK(weak_drive_photon_number(p, {0.0, 0.0}) ==
              doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("figure parameters give a deeply weak drive") {
        // oracle: (0.01/2)^2 / ((-1)^2 + 0.025^2) evaluated independently
        const long double expect =
            (0.01L / 2.0L) * (0.01L / 2.0L) / (1.0L + 0.025L * 0.025L);
        CHECK(static_cast<double>(expect) ==
              doctest::Approx(2.4984384759525297e-05).epsilon(1e-15));
        CHECK(weak_drive_photon_number(p, {0.0, -1.0}) ==
              doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
        CHECK(weak_drive_photon_number(p, {0.0, -1.0}) < 1e-4);
        CHECK(drive_epsilon(p, {0.0, -1.0}) ==
              doctest::Approx(std::sqrt(2.4984384759525297e-05))
                  .epsilon(1e-14));
    }
}

TEST_CASE("dressed states: uncoupled limit") {
    SystemParams p = fig3_right();
    p.g = 0.0;
    const DetuningPoint d{0.7, -2.0};
    const DressedStates ds = dressed_states(p, d);
    CHECK(ds.theta == 0.0);
    // eigenvalues are exactly the two diagonal entries, in some order
    const std::complex<double> atom(-d.delta, -p.gamma / 2.0);
    const std::complex<double> cav(-d.delta_cav, -p.kappa);
    const bool match_a =
        ds.omega_plus == atom && ds.omega_minus == cav;
    const bool match_b =
        ds.omega_plus == cav && ds.omega_minus == atom;
    CHECK((match_a || match_b));
}

TEST_CASE("dressed states: resonant vacuum Rabi splitting") {
    // equal damping of the two block states keeps the splitting purely real
    SystemParams p = fig3_right();
    p.gamma = 0.5;
    p.kappa = p.gamma / 2.0;
    const DetuningPoint d{1.3, 1.3};  // delta_c = 0
    const DressedStates ds = dressed_states(p, d);
    CHECK(ds.theta == doctest::Approx(pi / 4.0).epsilon(1e-15));
    const double split = ds.omega_plus.real() - ds.omega_minus.real();
    const double gc = p.g * std::cos(p.varphi);
    CHECK(split == doctest::Approx(2.0 * gc).epsilon(1e-10));

    // theta = pi/4 at delta_c = 0 regardless of the damping asymmetry
    CHECK(dressed_states(fig3_right(), d).theta ==
          doctest::Approx(pi / 4.0).epsilon(1e-15));
}

TEST_CASE("dressed states match a dense eigensolver on figure parameters") {
    const SystemParams p = fig5_geometry(25.0);
    const DetuningPoint d{0.0, 8.0};
    const DressedStates ds = dressed_states(p, d);

    Eigen::Matrix2cd block;
    const double gc = p.g * std::cos(p.varphi);
    block << std::complex<double>(-d.delta, -p.gamma / 2.0), gc, gc,
        std::complex<double>(-d.delta_cav, -p.kappa);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(block);
    std::complex<double> e0 = es.eigenvalues()(0);
    std::complex<double> e1 = es.eigenvalues()(1);
    if (e0.real() < e1.real()) std::swap(e0, e1);
    CHECK(ds.omega_plus.real() == doctest::Approx(e0.real()).epsilon(1e-12));
    CHECK(ds.omega_plus.imag() == doctest::Approx(e0.imag()).epsilon(1e-12));
    CHECK(ds.omega_minus.real() == doctest::Approx(e1.real()).epsilon(1e-12));
    CHECK(ds.omega_minus.imag() == doctest::Approx(e1.imag()).epsilon(1e-12));

    // decaying states and trace conservation
    CHECK(ds.omega_plus.imag() <= 1e-15);
    CHECK(ds.omega_minus.imag() <= 1e-15);
    const std::complex<double> trace = ds.omega_plus + ds.omega_minus;
    CHECK(trace.real() ==
          doctest::Approx(-d.delta - d.delta_cav).epsilon(1e-12));
    CHECK(trace.imag() ==
          doctest::Approx(-p.gamma / 2.0 - p.kappa).epsilon(1e-12));
}

TEST_CASE("dressed states: equal damping makes both widths gamma/2") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 50; ++i) {
        SystemParams p = fig3_right();
        p.gamma = 2.4;
        p.kappa = p.gamma / 2.0;  // equal damping of the two block states
        p.g = std::abs(u(rng)) + 0.1;
        const DetuningPoint d{u(rng), u(rng)};
        const DressedStates ds = dressed_states(p, d);
        CHECK(ds.omega_plus.imag() ==
              doctest::Approx(-p.gamma / 2.0).epsilon(1e-10));
        CHECK(ds.omega_minus.imag() ==
              doctest::Approx(-p.gamma / 2.0).epsilon(1e-10));
    }
}

TEST_CASE("resonance curve values and pole") {
    const SystemParams p = fig3_right();
    // kappa*gamma*(1+C)/2 = 2 here, so Delta = 1 lands on delta = 0
    CHECK(resonance_curve_delta(p, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)resonance_curve_delta(p, -1.0), PoleAtDetuning);
    // asymptote delta -> -nu for large Delta
    CHECK(resonance_curve_delta(p, 1e9) == doctest::Approx(-1.0));

    // forced zero: strength = nu^2 at Delta = 0 gives delta = 0
    SystemParams q = fig3_right();
    q.g = std::sqrt((1.0 - q.loss_product()) / q.cos2_varphi());
    CHECK(resonance_curve_delta(q, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("interference curve values and pole") {
    const SystemParams p = fig3_right();
    // Fig. 3 right panel at Delta = 0: 0.125*(1-15)/(0-1) = 1.75
    CHECK(interference_curve_delta(p, 0.0) ==
          doctest::Approx(1.75).epsilon(1e-14));
    CHECK_THROWS_AS((void)interference_curve_delta(p, 1.0), PoleAtDetuning);
    CHECK(interference_curve_delta(p, 1e12) ==
          doctest::Approx(0.0).epsilon(1e-6));

    // C = 1 flattens the curve to delta = 0 everywhere (up to rounding of g)
    SystemParams q = fig3_right();
    q.g = std::sqrt(q.loss_product() / q.cos2_varphi());
    CHECK(std::abs(interference_curve_delta(q, 3.7)) < 1e-16);
    CHECK(std::abs(interference_curve_delta(q, -8.1)) < 1e-16);
}

TEST_CASE("curve identities zero the matching brackets to machine precision") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    const SystemParams p = fig3_right();
    const double s_sum = p.loss_product() + p.g2_cos2_varphi();
    const double s_diff = p.loss_product() - p.g2_cos2_varphi();
    int tested = 0;
    while (tested < 100) {
        const double dc = u(rng);
        if (std::abs(dc - 1.0) < 1e-3 || std::abs(dc + 1.0) < 1e-3) continue;
        ++tested;
        // first bracket of f(Delta + nu, delta_c)
        const double delta_res = resonance_curve_delta(p, dc);
        const double bracket_res = (dc + 1.0) * (delta_res + 1.0) - s_sum;
        CHECK(std::abs(bracket_res) <= 1e-12 * std::max(1.0, s_sum));
        // first bracket inside the A_+^(gamma) braces, at Delta - nu
        const double delta_int = interference_curve_delta(p, dc);
        const double bracket_int = (dc - 1.0) * delta_int - s_diff;
        CHECK(std::abs(bracket_int) <=
              1e-12 * std::max(1.0, std::abs(s_diff)));
    }
}

TEST_CASE("regime flags") {
    SystemParams p = fig3_right();
    CHECK(check_regime(p, {0.0, -1.0}, 4.0).weak_drive_ok);
    CHECK(check_regime(p, {0.0, -1.0}, 4.0).lamb_dicke_ok);
    p.omega_p = 10.0;
    CHECK_FALSE(check_regime(p, {0.0, 0.0}, 4.0).weak_drive_ok);
    p.eta = 0.2;
    CHECK_FALSE(check_regime(p, {0.0, 0.0}, 9.0).lamb_dicke_ok);
}

TEST_CASE("parameter validation") {
    SystemParams p = fig3_right();
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = fig3_right();
    p.eta = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_NOTHROW(fig3_right().validate());
}
