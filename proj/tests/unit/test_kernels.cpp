#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "latspin/kernels.hpp"
#include "latspin/model.hpp"

using namespace latspin;

namespace {

constexpr double pi = std::numbers::pi;

// independent oracle: trapezoid rule at high resolution
template <class F>
double trapezoid(F&& f, double a, double b, int steps) {
    const double h = (b - a) / steps;
    double acc = 0.5 * (f(a) + f(b));
    for (int i = 1; i < steps; ++i) acc += f(a + i * h);
    return acc * h;
}

}  // namespace

TEST_CASE("sinc") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(std::abs(sinc(pi)) < 1e-15);
    CHECK(sinc(pi / 2) == doctest::Approx(2.0 / pi).epsilon(1e-14));
    // series branch joins the trig branch smoothly
    CHECK(sinc(9.9e-9) == doctest::Approx(sinc(1.01e-8)).epsilon(1e-12));
    CHECK(sinc(-0.7) == sinc(0.7));
}

TEST_CASE("simpson sanity") {
    const double value = simpson([](double x) { return std::sin(x); }, 0.0, pi, 128);
    CHECK(value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("quadrature spec validation") {
    CHECK_THROWS_AS((QuadratureSpec{15, 0.0, 1e-8}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((QuadratureSpec{10, 0.0, 1e-8}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((QuadratureSpec{2048, -1.0, 1e-8}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((QuadratureSpec{2048, 0.0, 0.0}).validate(), std::invalid_argument);
    QuadratureSpec quad;
    quad.validate();
    CHECK(quad.resolved_radius(pi) == doctest::Approx(60.0 / pi));
    quad.truncation_radius = 5.0;
    CHECK(quad.resolved_radius(pi) == 5.0);
}

TEST_CASE("point-envelope point spread functions") {
    const OpticsConfig optics(1.0, 2.0 / 3.0);
    const LatticeGeometry lattice(2, 0.9);
    const double kappa = optics.band_limit();

    CHECK(amplitude_psf(0.0, lattice, optics) == 1.0);
    CHECK(std::abs(amplitude_psf(pi / kappa, lattice, optics)) < 1e-15);
    CHECK(two_photon_psf(0.0, lattice, optics) == 1.0);
    CHECK(std::abs(two_photon_psf(pi / kappa, lattice, optics)) < 1e-15);
    CHECK(two_photon_psf(pi / (2 * kappa), lattice, optics) ==
          doctest::Approx(4.0 / (pi * pi)).epsilon(1e-12));
}

TEST_CASE("gaussian point spread functions") {
    const OpticsConfig optics(1.0, 2.0 / 3.0);
    const double sigma = 0.05;
    const LatticeGeometry lattice(2, 0.9, 0.0, WannierEnvelope::gaussian(sigma));
    const double kappa = optics.band_limit();

    // against an independent high-resolution trapezoid oracle
    const auto env = lattice.envelope();
    for (double x : {0.0, 0.3, 0.75, 1.4}) {
        const double oracle = trapezoid(
            [&](double s) { return env.density(s) * sinc(kappa * (x - s)); }, -8 * sigma,
            8 * sigma, 20480);
        CHECK(amplitude_psf(x, lattice, optics) == doctest::Approx(oracle).epsilon(1e-9));
    }

    // smoothing lowers the peak; the point limit is recovered as sigma -> 0
    CHECK(amplitude_psf(0.0, lattice, optics) < 1.0);
    const LatticeGeometry narrow(2, 0.9, 0.0, WannierEnvelope::gaussian(1e-4));
    CHECK(amplitude_psf(0.0, narrow, optics) == doctest::Approx(1.0).epsilon(1e-6));

    // even in x
    for (double x : {0.2, 0.9, 1.7})
        CHECK(std::abs(amplitude_psf(x, lattice, optics) - amplitude_psf(-x, lattice, optics)) <
              1e-12);

    // squared-sinc kernel never goes negative
    for (double x = 0.0; x < 3.0; x += 0.17)
        CHECK(two_photon_psf(x, lattice, optics) >= 0.0);
}

TEST_CASE("psf quadrature non-convergence is reported") {
    QuadratureSpec coarse;
    coarse.panels = 16;
    coarse.convergence_tol = 1e-12;
    const OpticsConfig optics(1.0, 1.0);
    const LatticeGeometry wide(2, 4.0, 0.0, WannierEnvelope::gaussian(1.0));
    CHECK_THROWS_AS(amplitude_psf(0.3, wide, optics, coarse), NonConvergenceError);
}

TEST_CASE("centroid kernel") {
    const OpticsConfig optics(1.0, 0.5);  // kappa = pi
    const double kappa = optics.band_limit();

    // quartic-sinc integral at coincident arguments
    const double k0 = centroid_kernel(0.0, 0.0, 0.0, optics);
    CHECK(k0 == doctest::Approx(2.0 * pi / (3.0 * kappa)).epsilon(3e-6));

    // independent high-resolution trapezoid oracle, wider truncation
    const double oracle = trapezoid(
        [&](double xi) {
            const double s = sinc(kappa * xi);
            return s * s * s * s;
        },
        -200.0 / kappa, 200.0 / kappa, 400000);
    CHECK(k0 == doctest::Approx(oracle).epsilon(1e-6));

    // argument swap and translation invariance
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    for (int i = 0; i < 5; ++i) {
        const double X = pos(rng), x = pos(rng), xp = pos(rng), shift = pos(rng);
        const double k = centroid_kernel(X, x, xp, optics);
        CHECK(centroid_kernel(X, xp, x, optics) == doctest::Approx(k).epsilon(1e-13));
        CHECK(centroid_kernel(X + shift, x + shift, xp + shift, optics) ==
              doctest::Approx(k).epsilon(1e-9));
    }
}

TEST_CASE("centroid kernel panel doubling") {
    const OpticsConfig optics(1.0, 0.5);
    QuadratureSpec base, doubled;
    doubled.panels = 2 * base.panels;
    const double scale = 2.0 * pi / (3.0 * optics.band_limit());
    for (const auto& [X, x, xp] :
         {std::array{0.0, 0.0, 0.0}, std::array{0.3, -0.2, 0.5}, std::array{1.7, 0.4, -0.9}}) {
        const double coarse = centroid_kernel(X, x, xp, optics, base);
        const double fine = centroid_kernel(X, x, xp, optics, doubled);
        CHECK(std::abs(fine - coarse) < 1e-8 * scale);
    }
}

TEST_CASE("sinc convolution identity") {
    // paper value case: b = pi, y = z = 0 gives LHS = pi/b
    CHECK(sinc_identity_residual(pi, 0.0, 0.0) < 1e-6 * (pi / pi));

    // zero of the right-hand side: b (y + z) = pi
    CHECK(sinc_identity_residual(pi, 0.5, 0.5) < 1e-6 * (pi / pi));

    // random draws (the acceptance suite runs the full 100)
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> b_draw(pi / 2, 2 * pi);
    std::uniform_real_distribution<double> yz(-2.0, 2.0);
    for (int i = 0; i < 25; ++i) {
        const double b = b_draw(rng);
        CHECK(sinc_identity_residual(b, yz(rng), yz(rng)) < 1e-6 * (pi / b));
    }

    CHECK_THROWS_AS(sinc_identity_residual(0.0, 0.0, 0.0), std::invalid_argument);
}
