#ifndef LATSPIN_KERNELS_HPP
#define LATSPIN_KERNELS_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "latspin/model.hpp"

namespace latspin {

/// Thrown when doubling the panel count moves a quadrature result by more
/// than the configured tolerance.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Composite-Simpson settings shared by every numeric integral.
struct QuadratureSpec {
    int panels = 2048;               // even, >= 16
    double truncation_radius = 0.0;  // <= 0: use 60 / band_limit
    double convergence_tol = 1e-8;   // relative, on panel doubling

    void validate() const;
    /// truncation radius for infinite-domain integrals at this band limit
    double resolved_radius(double band_limit) const;
};

/// sin(u)/u with the removable singularity handled (|u| < 1e-8 -> 1 - u^2/6)
inline double sinc(double u) {
    if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

/// Composite Simpson rule over [a, b] with an even panel count.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < panels; i += 2) odd += f(a + i * h);
    for (int i = 2; i < panels; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

/// Envelope-smoothed point-spread function
///   integral |w(x')|^2 sinc(kappa (x - x'))   (squared = false)
///   integral |w(x')|^2 sinc^2(kappa (x - x')) (squared = true)
/// Point envelopes collapse to sinc / sinc^2 at x. Gaussian envelopes are
/// integrated over [-8 sigma, 8 sigma] with a panel-doubling check.
double envelope_psf(double x, const WannierEnvelope& envelope, double kappa, bool squared,
                    const QuadratureSpec& quad = {});

/// Coherent amplitude PSF f(x) for a site of the given lattice
double amplitude_psf(double x, const LatticeGeometry& lattice, const OpticsConfig& optics,
                     const QuadratureSpec& quad = {});

/// Squared-sinc (two-photon path) PSF g(x)
double two_photon_psf(double x, const LatticeGeometry& lattice, const OpticsConfig& optics,
                      const QuadratureSpec& quad = {});

/// Precomputed xi-grid for the centroid kernel integral: nodes, Simpson
/// weights and trig tables so that per-site profiles need no transcendental
/// calls. Stateless after construction; safe to share across threads.
class CentroidQuadrature {
public:
    CentroidQuadrature(double band_limit, const QuadratureSpec& quad = {});

    int node_count() const { return static_cast<int>(tau_.size()); }
    double band_limit() const { return kappa_; }

    /// p[t] = sinc(c + tau_t) sinc(c - tau_t) with c = kappa * offset,
    /// the two-sided pair profile of one site at centroid offset X - x_j
    void pair_profile(double offset, std::span<double> p) const;

    /// profile smoothed over a gaussian site envelope
    void smoothed_pair_profile(double offset, const WannierEnvelope& envelope,
                               std::span<double> p) const;

    /// Simpson-weighted dot product over the xi grid
    double weighted_dot(std::span<const double> p, std::span<const double> q) const;

private:
    double kappa_;
    std::vector<double> tau_;      // kappa * xi_t
    std::vector<double> sin_tau_;
    std::vector<double> cos_tau_;
    std::vector<double> weight_;   // Simpson weights in xi, scaled by h/3
};

/// Centroid kernel of the two-photon intensity distribution,
///   K(X, x, x') = integral d(xi) sinc(k(X+xi-x)) sinc(k(X-xi-x))
///                                sinc(k(X+xi-x')) sinc(k(X-xi-x'))
/// truncated at the spec radius (integrand decays like xi^-4).
double centroid_kernel(double X, double x, double xp, const OpticsConfig& optics,
                       const QuadratureSpec& quad = {});

/// Self-test of the quadrature engine against the closed form
///   integral dx sinc(b(x+y)) sinc(b(z-x)) = (pi/b) sinc(b(y+z)).
/// Returns |numeric LHS - analytic RHS|. The numeric side truncates at
/// 600/b and adds the closed-form tail of the non-oscillating 1/x^2
/// component; plain truncation converges far too slowly for the 1e-6
/// tolerance this check is held to.
double sinc_identity_residual(double b, double y, double z, const QuadratureSpec& quad = {});

}  // namespace latspin

#endif
