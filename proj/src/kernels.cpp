#include "latspin/kernels.hpp"

#include <algorithm>
#include <numbers>

namespace latspin {

namespace {

constexpr double kIdentityRadiusFactor = 600.0;  // Xi' = 600/b
constexpr int kIdentityMinPanels = 65536;

// sinc(c + tau) from precomputed sin/cos of tau, falling back to the series
// at the removable singularity
inline double sinc_shifted(double c, double sin_c, double cos_c, double tau, double sin_tau,
                           double cos_tau) {
    const double u = c + tau;
    if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return (sin_c * cos_tau + cos_c * sin_tau) / u;
}

double gaussian_smoothed(double x, const WannierEnvelope& envelope, double kappa, bool squared,
                         const QuadratureSpec& quad) {
    const double sigma = envelope.width;
    const auto integrand = [&](double s) {
        const double v = sinc(kappa * (x - s));
        return envelope.density(s) * (squared ? v * v : v);
    };
    const double lo = -8.0 * sigma, hi = 8.0 * sigma;
    const double coarse = simpson(integrand, lo, hi, quad.panels);
    const double fine = simpson(integrand, lo, hi, 2 * quad.panels);
    const double scale = std::max(1.0, std::abs(fine));
    if (std::abs(fine - coarse) > quad.convergence_tol * scale)
        throw NonConvergenceError("envelope_psf: panel doubling moved the result by more than tol");
    return fine;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (panels < 16 || panels % 2 != 0)
        throw std::invalid_argument("QuadratureSpec: panels must be even and at least 16");
    if (truncation_radius < 0.0)
        throw std::invalid_argument("QuadratureSpec: truncation radius must not be negative");
    if (!(convergence_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: convergence tolerance must be positive");
}

double QuadratureSpec::resolved_radius(double band_limit) const {
    if (truncation_radius > 0.0) return truncation_radius;
    return 60.0 / band_limit;
}

double envelope_psf(double x, const WannierEnvelope& envelope, double kappa, bool squared,
                    const QuadratureSpec& quad) {
    quad.validate();
    if (envelope.is_point()) {
        const double v = sinc(kappa * x);
        return squared ? v * v : v;
    }
    return gaussian_smoothed(x, envelope, kappa, squared, quad);
}

double amplitude_psf(double x, const LatticeGeometry& lattice, const OpticsConfig& optics,
                     const QuadratureSpec& quad) {
    return envelope_psf(x, lattice.envelope(), optics.band_limit(), false, quad);
}

double two_photon_psf(double x, const LatticeGeometry& lattice, const OpticsConfig& optics,
                      const QuadratureSpec& quad) {
    return envelope_psf(x, lattice.envelope(), optics.band_limit(), true, quad);
}

CentroidQuadrature::CentroidQuadrature(double band_limit, const QuadratureSpec& quad)
    : kappa_(band_limit) {
    quad.validate();
    if (!(band_limit > 0.0))
        throw std::invalid_argument("CentroidQuadrature: band limit must be positive");
    const double radius = quad.resolved_radius(band_limit);
    const int n = quad.panels;
    const double h = 2.0 * radius / n;
    tau_.resize(n + 1);
    sin_tau_.resize(n + 1);
    cos_tau_.resize(n + 1);
    weight_.resize(n + 1);
    for (int t = 0; t <= n; ++t) {
        const double xi = -radius + t * h;
        tau_[t] = kappa_ * xi;
        sin_tau_[t] = std::sin(tau_[t]);
        cos_tau_[t] = std::cos(tau_[t]);
        weight_[t] = (t == 0 || t == n) ? 1.0 : (t % 2 == 1 ? 4.0 : 2.0);
        weight_[t] *= h / 3.0;
    }
}

void CentroidQuadrature::pair_profile(double offset, std::span<double> p) const {
    const double c = kappa_ * offset;
    const double sin_c = std::sin(c);
    const double cos_c = std::cos(c);
    const std::size_t n = tau_.size();
    for (std::size_t t = 0; t < n; ++t) {
        const double plus = sinc_shifted(c, sin_c, cos_c, tau_[t], sin_tau_[t], cos_tau_[t]);
        const double minus = sinc_shifted(c, sin_c, cos_c, -tau_[t], -sin_tau_[t], cos_tau_[t]);
        p[t] = plus * minus;
    }
}

void CentroidQuadrature::smoothed_pair_profile(double offset, const WannierEnvelope& envelope,
                                               std::span<double> p) const {
    if (envelope.is_point()) {
        pair_profile(offset, p);
        return;
    }
    const double sigma = envelope.width;
    const int env_panels = 64;
    const double lo = -8.0 * sigma;
    const double h = 16.0 * sigma / env_panels;
    std::fill(p.begin(), p.end(), 0.0);
    std::vector<double> slice(tau_.size());
    for (int e = 0; e <= env_panels; ++e) {
        const double s = lo + e * h;
        double w = (e == 0 || e == env_panels) ? 1.0 : (e % 2 == 1 ? 4.0 : 2.0);
        w *= h / 3.0 * envelope.density(s);
        pair_profile(offset - s, slice);
        for (std::size_t t = 0; t < slice.size(); ++t) p[t] += w * slice[t];
    }
}

double CentroidQuadrature::weighted_dot(std::span<const double> p, std::span<const double> q) const {
    double acc = 0.0;
    const std::size_t n = weight_.size();
    for (std::size_t t = 0; t < n; ++t) acc += weight_[t] * p[t] * q[t];
    return acc;
}

double centroid_kernel(double X, double x, double xp, const OpticsConfig& optics,
                       const QuadratureSpec& quad) {
    const CentroidQuadrature cq(optics.band_limit(), quad);
    std::vector<double> p(cq.node_count()), q(cq.node_count());
    cq.pair_profile(X - x, p);
    cq.pair_profile(X - xp, q);
    return cq.weighted_dot(p, q);
}

double sinc_identity_residual(double b, double y, double z, const QuadratureSpec& quad) {
    quad.validate();
    if (!(b > 0.0))
        throw std::invalid_argument("sinc_identity_residual: b must be positive");
    const double radius = kIdentityRadiusFactor / b;
    const int panels = std::max(quad.panels, kIdentityMinPanels);
    const double lhs_core = simpson(
        [&](double x) { return sinc(b * (x + y)) * sinc(b * (z - x)); }, -radius, radius, panels);

    // tail of the non-oscillating component cos(b(y+z)) / (2 b^2 (x+y)(x-z))
    const double s = y + z;
    double log_term;
    if (std::abs(s) > 1e-8) {
        log_term = (std::log((radius + y) / (radius - z)) +
                    std::log((radius + z) / (radius - y))) / s;
    } else {
        log_term = 2.0 / radius + 2.0 * (y * y - y * z + z * z) / (3.0 * radius * radius * radius);
    }
    const double tail = std::cos(b * s) / (2.0 * b * b) * log_term;

    const double rhs = std::numbers::pi / b * sinc(b * s);
    return std::abs(lhs_core + tail - rhs);
}

}  // namespace latspin
