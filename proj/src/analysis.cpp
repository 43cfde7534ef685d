#include "latspin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace latspin {

std::vector<Extremum> find_extrema(const ImageGrid& image) {
    if (image.kind == GridKind::plane)
        throw std::invalid_argument("find_extrema: line or centroid images only");
    const auto& x = image.coords;
    const auto& v = image.values;
    if (v.size() < 5)
        throw std::invalid_argument("find_extrema: at least 5 samples required");

    std::vector<Extremum> out;
    std::size_t i = 1;
    while (i + 1 < v.size()) {
        if (v[i] == v[i - 1]) {
            ++i;
            continue;
        }
        // plateau run [i, k] of equal values
        std::size_t k = i;
        while (k + 1 < v.size() && v[k + 1] == v[i]) ++k;
        if (k + 1 >= v.size()) break;
        const double before = v[i - 1], inside = v[i], after = v[k + 1];
        const double pos = 0.5 * (x[i] + x[k]);
        if (inside > before && inside > after)
            out.push_back({pos, inside, ExtremumKind::maximum});
        else if (inside < before && inside < after)
            out.push_back({pos, inside, ExtremumKind::minimum});
        i = k + 1;
    }
    return out;
}

namespace {

// Magnitude of the zero-padded DFT of the mean-subtracted window; the peak
// bin plus parabolic refinement gives the dominant period.
double dominant_period_of(const std::vector<double>& window, double dx) {
    const std::size_t n = window.size();
    double mean = 0.0;
    for (double v : window) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> centered(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        centered[i] = window[i] - mean;
        scale = std::max(scale, std::abs(centered[i]));
    }
    if (scale < 1e-14 * std::max(1.0, std::abs(mean)))
        return std::numeric_limits<double>::infinity();

    std::size_t padded = 1;
    while (padded < n) padded *= 2;
    padded *= 8;

    const std::size_t bins = padded / 2;
    std::vector<double> magnitude(bins + 1, 0.0);
    for (std::size_t k = 1; k <= bins; ++k) {
        const double theta = -2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(padded);
        const std::complex<double> step(std::cos(theta), std::sin(theta));
        std::complex<double> phase(1.0, 0.0), acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            acc += centered[t] * phase;
            phase *= step;
        }
        magnitude[k] = std::abs(acc);
    }

    std::size_t peak = 1;
    for (std::size_t k = 2; k <= bins; ++k)
        if (magnitude[k] > magnitude[peak]) peak = k;

    double refined = static_cast<double>(peak);
    if (peak > 1 && peak < bins) {
        const double a = magnitude[peak - 1], b = magnitude[peak], c = magnitude[peak + 1];
        const double denom = a - 2.0 * b + c;
        if (denom != 0.0) refined += 0.5 * (a - c) / denom;
    }
    return static_cast<double>(padded) * dx / refined;
}

}  // namespace

OscillationReport oscillation_report(const ImageGrid& image, const LatticeGeometry& lattice,
                                     int edge_margin) {
    if (image.kind == GridKind::plane)
        throw std::invalid_argument("oscillation_report: line or centroid images only");
    if (edge_margin < 1)
        throw std::invalid_argument("oscillation_report: edge margin must be at least 1");
    if (2 * edge_margin >= lattice.site_count())
        throw std::invalid_argument("oscillation_report: margin swallows the whole chain");

    const double lo = lattice.site_position(edge_margin);
    const double hi = lattice.site_position(lattice.site_count() - 1 - edge_margin);

    std::vector<double> window;
    double dx = 0.0, prev_coord = 0.0;
    for (std::size_t i = 0; i < image.coords.size(); ++i) {
        if (image.coords[i] < lo || image.coords[i] > hi) continue;
        if (!window.empty() && dx == 0.0) dx = image.coords[i] - prev_coord;
        prev_coord = image.coords[i];
        window.push_back(image.values[i]);
    }
    if (window.size() < 8)
        throw std::invalid_argument("oscillation_report: window too small after margin removal");

    OscillationReport report;
    report.window_min = *std::min_element(window.begin(), window.end());
    report.window_max = *std::max_element(window.begin(), window.end());
    const double denom = report.window_max + report.window_min;
    report.visibility = denom > 0.0 ? (report.window_max - report.window_min) / denom : 0.0;
    report.dominant_period = dominant_period_of(window, dx);
    report.extrema = find_extrema(image);
    return report;
}

std::vector<ScanPoint> resolvability_scan(SpinStateKind state, ScanProtocol protocol,
                                          const OpticsConfig& optics,
                                          std::span<const double> spacings, int site_count,
                                          const QuadratureSpec& quad, int edge_margin,
                                          int samples) {
    if (state == SpinStateKind::product)
        throw std::invalid_argument("resolvability_scan: product states need explicit m values");
    SpinStateSpec spec;
    switch (state) {
    case SpinStateKind::dimer: spec = SpinStateSpec::dimer(site_count); break;
    case SpinStateKind::trimer: spec = SpinStateSpec::trimer(site_count); break;
    default: spec = SpinStateSpec::unpolarized(site_count); break;
    }
    const CorrelationMatrix corr = correlation_matrix(spec);

    std::vector<ScanPoint> scan;
    scan.reserve(spacings.size());
    for (double a : spacings) {
        if (!(a > 0.0))
            throw std::invalid_argument("resolvability_scan: spacings must be positive");
        const LatticeGeometry lattice(site_count, a);
        ImageGrid image;
        if (protocol == ScanProtocol::coherent) {
            const auto grid = default_grid(lattice, optics, GridKind::line, samples);
            image = coherent_image(corr, lattice, optics, grid, Normalization::max_one, quad);
        } else {
            const auto grid = default_grid(lattice, optics, GridKind::centroid, samples);
            image = centroid_intensity_image(corr, lattice, optics, grid, Normalization::max_one,
                                             quad);
        }
        scan.push_back({a, oscillation_report(image, lattice, edge_margin).visibility});
    }
    return scan;
}

std::optional<double> threshold_crossing(std::span<const ScanPoint> scan, double threshold) {
    std::vector<ScanPoint> sorted(scan.begin(), scan.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ScanPoint& a, const ScanPoint& b) { return a.spacing < b.spacing; });
    std::optional<double> crossing;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i].visibility < threshold && sorted[i + 1].visibility >= threshold) {
            const double t = (threshold - sorted[i].visibility) /
                             (sorted[i + 1].visibility - sorted[i].visibility);
            crossing = sorted[i].spacing + t * (sorted[i + 1].spacing - sorted[i].spacing);
        }
    }
    return crossing;
}

bool descending_to_threshold_monotone(std::span<const ScanPoint> scan, double threshold,
                                      double slack) {
    std::vector<ScanPoint> sorted(scan.begin(), scan.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ScanPoint& a, const ScanPoint& b) { return a.spacing > b.spacing; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i].visibility < threshold) break;  // crossed into the unresolvable region
        if (sorted[i + 1].visibility > sorted[i].visibility + slack) return false;
    }
    return true;
}

}  // namespace latspin
