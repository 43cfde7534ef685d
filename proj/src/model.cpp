#include "latspin/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latspin/kernels.hpp"

namespace latspin {

OpticsConfig::OpticsConfig(double wavelength, double numerical_aperture)
    : wavelength_(wavelength), numerical_aperture_(numerical_aperture) {
    if (!(wavelength > 0.0))
        throw std::invalid_argument("OpticsConfig: wavelength must be positive");
    if (!(numerical_aperture > 0.0) || numerical_aperture > 1.0)
        throw std::invalid_argument("OpticsConfig: numerical aperture must be in (0, 1]");
}

double OpticsConfig::wavenumber() const {
    return 2.0 * std::numbers::pi / wavelength_;
}

double OpticsConfig::band_limit() const {
    return wavenumber() * numerical_aperture_;
}

WannierEnvelope WannierEnvelope::gaussian(double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("WannierEnvelope: gaussian width must be positive");
    return {EnvelopeKind::gaussian, sigma};
}

double WannierEnvelope::density(double x) const {
    if (kind == EnvelopeKind::point)
        throw std::logic_error("WannierEnvelope::density called on a point envelope");
    const double s = x / width;
    return std::exp(-0.5 * s * s) / (width * std::sqrt(2.0 * std::numbers::pi));
}

LatticeGeometry::LatticeGeometry(int site_count, double spacing, double center_offset,
                                 WannierEnvelope envelope)
    : site_count_(site_count), spacing_(spacing), center_offset_(center_offset),
      envelope_(envelope) {
    if (site_count < 1)
        throw std::invalid_argument("LatticeGeometry: site count must be at least 1");
    if (!(spacing > 0.0))
        throw std::invalid_argument("LatticeGeometry: spacing must be positive");
    if (envelope.kind == EnvelopeKind::gaussian && !(envelope.width > 0.0))
        throw std::invalid_argument("LatticeGeometry: gaussian envelope needs a positive width");
}

double LatticeGeometry::site_position(int j) const {
    if (j < 0 || j >= site_count_)
        throw std::out_of_range("LatticeGeometry: site index out of range");
    return center_offset_ + (j - 0.5 * (site_count_ - 1)) * spacing_;
}

std::vector<double> LatticeGeometry::site_positions() const {
    std::vector<double> pos(static_cast<std::size_t>(site_count_));
    for (int j = 0; j < site_count_; ++j)
        pos[static_cast<std::size_t>(j)] = site_position(j);
    return pos;
}

bool LatticeGeometry::overlap_warning() const {
    return envelope_.kind == EnvelopeKind::gaussian && envelope_.width > 0.25 * spacing_;
}

void ImageGrid::validate() const {
    const std::size_t expected = kind == GridKind::plane
                                     ? coords.size() * coords2.size()
                                     : coords.size();
    if (values.size() != expected)
        throw std::invalid_argument("ImageGrid: value count does not match the grid");
    for (double v : values)
        if (v < 0.0)
            throw std::invalid_argument("ImageGrid: intensity values must be nonnegative");
    if (normalization == Normalization::max_one && !values.empty()) {
        const double peak = *std::max_element(values.begin(), values.end());
        if (peak != 0.0 && std::abs(peak - 1.0) > 1e-12)
            throw std::invalid_argument("ImageGrid: max-one image does not peak at 1");
    }
}

void normalize_max_one(ImageGrid& image) {
    if (image.values.empty()) return;
    const double peak = *std::max_element(image.values.begin(), image.values.end());
    image.peak_value = peak;
    if (peak > 0.0)
        for (double& v : image.values) v /= peak;
    image.normalization = Normalization::max_one;
}

SourceProfile SourceProfile::displaced_pair(double d) {
    if (!(d > 0.0))
        throw std::invalid_argument("SourceProfile: pair separation must be positive");
    return {SourceKind::displaced_pair, d};
}

double SourceProfile::pair_correlation(double x1, double x2, const OpticsConfig& optics) const {
    const double kappa = optics.band_limit();
    const double u = x1 - x2;
    switch (kind) {
    case SourceKind::anticorrelated_pair:
        return kappa / std::numbers::pi * sinc(kappa * u);
    case SourceKind::displaced_pair:
        return kappa / std::sqrt(2.0 * std::numbers::pi) *
               (sinc(kappa * (u - separation)) + sinc(kappa * (u + separation)));
    case SourceKind::coherent_uniform:
        break;
    }
    throw std::logic_error("SourceProfile: pair correlation is defined for pair sources only");
}

const char* to_string(GridKind kind) {
    switch (kind) {
    case GridKind::line: return "line";
    case GridKind::plane: return "plane";
    case GridKind::centroid: return "centroid";
    }
    return "?";
}

const char* to_string(Normalization mode) {
    return mode == Normalization::raw ? "raw" : "max-one";
}

const char* to_string(SourceKind kind) {
    switch (kind) {
    case SourceKind::coherent_uniform: return "coherent-uniform";
    case SourceKind::anticorrelated_pair: return "anticorrelated-pair";
    case SourceKind::displaced_pair: return "displaced-pair";
    }
    return "?";
}

const char* to_string(EnvelopeKind kind) {
    return kind == EnvelopeKind::point ? "point" : "gaussian";
}

}  // namespace latspin
