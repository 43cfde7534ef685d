#ifndef LATSPIN_MODEL_HPP
#define LATSPIN_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace latspin {

/// Probe optics: wavelength sets the unit of every length in the program,
/// the numerical aperture sin(theta) sets the transverse band limit.
class OpticsConfig {
public:
    OpticsConfig() : OpticsConfig(1.0, 1.0) {}
    OpticsConfig(double wavelength, double numerical_aperture);

    double wavelength() const { return wavelength_; }
    double numerical_aperture() const { return numerical_aperture_; }

    /// k = 2*pi/lambda
    double wavenumber() const;
    /// kappa_l = k*sin(theta), the highest transverse wavenumber the
    /// imaging system passes (Rayleigh-Abbe limit)
    double band_limit() const;

private:
    double wavelength_;
    double numerical_aperture_;
};

enum class EnvelopeKind { point, gaussian };

/// On-site density envelope |w(x)|^2. "point" collapses every envelope
/// integral to a kernel evaluation at the site; "gaussian" is a unit-mass
/// normal density of the given width.
struct WannierEnvelope {
    EnvelopeKind kind = EnvelopeKind::point;
    double width = 0.0;  // sigma, gaussian only

    static WannierEnvelope point() { return {}; }
    static WannierEnvelope gaussian(double sigma);

    bool is_point() const { return kind == EnvelopeKind::point; }
    /// |w(x)|^2 at displacement x from the site (gaussian only)
    double density(double x) const;
};

/// Uniform 1-D chain of lattice sites.
/// Site j (1-based in the docs, 0-based here) sits at
/// center_offset + (j - (M-1)/2) * spacing.
class LatticeGeometry {
public:
    LatticeGeometry() : LatticeGeometry(1, 1.0) {}
    LatticeGeometry(int site_count, double spacing, double center_offset = 0.0,
                    WannierEnvelope envelope = {});

    int site_count() const { return site_count_; }
    double spacing() const { return spacing_; }
    double center_offset() const { return center_offset_; }
    const WannierEnvelope& envelope() const { return envelope_; }

    double site_position(int j) const;  // 0-based
    std::vector<double> site_positions() const;

    /// true when a gaussian envelope is wide enough (sigma > spacing/4)
    /// that the negligible-overlap assumption starts to break down
    bool overlap_warning() const;

private:
    int site_count_;
    double spacing_;
    double center_offset_;
    WannierEnvelope envelope_;
};

enum class GridKind { line, plane, centroid };
enum class Normalization { raw, max_one };

/// Sampled image. Line and centroid images use coords/values 1:1; plane
/// images are row-major over (coords, coords2).
struct ImageGrid {
    GridKind kind = GridKind::line;
    std::vector<double> coords;
    std::vector<double> coords2;  // plane only
    std::vector<double> values;
    Normalization normalization = Normalization::raw;
    double peak_value = 1.0;  // max before max-one scaling

    double at(std::size_t i) const { return values[i]; }
    double at(std::size_t i, std::size_t j) const { return values[i * coords2.size() + j]; }

    void validate() const;
};

/// Divide out the maximum (no-op on an all-zero image); records the peak.
void normalize_max_one(ImageGrid& image);

enum class SourceKind { coherent_uniform, anticorrelated_pair, displaced_pair };

/// Initial photon state of a protocol. The pair kinds carry the two-photon
/// spatial correlation psi_i(x, x') used by the two-photon protocols.
struct SourceProfile {
    SourceKind kind = SourceKind::coherent_uniform;
    double separation = 0.0;  // d, displaced_pair only

    static SourceProfile coherent_uniform() { return {}; }
    static SourceProfile anticorrelated_pair() { return {SourceKind::anticorrelated_pair, 0.0}; }
    static SourceProfile displaced_pair(double d);

    /// psi_i(x1, x2): (kappa/pi) sinc(kappa (x1-x2)) for the anticorrelated
    /// pair, (kappa/sqrt(2 pi)) [sinc(kappa (x1-x2-d)) + sinc(kappa (x1-x2+d))]
    /// for the displaced pair. Pair kinds only.
    double pair_correlation(double x1, double x2, const OpticsConfig& optics) const;
};

const char* to_string(GridKind kind);
const char* to_string(Normalization mode);
const char* to_string(SourceKind kind);
const char* to_string(EnvelopeKind kind);

}  // namespace latspin

#endif
