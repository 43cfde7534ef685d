#ifndef LATSPIN_IMAGING_HPP
#define LATSPIN_IMAGING_HPP

#include <optional>
#include <vector>

#include "latspin/kernels.hpp"
#include "latspin/model.hpp"
#include "latspin/states.hpp"

namespace latspin {

/// Requested sample grid for an imaging protocol.
struct GridRequest {
    GridKind kind = GridKind::line;
    double x_min = -1.0;
    double x_max = 1.0;
    int samples = 513;

    void validate() const;
    std::vector<double> coordinates() const;
};

/// Lattice extent padded by two wavelengths per side.
GridRequest default_grid(const LatticeGeometry& lattice, const OpticsConfig& optics,
                         GridKind kind = GridKind::line, int samples = 513);

/// Coherent image, Sum_{j,r} <rho_j rho_r> f(x-x_j) f(x-x_r)
ImageGrid coherent_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                         const OpticsConfig& optics, const GridRequest& grid,
                         Normalization norm = Normalization::max_one,
                         const QuadratureSpec& quad = {});

/// Coincident-point two-photon absorption image for the anticorrelated pair
/// source: same quadratic form with the squared-sinc PSF g
ImageGrid two_photon_absorption_image(const CorrelationMatrix& corr,
                                      const LatticeGeometry& lattice, const OpticsConfig& optics,
                                      const GridRequest& grid,
                                      Normalization norm = Normalization::max_one,
                                      const QuadratureSpec& quad = {});

/// Centroid distribution of the two-photon intensity,
/// C(X) = Sum_{j,r} <rho_j rho_r> K(X, x_j, x_r) with the site arguments
/// smoothed by the envelope
ImageGrid centroid_intensity_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                   const OpticsConfig& optics, const GridRequest& grid,
                                   Normalization norm = Normalization::max_one,
                                   const QuadratureSpec& quad = {});

/// Centroid of the two-photon amplitude,
/// A(X) = |Sum_j <rho_j> f2(X-x_j)|^2 with f2 the PSF at doubled band limit
ImageGrid centroid_amplitude_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                   const OpticsConfig& optics, const GridRequest& grid,
                                   Normalization norm = Normalization::max_one,
                                   const QuadratureSpec& quad = {});

/// Two-photon intensity over the detector plane for a source pair displaced
/// by `separation`; symmetric under (x1, x2) swap
ImageGrid correlated_pair_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                const OpticsConfig& optics, double separation,
                                const GridRequest& grid,
                                Normalization norm = Normalization::max_one,
                                const QuadratureSpec& quad = {});

/// Point evaluation of the correlated-pair intensity (raw scale)
double correlated_pair_intensity(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                 const OpticsConfig& optics, double separation, double x1,
                                 double x2, const QuadratureSpec& quad = {});

struct ProbeEntry {
    int site;              // 1-based left site of the pair
    double position_left;
    double position_right;
    double value;          // <(rho_j + rho_{j+s})^2>
    bool near_edge;        // pair within one probe step of a chain end
};

struct SitePairProbe {
    int step;                 // separation in lattice sites
    double separation;
    double resolution_ratio;  // g(spacing)/g(0); > 0.1 flags poor resolution
    bool resolution_ok;
    std::vector<ProbeEntry> entries;
};

/// Dominant-term approximation of the correlated-pair image at site pairs
/// (x_j, x_{j+s}); requires the separation to be an integer number of
/// lattice spacings
SitePairProbe site_pair_probe(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                              const OpticsConfig& optics, double separation,
                              const QuadratureSpec& quad = {});

/// Number of lattice steps in `separation`, or nullopt when it is not an
/// integer multiple of the spacing (site-pair probe interpretation lost)
std::optional<int> separation_steps(const LatticeGeometry& lattice, double separation);

}  // namespace latspin

#endif
