#ifndef LATSPIN_ANALYSIS_HPP
#define LATSPIN_ANALYSIS_HPP

#include <optional>
#include <span>
#include <vector>

#include "latspin/imaging.hpp"
#include "latspin/model.hpp"
#include "latspin/states.hpp"

namespace latspin {

enum class ExtremumKind { minimum, maximum };

struct Extremum {
    double position;
    double value;
    ExtremumKind kind;
};

/// Interior local extrema of a line/centroid image by three-point
/// comparison; plateaus are reported at their midpoint.
std::vector<Extremum> find_extrema(const ImageGrid& image);

struct OscillationReport {
    double visibility;       // (max - min) / (max + min) over the window
    double dominant_period;  // infinity when the window carries no oscillation
    std::vector<Extremum> extrema;
    double window_min;
    double window_max;
};

/// Visibility and dominant spatial period over the interior window
/// (edge_margin sites dropped from each chain end). The period comes from
/// the peak of the zero-padded DFT magnitude of the mean-subtracted window,
/// refined by parabolic interpolation.
OscillationReport oscillation_report(const ImageGrid& image, const LatticeGeometry& lattice,
                                     int edge_margin = 2);

enum class ScanProtocol { coherent, centroid_intensity };

struct ScanPoint {
    double spacing;
    double visibility;
};

/// Visibility-vs-spacing curve at fixed site count for a dimer, trimer or
/// unpolarized chain under the given protocol.
std::vector<ScanPoint> resolvability_scan(SpinStateKind state, ScanProtocol protocol,
                                          const OpticsConfig& optics,
                                          std::span<const double> spacings, int site_count = 18,
                                          const QuadratureSpec& quad = {}, int edge_margin = 2,
                                          int samples = 513);

/// Largest spacing at which the curve crosses up through the threshold
/// (linear interpolation between the bracketing scan points); nullopt when
/// the curve never crosses.
std::optional<double> threshold_crossing(std::span<const ScanPoint> scan,
                                         double threshold = 0.05);

/// Loose monotonicity through the threshold region: walking from the
/// largest spacing down until visibility first drops below the threshold,
/// no step may increase visibility by more than `slack`.
bool descending_to_threshold_monotone(std::span<const ScanPoint> scan, double threshold = 0.05,
                                      double slack = 0.02);

}  // namespace latspin

#endif
