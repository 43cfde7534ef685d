#include "latspin/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latspin {

namespace {

constexpr double kNegativityTol = 1e-9;

struct MomentTerm {
    int j;
    int r;
    double weight;  // moment * (1 or 2, off-diagonal symmetry folded in)
};

// Nonzero upper-triangle terms of the quadratic form
std::vector<MomentTerm> sparse_moments(const CorrelationMatrix& corr) {
    std::vector<MomentTerm> terms;
    const int n = corr.site_count();
    for (int j = 0; j < n; ++j)
        for (int r = j; r < n; ++r) {
            const double m = corr.moment(j, r);
            if (m != 0.0) terms.push_back({j, r, j == r ? m : 2.0 * m});
        }
    return terms;
}

void check_dimensions(const CorrelationMatrix& corr, const LatticeGeometry& lattice) {
    if (corr.site_count() != lattice.site_count())
        throw std::invalid_argument("imaging: correlation matrix and lattice site counts differ");
}

void require_kind(const GridRequest& grid, GridKind kind, const char* op) {
    if (grid.kind != kind)
        throw std::invalid_argument(std::string(op) + ": grid kind mismatch");
}

// Positivity guard for intensity values: tiny negative round-off is clamped,
// anything beyond the tolerance means a broken moment matrix.
void clamp_intensity(std::vector<double>& values, const char* op) {
    double max_abs = 1.0;
    for (double v : values) max_abs = std::max(max_abs, std::abs(v));
    const double floor = -kNegativityTol * max_abs;
    for (double& v : values) {
        if (v < floor)
            throw std::logic_error(std::string(op) + ": intensity fell below the positivity bound");
        if (v < 0.0) v = 0.0;
    }
}

ImageGrid finalize_line(GridKind kind, std::vector<double> coords, std::vector<double> values,
                        Normalization norm, const char* op) {
    clamp_intensity(values, op);
    ImageGrid image;
    image.kind = kind;
    image.coords = std::move(coords);
    image.values = std::move(values);
    image.peak_value = image.values.empty()
                           ? 0.0
                           : *std::max_element(image.values.begin(), image.values.end());
    if (norm == Normalization::max_one) normalize_max_one(image);
    return image;
}

// Quadratic-form line image over a per-site kernel column
template <class KernelFn>
std::vector<double> quadratic_line(const std::vector<double>& coords,
                                   const std::vector<double>& positions,
                                   const std::vector<MomentTerm>& terms, KernelFn&& kernel) {
    const std::size_t n_sites = positions.size();
    std::vector<double> column(n_sites);
    std::vector<double> values(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (std::size_t j = 0; j < n_sites; ++j) column[j] = kernel(coords[i] - positions[j]);
        double acc = 0.0;
        for (const auto& t : terms) acc += t.weight * column[t.j] * column[t.r];
        values[i] = acc;
    }
    return values;
}

}  // namespace

void GridRequest::validate() const {
    if (!(x_min < x_max))
        throw std::invalid_argument("GridRequest: x_min must be below x_max");
    if (samples < 3)
        throw std::invalid_argument("GridRequest: at least 3 samples required");
}

std::vector<double> GridRequest::coordinates() const {
    validate();
    std::vector<double> x(static_cast<std::size_t>(samples));
    const double h = (x_max - x_min) / (samples - 1);
    for (int i = 0; i < samples; ++i) x[static_cast<std::size_t>(i)] = x_min + i * h;
    return x;
}

GridRequest default_grid(const LatticeGeometry& lattice, const OpticsConfig& optics,
                         GridKind kind, int samples) {
    const double pad = 2.0 * optics.wavelength();
    GridRequest grid;
    grid.kind = kind;
    grid.x_min = lattice.site_position(0) - pad;
    grid.x_max = lattice.site_position(lattice.site_count() - 1) + pad;
    grid.samples = samples;
    return grid;
}

ImageGrid coherent_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                         const OpticsConfig& optics, const GridRequest& grid, Normalization norm,
                         const QuadratureSpec& quad) {
    check_dimensions(corr, lattice);
    require_kind(grid, GridKind::line, "coherent_image");
    const auto coords = grid.coordinates();
    const auto terms = sparse_moments(corr);
    auto values = quadratic_line(coords, lattice.site_positions(), terms, [&](double u) {
        return envelope_psf(u, lattice.envelope(), optics.band_limit(), false, quad);
    });
    return finalize_line(GridKind::line, coords, std::move(values), norm, "coherent_image");
}

ImageGrid two_photon_absorption_image(const CorrelationMatrix& corr,
                                      const LatticeGeometry& lattice, const OpticsConfig& optics,
                                      const GridRequest& grid, Normalization norm,
                                      const QuadratureSpec& quad) {
    check_dimensions(corr, lattice);
    require_kind(grid, GridKind::line, "two_photon_absorption_image");
    const auto coords = grid.coordinates();
    const auto terms = sparse_moments(corr);
    auto values = quadratic_line(coords, lattice.site_positions(), terms, [&](double u) {
        return envelope_psf(u, lattice.envelope(), optics.band_limit(), true, quad);
    });
    return finalize_line(GridKind::line, coords, std::move(values), norm,
                         "two_photon_absorption_image");
}

namespace {

double centroid_point(const CentroidQuadrature& cq, const LatticeGeometry& lattice, double X,
                      const std::vector<double>& positions, const std::vector<MomentTerm>& terms,
                      std::vector<double>& profiles) {
    const std::size_t nodes = static_cast<std::size_t>(cq.node_count());
    const std::size_t n_sites = positions.size();
    profiles.resize(n_sites * nodes);
    for (std::size_t j = 0; j < n_sites; ++j)
        cq.smoothed_pair_profile(X - positions[j], lattice.envelope(),
                                 {profiles.data() + j * nodes, nodes});
    double acc = 0.0;
    for (const auto& t : terms)
        acc += t.weight *
               cq.weighted_dot({profiles.data() + static_cast<std::size_t>(t.j) * nodes, nodes},
                               {profiles.data() + static_cast<std::size_t>(t.r) * nodes, nodes});
    return acc;
}

}  // namespace

ImageGrid centroid_intensity_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                   const OpticsConfig& optics, const GridRequest& grid,
                                   Normalization norm, const QuadratureSpec& quad) {
    check_dimensions(corr, lattice);
    require_kind(grid, GridKind::centroid, "centroid_intensity_image");
    const auto coords = grid.coordinates();
    const auto positions = lattice.site_positions();
    const auto terms = sparse_moments(corr);

    const CentroidQuadrature cq(optics.band_limit(), quad);
    std::vector<double> profiles;
    std::vector<double> values(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        values[i] = centroid_point(cq, lattice, coords[i], positions, terms, profiles);

    // one panel-doubling probe at the strongest grid point stands in for a
    // per-point convergence check
    std::size_t probe = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i]) > std::abs(values[probe])) probe = i;
    if (values[probe] != 0.0) {
        QuadratureSpec doubled = quad;
        doubled.panels *= 2;
        const CentroidQuadrature cq2(optics.band_limit(), doubled);
        const double fine = centroid_point(cq2, lattice, coords[probe], positions, terms,
                                           profiles);
        const double scale = std::max(1.0, std::abs(values[probe]));
        if (std::abs(fine - values[probe]) > quad.convergence_tol * scale)
            throw NonConvergenceError(
                "centroid_intensity_image: centroid kernel quadrature did not converge");
    }

    return finalize_line(GridKind::centroid, coords, std::move(values), norm,
                         "centroid_intensity_image");
}

ImageGrid centroid_amplitude_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                   const OpticsConfig& optics, const GridRequest& grid,
                                   Normalization norm, const QuadratureSpec& quad) {
    check_dimensions(corr, lattice);
    require_kind(grid, GridKind::centroid, "centroid_amplitude_image");
    const auto coords = grid.coordinates();
    const auto positions = lattice.site_positions();
    const double kappa2 = 2.0 * optics.band_limit();
    const auto& means = corr.means();

    std::vector<double> values(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        double amp = 0.0;
        for (std::size_t j = 0; j < positions.size(); ++j) {
            if (means[j] == 0.0) continue;
            amp += means[j] * envelope_psf(coords[i] - positions[j], lattice.envelope(), kappa2,
                                           false, quad);
        }
        values[i] = amp * amp;
    }
    return finalize_line(GridKind::centroid, coords, std::move(values), norm,
                         "centroid_amplitude_image");
}

namespace {

// Per-site amplitude of the displaced-pair image: the four indistinguishable
// sinc-product paths through site j,
//   h_j(x1, x2) = A1 (B2 + C2) + A2 (B1 + C1)
// with A = sinc(k(x - x_j)), B = sinc(k(x - x_j - d)), C = sinc(k(x - x_j + d)).
// Both sincs of a path share the site argument, so the envelope integral runs
// over the whole product: each site expands into weighted envelope sub-sites.
struct PairKernelTables {
    std::size_t n_sites = 0;
    std::size_t env_nodes = 1;          // 1 for a point envelope
    std::vector<double> env_weight;     // env_nodes
    std::vector<double> a, b, c;        // (coords x sub-sites), row-major

    double h(std::size_t i1, std::size_t i2, std::size_t j) const {
        const std::size_t n_sub = n_sites * env_nodes;
        double acc = 0.0;
        for (std::size_t e = 0; e < env_nodes; ++e) {
            const std::size_t k1 = i1 * n_sub + j * env_nodes + e;
            const std::size_t k2 = i2 * n_sub + j * env_nodes + e;
            acc += env_weight[e] * (a[k1] * (b[k2] + c[k2]) + a[k2] * (b[k1] + c[k1]));
        }
        return acc;
    }
};

constexpr int kEnvelopePanels = 64;

// envelope sample offsets and Simpson weights (a single unit node for point)
void envelope_nodes(const WannierEnvelope& envelope, int panels, std::vector<double>& offsets,
                    std::vector<double>& weights) {
    if (envelope.is_point()) {
        offsets = {0.0};
        weights = {1.0};
        return;
    }
    const double sigma = envelope.width;
    const double lo = -8.0 * sigma;
    const double h = 16.0 * sigma / panels;
    offsets.resize(panels + 1);
    weights.resize(panels + 1);
    for (int e = 0; e <= panels; ++e) {
        offsets[e] = lo + e * h;
        double w = (e == 0 || e == panels) ? 1.0 : (e % 2 == 1 ? 4.0 : 2.0);
        weights[e] = w * h / 3.0 * envelope.density(offsets[e]);
    }
}

PairKernelTables pair_tables(const std::vector<double>& coords,
                             const std::vector<double>& positions,
                             const LatticeGeometry& lattice, const OpticsConfig& optics,
                             double separation, int env_panels = kEnvelopePanels) {
    std::vector<double> offsets, weights;
    envelope_nodes(lattice.envelope(), env_panels, offsets, weights);

    PairKernelTables t;
    t.n_sites = positions.size();
    t.env_nodes = offsets.size();
    t.env_weight = weights;
    const std::size_t n_sub = t.n_sites * t.env_nodes;
    t.a.resize(coords.size() * n_sub);
    t.b.resize(coords.size() * n_sub);
    t.c.resize(coords.size() * n_sub);
    const double kappa = optics.band_limit();
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = 0; j < t.n_sites; ++j)
            for (std::size_t e = 0; e < t.env_nodes; ++e) {
                const double u = coords[i] - positions[j] - offsets[e];
                const std::size_t k = i * n_sub + j * t.env_nodes + e;
                t.a[k] = sinc(kappa * u);
                t.b[k] = sinc(kappa * (u - separation));
                t.c[k] = sinc(kappa * (u + separation));
            }
    return t;
}

}  // namespace

ImageGrid correlated_pair_image(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                const OpticsConfig& optics, double separation,
                                const GridRequest& grid, Normalization norm,
                                const QuadratureSpec& quad) {
    check_dimensions(corr, lattice);
    require_kind(grid, GridKind::plane, "correlated_pair_image");
    if (!(separation > 0.0))
        throw std::invalid_argument("correlated_pair_image: separation must be positive");
    const auto coords = grid.coordinates();
    const auto positions = lattice.site_positions();
    const auto terms = sparse_moments(corr);
    const auto tables = pair_tables(coords, positions, lattice, optics, separation);

    const std::size_t n = coords.size();
    std::vector<double> values(n * n);
    std::vector<double> column(positions.size());
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            for (std::size_t j = 0; j < positions.size(); ++j) column[j] = tables.h(i1, i2, j);
            double acc = 0.0;
            for (const auto& t : terms) acc += t.weight * column[t.j] * column[t.r];
            values[i1 * n + i2] = acc;
        }

    // envelope-refinement probe at the strongest point (gaussian only)
    if (!lattice.envelope().is_point()) {
        std::size_t peak = 0;
        for (std::size_t k = 1; k < values.size(); ++k)
            if (std::abs(values[k]) > std::abs(values[peak])) peak = k;
        const std::vector<double> point = {coords[peak / n], coords[peak % n]};
        const auto fine_tables =
            pair_tables(point, positions, lattice, optics, separation, 2 * kEnvelopePanels);
        for (std::size_t j = 0; j < positions.size(); ++j) column[j] = fine_tables.h(0, 1, j);
        double fine = 0.0;
        for (const auto& t : terms) fine += t.weight * column[t.j] * column[t.r];
        const double scale = std::max(1.0, std::abs(values[peak]));
        if (std::abs(fine - values[peak]) > quad.convergence_tol * scale)
            throw NonConvergenceError(
                "correlated_pair_image: envelope quadrature did not converge");
    }
    clamp_intensity(values, "correlated_pair_image");

    ImageGrid image;
    image.kind = GridKind::plane;
    image.coords = coords;
    image.coords2 = coords;
    image.values = std::move(values);
    image.peak_value = image.values.empty()
                           ? 0.0
                           : *std::max_element(image.values.begin(), image.values.end());
    if (norm == Normalization::max_one) normalize_max_one(image);
    return image;
}

double correlated_pair_intensity(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                                 const OpticsConfig& optics, double separation, double x1,
                                 double x2, const QuadratureSpec& quad) {
    check_dimensions(corr, lattice);
    quad.validate();
    if (!(separation > 0.0))
        throw std::invalid_argument("correlated_pair_intensity: separation must be positive");
    const std::vector<double> coords = {x1, x2};
    const auto tables =
        pair_tables(coords, lattice.site_positions(), lattice, optics, separation);
    const auto terms = sparse_moments(corr);
    std::vector<double> column(static_cast<std::size_t>(corr.site_count()));
    for (std::size_t j = 0; j < column.size(); ++j) column[j] = tables.h(0, 1, j);
    double acc = 0.0;
    for (const auto& t : terms) acc += t.weight * column[t.j] * column[t.r];
    return std::max(acc, 0.0);
}

std::optional<int> separation_steps(const LatticeGeometry& lattice, double separation) {
    const double steps = separation / lattice.spacing();
    const double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)))
        return std::nullopt;
    return static_cast<int>(rounded);
}

SitePairProbe site_pair_probe(const CorrelationMatrix& corr, const LatticeGeometry& lattice,
                              const OpticsConfig& optics, double separation,
                              const QuadratureSpec& quad) {
    check_dimensions(corr, lattice);
    const auto steps = separation_steps(lattice, separation);
    if (!steps)
        throw std::invalid_argument(
            "site_pair_probe: separation must be a positive integer number of lattice spacings");
    const int s = *steps;
    const int n = corr.site_count();
    if (s >= n)
        throw std::invalid_argument("site_pair_probe: probe step reaches past the chain");

    SitePairProbe probe;
    probe.step = s;
    probe.separation = separation;
    const double g0 = two_photon_psf(0.0, lattice, optics, quad);
    const double ga = two_photon_psf(lattice.spacing(), lattice, optics, quad);
    probe.resolution_ratio = ga / g0;
    probe.resolution_ok = probe.resolution_ratio <= 0.1;

    for (int j = 0; j + s < n; ++j) {
        ProbeEntry entry;
        entry.site = j + 1;
        entry.position_left = lattice.site_position(j);
        entry.position_right = lattice.site_position(j + s);
        entry.value = corr.moment(j, j) + corr.moment(j + s, j + s) + 2.0 * corr.moment(j, j + s);
        entry.near_edge = (j < s) || (j + 2 * s >= n);
        probe.entries.push_back(entry);
    }
    return probe;
}

}  // namespace latspin
