#include "latspin/scenario.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latspin/analysis.hpp"

namespace latspin {

namespace {

using nlohmann::json;

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const json& require(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(where) + ": missing required key \"" + key + "\"");
    return *it;
}

SpinStateKind state_kind_from(const std::string& s) {
    if (s == "product") return SpinStateKind::product;
    if (s == "unpolarized") return SpinStateKind::unpolarized;
    if (s == "dimer") return SpinStateKind::dimer;
    if (s == "trimer") return SpinStateKind::trimer;
    throw ConfigError("state: unknown kind \"" + s + "\"");
}

const char* state_kind_name(SpinStateKind kind) {
    switch (kind) {
    case SpinStateKind::product: return "product";
    case SpinStateKind::unpolarized: return "unpolarized";
    case SpinStateKind::dimer: return "dimer";
    case SpinStateKind::trimer: return "trimer";
    }
    return "?";
}

ProtocolKind protocol_kind_from(const std::string& s) {
    if (s == "coherent") return ProtocolKind::coherent;
    if (s == "twophoton-absorption") return ProtocolKind::twophoton_absorption;
    if (s == "centroid-intensity") return ProtocolKind::centroid_intensity;
    if (s == "centroid-amplitude") return ProtocolKind::centroid_amplitude;
    if (s == "correlated-pair") return ProtocolKind::correlated_pair;
    throw ConfigError("protocols: unknown kind \"" + s + "\"");
}

}  // namespace

const char* to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::coherent: return "coherent";
    case ProtocolKind::twophoton_absorption: return "twophoton-absorption";
    case ProtocolKind::centroid_intensity: return "centroid-intensity";
    case ProtocolKind::centroid_amplitude: return "centroid-amplitude";
    case ProtocolKind::correlated_pair: return "correlated-pair";
    }
    return "?";
}

std::string ProtocolSpec::tag() const {
    std::string t = to_string(kind);
    if (kind == ProtocolKind::correlated_pair) t += "-d" + format_short(separation);
    return t;
}

void Scenario::validate() const {
    if (name.empty()) throw ConfigError("scenario: name must not be empty");
    if (protocols.empty()) throw ConfigError("scenario: at least one protocol required");
    state.validate();
    if (state.site_count != lattice.site_count())
        throw ConfigError("scenario: state and lattice site counts differ");
    quadrature.validate();
    if (samples < 3) throw ConfigError("scenario: at least 3 grid samples required");
    if (grid_range && !(grid_range->first < grid_range->second))
        throw ConfigError("scenario: grid range must be increasing");
    for (const auto& p : protocols)
        if (p.kind == ProtocolKind::correlated_pair && !(p.separation > 0.0))
            throw ConfigError("scenario: correlated-pair protocol needs a positive separation");
}

Scenario scenario_from_json(const json& j) {
    try {
        Scenario sc;
        sc.name = require(j, "name", "scenario").get<std::string>();

        const json& jo = require(j, "optics", "scenario");
        sc.optics = OpticsConfig(require(jo, "wavelength", "optics").get<double>(),
                                 require(jo, "numerical_aperture", "optics").get<double>());

        const json& jl = require(j, "lattice", "scenario");
        WannierEnvelope env;
        if (auto it = jl.find("envelope"); it != jl.end()) {
            const std::string kind = require(*it, "kind", "envelope").get<std::string>();
            if (kind == "gaussian")
                env = WannierEnvelope::gaussian(require(*it, "width", "envelope").get<double>());
            else if (kind != "point")
                throw ConfigError("envelope: unknown kind \"" + kind + "\"");
        }
        sc.lattice = LatticeGeometry(require(jl, "sites", "lattice").get<int>(),
                                     require(jl, "spacing", "lattice").get<double>(),
                                     jl.value("center_offset", 0.0), env);

        const json& js = require(j, "state", "scenario");
        const SpinStateKind kind =
            state_kind_from(require(js, "kind", "state").get<std::string>());
        switch (kind) {
        case SpinStateKind::product:
            sc.state = SpinStateSpec::product(require(js, "m", "state").get<std::vector<int>>());
            break;
        case SpinStateKind::unpolarized:
            sc.state = SpinStateSpec::unpolarized(sc.lattice.site_count());
            break;
        case SpinStateKind::dimer:
            sc.state = SpinStateSpec::dimer(sc.lattice.site_count());
            break;
        case SpinStateKind::trimer:
            sc.state = SpinStateSpec::trimer(sc.lattice.site_count());
            break;
        }

        for (const json& jp : require(j, "protocols", "scenario")) {
            ProtocolSpec p;
            p.kind = protocol_kind_from(require(jp, "kind", "protocol").get<std::string>());
            if (p.kind == ProtocolKind::correlated_pair)
                p.separation = require(jp, "separation", "protocol").get<double>();
            sc.protocols.push_back(p);
        }

        if (auto it = j.find("grid"); it != j.end()) {
            sc.samples = it->value("samples", 513);
            if (auto rit = it->find("range"); rit != it->end()) {
                const auto range = rit->get<std::vector<double>>();
                if (range.size() != 2) throw ConfigError("grid: range must hold two numbers");
                sc.grid_range = {range[0], range[1]};
            }
        }
        if (auto it = j.find("quadrature"); it != j.end()) {
            sc.quadrature.panels = it->value("panels", sc.quadrature.panels);
            sc.quadrature.truncation_radius =
                it->value("truncation_radius", sc.quadrature.truncation_radius);
            sc.quadrature.convergence_tol =
                it->value("convergence_tol", sc.quadrature.convergence_tol);
        }
        const std::string norm = j.value("normalization", "max-one");
        if (norm == "raw")
            sc.normalization = Normalization::raw;
        else if (norm == "max-one")
            sc.normalization = Normalization::max_one;
        else
            throw ConfigError("scenario: normalization must be \"raw\" or \"max-one\"");
        sc.output_dir = j.value("output_dir", std::string("out"));

        sc.validate();
        return sc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

json scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["optics"] = {{"wavelength", sc.optics.wavelength()},
                   {"numerical_aperture", sc.optics.numerical_aperture()}};
    json jl = {{"sites", sc.lattice.site_count()},
               {"spacing", sc.lattice.spacing()},
               {"center_offset", sc.lattice.center_offset()}};
    if (sc.lattice.envelope().is_point())
        jl["envelope"] = {{"kind", "point"}};
    else
        jl["envelope"] = {{"kind", "gaussian"}, {"width", sc.lattice.envelope().width}};
    j["lattice"] = jl;
    json js = {{"kind", state_kind_name(sc.state.kind)}};
    if (sc.state.kind == SpinStateKind::product) js["m"] = sc.state.product_m;
    j["state"] = js;
    j["protocols"] = json::array();
    for (const auto& p : sc.protocols) {
        json jp = {{"kind", to_string(p.kind)}};
        if (p.kind == ProtocolKind::correlated_pair) jp["separation"] = p.separation;
        j["protocols"].push_back(jp);
    }
    json jg = {{"samples", sc.samples}};
    if (sc.grid_range) jg["range"] = {sc.grid_range->first, sc.grid_range->second};
    j["grid"] = jg;
    j["quadrature"] = {{"panels", sc.quadrature.panels},
                       {"truncation_radius", sc.quadrature.truncation_radius},
                       {"convergence_tol", sc.quadrature.convergence_tol}};
    j["normalization"] = to_string(sc.normalization);
    j["output_dir"] = sc.output_dir;
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        const std::size_t stop = std::min(text.size(), static_cast<std::size_t>(e.byte));
        for (std::size_t i = 0; i < stop; ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
    }
    return scenario_from_json(j);
}

namespace {

GridRequest grid_for(const Scenario& sc, GridKind kind) {
    GridRequest grid;
    if (sc.grid_range) {
        grid.kind = kind;
        grid.x_min = sc.grid_range->first;
        grid.x_max = sc.grid_range->second;
        grid.samples = sc.samples;
    } else {
        grid = default_grid(sc.lattice, sc.optics, kind, sc.samples);
    }
    return grid;
}

void write_file(const std::filesystem::path& path, const std::string& content,
                RunResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out.good()) throw IoError("write failed: " + path.string());
    result.files_written.push_back(path.string());
}

std::string line_image_text(const ImageGrid& image) {
    std::string text = "# position\tintensity\n";
    for (std::size_t i = 0; i < image.coords.size(); ++i)
        text += format_value(image.coords[i]) + "\t" + format_value(image.values[i]) + "\n";
    return text;
}

std::string plane_image_text(const ImageGrid& image) {
    // header row of x2 coordinates, then one row per x1 with its coordinate
    std::string text = "# rows: x1, columns: x2\n";
    for (std::size_t k = 0; k < image.coords2.size(); ++k)
        text += "\t" + format_value(image.coords2[k]);
    text += "\n";
    for (std::size_t i = 0; i < image.coords.size(); ++i) {
        text += format_value(image.coords[i]);
        for (std::size_t k = 0; k < image.coords2.size(); ++k)
            text += "\t" + format_value(image.at(i, k));
        text += "\n";
    }
    return text;
}

std::string probe_text(const SitePairProbe& probe) {
    std::string text = "# site\tx_left\tx_right\tvalue\tnear_edge\n";
    for (const auto& e : probe.entries) {
        text += std::to_string(e.site) + "\t" + format_value(e.position_left) + "\t" +
                format_value(e.position_right) + "\t" + format_value(e.value) + "\t" +
                (e.near_edge ? "1" : "0") + "\n";
    }
    return text;
}

json analysis_json(const ImageGrid& image, const LatticeGeometry& lattice) {
    json j;
    const int sites = lattice.site_count();
    const int margin = sites >= 8 ? 2 : 1;
    if (sites >= 2 * margin + 2) {
        const auto report = oscillation_report(image, lattice, margin);
        j["edge_margin"] = margin;
        j["visibility"] = report.visibility;
        if (std::isfinite(report.dominant_period))
            j["dominant_period"] = report.dominant_period;
        else
            j["dominant_period"] = nullptr;
        j["window_min"] = report.window_min;
        j["window_max"] = report.window_max;
    }
    json extrema = json::array();
    for (const auto& e : find_extrema(image))
        extrema.push_back({{"position", e.position},
                           {"value", e.value},
                           {"kind", e.kind == ExtremumKind::minimum ? "minimum" : "maximum"}});
    j["extrema"] = extrema;
    return j;
}

SourceProfile source_for(const ProtocolSpec& protocol) {
    switch (protocol.kind) {
    case ProtocolKind::coherent: return SourceProfile::coherent_uniform();
    case ProtocolKind::correlated_pair: return SourceProfile::displaced_pair(protocol.separation);
    default: return SourceProfile::anticorrelated_pair();
    }
}

json metadata_json(const Scenario& sc, const ProtocolSpec& protocol, const ImageGrid& image) {
    json j;
    j["tool"] = "latspin";
    j["version"] = kVersion;
    j["protocol"] = to_string(protocol.kind);
    if (protocol.kind == ProtocolKind::correlated_pair) j["separation"] = protocol.separation;
    j["source"] = to_string(source_for(protocol).kind);
    j["normalization"] = to_string(image.normalization);
    j["peak_value"] = image.peak_value;
    j["grid_kind"] = to_string(image.kind);
    j["scenario"] = scenario_to_json(sc);
    return j;
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
    sc.validate();
    RunResult result;

    if (sc.lattice.overlap_warning())
        result.warnings.push_back(
            "gaussian envelope width exceeds spacing/4; neighboring-site overlap is no longer "
            "negligible");

    std::error_code ec;
    std::filesystem::create_directories(sc.output_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + sc.output_dir);
    const std::filesystem::path dir(sc.output_dir);

    const CorrelationMatrix corr = correlation_matrix(sc.state);

    {
        std::string text = "# site\tposition\tmean_spin\n";
        for (int j = 0; j < sc.lattice.site_count(); ++j)
            text += std::to_string(j + 1) + "\t" + format_value(sc.lattice.site_position(j)) +
                    "\t" + format_value(corr.mean(j)) + "\n";
        write_file(dir / (sc.name + ".sites.dat"), text, result);
    }

    for (const auto& protocol : sc.protocols) {
        const std::string base = sc.name + "." + protocol.tag();
        ImageGrid image;
        switch (protocol.kind) {
        case ProtocolKind::coherent:
            image = coherent_image(corr, sc.lattice, sc.optics, grid_for(sc, GridKind::line),
                                   sc.normalization, sc.quadrature);
            break;
        case ProtocolKind::twophoton_absorption:
            image = two_photon_absorption_image(corr, sc.lattice, sc.optics,
                                                grid_for(sc, GridKind::line), sc.normalization,
                                                sc.quadrature);
            break;
        case ProtocolKind::centroid_intensity:
            image = centroid_intensity_image(corr, sc.lattice, sc.optics,
                                             grid_for(sc, GridKind::centroid), sc.normalization,
                                             sc.quadrature);
            break;
        case ProtocolKind::centroid_amplitude:
            image = centroid_amplitude_image(corr, sc.lattice, sc.optics,
                                             grid_for(sc, GridKind::centroid), sc.normalization,
                                             sc.quadrature);
            break;
        case ProtocolKind::correlated_pair:
            image = correlated_pair_image(corr, sc.lattice, sc.optics, protocol.separation,
                                          grid_for(sc, GridKind::plane), sc.normalization,
                                          sc.quadrature);
            break;
        }

        if (image.kind == GridKind::plane) {
            write_file(dir / (base + ".dat"), plane_image_text(image), result);
            if (separation_steps(sc.lattice, protocol.separation)) {
                const auto probe =
                    site_pair_probe(corr, sc.lattice, sc.optics, protocol.separation,
                                    sc.quadrature);
                if (!probe.resolution_ok)
                    result.warnings.push_back(
                        protocol.tag() + ": two-photon resolution ratio g(a)/g(0) = " +
                        format_short(probe.resolution_ratio) +
                        " exceeds 0.1; site-pair probe values are unreliable");
                write_file(dir / (base + ".probe.dat"), probe_text(probe), result);
            } else {
                result.warnings.push_back(protocol.tag() +
                                          ": separation is not an integer number of lattice "
                                          "spacings; site-pair probe skipped");
            }
        } else {
            write_file(dir / (base + ".dat"), line_image_text(image), result);
            write_file(dir / (base + ".analysis.json"),
                       analysis_json(image, sc.lattice).dump(2) + "\n", result);
        }
        write_file(dir / (base + ".meta.json"), metadata_json(sc, protocol, image).dump(2) + "\n",
                   result);
    }
    return result;
}

namespace {

Scenario base_scenario(const std::string& name, OpticsConfig optics, LatticeGeometry lattice,
                       SpinStateSpec state, const std::string& out_dir) {
    Scenario sc;
    sc.name = name;
    sc.optics = optics;
    sc.lattice = std::move(lattice);
    sc.state = std::move(state);
    sc.output_dir = out_dir;
    return sc;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
    return {
        {"fig2", "M=5 chain, a=0.9, sin(theta)=2/3, m=1 with an m=0 defect at x=-0.45; "
                 "coherent, two-photon absorption, centroid-intensity and centroid-amplitude "
                 "images"},
        {"fig3", "18-site chain, a=0.4, sin(theta)=1/2; coherent and centroid-intensity images "
                 "of the unpolarized, dimer and trimer states"},
        {"fig4", "12-site chain, a=1, sin(theta)=1/2; correlated-pair images (separations a and "
                 "2a) of the unpolarized, dimer and trimer states, with site-pair probe tables"},
    };
}

std::vector<Scenario> preset_scenarios(const std::string& name, const std::string& out_dir) {
    if (name == "fig2") {
        // chain placed so a lattice site carries the defect at x = -0.45;
        // the gaussian envelope reproduces the finite peak widths
        Scenario sc = base_scenario(
            "fig2", OpticsConfig(1.0, 2.0 / 3.0),
            LatticeGeometry(5, 0.9, -0.45, WannierEnvelope::gaussian(0.2)), defect_chain(5, 3),
            out_dir);
        sc.protocols = {{ProtocolKind::coherent, 0.0},
                        {ProtocolKind::twophoton_absorption, 0.0},
                        {ProtocolKind::centroid_intensity, 0.0},
                        {ProtocolKind::centroid_amplitude, 0.0}};
        return {sc};
    }
    if (name == "fig3") {
        std::vector<Scenario> out;
        const OpticsConfig optics(1.0, 0.5);
        for (const auto& [tag, kind] :
             std::vector<std::pair<std::string, SpinStateKind>>{
                 {"unpolarized", SpinStateKind::unpolarized},
                 {"dimer", SpinStateKind::dimer},
                 {"trimer", SpinStateKind::trimer}}) {
            SpinStateSpec state;
            switch (kind) {
            case SpinStateKind::dimer: state = SpinStateSpec::dimer(18); break;
            case SpinStateKind::trimer: state = SpinStateSpec::trimer(18); break;
            default: state = SpinStateSpec::unpolarized(18); break;
            }
            Scenario sc = base_scenario("fig3-" + tag, optics, LatticeGeometry(18, 0.4),
                                        std::move(state), out_dir);
            sc.protocols = {{ProtocolKind::coherent, 0.0},
                            {ProtocolKind::centroid_intensity, 0.0}};
            out.push_back(std::move(sc));
        }
        return out;
    }
    if (name == "fig4") {
        std::vector<Scenario> out;
        const OpticsConfig optics(1.0, 0.5);
        for (const auto& [tag, kind] :
             std::vector<std::pair<std::string, SpinStateKind>>{
                 {"unpolarized", SpinStateKind::unpolarized},
                 {"dimer", SpinStateKind::dimer},
                 {"trimer", SpinStateKind::trimer}}) {
            SpinStateSpec state;
            switch (kind) {
            case SpinStateKind::dimer: state = SpinStateSpec::dimer(12); break;
            case SpinStateKind::trimer: state = SpinStateSpec::trimer(12); break;
            default: state = SpinStateSpec::unpolarized(12); break;
            }
            Scenario sc = base_scenario("fig4-" + tag, optics, LatticeGeometry(12, 1.0),
                                        std::move(state), out_dir);
            sc.protocols = {{ProtocolKind::correlated_pair, 1.0},
                            {ProtocolKind::correlated_pair, 2.0}};
            sc.samples = 201;
            out.push_back(std::move(sc));
        }
        return out;
    }
    throw ConfigError("unknown preset \"" + name + "\"");
}

}  // namespace latspin
