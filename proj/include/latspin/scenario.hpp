#ifndef LATSPIN_SCENARIO_HPP
#define LATSPIN_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latspin/imaging.hpp"
#include "latspin/model.hpp"
#include "latspin/states.hpp"

namespace latspin {

inline constexpr const char* kVersion = "0.1.0";

/// Config-file or preset validation problem; the CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failed file write; the CLI maps this to exit 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProtocolKind {
    coherent,
    twophoton_absorption,
    centroid_intensity,
    centroid_amplitude,
    correlated_pair
};

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::coherent;
    double separation = 0.0;  // correlated_pair only

    std::string tag() const;  // file-name component
};

/// One batch imaging run: a lattice, a spin state, and a list of protocols
/// to image it with.
struct Scenario {
    std::string name = "scenario";
    OpticsConfig optics;
    LatticeGeometry lattice;
    SpinStateSpec state;
    std::vector<ProtocolSpec> protocols;
    std::optional<std::pair<double, double>> grid_range;  // default: padded extent
    int samples = 513;
    QuadratureSpec quadrature;
    Normalization normalization = Normalization::max_one;
    std::string output_dir = "out";

    void validate() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Parse a config file; parse errors carry a line-anchored message.
Scenario load_scenario(const std::string& path);

struct RunResult {
    std::vector<std::string> files_written;
    std::vector<std::string> warnings;
};

/// Run every protocol of the scenario and emit data, metadata and analysis
/// files under scenario.output_dir. Deterministic: the same scenario yields
/// byte-identical data files.
RunResult run_scenario(const Scenario& scenario);

struct PresetInfo {
    std::string name;
    std::string description;
};

std::vector<PresetInfo> list_presets();

/// Scenarios behind a preset name (fig2, fig3, fig4), targeted at out_dir.
std::vector<Scenario> preset_scenarios(const std::string& name, const std::string& out_dir);

const char* to_string(ProtocolKind kind);

}  // namespace latspin

#endif
