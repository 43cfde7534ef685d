#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latspin/scenario.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 numerical non-convergence, 4 I/O
constexpr int kExitConfig = 2;
constexpr int kExitNumerics = 3;
constexpr int kExitIo = 4;

struct Overrides {
    std::optional<int> panels;
    std::optional<int> samples;
    std::optional<std::string> normalization;
};

void apply(const Overrides& ov, latspin::Scenario& sc) {
    if (ov.panels) sc.quadrature.panels = *ov.panels;
    if (ov.samples) sc.samples = *ov.samples;
    if (ov.normalization) {
        if (*ov.normalization == "raw")
            sc.normalization = latspin::Normalization::raw;
        else if (*ov.normalization == "max-one")
            sc.normalization = latspin::Normalization::max_one;
        else
            throw latspin::ConfigError("--normalization must be raw or max-one");
    }
}

int run_all(std::vector<latspin::Scenario> scenarios, const Overrides& ov) {
    for (auto& sc : scenarios) {
        apply(ov, sc);
        const auto result = latspin::run_scenario(sc);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& f : result.files_written) std::cout << f << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latspin: diffraction-limited images of spin chains in optical lattices"};
    app.require_subcommand(1);

    Overrides ov;
    app.add_option("--panels", ov.panels, "override quadrature panel count");
    app.add_option("--samples", ov.samples, "override grid sample count");
    app.add_option("--normalization", ov.normalization, "raw or max-one");

    std::string config_path;
    auto* run = app.add_subcommand("run", "run a scenario config file");
    run->add_option("config", config_path, "JSON scenario file")->required();

    std::string preset_name;
    std::string out_dir = "out";
    auto* preset = app.add_subcommand("preset", "run a built-in preset");
    preset->add_option("name", preset_name, "preset name (see list-presets)")->required();
    preset->add_option("--out", out_dir, "output directory");

    auto* list = app.add_subcommand("list-presets", "list built-in presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& info : latspin::list_presets())
                std::cout << info.name << "\t" << info.description << "\n";
            return 0;
        }
        if (run->parsed())
            return run_all({latspin::load_scenario(config_path)}, ov);
        return run_all(latspin::preset_scenarios(preset_name, out_dir), ov);
    } catch (const latspin::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const latspin::NonConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerics;
    } catch (const latspin::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
