#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "swarm3d/harness.hpp"

namespace {

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    // "a..b" inclusive, or a comma-separated list.
    std::vector<std::uint64_t> seeds;
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        std::uint64_t a = std::stoull(text.substr(0, dots));
        std::uint64_t b = std::stoull(text.substr(dots + 2));
        if (b < a) throw std::invalid_argument("--seeds: range end before start");
        for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
        return seeds;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
    if (seeds.empty()) throw std::invalid_argument("--seeds: empty");
    return seeds;
}

s3d::Region parse_region(const std::string& text) {
    // "x0,y0,z0:x1,y1,z1"
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("region: expected x0,y0,z0:x1,y1,z1");
    auto parse3 = [](const std::string& s) {
        double v[3];
        if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v[0], &v[1], &v[2]) != 3)
            throw std::invalid_argument("region: expected three comma-separated numbers");
        return s3d::Vec3{v[0], v[1], v[2]};
    };
    s3d::Region r{parse3(text.substr(0, colon)), parse3(text.substr(colon + 1))};
    r.validate();
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swarm3d: decentralized 3D coverage, search and formation simulations"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", run_name = "run", seeds_text = "1..10";
    std::string preset_name, region_text = "0,0,0:10,10,10", kind_text = "truncated_octahedron";
    std::uint64_t seed_override = 0;
    bool have_seed_override = false, strict = false, list_presets = false;
    double r_s = 1.0;

    auto* run_cmd = app.add_subcommand("run", "run one scenario from a config file");
    run_cmd->add_option("config", config_path, "scenario JSON")->required();
    run_cmd->add_option("--out-dir", out_dir, "output directory");
    run_cmd->add_option("--name", run_name, "output base name");
    run_cmd->add_option("--seed", seed_override, "override config seed")
        ->each([&](const std::string&) { have_seed_override = true; });
    run_cmd->add_flag("--strict", strict, "exit nonzero when the run hits the horizon");

    auto* batch_cmd = app.add_subcommand("batch", "run a config over a seed list");
    batch_cmd->add_option("config", config_path, "scenario JSON")->required();
    batch_cmd->add_option("--seeds", seeds_text, "a..b or comma list")->required();
    batch_cmd->add_option("--out-dir", out_dir, "output directory");
    batch_cmd->add_option("--name", run_name, "output base name");

    auto* preset_cmd = app.add_subcommand("preset", "run a named experiment preset");
    preset_cmd->add_option("name", preset_name, "preset name");
    preset_cmd->add_option("--seed", seed_override, "seed for scenario presets")
        ->each([&](const std::string&) { have_seed_override = true; });
    preset_cmd->add_option("--out-dir", out_dir, "output directory");
    preset_cmd->add_flag("--list", list_presets, "list preset names");
    preset_cmd->add_flag("--strict", strict, "exit nonzero when the run hits the horizon");

    auto* grid_cmd = app.add_subcommand("grid-stats", "covering-grid statistics for a region");
    grid_cmd->add_option("kind", kind_text, "lattice kind")->required();
    grid_cmd->add_option("region", region_text, "x0,y0,z0:x1,y1,z1")->required();
    grid_cmd->add_option("--rs", r_s, "sensing radius, m");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            s3d::ScenarioConfig config = s3d::load_scenario(config_path);
            if (have_seed_override) config.seed = seed_override;
            s3d::RunOutput out = s3d::run_scenario(config);
            s3d::write_outputs(out, out_dir, run_name);
            for (const std::string& w : out.metrics.warnings)
                std::cerr << "warning: " << w << "\n";
            std::cout << "steps_to_stop=" << out.metrics.steps_to_stop
                      << " stop_reason=" << out.metrics.stop_reason << "\n";
            if (strict && out.metrics.stop_reason == "horizon") return 2;
            return 0;
        }
        if (*batch_cmd) {
            s3d::ScenarioConfig config = s3d::load_scenario(config_path);
            s3d::BatchSummary summary =
                s3d::batch_run(config, parse_seed_range(seeds_text));
            std::filesystem::create_directories(out_dir);
            std::ofstream f(out_dir + "/" + run_name + "_batch.csv", std::ios::binary);
            f << s3d::batch_to_csv(summary);
            std::cout << "median=" << summary.median_steps << " mean=" << summary.mean_steps
                      << " iqr=" << summary.iqr_steps << " completed=" << summary.completed
                      << "/" << summary.seeds.size() << "\n";
            return 0;
        }
        if (*preset_cmd) {
            if (list_presets || preset_name.empty()) {
                for (const std::string& n : s3d::preset_names()) std::cout << n << "\n";
                return 0;
            }
            std::filesystem::create_directories(out_dir);
            if (s3d::is_table_preset(preset_name)) {
                std::string csv = s3d::run_table_preset(preset_name);
                std::ofstream f(out_dir + "/" + preset_name + ".csv", std::ios::binary);
                f << csv;
                std::cout << csv;
                return 0;
            }
            std::uint64_t seed = have_seed_override ? seed_override : 1;
            s3d::ScenarioConfig config = s3d::preset_scenario(preset_name, seed);
            s3d::RunOutput out = s3d::run_scenario(config);
            s3d::write_outputs(out, out_dir, preset_name);
            for (const std::string& w : out.metrics.warnings)
                std::cerr << "warning: " << w << "\n";
            std::cout << "steps_to_stop=" << out.metrics.steps_to_stop
                      << " stop_reason=" << out.metrics.stop_reason << "\n";
            if (strict && out.metrics.stop_reason == "horizon") return 2;
            return 0;
        }
        if (*grid_cmd) {
            s3d::LatticeKind kind = s3d::lattice_kind_from_string(kind_text);
            s3d::Region region = parse_region(region_text);
            s3d::LatticeSpec spec{kind, region.center(), r_s};
            auto keys = s3d::covering_keys(spec, region);
            std::printf("lattice=%s\n", s3d::to_string(kind));
            std::printf("vertices=%zu\n", keys.size());
            std::printf("volumetric_quotient=%.4f\n", s3d::volumetric_quotient(kind));
            std::printf("min_connectivity_ratio=%.4f\n", s3d::min_connectivity_ratio(kind));
            std::printf("cell_volume_m3=%.4f\n", s3d::cell_volume(kind, r_s));
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
