#include <cmath>
#include <sstream>

#include "swarm3d/coverage.hpp"
#include "swarm3d/harness.hpp"

namespace s3d {

namespace {

int covering_count(LatticeKind kind, const Region& region, double r_s) {
    LatticeSpec spec{kind, region.center(), r_s};
    return static_cast<int>(covering_keys(spec, region).size());
}

ScenarioConfig coverage_preset(LatticeKind kind, std::uint64_t seed) {
    // Shared physical region (4 truncated-octahedron cells per axis) so grids
    // with fewer vertices need fewer agents and fewer steps.
    ScenarioConfig c;
    c.mode = Mode::coverage;
    c.lattice = kind;
    c.r_s_m = 1.0;
    c.r_c_m = 2.0;
    c.region = region_of_cells(LatticeKind::truncated_octahedron, 4, c.r_s_m);
    c.n_agents = covering_count(kind, c.region, c.r_s_m);
    c.consensus_phase = false;
    c.horizon_ticks = 10000;
    c.seed = seed;
    return c;
}

ScenarioConfig search_styles_base(std::uint64_t seed) {
    ScenarioConfig c;
    c.mode = Mode::search;
    c.lattice = LatticeKind::truncated_octahedron;
    c.r_s_m = 1.0;
    c.r_c_m = 2.0;
    c.region = region_of_cells(LatticeKind::truncated_octahedron, 8, c.r_s_m);
    c.n_agents = 3;
    c.stop_rule = SearchStopRule::all_targets_found;
    c.targets.placement = TargetsSpec::Placement::cluster;
    c.targets.count = 3;
    c.targets.cluster_radius_m = 1.5;
    c.levy = {2.0, 0.0};  // l_min: one lattice neighbor spacing
    c.normal_sigma_m = 3.0 * min_neighbor_spacing(c.lattice) * c.r_s_m;
    c.horizon_ticks = 500000;
    c.seed = seed;
    return c;
}

ScenarioConfig formation_base(std::uint64_t seed) {
    ScenarioConfig c;
    c.mode = Mode::formation;
    c.r_s_m = 1.0;
    c.r_c_m = 100.0;
    c.region = {{-2000, -2000, -2000}, {4000, 2000, 2000}};  // travel space, x grows
    c.seed = seed;
    FormationPart f;
    f.config.c0 = 10.0;
    f.config.v_min = 2.0;
    f.config.v_max = 8.0;
    f.config.u_max = 2.0;
    f.config.epoch_n = 10;
    f.config.lambda_vac = 20.0;
    f.config.ts = 0.01;
    f.t_end_s = 200.0;
    f.init_box_m = {{0, 0, 0}, {50, 50, 50}};
    f.trajectory_stride = 10;
    c.formation = f;
    c.n_agents = 1;  // overwritten below
    return c;
}

void set_offsets(ScenarioConfig& c, std::vector<Vec3> offsets,
                 std::vector<std::pair<int, int>> adjacency) {
    c.formation->config.offsets = std::move(offsets);
    c.formation->config.adjacency = std::move(adjacency);
    c.n_agents = static_cast<int>(c.formation->config.offsets.size());
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"coverage-to",      "coverage-cube",   "coverage-demo",
            "shape-sphere",     "shape-torus",     "search-neighbor",
            "search-levy-grid", "moving-target",   "formation-tetrahedron",
            "formation-edge6",  "formation-anonymous6",
            // table presets
            "vq-table", "grid-comparison", "search-styles", "sensors-vs-time"};
}

bool is_table_preset(const std::string& name) {
    return name == "vq-table" || name == "grid-comparison" || name == "search-styles" ||
           name == "sensors-vs-time";
}

ScenarioConfig preset_scenario(const std::string& name, std::uint64_t seed) {
    if (name == "coverage-to")
        return coverage_preset(LatticeKind::truncated_octahedron, seed);
    if (name == "coverage-cube") return coverage_preset(LatticeKind::cube, seed);
    if (name == "coverage-demo") {
        // Full pipeline: consensus + snap, then random spread.
        ScenarioConfig c;
        c.mode = Mode::coverage;
        c.lattice = LatticeKind::truncated_octahedron;
        c.r_s_m = 1.0;
        c.r_c_m = 3.0;
        c.region = region_of_cells(c.lattice, 3, c.r_s_m);
        c.n_agents =
            covering_count(c.lattice, c.region, c.r_s_m) + 10;  // spare agents
        c.consensus_phase = true;
        c.horizon_ticks = 10000;
        c.seed = seed;
        return c;
    }
    if (name == "shape-sphere" || name == "shape-torus") {
        ScenarioConfig c;
        c.mode = Mode::shape;
        c.lattice = LatticeKind::truncated_octahedron;
        c.r_s_m = 1.0;
        c.r_c_m = 3.0;
        c.region = {{0, 0, 0}, {10, 10, 10}};
        c.shape_center_m = c.region.center();
        if (name == "shape-sphere")
            c.shape = Sphere{3.2};
        else
            c.shape = Torus{1.2, 3.0};
        c.consensus_phase = false;
        LatticeSpec spec{c.lattice, c.region.center(), c.r_s_m};
        int inside = 0;
        for (const Vec3& v : covering_set(spec, c.region))
            if (shape_contains(*c.shape, v - c.shape_center_m)) ++inside;
        c.n_agents = inside;
        c.horizon_ticks = 10000;
        c.seed = seed;
        return c;
    }
    if (name == "search-neighbor") {
        ScenarioConfig c;
        c.mode = Mode::search;
        c.lattice = LatticeKind::truncated_octahedron;
        c.r_s_m = 1.0;
        c.r_c_m = 2.0;
        c.region = region_of_cells(c.lattice, 5, c.r_s_m);
        c.n_agents = 4;
        c.strategy = SearchStrategy::neighbor_grid;
        c.stop_rule = SearchStopRule::all_visited;
        c.targets.placement = TargetsSpec::Placement::random;
        c.targets.count = 3;
        c.horizon_ticks = 1000000;
        c.seed = seed;
        return c;
    }
    if (name == "search-levy-grid") {
        ScenarioConfig c = search_styles_base(seed);
        c.strategy = SearchStrategy::levy_grid;
        return c;
    }
    if (name == "moving-target") {
        ScenarioConfig c;
        c.mode = Mode::search;
        c.lattice = LatticeKind::truncated_octahedron;
        c.r_s_m = 1.0;
        c.r_c_m = 2.0;
        c.region = region_of_cells(c.lattice, 4, c.r_s_m);
        c.n_agents = 2;
        c.strategy = SearchStrategy::levy_grid;
        c.stop_rule = SearchStopRule::all_targets_found;
        c.targets.placement = TargetsSpec::Placement::random;
        c.targets.count = 2;
        c.targets.mobile = true;
        c.targets.step_scale_m = 1.0;
        c.horizon_ticks = 10000;
        c.seed = seed;
        return c;
    }
    if (name == "formation-tetrahedron") {
        ScenarioConfig c = formation_base(seed);
        set_offsets(c, {{0, 0, 0}, {40, 40, 0}, {40, 0, 40}, {0, 40, 40}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
        return c;
    }
    if (name == "formation-edge6") {
        ScenarioConfig c = formation_base(seed);
        std::vector<Vec3> offs;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < 6; ++i) {
            offs.push_back({0, 30.0 * i, 0});
            if (i) edges.emplace_back(i - 1, i);
        }
        set_offsets(c, offs, edges);
        return c;
    }
    if (name == "formation-anonymous6") {
        ScenarioConfig c = formation_base(seed);
        std::vector<Vec3> offs;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < 6; ++i) {
            double ang = i * (3.14159265358979323846 / 3.0);
            offs.push_back({0, 40.0 * std::cos(ang), 40.0 * std::sin(ang)});
            // Complete configuration graph: a contested robot can always jump
            // toward any vacant slot. Sparse graphs (e.g. the plain 6-cycle)
            // admit frozen states where a duplicated pair is boxed in by
            // occupied neighbors while the hole sits elsewhere.
            for (int j = 0; j < i; ++j) edges.emplace_back(j, i);
        }
        set_offsets(c, offs, edges);
        c.formation->anonymous = true;
        c.formation->t_end_s = 150.0;
        return c;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

std::string run_table_preset(const std::string& name) {
    std::ostringstream os;
    if (name == "vq-table") {
        os << "lattice,volumetric_quotient,min_connectivity_ratio\n";
        for (LatticeKind k :
             {LatticeKind::truncated_octahedron, LatticeKind::cube,
              LatticeKind::hexagonal_prism, LatticeKind::rhombic_dodecahedron}) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f\n", to_string(k),
                          volumetric_quotient(k), min_connectivity_ratio(k));
            os << buf;
        }
        return os.str();
    }
    if (name == "grid-comparison") {
        // Vertex counts and absorption steps on one shared region, per grid.
        os << "lattice,vertices,mean_steps,median_steps\n";
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
        for (LatticeKind k :
             {LatticeKind::truncated_octahedron, LatticeKind::cube,
              LatticeKind::hexagonal_prism, LatticeKind::rhombic_dodecahedron}) {
            ScenarioConfig c = coverage_preset(k, 1);
            BatchSummary b = batch_run(c, seeds);
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s,%d,%.2f,%.2f\n", to_string(k), c.n_agents,
                          b.mean_steps, b.median_steps);
            os << buf;
        }
        return os.str();
    }
    if (name == "search-styles") {
        // The gridless baseline walks at its own (sub-sensing) step scale; the
        // grid strategies draw flights at the grid scale.
        os << "strategy,median_steps,mean_steps,iqr_steps\n";
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
        for (SearchStrategy strat :
             {SearchStrategy::levy_grid, SearchStrategy::grid_normal_length,
              SearchStrategy::neighbor_grid, SearchStrategy::levy_continuous}) {
            ScenarioConfig c = search_styles_base(1);
            c.strategy = strat;
            if (strat == SearchStrategy::levy_continuous) c.levy.l_min = 0.3 * c.r_s_m;
            BatchSummary b = batch_run(c, seeds);
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s,%.1f,%.1f,%.1f\n", to_string(strat),
                          b.median_steps, b.mean_steps, b.iqr_steps);
            os << buf;
        }
        return os.str();
    }
    if (name == "sensors-vs-time") {
        os << "n_agents,median_steps,mean_steps\n";
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
        for (int n : {1, 2, 8, 14}) {
            ScenarioConfig c;
            c.mode = Mode::search;
            c.lattice = LatticeKind::truncated_octahedron;
            c.r_s_m = 1.0;
            c.r_c_m = 2.0;
            c.region = region_of_cells(c.lattice, 4, c.r_s_m);
            c.n_agents = n;
            c.strategy = SearchStrategy::neighbor_grid;
            c.stop_rule = SearchStopRule::all_visited;
            c.targets.count = 0;
            c.horizon_ticks = 1000000;
            BatchSummary b = batch_run(c, seeds);
            char buf[96];
            std::snprintf(buf, sizeof buf, "%d,%.1f,%.1f\n", n, b.median_steps,
                          b.mean_steps);
            os << buf;
        }
        return os.str();
    }
    throw std::invalid_argument("unknown table preset: " + name);
}

}  // namespace s3d
