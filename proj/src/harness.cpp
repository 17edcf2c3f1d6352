#include "swarm3d/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "swarm3d/coverage.hpp"

namespace s3d {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<TargetState> place_targets(const ScenarioConfig& c) {
    std::vector<TargetState> targets;
    const TargetsSpec& t = c.targets;
    if (t.placement == TargetsSpec::Placement::explicit_list) {
        int id = 0;
        for (Vec3 p : t.positions_m) {
            if (!c.region.contains(p))
                throw std::invalid_argument("config.targets.positions_m: outside region");
            targets.push_back({id++, p, false, t.mobile, t.step_scale_m});
        }
        return targets;
    }
    if (t.placement == TargetsSpec::Placement::cluster) {
        RngStream crng = RngStream::from(c.seed, 0, StreamTag::target_placement);
        double margin = t.cluster_radius_m;
        Vec3 ext = c.region.extent();
        margin = std::min(margin, 0.45 * std::min({ext.x, ext.y, ext.z}));
        Vec3 center = uniform_in_region(c.region.shrunk(margin), crng);
        for (int i = 0; i < t.count; ++i) {
            RngStream rng = RngStream::from(c.seed, static_cast<std::uint64_t>(i) + 1,
                                            StreamTag::target_placement);
            Vec3 p;
            do {
                Vec3 dir = unit_sphere_dir(rng);
                double r = t.cluster_radius_m * std::cbrt(rng.uniform01());
                p = center + r * dir;
            } while (!c.region.contains(p));
            targets.push_back({i, p, false, t.mobile, t.step_scale_m});
        }
        return targets;
    }
    for (int i = 0; i < t.count; ++i) {
        RngStream rng = RngStream::from(c.seed, static_cast<std::uint64_t>(i) + 1,
                                        StreamTag::target_placement);
        targets.push_back({i, uniform_in_region(c.region, rng), false, t.mobile,
                           t.step_scale_m});
    }
    return targets;
}

json metrics_to_json(const Metrics& m, Mode mode) {
    json j;
    j["steps_to_stop"] = m.steps_to_stop;
    j["stop_reason"] = m.stop_reason;
    j["consensus_ticks"] = m.consensus_ticks;
    json det = json::object();
    for (auto [target, tick] : m.detection_ticks) det[std::to_string(target)] = tick;
    j["detection_ticks"] = det;
    json events = json::array();
    for (const DetectionEvent& e : m.detection_events)
        events.push_back({{"tick", e.tick},
                          {"agent", e.agent},
                          {"target", e.target},
                          {"position_m", json::array({e.position.x, e.position.y,
                                                      e.position.z})}});
    j["detection_events"] = events;
    j["coverage_fraction"] = m.coverage_fraction;
    if (mode == Mode::formation) {
        j["peak_ey_m"] = m.peak_ey;
        j["final_ey_m"] = m.final_ey;
        j["peak_ez_m"] = m.peak_ez;
        j["final_ez_m"] = m.final_ez;
        j["max_u_norm"] = m.max_u_norm;
        j["max_u_dot_c"] = m.max_u_dot_c;
        j["max_c_norm_err"] = m.max_c_norm_err;
        j["min_v_mps"] = m.min_v;
        j["max_v_mps"] = m.max_v;
        j["assignment_all_distinct"] = m.assignment_all_distinct;
        j["last_assignment_change_epoch"] = m.last_assignment_change_epoch;
    }
    j["warnings"] = m.warnings;
    return j;
}

RunOutput run_coverage_mode(const ScenarioConfig& c) {
    CoverageScenario sc;
    sc.kind = c.lattice;
    sc.r_s = c.r_s_m;
    sc.r_c = c.r_c_m;
    sc.region = c.region;
    sc.n_agents = c.n_agents;
    sc.seed = c.seed;
    sc.horizon = c.horizon_ticks;
    sc.consensus_phase = c.consensus_phase;
    sc.record_trajectory = c.record_trajectory;
    sc.shape = c.shape;
    sc.shape_center = c.shape_center_m;

    CoverageOutcome out = c.mode == Mode::shape ? run_shape_formation(sc) : run_coverage(sc);

    RunOutput run;
    run.metrics.steps_to_stop = out.run.steps_taken;
    run.metrics.stop_reason =
        out.reason == CoverageStopReason::complete ? "complete" : "horizon";
    run.metrics.coverage_fraction = out.coverage_fraction;
    run.metrics.consensus_ticks = out.consensus_ticks;
    if (out.consensus_final_spread >= kConsensusTolerance) {
        std::ostringstream os;
        os << "consensus phase stopped above tolerance (spread="
           << out.consensus_final_spread << ")";
        run.metrics.warnings.push_back(os.str());
    }

    run.trajectory.columns = {"tick", "agent_id", "x_m", "y_m", "z_m"};
    for (std::size_t tick = 0; tick < out.position_history.size(); ++tick)
        for (std::size_t a = 0; a < out.position_history[tick].size(); ++a) {
            Vec3 p = out.position_history[tick][a];
            run.trajectory.rows.push_back({static_cast<double>(tick),
                                           static_cast<double>(a), p.x, p.y, p.z});
        }
    return run;
}

RunOutput run_search_mode(const ScenarioConfig& c) {
    SearchScenario sc;
    sc.kind = c.lattice;
    sc.r_s = c.r_s_m;
    sc.r_c = c.r_c_m;
    sc.region = c.region;
    sc.n_agents = c.n_agents;
    sc.strategy = c.strategy;
    sc.stop_rule = c.stop_rule;
    sc.levy = c.levy;
    sc.normal_sigma = c.normal_sigma_m;
    sc.targets = place_targets(c);
    sc.deploy_box = c.deploy_box_m;
    sc.seed = c.seed;
    sc.horizon = c.horizon_ticks;
    sc.record_trajectory = c.record_trajectory;

    SearchResult res = run_search(sc);

    RunOutput run;
    run.metrics.steps_to_stop = res.steps;
    run.metrics.stop_reason = to_string(res.reason);
    run.metrics.detection_events = res.detections;
    for (const DetectionEvent& e : res.detections)
        run.metrics.detection_ticks.emplace_back(e.target, e.tick);
    std::sort(run.metrics.detection_ticks.begin(), run.metrics.detection_ticks.end());

    run.trajectory.columns = {"tick", "agent_id", "x_m", "y_m", "z_m"};
    for (std::size_t tick = 0; tick < res.agent_history.size(); ++tick)
        for (std::size_t a = 0; a < res.agent_history[tick].size(); ++a) {
            Vec3 p = res.agent_history[tick][a];
            run.trajectory.rows.push_back({static_cast<double>(tick),
                                           static_cast<double>(a), p.x, p.y, p.z});
        }
    return run;
}

RunOutput run_formation_mode(const ScenarioConfig& c) {
    const FormationPart& f = *c.formation;
    FormationScenario sc;
    sc.config = f.config;
    sc.r_c = c.r_c_m;
    sc.anonymous = f.anonymous;
    sc.seed = c.seed;
    sc.t_end = f.t_end_s;
    sc.init_box = f.init_box_m;
    sc.random_heading_consensus = f.random_heading_consensus;
    sc.record_trajectory = c.record_trajectory;
    sc.trajectory_stride = f.trajectory_stride;

    FormationResult res = run_formation(sc);

    RunOutput run;
    run.metrics.steps_to_stop = res.ticks;
    run.metrics.stop_reason = "t_end";
    run.metrics.peak_ey = res.peak_ey;
    run.metrics.final_ey = res.final_ey;
    run.metrics.peak_ez = res.peak_ez;
    run.metrics.final_ez = res.final_ez;
    run.metrics.max_u_norm = res.max_u_norm;
    run.metrics.max_u_dot_c = res.max_u_dot_c;
    run.metrics.max_c_norm_err = res.max_c_norm_err;
    run.metrics.min_v = res.min_v;
    run.metrics.max_v = res.max_v;
    run.metrics.assignment_all_distinct = res.assignment_all_distinct;
    run.metrics.last_assignment_change_epoch = res.last_assignment_change_epoch;

    run.trajectory.columns = {"tick", "agent_id", "x_m",    "y_m", "z_m",
                              "theta", "psi",     "v_mps",  "u_norm", "q", "r"};
    for (const FormationTickRow& row : res.trajectory)
        run.trajectory.rows.push_back({static_cast<double>(row.tick),
                                       static_cast<double>(row.robot), row.xi.x,
                                       row.xi.y, row.xi.z, row.theta, row.psi, row.v,
                                       row.u_norm, row.q, row.r});
    return run;
}

}  // namespace

RunOutput run_scenario(const ScenarioConfig& c) {
    c.validate();
    RunOutput out;
    switch (c.mode) {
        case Mode::coverage:
        case Mode::shape:
            out = run_coverage_mode(c);
            break;
        case Mode::search:
            out = run_search_mode(c);
            break;
        case Mode::formation:
            out = run_formation_mode(c);
            break;
    }
    for (const std::string& w : c.warnings()) out.metrics.warnings.push_back(w);

    json sidecar;
    sidecar["config"] = json::parse(serialize_scenario(c));
    sidecar["seed"] = c.seed;
    sidecar["metrics"] = metrics_to_json(out.metrics, c.mode);
    sidecar["warnings"] = out.metrics.warnings;
    out.sidecar_json = sidecar.dump(2) + "\n";
    return out;
}

BatchSummary batch_run(const ScenarioConfig& config,
                       const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("batch_run: empty seed list");
    BatchSummary summary;
    for (std::uint64_t seed : seeds) {
        ScenarioConfig c = config;
        c.seed = seed;
        c.record_trajectory = false;
        try {
            RunOutput out = run_scenario(c);
            summary.seeds.push_back(seed);
            summary.steps.push_back(out.metrics.steps_to_stop);
            summary.stop_reasons.push_back(out.metrics.stop_reason);
            if (out.metrics.stop_reason != "horizon") ++summary.completed;
        } catch (const std::exception& e) {
            throw std::runtime_error("batch_run: seed " + std::to_string(seed) + ": " +
                                     e.what());
        }
    }
    std::vector<double> steps(summary.steps.begin(), summary.steps.end());
    summary.median_steps = quantile(steps, 0.5);
    summary.iqr_steps = quantile(steps, 0.75) - quantile(steps, 0.25);
    double sum = 0;
    for (double s : steps) sum += s;
    summary.mean_steps = sum / static_cast<double>(steps.size());
    return summary;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty input");
    std::sort(values.begin(), values.end());
    double idx = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
    double frac = idx - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

void write_csv(const TrajectoryTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt_double(row[i]);
        out << "\n";
    }
}

TrajectoryTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    TrajectoryTable table;
    std::string line;
    if (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_outputs(const RunOutput& out, const std::string& dir, const std::string& base) {
    std::filesystem::create_directories(dir);
    write_csv(out.trajectory, dir + "/" + base + "_trajectory.csv");
    std::ofstream meta(dir + "/" + base + "_run.json", std::ios::binary);
    if (!meta) throw std::runtime_error("write_outputs: cannot open sidecar");
    meta << out.sidecar_json;
}

std::string batch_to_csv(const BatchSummary& s) {
    std::ostringstream os;
    os << "seed,steps_to_stop,stop_reason\n";
    for (std::size_t i = 0; i < s.seeds.size(); ++i)
        os << s.seeds[i] << "," << s.steps[i] << "," << s.stop_reasons[i] << "\n";
    os << "# median=" << fmt_double(s.median_steps) << " mean=" << fmt_double(s.mean_steps)
       << " iqr=" << fmt_double(s.iqr_steps) << " completed=" << s.completed << "/"
       << s.seeds.size() << "\n";
    return os.str();
}

Region region_of_cells(LatticeKind kind, int m, double r_s) {
    if (m <= 0) throw std::invalid_argument("region_of_cells: m must be > 0");
    double edge = conventional_cell_edge(kind) * r_s * static_cast<double>(m);
    return {{0, 0, 0}, {edge, edge, edge}};
}

}  // namespace s3d
