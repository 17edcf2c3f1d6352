#include "swarm3d/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace s3d {

using nlohmann::json;

const char* to_string(Mode m) {
    switch (m) {
        case Mode::coverage: return "coverage";
        case Mode::shape: return "shape";
        case Mode::search: return "search";
        case Mode::formation: return "formation";
    }
    throw std::logic_error("to_string: bad mode");
}

Mode mode_from_string(const std::string& name) {
    if (name == "coverage") return Mode::coverage;
    if (name == "shape") return Mode::shape;
    if (name == "search") return Mode::search;
    if (name == "formation") return Mode::formation;
    throw std::invalid_argument("config.mode: unknown mode '" + name + "'");
}

void ScenarioConfig::validate() const {
    region.validate();
    if (n_agents <= 0) throw std::invalid_argument("config.n_agents: must be > 0");
    if (!(r_s_m > 0)) throw std::invalid_argument("config.r_s_m: must be > 0");
    if (!(r_c_m > 0)) throw std::invalid_argument("config.r_c_m: must be > 0");
    if (horizon_ticks < 0) throw std::invalid_argument("config.horizon_ticks: must be >= 0");
    if (mode == Mode::search) {
        if (!(levy.alpha > 1.0 && levy.alpha < 3.0))
            throw std::invalid_argument("config.levy.alpha: must be in (1, 3)");
        if (levy.l_min < 0)
            throw std::invalid_argument("config.levy.l_min_m: must be >= 0 (0 = auto)");
        if (normal_sigma_m < 0)
            throw std::invalid_argument("config.normal_sigma_m: must be >= 0 (0 = auto)");
        if (targets.count < 0)
            throw std::invalid_argument("config.targets.count: must be >= 0");
        if (targets.placement == TargetsSpec::Placement::explicit_list &&
            targets.positions_m.empty())
            throw std::invalid_argument("config.targets.positions_m: empty explicit list");
        if (targets.mobile && !(targets.step_scale_m > 0))
            throw std::invalid_argument("config.targets.step_scale_m: must be > 0");
        if (stop_rule == SearchStopRule::all_targets_found && targets.count <= 0 &&
            targets.positions_m.empty())
            throw std::invalid_argument(
                "config.targets: all_targets_found stop rule needs targets");
    }
    if (deploy_box_m) {
        deploy_box_m->validate();
        if (!region.contains(deploy_box_m->min_corner) ||
            !region.contains(deploy_box_m->max_corner))
            throw std::invalid_argument("config.deploy_box_m: must lie inside region");
    }
    if (mode == Mode::shape) {
        if (!shape) throw std::invalid_argument("config.shape: required in shape mode");
        s3d::validate(*shape);
    }
    if (mode == Mode::formation) {
        if (!formation)
            throw std::invalid_argument("config.formation: required in formation mode");
        formation->config.validate(r_c_m);
        formation->init_box_m.validate();
        if (!(formation->t_end_s > 0))
            throw std::invalid_argument("config.formation.t_end_s: must be > 0");
        if (formation->trajectory_stride <= 0)
            throw std::invalid_argument("config.formation.trajectory_stride: must be > 0");
    }
}

std::vector<std::string> ScenarioConfig::warnings() const {
    std::vector<std::string> out;
    if (mode == Mode::coverage || mode == Mode::shape || mode == Mode::search) {
        double need = min_connectivity_ratio(lattice) * r_s_m;
        if (r_c_m < need) {
            std::ostringstream os;
            os << "r_c_m=" << r_c_m << " is below the connectivity ratio for "
               << to_string(lattice) << " (" << need
               << "); grid neighbors may fall outside communication range";
            out.push_back(os.str());
        }
    }
    return out;
}

namespace {

json vec_to_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("config." + field + ": expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json region_to_json(const Region& r) {
    return {{"min_m", vec_to_json(r.min_corner)}, {"max_m", vec_to_json(r.max_corner)}};
}

Region region_from_json(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("min_m") || !j.contains("max_m"))
        throw std::invalid_argument("config." + field + ": expected {min_m, max_m}");
    return {vec_from_json(j["min_m"], field + ".min_m"),
            vec_from_json(j["max_m"], field + ".max_m")};
}

json shape_to_json(const ShapePredicate& s) {
    json j;
    if (const auto* sp = std::get_if<Sphere>(&s)) {
        j["type"] = "sphere";
        j["radius_m"] = sp->radius;
    } else if (const auto* cu = std::get_if<Cuboid>(&s)) {
        j["type"] = "cuboid";
        j["min_m"] = vec_to_json(cu->min_corner);
        j["max_m"] = vec_to_json(cu->max_corner);
    } else if (const auto* to = std::get_if<Torus>(&s)) {
        j["type"] = "torus";
        j["tube_radius_m"] = to->tube_radius;
        j["ring_radius_m"] = to->ring_radius;
    } else {
        const auto& el = std::get<Ellipsoid>(s);
        j["type"] = "ellipsoid";
        j["a_m"] = el.a;
        j["b_m"] = el.b;
        j["c_m"] = el.c;
    }
    return j;
}

ShapePredicate shape_from_json(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "sphere") return Sphere{j.at("radius_m").get<double>()};
    if (type == "cuboid")
        return Cuboid{vec_from_json(j.at("min_m"), "shape.min_m"),
                      vec_from_json(j.at("max_m"), "shape.max_m")};
    if (type == "torus")
        return Torus{j.at("tube_radius_m").get<double>(),
                     j.at("ring_radius_m").get<double>()};
    if (type == "ellipsoid")
        return Ellipsoid{j.at("a_m").get<double>(), j.at("b_m").get<double>(),
                         j.at("c_m").get<double>()};
    throw std::invalid_argument("config.shape.type: unknown shape '" + type + "'");
}

const char* placement_name(TargetsSpec::Placement p) {
    switch (p) {
        case TargetsSpec::Placement::random: return "random";
        case TargetsSpec::Placement::cluster: return "cluster";
        case TargetsSpec::Placement::explicit_list: return "explicit";
    }
    throw std::logic_error("bad placement");
}

TargetsSpec::Placement placement_from_string(const std::string& s) {
    if (s == "random") return TargetsSpec::Placement::random;
    if (s == "cluster") return TargetsSpec::Placement::cluster;
    if (s == "explicit") return TargetsSpec::Placement::explicit_list;
    throw std::invalid_argument("config.targets.placement: unknown '" + s + "'");
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& c) {
    json j;
    j["mode"] = to_string(c.mode);
    j["region"] = region_to_json(c.region);
    j["lattice"] = to_string(c.lattice);
    j["n_agents"] = c.n_agents;
    j["r_s_m"] = c.r_s_m;
    j["r_c_m"] = c.r_c_m;
    j["seed"] = c.seed;
    j["horizon_ticks"] = c.horizon_ticks;
    j["record_trajectory"] = c.record_trajectory;
    if (c.mode == Mode::search) {
        j["strategy"] = to_string(c.strategy);
        j["stop_rule"] = c.stop_rule == SearchStopRule::all_visited
                             ? "all_visited"
                             : "all_targets_found";
        j["levy"] = {{"alpha", c.levy.alpha}, {"l_min_m", c.levy.l_min}};
        j["normal_sigma_m"] = c.normal_sigma_m;
        json t;
        t["placement"] = placement_name(c.targets.placement);
        t["count"] = c.targets.count;
        t["cluster_radius_m"] = c.targets.cluster_radius_m;
        t["mobile"] = c.targets.mobile;
        t["step_scale_m"] = c.targets.step_scale_m;
        if (!c.targets.positions_m.empty()) {
            json ps = json::array();
            for (Vec3 p : c.targets.positions_m) ps.push_back(vec_to_json(p));
            t["positions_m"] = ps;
        }
        j["targets"] = t;
    }
    if (c.mode == Mode::coverage || c.mode == Mode::shape)
        j["consensus_phase"] = c.consensus_phase;
    if (c.mode == Mode::search && c.deploy_box_m)
        j["deploy_box_m"] = region_to_json(*c.deploy_box_m);
    if (c.mode == Mode::shape) {
        j["shape"] = shape_to_json(*c.shape);
        j["shape_center_m"] = vec_to_json(c.shape_center_m);
    }
    if (c.mode == Mode::formation) {
        const FormationPart& f = *c.formation;
        json fj;
        json offs = json::array();
        for (Vec3 o : f.config.offsets) offs.push_back(vec_to_json(o));
        fj["offsets_m"] = offs;
        json edges = json::array();
        for (auto [a, b] : f.config.adjacency) edges.push_back(json::array({a, b}));
        fj["adjacency"] = edges;
        fj["c0_m"] = f.config.c0;
        fj["v_min_mps"] = f.config.v_min;
        fj["v_max_mps"] = f.config.v_max;
        fj["u_max"] = f.config.u_max;
        fj["epoch_n"] = f.config.epoch_n;
        fj["lambda_m"] = f.config.lambda_vac;
        fj["ts_s"] = f.config.ts;
        fj["t_end_s"] = f.t_end_s;
        fj["anonymous"] = f.anonymous;
        fj["init_box_m"] = region_to_json(f.init_box_m);
        fj["random_heading_consensus"] = f.random_heading_consensus;
        fj["trajectory_stride"] = f.trajectory_stride;
        j["formation"] = fj;
    }
    return j.dump(2) + "\n";
}

ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    ScenarioConfig c;
    try {
        c.mode = mode_from_string(j.at("mode").get<std::string>());
        c.region = region_from_json(j.at("region"), "region");
        if (j.contains("lattice"))
            c.lattice = lattice_kind_from_string(j["lattice"].get<std::string>());
        c.n_agents = j.value("n_agents", 1);
        c.r_s_m = j.value("r_s_m", 1.0);
        c.r_c_m = j.value("r_c_m", 2.0);
        c.seed = j.value("seed", std::uint64_t{1});
        c.horizon_ticks = j.value("horizon_ticks", std::int64_t{10000});
        c.record_trajectory = j.value("record_trajectory", true);
        c.consensus_phase = j.value("consensus_phase", true);
        if (j.contains("strategy"))
            c.strategy = search_strategy_from_string(j["strategy"].get<std::string>());
        if (j.contains("stop_rule")) {
            std::string s = j["stop_rule"].get<std::string>();
            if (s == "all_visited") c.stop_rule = SearchStopRule::all_visited;
            else if (s == "all_targets_found") c.stop_rule = SearchStopRule::all_targets_found;
            else throw std::invalid_argument("config.stop_rule: unknown '" + s + "'");
        }
        if (j.contains("levy")) {
            c.levy.alpha = j["levy"].value("alpha", 2.0);
            c.levy.l_min = j["levy"].value("l_min_m", 0.0);
        }
        c.normal_sigma_m = j.value("normal_sigma_m", 0.0);
        if (j.contains("targets")) {
            const json& t = j["targets"];
            c.targets.placement =
                placement_from_string(t.value("placement", std::string("random")));
            c.targets.count = t.value("count", 0);
            c.targets.cluster_radius_m = t.value("cluster_radius_m", 1.0);
            c.targets.mobile = t.value("mobile", false);
            c.targets.step_scale_m = t.value("step_scale_m", 1.0);
            if (t.contains("positions_m"))
                for (const json& p : t["positions_m"])
                    c.targets.positions_m.push_back(vec_from_json(p, "targets.positions_m"));
        }
        if (j.contains("deploy_box_m"))
            c.deploy_box_m = region_from_json(j["deploy_box_m"], "deploy_box_m");
        if (j.contains("shape")) c.shape = shape_from_json(j["shape"]);
        if (j.contains("shape_center_m"))
            c.shape_center_m = vec_from_json(j["shape_center_m"], "shape_center_m");
        if (j.contains("formation")) {
            const json& fj = j["formation"];
            FormationPart f;
            for (const json& o : fj.at("offsets_m"))
                f.config.offsets.push_back(vec_from_json(o, "formation.offsets_m"));
            if (fj.contains("adjacency"))
                for (const json& e : fj["adjacency"]) {
                    if (!e.is_array() || e.size() != 2)
                        throw std::invalid_argument("config.formation.adjacency: expected pairs");
                    f.config.adjacency.emplace_back(e[0].get<int>(), e[1].get<int>());
                }
            f.config.c0 = fj.value("c0_m", 10.0);
            f.config.v_min = fj.value("v_min_mps", 2.0);
            f.config.v_max = fj.value("v_max_mps", 8.0);
            f.config.u_max = fj.value("u_max", 2.0);
            f.config.epoch_n = fj.value("epoch_n", 10);
            f.config.lambda_vac = fj.value("lambda_m", 20.0);
            f.config.ts = fj.value("ts_s", 0.01);
            f.t_end_s = fj.value("t_end_s", 200.0);
            f.anonymous = fj.value("anonymous", false);
            if (fj.contains("init_box_m"))
                f.init_box_m = region_from_json(fj["init_box_m"], "formation.init_box_m");
            f.random_heading_consensus = fj.value("random_heading_consensus", false);
            f.trajectory_stride = fj.value("trajectory_stride", 1);
            c.formation = f;
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace s3d
