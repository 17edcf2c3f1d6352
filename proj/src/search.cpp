#include "swarm3d/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace s3d {

const char* to_string(SearchStrategy s) {
    switch (s) {
        case SearchStrategy::neighbor_grid: return "neighbor_grid";
        case SearchStrategy::levy_grid: return "levy_grid";
        case SearchStrategy::levy_continuous: return "levy_continuous";
        case SearchStrategy::grid_normal_length: return "grid_normal_length";
    }
    throw std::logic_error("to_string: bad strategy");
}

const char* to_string(SearchStopReason r) {
    switch (r) {
        case SearchStopReason::all_visited: return "all_visited";
        case SearchStopReason::all_targets_found: return "all_targets_found";
        case SearchStopReason::horizon: return "horizon";
    }
    throw std::logic_error("to_string: bad stop reason");
}

SearchStrategy search_strategy_from_string(const std::string& name) {
    if (name == "neighbor_grid") return SearchStrategy::neighbor_grid;
    if (name == "levy_grid") return SearchStrategy::levy_grid;
    if (name == "levy_continuous") return SearchStrategy::levy_continuous;
    if (name == "grid_normal_length") return SearchStrategy::grid_normal_length;
    throw std::invalid_argument("unknown search strategy: " + name);
}

std::vector<int> detect(Vec3 agent_p, std::vector<TargetState>& targets, double r_s) {
    if (!(r_s > 0.0)) throw std::invalid_argument("detect: r_s must be > 0");
    std::vector<int> found;
    const double r2 = r_s * r_s;
    for (TargetState& t : targets)
        if (!t.detected && norm_sq(t.position - agent_p) <= r2) {
            t.detected = true;
            found.push_back(t.id);
        }
    return found;
}

VertexKey grid_search_step(const VertexKey& at, VisitedMap& visited,
                           const CoveringIndex& cov, RngStream& rng) {
    visited.visited.insert(at);
    std::vector<VertexKey> nbrs = cov.neighbors_in(at);
    if (nbrs.empty()) return at;  // degenerate single-vertex grid
    std::vector<VertexKey> unvisited;
    for (const VertexKey& k : nbrs)
        if (visited.visited.count(k) == 0) unvisited.push_back(k);
    const std::vector<VertexKey>& pool = unvisited.empty() ? nbrs : unvisited;
    VertexKey next = pool[rng.below(pool.size())];
    visited.visited.insert(next);
    return next;
}

bool stop_all_visited(std::span<const VisitedMap> maps, const CoveringIndex& cov) {
    VertexKeySet seen;
    for (const VisitedMap& m : maps)
        seen.insert(m.visited.begin(), m.visited.end());
    for (const VertexKey& k : cov.keys)
        if (seen.count(k) == 0) return false;
    return true;
}

bool stop_all_targets_found(std::span<const TargetState> targets) {
    for (const TargetState& t : targets)
        if (!t.detected) return false;
    return true;
}

double levy_length_from_u(const LevyParams& params, double u) {
    return params.l_min * std::pow(u, -1.0 / (params.alpha - 1.0));
}

double levy_sample_length(const LevyParams& params, RngStream& rng) {
    params.validate();
    return levy_length_from_u(params, rng.uniform_open01());
}

namespace {

// Shared flight loop: keeps drawing (direction, length) until the endpoint lands
// inside the region.
template <typename LengthFn>
Vec3 bounded_flight(Vec3 at, const Region& region, RngStream& rng, LengthFn&& length) {
    for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
        Vec3 dir = unit_sphere_dir(rng);
        Vec3 endpoint = at + length(rng) * dir;
        if (region.contains(endpoint)) return endpoint;
    }
    throw std::runtime_error("flight: rejection budget exhausted (region too small "
                             "for the step-length scale?)");
}

}  // namespace

VertexKey levy_grid_step(Vec3 at, const Region& region, const LevyParams& params,
                         const CoveringIndex& cov, RngStream& rng) {
    params.validate();
    Vec3 endpoint = bounded_flight(at, region, rng, [&](RngStream& r) {
        return levy_length_from_u(params, r.uniform_open01());
    });
    return cov.nearest_in(endpoint);
}

Vec3 levy_continuous_step(Vec3 at, const Region& region, const LevyParams& params,
                          RngStream& rng) {
    params.validate();
    return bounded_flight(at, region, rng, [&](RngStream& r) {
        return levy_length_from_u(params, r.uniform_open01());
    });
}

VertexKey grid_normal_step(Vec3 at, const Region& region, double sigma,
                           const CoveringIndex& cov, RngStream& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("grid_normal_step: sigma must be > 0");
    Vec3 endpoint = bounded_flight(at, region, rng, [&](RngStream& r) {
        return std::abs(r.normal(0.0, sigma));
    });
    return cov.nearest_in(endpoint);
}

TargetState moving_target_step(const TargetState& t, const Region& region,
                               RngStream& rng) {
    if (!t.mobile) throw std::invalid_argument("moving_target_step: target is static");
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    TargetState next = t;
    for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
        double theta = rng.uniform(0.0, kTwoPi);
        double psi = rng.uniform(0.0, kTwoPi);
        double lambda = rng.normal(0.0, t.step_scale);
        Vec3 step{lambda * std::cos(theta) * std::cos(psi),
                  lambda * std::cos(theta) * std::sin(psi),
                  lambda * std::sin(theta)};
        Vec3 cand = t.position + step;
        if (region.contains(cand)) {
            next.position = cand;
            return next;
        }
    }
    throw std::runtime_error("moving_target_step: rejection budget exhausted");
}

SearchResult run_search(const SearchScenario& sc) {
    sc.region.validate();
    if (sc.n_agents <= 0) throw std::invalid_argument("search: n_agents must be > 0");
    if (sc.stop_rule == SearchStopRule::all_targets_found && sc.targets.empty())
        throw std::invalid_argument("search: target stop rule needs targets");

    const bool on_grid = sc.strategy != SearchStrategy::levy_continuous;
    LatticeSpec spec{sc.kind, sc.region.center(), sc.r_s};
    CoveringIndex cov = CoveringIndex::build(spec, sc.region);
    if (on_grid && cov.size() == 0)
        throw std::invalid_argument("search: region holds no covering vertex");

    const double min_spacing = min_neighbor_spacing(sc.kind) * sc.r_s;
    LevyParams levy = sc.levy;
    if (levy.l_min <= 0.0) levy.l_min = min_spacing;
    const double sigma = sc.normal_sigma > 0.0 ? sc.normal_sigma : min_spacing;

    const std::size_t n = static_cast<std::size_t>(sc.n_agents);
    std::vector<VertexKey> keys(n);
    std::vector<Vec3> positions(n);
    const Region& drop = sc.deploy_box ? *sc.deploy_box : sc.region;
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng = RngStream::from(sc.seed, i, StreamTag::init_position);
        Vec3 p = uniform_in_region(drop, rng);
        if (on_grid) {
            keys[i] = cov.nearest_in(p);
            positions[i] = lattice_vertex(spec, keys[i]);
        } else {
            positions[i] = p;
        }
    }

    std::vector<TargetState> targets = sc.targets;
    std::vector<VisitedMap> maps(n);
    std::vector<GossipRecord> records(n);
    for (std::size_t i = 0; i < n; ++i) {
        records[i].sender = static_cast<int>(i);
        if (on_grid) {
            maps[i].visited.insert(keys[i]);
            records[i].visited_vertices.insert(keys[i]);
        }
    }

    SearchResult result;
    auto record_frame = [&]() {
        if (!sc.record_trajectory) return;
        result.agent_history.push_back(positions);
        std::vector<Vec3> tp;
        for (const TargetState& t : targets) tp.push_back(t.position);
        result.target_history.push_back(tp);
    };

    auto run_detection = [&](std::int64_t tick) {
        for (std::size_t i = 0; i < n; ++i)
            for (int id : detect(positions[i], targets, sc.r_s))
                result.detections.push_back({tick, static_cast<int>(i), id, positions[i]});
    };

    auto stop_now = [&](std::int64_t tick) {
        if (result.first_all_targets_tick < 0 && !targets.empty() &&
            stop_all_targets_found(targets))
            result.first_all_targets_tick = tick;
        if (result.first_all_visited_tick < 0 && on_grid &&
            stop_all_visited(maps, cov))
            result.first_all_visited_tick = tick;
        if (sc.stop_rule == SearchStopRule::all_targets_found)
            return result.first_all_targets_tick >= 0;
        return result.first_all_visited_tick >= 0;
    };

    // Tick 0: initial placement already senses.
    run_detection(0);
    record_frame();

    std::int64_t tick = 0;
    while (tick < sc.horizon && !stop_now(tick)) {
        ++tick;
        // Agents move.
        for (std::size_t i = 0; i < n; ++i) {
            RngStream rng = RngStream::from(sc.seed, i, StreamTag::search_move,
                                            static_cast<std::uint64_t>(tick));
            switch (sc.strategy) {
                case SearchStrategy::neighbor_grid:
                    keys[i] = grid_search_step(keys[i], maps[i], cov, rng);
                    positions[i] = lattice_vertex(spec, keys[i]);
                    break;
                case SearchStrategy::levy_grid:
                    keys[i] = levy_grid_step(positions[i], sc.region, levy, cov, rng);
                    positions[i] = lattice_vertex(spec, keys[i]);
                    maps[i].visited.insert(keys[i]);
                    break;
                case SearchStrategy::grid_normal_length:
                    keys[i] = grid_normal_step(positions[i], sc.region, sigma, cov, rng);
                    positions[i] = lattice_vertex(spec, keys[i]);
                    maps[i].visited.insert(keys[i]);
                    break;
                case SearchStrategy::levy_continuous:
                    positions[i] = levy_continuous_step(positions[i], sc.region, levy, rng);
                    break;
            }
        }
        // Mobile targets move in the same tick.
        for (TargetState& t : targets)
            if (t.mobile) {
                RngStream rng = RngStream::from(sc.seed, static_cast<std::uint64_t>(t.id),
                                                StreamTag::target_motion,
                                                static_cast<std::uint64_t>(tick));
                t = moving_target_step(t, sc.region, rng);
            }
        // Detection on post-move positions, then gossip.
        run_detection(tick);
        if (sc.strategy == SearchStrategy::neighbor_grid) {
            CommGraph g = build_graph(positions, sc.r_c);
            for (std::size_t i = 0; i < n; ++i)
                records[i].visited_vertices = maps[i].visited;
            records = gossip_exchange(records, g);
            for (std::size_t i = 0; i < n; ++i)
                maps[i].visited = records[i].visited_vertices;
        }
        record_frame();
    }

    result.steps = tick;
    if (sc.stop_rule == SearchStopRule::all_targets_found &&
        result.first_all_targets_tick >= 0)
        result.reason = SearchStopReason::all_targets_found;
    else if (sc.stop_rule == SearchStopRule::all_visited &&
             result.first_all_visited_tick >= 0)
        result.reason = SearchStopReason::all_visited;
    else
        result.reason = SearchStopReason::horizon;
    return result;
}

}  // namespace s3d
