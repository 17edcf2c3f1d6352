#include "doctest.h"

#include <map>

#include "oracles.hpp"
#include "swarm3d/harness.hpp"
#include "swarm3d/search.hpp"

using namespace s3d;

namespace {

SearchScenario base_scenario(int cells, int n_agents, std::uint64_t seed) {
    SearchScenario sc;
    sc.kind = LatticeKind::truncated_octahedron;
    sc.r_s = 1.0;
    sc.r_c = 2.0;
    sc.region = region_of_cells(sc.kind, cells, sc.r_s);
    sc.n_agents = n_agents;
    sc.seed = seed;
    return sc;
}

}  // namespace

TEST_CASE("detect: boundary inclusive, latching, multiple targets per tick") {
    std::vector<TargetState> targets{{0, {2.0, 0, 0}, false, false, 0},
                                     {1, {0, 1.0, 0}, false, false, 0},
                                     {2, {0, 0, 2.002}, false, false, 0}};
    auto found = detect({0, 0, 0}, targets, 2.0);
    CHECK(found == std::vector<int>{0, 1});  // exactly at r_s counts, 1.001 r_s not
    CHECK(targets[0].detected);
    CHECK(targets[1].detected);
    CHECK_FALSE(targets[2].detected);
    // Latching: a second call does not report them again.
    found = detect({0, 0, 0}, targets, 2.0);
    CHECK(found.empty());
}

TEST_CASE("grid_search_step prefers unvisited neighbors uniformly") {
    LatticeSpec spec{LatticeKind::truncated_octahedron, {0, 0, 0}, 1.0};
    Region region{{-4, -4, -4}, {4, 4, 4}};
    CoveringIndex cov = CoveringIndex::build(spec, region);
    VertexKey at{0, 0, 0};
    auto nbrs = cov.neighbors_in(at);
    REQUIRE(nbrs.size() == 14);

    SUBCASE("all unvisited: uniform over the unvisited set") {
        std::map<VertexKey, long> counts;
        const long trials = 10000;
        for (long t = 0; t < trials; ++t) {
            VisitedMap m;
            RngStream rng = RngStream::from(3, 0, StreamTag::search_move,
                                            static_cast<std::uint64_t>(t));
            counts[grid_search_step(at, m, cov, rng)]++;
        }
        CHECK(counts.size() == 14);
        std::vector<long> c;
        for (auto& [k, v] : counts) c.push_back(v);
        CHECK(oracle::chi2_uniform(c, trials) < oracle::chi2_crit_99(13));
    }

    SUBCASE("partially visited: only unvisited are chosen") {
        VisitedMap m;
        for (std::size_t i = 0; i + 3 < nbrs.size(); ++i) m.visited.insert(nbrs[i]);
        VertexKeySet open(nbrs.end() - 3, nbrs.end());
        for (long t = 0; t < 500; ++t) {
            VisitedMap trial = m;
            RngStream rng = RngStream::from(4, 0, StreamTag::search_move,
                                            static_cast<std::uint64_t>(t));
            VertexKey next = grid_search_step(at, trial, cov, rng);
            CHECK(open.count(next) == 1);
            CHECK(trial.visited.count(next) == 1);  // marked on arrival
        }
    }

    SUBCASE("all visited: uniform over all neighbors, never stays") {
        VisitedMap m;
        m.visited.insert(at);
        for (const VertexKey& k : nbrs) m.visited.insert(k);
        std::map<VertexKey, long> counts;
        const long trials = 10000;
        for (long t = 0; t < trials; ++t) {
            VisitedMap trial = m;
            RngStream rng = RngStream::from(5, 0, StreamTag::search_move,
                                            static_cast<std::uint64_t>(t));
            VertexKey next = grid_search_step(at, trial, cov, rng);
            CHECK(next != at);
            counts[next]++;
        }
        CHECK(counts.size() == 14);
        std::vector<long> c;
        for (auto& [k, v] : counts) c.push_back(v);
        CHECK(oracle::chi2_uniform(c, trials) < oracle::chi2_crit_99(13));
    }
}

TEST_CASE("stop rules") {
    LatticeSpec spec{LatticeKind::cube, {0, 0, 0}, std::sqrt(3.0) / 2.0};
    Region region{{-0.2, -0.2, -0.2}, {1.2, 0.2, 0.2}};
    CoveringIndex cov = CoveringIndex::build(spec, region);
    REQUIRE(cov.size() == 2);

    std::vector<VisitedMap> maps(1);
    maps[0].visited.insert(cov.keys[0]);
    CHECK_FALSE(stop_all_visited(maps, cov));
    maps[0].visited.insert(cov.keys[1]);
    CHECK(stop_all_visited(maps, cov));
    // Brute-force subset oracle.
    VertexKeySet uni;
    for (const auto& m : maps) uni.insert(m.visited.begin(), m.visited.end());
    bool oracle_stop = true;
    for (const VertexKey& k : cov.keys)
        if (uni.count(k) == 0) oracle_stop = false;
    CHECK(oracle_stop == stop_all_visited(maps, cov));

    std::vector<TargetState> targets{{0, {0, 0, 0}, true, false, 0},
                                     {1, {1, 0, 0}, false, false, 0},
                                     {2, {0, 1, 0}, true, false, 0}};
    CHECK_FALSE(stop_all_targets_found(targets));
    targets[1].detected = true;
    CHECK(stop_all_targets_found(targets));
}

TEST_CASE("levy length: inverse transform arithmetic and bounds") {
    LevyParams params{2.0, 1.0};
    CHECK(levy_length_from_u(params, 1.0) == doctest::Approx(1.0));    // CDF floor
    CHECK(levy_length_from_u(params, 0.25) == doctest::Approx(4.0));   // u^-1
    LevyParams p15{1.5, 2.0};
    CHECK(levy_length_from_u(p15, 0.25) == doctest::Approx(2.0 * 16.0));  // u^-2

    RngStream rng = RngStream::from(9, 0, StreamTag::generic);
    for (int i = 0; i < 5000; ++i) CHECK(levy_sample_length(params, rng) >= params.l_min);
}

TEST_CASE("levy sampler log-log CCDF slope matches 1 - alpha") {
    for (double alpha : {1.5, 2.0, 2.5}) {
        LevyParams params{alpha, 1.0};
        RngStream rng = RngStream::from(1234, static_cast<std::uint64_t>(alpha * 10),
                                        StreamTag::generic);
        std::vector<double> samples;
        samples.reserve(100000);
        for (int i = 0; i < 100000; ++i) samples.push_back(levy_sample_length(params, rng));
        double slope = oracle::ccdf_loglog_slope(samples, params.l_min);
        CHECK(slope == doctest::Approx(1.0 - alpha).epsilon(0.1));
    }
}

TEST_CASE("levy_grid_step snaps to the brute-force nearest covering vertex") {
    SearchScenario sc = base_scenario(3, 1, 1);
    LatticeSpec spec{sc.kind, sc.region.center(), sc.r_s};
    CoveringIndex cov = CoveringIndex::build(spec, sc.region);
    LevyParams params{2.0, min_neighbor_spacing(sc.kind)};
    RngStream rng = RngStream::from(17, 0, StreamTag::generic);
    Vec3 at = cov.positions[cov.size() / 2];
    for (int i = 0; i < 200; ++i) {
        // Reproduce the library's draw sequence to learn the endpoint, then
        // check the snap against a full scan.
        RngStream probe = rng;  // copy: same stream state
        Vec3 endpoint;
        for (int attempt = 0;; ++attempt) {
            REQUIRE(attempt < kRejectionBudget);
            Vec3 dir = unit_sphere_dir(probe);
            endpoint = at + levy_length_from_u(params, probe.uniform_open01()) * dir;
            if (sc.region.contains(endpoint)) break;
        }
        VertexKey got = levy_grid_step(at, sc.region, params, cov, rng);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cov.size(); ++j)
            best = std::min(best, norm_sq(cov.positions[j] - endpoint));
        CHECK(norm_sq(lattice_vertex(spec, got) - endpoint) ==
              doctest::Approx(best).epsilon(1e-9));
        at = lattice_vertex(spec, got);
    }
}

TEST_CASE("levy_continuous_step: displacement equals the sampled length") {
    Region region{{-100, -100, -100}, {100, 100, 100}};
    LevyParams params{2.0, 1.0};
    RngStream a = RngStream::from(5, 0, StreamTag::generic);
    RngStream b = a;
    Vec3 next = levy_continuous_step({0, 0, 0}, region, params, a);
    unit_sphere_dir(b);  // same draws, same order
    double l = levy_length_from_u(params, b.uniform_open01());
    CHECK(norm(next) == doctest::Approx(l).epsilon(1e-12));
}

TEST_CASE("flight rejection budget trips on impossible scale") {
    Region region{{0, 0, 0}, {1, 1, 1}};
    LevyParams params{2.0, 1e6};  // every draw leaves the region
    RngStream rng = RngStream::from(2, 0, StreamTag::generic);
    CHECK_THROWS_AS(levy_continuous_step({0.5, 0.5, 0.5}, region, params, rng),
                    std::runtime_error);
}

TEST_CASE("moving targets: kinematics substitution and half-normal step mean") {
    Region region{{-1000, -1000, -1000}, {1000, 1000, 1000}};
    // theta = 0, psi = 0, lambda = 1 moves (1, 0, 0): seen through a stub rng is
    // awkward, so check the kinematic identity directly on the step vector.
    double theta = 0, psi = 0, lambda = 1;
    Vec3 step{lambda * std::cos(theta) * std::cos(psi),
              lambda * std::cos(theta) * std::sin(psi), lambda * std::sin(theta)};
    CHECK(distance(step, Vec3{1, 0, 0}) < 1e-15);
    theta = 3.14159265358979323846 / 2.0;
    step = {lambda * std::cos(theta) * std::cos(psi),
            lambda * std::cos(theta) * std::sin(psi), lambda * std::sin(theta)};
    CHECK(std::abs(step.x) < 1e-12);
    CHECK(std::abs(step.y) < 1e-12);
    CHECK(step.z == doctest::Approx(lambda));

    // |displacement| over many steps has the half-normal mean sigma sqrt(2/pi).
    TargetState t{0, {0, 0, 0}, false, true, 2.0};
    RngStream rng = RngStream::from(33, 0, StreamTag::generic);
    double sum = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        TargetState next = moving_target_step(t, region, rng);
        sum += distance(next.position, t.position);
    }
    double mean = sum / trials;
    CHECK(mean == doctest::Approx(2.0 * std::sqrt(2.0 / 3.14159265358979)).epsilon(0.01));
}

TEST_CASE("moving target stays in the region") {
    Region region{{0, 0, 0}, {4, 4, 4}};
    TargetState t{0, {0.2, 0.2, 0.2}, false, true, 1.5};
    RngStream rng = RngStream::from(44, 0, StreamTag::generic);
    for (int i = 0; i < 2000; ++i) {
        t = moving_target_step(t, region, rng);
        CHECK(region.contains(t.position));
    }
}

TEST_CASE("run_search: single agent finds an adjacent target quickly") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SearchScenario sc = base_scenario(3, 1, seed);
        sc.strategy = SearchStrategy::neighbor_grid;
        sc.stop_rule = SearchStopRule::all_targets_found;
        LatticeSpec spec{sc.kind, sc.region.center(), sc.r_s};
        CoveringIndex cov = CoveringIndex::build(spec, sc.region);
        // Target sits on some covering vertex; full visitation must detect it.
        sc.targets.push_back(
            {0, cov.positions[seed % cov.size()], false, false, 0});
        sc.horizon = 100000;
        SearchResult res = run_search(sc);
        CHECK(res.reason == SearchStopReason::all_targets_found);
        CHECK(res.steps <= static_cast<std::int64_t>(cov.size()) * 40);
    }
}

TEST_CASE("run_search: known-count stop never fires after all-visited") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        SearchScenario sc = base_scenario(3, 2, seed);
        sc.strategy = SearchStrategy::neighbor_grid;
        sc.stop_rule = SearchStopRule::all_visited;
        RngStream rng = RngStream::from(seed, 77, StreamTag::generic);
        for (int t = 0; t < 3; ++t)
            sc.targets.push_back({t, uniform_in_region(sc.region, rng), false, false, 0});
        sc.horizon = 200000;
        SearchResult res = run_search(sc);
        REQUIRE(res.reason == SearchStopReason::all_visited);
        REQUIRE(res.first_all_targets_tick >= 0);
        CHECK(res.first_all_targets_tick <= res.first_all_visited_tick);
    }
}

TEST_CASE("run_search: visited maps union equals covering set at all-visited stop") {
    SearchScenario sc = base_scenario(3, 4, 77);
    sc.strategy = SearchStrategy::neighbor_grid;
    sc.stop_rule = SearchStopRule::all_visited;
    sc.horizon = 200000;
    sc.record_trajectory = true;
    SearchResult res = run_search(sc);
    REQUIRE(res.reason == SearchStopReason::all_visited);

    // Soundness: every recorded agent position is a covering vertex, and the
    // union of positions covers the covering set exactly when the rule fires.
    LatticeSpec spec{sc.kind, sc.region.center(), sc.r_s};
    CoveringIndex cov = CoveringIndex::build(spec, sc.region);
    VertexKeySet seen;
    for (const auto& frame : res.agent_history)
        for (const Vec3& p : frame) {
            VertexKey k = nearest_key(spec, p);
            CHECK(distance(lattice_vertex(spec, k), p) < 1e-9);
            seen.insert(k);
        }
    CHECK(seen.size() == cov.size());
    for (const VertexKey& k : cov.keys) CHECK(seen.count(k) == 1);
}

TEST_CASE("gossip soundness: maps only ever hold actually-visited vertices") {
    // Replay a neighbor-grid run by hand, mirroring the production loop, and
    // check after every round that each agent's map is a subset of the set of
    // vertices some agent has stood on so far.
    LatticeSpec spec{LatticeKind::truncated_octahedron, {0, 0, 0}, 1.0};
    Region region{{-4, -4, -4}, {4, 4, 4}};
    CoveringIndex cov = CoveringIndex::build(spec, region);
    const int n = 3;
    std::vector<VertexKey> keys(n);
    std::vector<Vec3> positions(n);
    std::vector<VisitedMap> maps(n);
    std::vector<GossipRecord> records(n);
    VertexKeySet truly_visited;
    RngStream init = RngStream::from(51, 0, StreamTag::generic);
    for (int i = 0; i < n; ++i) {
        keys[static_cast<std::size_t>(i)] = cov.keys[init.below(cov.size())];
        positions[static_cast<std::size_t>(i)] =
            lattice_vertex(spec, keys[static_cast<std::size_t>(i)]);
        maps[static_cast<std::size_t>(i)].visited.insert(keys[static_cast<std::size_t>(i)]);
        truly_visited.insert(keys[static_cast<std::size_t>(i)]);
    }
    for (std::int64_t tick = 1; tick <= 120; ++tick) {
        for (int i = 0; i < n; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            RngStream rng = RngStream::from(51, u, StreamTag::search_move,
                                            static_cast<std::uint64_t>(tick));
            keys[u] = grid_search_step(keys[u], maps[u], cov, rng);
            positions[u] = lattice_vertex(spec, keys[u]);
            truly_visited.insert(keys[u]);
        }
        CommGraph g = build_graph(positions, 2.0);
        for (int i = 0; i < n; ++i)
            records[static_cast<std::size_t>(i)].visited_vertices =
                maps[static_cast<std::size_t>(i)].visited;
        records = gossip_exchange(records, g);
        for (int i = 0; i < n; ++i) {
            maps[static_cast<std::size_t>(i)].visited =
                records[static_cast<std::size_t>(i)].visited_vertices;
            for (const VertexKey& k : maps[static_cast<std::size_t>(i)].visited)
                CHECK(truly_visited.count(k) == 1);
        }
    }
}

TEST_CASE("run_search: detection events are sound") {
    SearchScenario sc = base_scenario(3, 2, 3);
    sc.strategy = SearchStrategy::levy_grid;
    sc.stop_rule = SearchStopRule::all_targets_found;
    RngStream rng = RngStream::from(3, 99, StreamTag::generic);
    for (int t = 0; t < 3; ++t)
        sc.targets.push_back({t, uniform_in_region(sc.region, rng), false, false, 0});
    sc.horizon = 100000;
    SearchResult res = run_search(sc);
    REQUIRE(res.reason == SearchStopReason::all_targets_found);
    CHECK(res.detections.size() == 3);
    for (const DetectionEvent& e : res.detections) {
        const TargetState& t = sc.targets[static_cast<std::size_t>(e.target)];
        CHECK(distance(e.position, t.position) <= sc.r_s * (1 + 1e-12));
    }
}

TEST_CASE("run_search: single-vertex covering set stops immediately") {
    SearchScenario sc;
    sc.kind = LatticeKind::cube;
    sc.r_s = 1.0;
    sc.region = {{-0.3, -0.3, -0.3}, {0.8, 0.8, 0.8}};
    sc.n_agents = 1;
    sc.strategy = SearchStrategy::neighbor_grid;
    sc.stop_rule = SearchStopRule::all_visited;
    sc.seed = 6;
    LatticeSpec spec{sc.kind, sc.region.center(), sc.r_s};
    REQUIRE(covering_keys(spec, sc.region).size() == 1);
    SearchResult res = run_search(sc);
    CHECK(res.steps == 0);
    CHECK(res.reason == SearchStopReason::all_visited);
}

TEST_CASE("more sensors never slow the search (medians over 20 seeds)") {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
    double last = std::numeric_limits<double>::infinity();
    for (int n : {1, 2, 8, 14}) {
        std::vector<double> steps;
        for (std::uint64_t seed : seeds) {
            SearchScenario sc = base_scenario(3, n, seed);
            sc.strategy = SearchStrategy::neighbor_grid;
            sc.stop_rule = SearchStopRule::all_visited;
            sc.horizon = 300000;
            SearchResult res = run_search(sc);
            REQUIRE(res.reason == SearchStopReason::all_visited);
            steps.push_back(static_cast<double>(res.steps));
        }
        std::sort(steps.begin(), steps.end());
        double median = 0.5 * (steps[9] + steps[10]);
        CHECK(median <= last);
        last = median;
    }
}

TEST_CASE("moving-target runs detect everything on 25 seeds") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        SearchScenario sc = base_scenario(4, 2, seed);
        sc.strategy = SearchStrategy::levy_grid;
        sc.stop_rule = SearchStopRule::all_targets_found;
        RngStream rng = RngStream::from(seed, 55, StreamTag::generic);
        for (int t = 0; t < 2; ++t)
            sc.targets.push_back({t, uniform_in_region(sc.region, rng), false, true, 1.0});
        sc.horizon = 10000;
        SearchResult res = run_search(sc);
        CHECK(res.reason == SearchStopReason::all_targets_found);
    }
}
