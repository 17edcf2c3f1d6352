#include "swarm3d/coverage.hpp"

#include <algorithm>
#include <stdexcept>

namespace s3d {

std::vector<Vec3> CoverageRun::agent_positions() const {
    std::vector<Vec3> out;
    out.reserve(agent_keys.size());
    for (const VertexKey& k : agent_keys) out.push_back(lattice_vertex(spec, k));
    return out;
}

OccupancyView occupancy_of(const CoverageRun& run) {
    OccupancyView view;
    view.tick = run.steps_taken;
    for (std::size_t i = 0; i < run.agent_keys.size(); ++i) {
        auto it = view.occupied.find(run.agent_keys[i]);
        if (it == view.occupied.end())
            view.occupied.emplace(run.agent_keys[i], static_cast<int>(i));
    }
    return view;
}

CoverageRun spread_step(const CoverageRun& run, const OccupancyView& occupancy) {
    CoverageRun next = run;
    const std::size_t n = run.agent_keys.size();

    // Proposals: uniform over {stay} u unoccupied allowed neighbors.
    std::vector<VertexKey> proposal(n);
    for (std::size_t i = 0; i < n; ++i) {
        const VertexKey at = run.agent_keys[i];
        std::vector<VertexKey> options{at};
        for (const VertexKey& nb : run.allowed.neighbors_in(at))
            if (occupancy.occupied.find(nb) == occupancy.occupied.end())
                options.push_back(nb);
        RngStream rng = RngStream::from(run.rng_seed, i, StreamTag::spread_move,
                                        static_cast<std::uint64_t>(run.steps_taken));
        proposal[i] = options[rng.below(options.size())];
    }

    // Simultaneous move; a contested vacant vertex goes to one contender chosen
    // uniformly at random (stream keyed by vertex and tick, so replay is exact),
    // the rest stay put this tick. A fixed winner priority such as lowest agent
    // index is not used: it biases the wandering-vacancy walk toward low-index
    // agents and stretches the absorption endgame by over an order of magnitude.
    // Stayers keep vertices nobody else can target (those were occupied in the
    // snapshot), so no cascade is needed.
    std::unordered_map<VertexKey, std::vector<std::size_t>, VertexKeyHash> claims;
    for (std::size_t i = 0; i < n; ++i)
        if (!(proposal[i] == run.agent_keys[i])) claims[proposal[i]].push_back(i);
    for (auto& [vertex, contenders] : claims) {
        std::size_t winner = contenders.front();
        if (contenders.size() > 1) {
            std::uint64_t vert_id = VertexKeyHash{}(vertex);
            RngStream rng = RngStream::from(run.rng_seed, vert_id, StreamTag::conflict,
                                            static_cast<std::uint64_t>(run.steps_taken));
            winner = contenders[rng.below(contenders.size())];
        }
        for (std::size_t i : contenders)
            if (i != winner) proposal[i] = run.agent_keys[i];
    }
    next.agent_keys = std::move(proposal);
    next.steps_taken = run.steps_taken + 1;
    return next;
}

bool is_coverage_complete(const CoverageRun& run, const OccupancyView& occupancy) {
    for (const VertexKey& k : run.allowed.keys)
        if (occupancy.occupied.find(k) == occupancy.occupied.end()) return false;
    return true;
}

namespace {

struct ConsensusPhaseResult {
    std::vector<VertexKey> agent_keys;  // on the common grid
    LatticeSpec common_spec;
    std::int64_t ticks = 0;
    double final_spread = 0.0;
};

// St1: agents start at random positions with their own grid-seed beliefs, agree
// on a common seed by averaging, and snap to their believed grid every tick.
ConsensusPhaseResult consensus_phase(const CoverageScenario& sc) {
    std::vector<Vec3> positions(static_cast<std::size_t>(sc.n_agents));
    std::vector<ConsensusState> states(static_cast<std::size_t>(sc.n_agents));
    for (int i = 0; i < sc.n_agents; ++i) {
        RngStream rng = RngStream::from(sc.seed, static_cast<std::uint64_t>(i),
                                        StreamTag::init_position);
        Vec3 p = uniform_in_region(sc.region, rng);
        positions[static_cast<std::size_t>(i)] = p;
        // Initial seed belief: the agent's own position.
        states[static_cast<std::size_t>(i)] = {p.x, p.y, p.z, 0, 0, 0};
    }
    LatticeSpec own{sc.kind, {0, 0, 0}, sc.r_s};

    std::int64_t tick = 0;
    for (; tick < sc.consensus_cap; ++tick) {
        CommGraph g = build_graph(positions, sc.r_c);
        states = consensus_step(states, g);
        for (int i = 0; i < sc.n_agents; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            positions[u] = snap_to_grid(own, states[u], positions[u]);
        }
        if (consensus_spread(states) < kConsensusTolerance) {
            ++tick;
            break;
        }
    }

    // Beliefs agree below tolerance (or the cap was hit; the harness surfaces
    // the residual spread as a warning). Agent 0's grid becomes the common one.
    ConsensusPhaseResult out;
    out.final_spread = consensus_spread(states);
    out.common_spec = LatticeSpec{
        sc.kind, {states[0].x, states[0].y, states[0].z}, sc.r_s};
    out.ticks = tick;
    out.agent_keys.reserve(positions.size());
    for (const Vec3& p : positions)
        out.agent_keys.push_back(nearest_key(out.common_spec, p));
    return out;
}

CoverageOutcome spread_until_complete(CoverageRun run, const CoverageScenario& sc,
                                      std::int64_t consensus_ticks,
                                      double consensus_final_spread) {
    CoverageOutcome out;
    out.consensus_ticks = consensus_ticks;
    out.consensus_final_spread = consensus_final_spread;
    const double total = static_cast<double>(run.allowed.size());
    auto record = [&](const CoverageRun& r) {
        OccupancyView view = occupancy_of(r);
        out.coverage_fraction.push_back(static_cast<double>(view.occupied.size()) /
                                        total);
        if (sc.record_trajectory) out.position_history.push_back(r.agent_positions());
        return view;
    };

    OccupancyView view = record(run);
    while (!is_coverage_complete(run, view) && run.steps_taken < sc.horizon) {
        run = spread_step(run, view);
        view = record(run);
    }
    out.reason = is_coverage_complete(run, view) ? CoverageStopReason::complete
                                                 : CoverageStopReason::horizon;
    out.run = std::move(run);
    return out;
}

}  // namespace

CoverageOutcome run_coverage(const CoverageScenario& sc) {
    sc.region.validate();
    if (sc.n_agents <= 0) throw std::invalid_argument("coverage: n_agents must be > 0");

    CoverageRun run;
    run.region = sc.region;
    run.rng_seed = sc.seed;
    std::int64_t consensus_ticks = 0;
    double final_spread = 0.0;

    if (sc.consensus_phase) {
        ConsensusPhaseResult ph = consensus_phase(sc);
        run.spec = ph.common_spec;
        run.allowed = CoveringIndex::build(run.spec, sc.region);
        consensus_ticks = ph.ticks;
        final_spread = ph.final_spread;
        run.agent_keys.reserve(ph.agent_keys.size());
        for (const VertexKey& k : ph.agent_keys)
            run.agent_keys.push_back(run.allowed.contains(k) ? k
                                                             : run.allowed.nearest_in(
                                                                   lattice_vertex(run.spec, k)));
    } else {
        run.spec = LatticeSpec{sc.kind, sc.region.center(), sc.r_s};
        run.allowed = CoveringIndex::build(run.spec, sc.region);
        if (run.allowed.size() == 0)
            throw std::invalid_argument("coverage: region holds no covering vertex");
        for (int i = 0; i < sc.n_agents; ++i) {
            RngStream rng = RngStream::from(sc.seed, static_cast<std::uint64_t>(i),
                                            StreamTag::init_position);
            run.agent_keys.push_back(run.allowed.keys[rng.below(run.allowed.size())]);
        }
    }
    return spread_until_complete(std::move(run), sc, consensus_ticks, final_spread);
}

CoverageOutcome run_shape_formation(const CoverageScenario& sc) {
    if (!sc.shape) throw std::invalid_argument("shape formation: no shape given");
    validate(*sc.shape);
    CoverageScenario plain = sc;
    plain.shape.reset();

    // St1 (consensus + snap) shares the plain-coverage setup path.
    plain.horizon = 0;
    CoverageOutcome staged = run_coverage(plain);

    CoverageRun run = staged.run;
    run.steps_taken = 0;

    // In-shape covering vertices become the allowed set.
    CoveringIndex full = run.allowed;
    CoveringIndex inside;
    inside.spec = full.spec;
    inside.region = full.region;
    for (std::size_t i = 0; i < full.keys.size(); ++i)
        if (shape_contains(*sc.shape, full.positions[i] - sc.shape_center)) {
            inside.keys.push_back(full.keys[i]);
            inside.positions.push_back(full.positions[i]);
            inside.key_set.insert(full.keys[i]);
        }
    if (inside.keys.empty())
        throw std::invalid_argument("shape formation: shape contains no covering vertex");
    run.allowed = inside;

    // St2: move to the closest vertex inside the shape.
    for (VertexKey& k : run.agent_keys)
        k = run.allowed.nearest_in(lattice_vertex(run.spec, k));

    // St3: random spread restricted to the shape.
    return spread_until_complete(std::move(run), sc, staged.consensus_ticks,
                                 staged.consensus_final_spread);
}

}  // namespace s3d
