#include "doctest.h"

#include <map>

#include "oracles.hpp"
#include "swarm3d/formation.hpp"
#include "swarm3d/harness.hpp"
#include "swarm3d/scenario.hpp"

using namespace s3d;

namespace {
constexpr double kPi = 3.14159265358979323846;

FormationScenario tetra_scenario(std::uint64_t seed) {
    ScenarioConfig c = preset_scenario("formation-tetrahedron", seed);
    FormationScenario sc;
    sc.config = c.formation->config;
    sc.r_c = c.r_c_m;
    sc.seed = seed;
    sc.t_end = c.formation->t_end_s;
    sc.init_box = c.formation->init_box_m;
    return sc;
}
}  // namespace

TEST_CASE("heading_vector: substitutions and unit norm") {
    Vec3 v = heading_vector(0, 0);
    CHECK(distance(v, Vec3{1, 0, 0}) < 1e-15);
    v = heading_vector(kPi / 2, 1.234);
    CHECK(std::abs(v.x) < 1e-12);
    CHECK(std::abs(v.y) < 1e-12);
    CHECK(v.z == doctest::Approx(-1.0));

    RngStream rng = RngStream::from(1, 0, StreamTag::generic);
    for (int i = 0; i < 1000; ++i) {
        double theta = rng.uniform(-kPi, kPi), psi = rng.uniform(-kPi, kPi);
        CHECK(norm(heading_vector(theta, psi)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("frame_basis: substitution, orthogonality, |B| = cos(theta)") {
    auto [a, b] = frame_basis(0, 0);
    CHECK(distance(a, Vec3{0, 0, -1}) < 1e-15);
    CHECK(distance(b, Vec3{0, 1, 0}) < 1e-15);
    CHECK(norm(frame_basis(kPi / 3, 0.7).second) == doctest::Approx(0.5));

    RngStream rng = RngStream::from(2, 0, StreamTag::generic);
    for (int i = 0; i < 1000; ++i) {
        double theta = rng.uniform(-1.5, 1.5), psi = rng.uniform(-kPi, kPi);
        Vec3 c = heading_vector(theta, psi);
        auto [A, B] = frame_basis(theta, psi);
        CHECK(std::abs(dot(A, c)) < 1e-12);
        CHECK(std::abs(dot(B, c)) < 1e-12);
        CHECK(std::abs(dot(A, B)) < 1e-12);
        CHECK(norm(A) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(norm(B) == doctest::Approx(std::abs(std::cos(theta))).epsilon(1e-12));
    }
}

TEST_CASE("fictitious_target: branch cases and the c0 lead") {
    RobotState r;
    r.xi = {3.0, 1.0, -2.0};
    ConsensusState cons;  // zero tildes, zero speed
    double c0 = 10.0;

    // x == h exactly: the <= branch gives h + c0.
    Vec3 t = fictitious_target(r, cons, {0, 0, 0}, 0.0, c0);
    CHECK(t.x == doctest::Approx(3.0 + c0));
    CHECK(t.y == doctest::Approx(1.0));
    CHECK(t.z == doctest::Approx(-2.0));

    // x > h: the lead is measured from the robot.
    t = fictitious_target(r, cons, {-5.0, 0, 0}, 0.0, c0);  // h = 3 - 5 = -2 < x
    CHECK(t.x == doctest::Approx(3.0 + c0));

    // x < h: lead from h.
    t = fictitious_target(r, cons, {4.0, 2.0, 1.0}, 0.0, c0);  // h = 7 > 3
    CHECK(t.x == doctest::Approx(7.0 + c0));
    CHECK(t.y == doctest::Approx(3.0));
    CHECK(t.z == doctest::Approx(-1.0));

    // Tx - x >= c0 always, over random states.
    RngStream rng = RngStream::from(3, 0, StreamTag::generic);
    for (int i = 0; i < 2000; ++i) {
        RobotState rr;
        rr.xi = {rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50)};
        ConsensusState cc;
        cc.x = rng.uniform(-20, 20);
        cc.v = rng.uniform(2, 8);
        Vec3 off{rng.uniform(-30, 30), 0, 0};
        double tt = rng.uniform(0, 100);
        Vec3 target = fictitious_target(rr, cc, off, tt, c0);
        CHECK(target.x - rr.xi.x >= c0 - 1e-9);
    }
}

TEST_CASE("control: perpendicular pursuit, aligned zero, orthogonality") {
    RobotState r;
    r.xi = {0, 0, 0};
    r.c = {1, 0, 0};
    r.v = 4.0;
    r.theta = 0;
    r.psi = 0;

    // d along +y while V is along +x: u = u_max * (0, 1, 0).
    Vec3 u = control(r, {0, 5, 0}, 2.0);
    CHECK(distance(u, Vec3{0, 2, 0}) < 1e-12);

    // d parallel to V: on the sliding surface, no turn.
    u = control(r, {7, 0, 0}, 2.0);
    CHECK(norm(u) == 0.0);

    // <u, c> = 0 and |u| = u_max off the surface, over random states.
    RngStream rng = RngStream::from(4, 0, StreamTag::generic);
    for (int i = 0; i < 1000; ++i) {
        RobotState rr;
        rr.xi = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        double theta = rng.uniform(-1.2, 1.2), psi = rng.uniform(-kPi, kPi);
        rr.c = heading_vector(theta, psi);
        rr.theta = theta;
        rr.psi = psi;
        rr.v = rng.uniform(2, 8);
        Vec3 target = rr.xi + Vec3{rng.uniform(5, 30), rng.uniform(-20, 20),
                                   rng.uniform(-20, 20)};
        Vec3 uu = control(rr, target, 2.0);
        CHECK(std::abs(dot(uu, rr.c)) <= 1e-9);
        double n = norm(uu);
        CHECK((n == 0.0 || n == doctest::Approx(2.0).epsilon(1e-12)));
    }
}

TEST_CASE("guidance frame bundles target, distance and control") {
    RobotState r;
    r.xi = {1, 2, 3};
    r.c = {1, 0, 0};
    r.v = 4.0;
    ConsensusState cons;
    GuidanceFrame frame = guidance_for(r, cons, {0, 5, -1}, 0.0, 10.0, 2.0);
    CHECK(distance(frame.target, fictitious_target(r, cons, {0, 5, -1}, 0.0, 10.0)) == 0.0);
    CHECK(distance(frame.distance, frame.target - r.xi) == 0.0);
    CHECK(std::abs(dot(frame.control, r.c)) <= 1e-9);
    CHECK(norm(frame.control) == doctest::Approx(2.0));
    CHECK(frame.distance.x >= 10.0);  // the lead never collapses
}

TEST_CASE("speed_rule branches") {
    CHECK(speed_rule(1.0, 2.0, 2.0, 8.0) == 8.0);  // behind: full speed
    CHECK(speed_rule(3.0, 2.0, 2.0, 8.0) == 2.0);  // ahead: slow down
    CHECK(speed_rule(2.0, 2.0, 2.0, 8.0) == 8.0);  // boundary joins <= branch
}

TEST_CASE("alignment angle: zero on the sliding surface, pi/2 for a side target") {
    RobotState r;
    r.xi = {0, 0, 0};
    r.c = {1, 0, 0};
    r.v = 3.0;
    CHECK(alignment_angle(r, {5, 0, 0}) == doctest::Approx(0.0));
    CHECK(alignment_angle(r, {0, 4, 0}) == doctest::Approx(kPi / 2));
    CHECK(alignment_angle(r, {-2, 0, 0}) == doctest::Approx(kPi));
    // Where the control returns zero (aligned), the angle is zero too.
    Vec3 u = control(r, {7, 0, 0}, 2.0);
    CHECK(norm(u) == 0.0);
    CHECK(alignment_angle(r, {7, 0, 0}) < 1e-12);
}

TEST_CASE("angular_rates: projections and bounds") {
    auto [q, r] = angular_rates({0, 0, 0}, 0.3, 0.9);
    CHECK(q == 0.0);
    CHECK(r == 0.0);

    double theta = 0.4, psi = -1.1, u_max = 2.0;
    auto [A, B] = frame_basis(theta, psi);
    auto [q2, r2] = angular_rates(u_max * A, theta, psi);
    CHECK(q2 == doctest::Approx(u_max));
    CHECK(std::abs(r2) < 1e-12);

    RngStream rng = RngStream::from(5, 0, StreamTag::generic);
    for (int i = 0; i < 1000; ++i) {
        double th = rng.uniform(-1.4, 1.4), ps = rng.uniform(-kPi, kPi);
        Vec3 c = heading_vector(th, ps);
        // Random control orthogonal to c with |u| = u_max.
        Vec3 raw = unit_sphere_dir(rng);
        Vec3 perp = raw - dot(raw, c) * c;
        if (norm(perp) < 1e-6) continue;
        Vec3 u = u_max * normalized(perp);
        auto [qq, rr] = angular_rates(u, th, ps);
        CHECK(std::abs(qq) <= u_max + 1e-9);
        CHECK(std::abs(rr) <= u_max * std::abs(std::cos(th)) + 1e-9);
    }
}

TEST_CASE("integrate_step: straight line, unit centerline, circular arc") {
    RobotState r;
    r.xi = {0, 0, 0};
    r.c = {1, 0, 0};
    r.v = 3.0;

    RobotState next = integrate_step(r, {0, 0, 0}, 3.0, 0.01);
    CHECK(distance(next.xi, Vec3{0.03, 0, 0}) < 1e-15);
    CHECK(distance(next.c, r.c) < 1e-15);

    // Constant-turn circle: |u| = 0.5, v = 1 -> radius 2; after a quarter turn
    // the endpoint sits within 1% of the analytic circle point.
    const double u_mag = 0.5, v = 1.0, ts = 0.01;
    const double radius = v / u_mag;
    RobotState s;
    s.xi = {0, 0, 0};
    s.c = {1, 0, 0};
    s.v = v;
    double turned = 0;
    while (turned < kPi / 2) {
        Vec3 u = u_mag * normalized(cross(Vec3{0, 0, 1}, s.c));  // planar left turn
        s = integrate_step(s, u, v, ts);
        turned += u_mag * ts;
        CHECK(norm(s.c) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(s.xi.z) < 1e-9);
    }
    Vec3 analytic{radius * std::sin(turned), radius * (1 - std::cos(turned)), 0};
    CHECK(distance(s.xi, analytic) < 0.01 * radius);
}

TEST_CASE("vacancy_test and slot points") {
    RobotState self;
    self.xi = {1, 2, 3};
    ConsensusState cons;
    cons.x = 0.5;
    cons.v = 4.0;
    Vec3 offset{10, 0, 0};
    double t = 2.0;
    Vec3 point = slot_point(self, cons, offset, t);
    CHECK(point.x == doctest::Approx(1 + 0.5 + 10 + 8));
    CHECK(point.y == doctest::Approx(2));

    std::vector<Vec3> swarm;  // empty: everything vacant
    CHECK(vacancy_test(swarm, self, cons, offset, 5.0, t));
    swarm.push_back(point);  // robot exactly at the slot point
    CHECK_FALSE(vacancy_test(swarm, self, cons, offset, 5.0, t));
    swarm[0] = point + Vec3{5.001, 0, 0};  // just outside lambda
    CHECK(vacancy_test(swarm, self, cons, offset, 5.0, t));

    // Matches a brute-force min-distance check on random swarms.
    RngStream rng = RngStream::from(6, 0, StreamTag::generic);
    for (int i = 0; i < 300; ++i) {
        std::vector<Vec3> ps;
        for (int k = 0; k < 6; ++k)
            ps.push_back({rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(-30, 30)});
        double lambda = rng.uniform(1, 10);
        double min_d = std::numeric_limits<double>::infinity();
        for (const Vec3& p : ps) min_d = std::min(min_d, distance(p, point));
        CHECK(vacancy_test(ps, self, cons, offset, lambda, t) == (min_d > lambda));
    }
}

TEST_CASE("permutation_step: keep when uncontested, uniform jumps when contested") {
    FormationConfig config;
    config.offsets = {{0, 0, 0}, {0, 40, 0}, {0, 80, 0}, {0, 120, 0}};
    config.adjacency = {{0, 1}, {1, 2}, {2, 3}};
    config.c0 = 10;
    config.lambda_vac = 20;
    config.epoch_n = 10;
    config.validate(100.0);

    std::vector<RobotState> robots(4);
    std::vector<ConsensusState> cons(4);
    // Robots parked exactly on distinct slots, with the position consensus
    // converged (y_i + y~_i = 0 for everyone): nobody is contested.
    for (int i = 0; i < 4; ++i) {
        robots[static_cast<std::size_t>(i)].xi = {0, 40.0 * i, 0};
        cons[static_cast<std::size_t>(i)].y = -40.0 * i;
    }
    PermutationState perm;
    perm.assignment = {0, 1, 2, 3};
    PermutationState next = permutation_step(perm, robots, cons, config, 0.0, 1);
    CHECK(next.assignment == perm.assignment);

    // Two robots on the same slot: the support is {own, vacant adjacent}.
    for (auto& cc : cons) cc = ConsensusState{};  // zero tildes again
    robots[1].xi = robots[0].xi;  // robots 0 and 1 both at slot 0's point
    perm.assignment = {0, 0, 2, 3};
    std::map<int, long> jumps;
    const long trials = 10000;
    for (long trial = 0; trial < trials; ++trial) {
        PermutationState p;
        p.assignment = {0, 0, 2, 3};
        p.epoch = trial;  // fresh stream per epoch
        PermutationState stepped = permutation_step(p, robots, cons, config, 0.0, 42);
        jumps[stepped.assignment[0]]++;
        // Slot 1 is vacant and adjacent to 0, slots 2/3 are occupied: robot 0
        // lands on 0 or 1 only.
        CHECK((stepped.assignment[0] == 0 || stepped.assignment[0] == 1));
    }
    // Uniform over the two options.
    std::vector<long> c{jumps[0], jumps[1]};
    CHECK(oracle::chi2_uniform(c, trials) < oracle::chi2_crit_99(1));
}

TEST_CASE("permutation_step: contested with singleton support keeps the slot") {
    FormationConfig config;
    config.offsets = {{0, 0, 0}, {0, 40, 0}};
    config.adjacency = {{0, 1}};
    config.lambda_vac = 20;
    config.validate(100.0);
    std::vector<RobotState> robots(2);
    robots[0].xi = {0, 0, 0};
    robots[1].xi = {0, 1, 0};  // both inside slot 0's sphere; slot 1 also blocked
    std::vector<ConsensusState> cons(2);
    // Put a third position inside slot 1's sphere so it is not vacant: use the
    // robots themselves by placing robot 1 near slot 1? Instead park both robots
    // within lambda of both slots is impossible (slots 40 apart, lambda 20), so
    // emulate singleton support by assigning both robots slot 0 and moving robot
    // 1 inside slot 1's sphere as well as slot 0's is not possible; use a robot
    // exactly between: distance 20 to both -> inside both (closed).
    robots[1].xi = {0, 20, 0};
    PermutationState perm;
    perm.assignment = {0, 0};
    PermutationState next = permutation_step(perm, robots, cons, config, 0.0, 7);
    // Robot 0 is contested (robot 1 within 20 of slot 0) and slot 1 is not
    // vacant (robot 1 within 20 of it): support = {0} alone, so it keeps 0.
    CHECK(next.assignment[0] == 0);
}

TEST_CASE("run_formation: single robot pursues its target and levels out") {
    FormationScenario sc = tetra_scenario(1);
    sc.config.offsets = {{0, 0, 0}};
    sc.config.adjacency.clear();
    sc.t_end = 100.0;
    FormationResult res = run_formation(sc);
    CHECK(res.max_u_norm <= sc.config.u_max + 1e-9);
    CHECK(res.max_u_dot_c <= 1e-9);
    CHECK(res.max_c_norm_err <= 1e-9);
    // Heading settles on the agreed travel direction (psi~ = theta~ = 0 here).
    CHECK(res.final_mean_abs_psi < 0.05);
    CHECK(res.final_mean_abs_theta < 0.05);
}

TEST_CASE("run_formation: tetrahedron constraints and error decay on 3 seeds") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        FormationScenario sc = tetra_scenario(seed);
        FormationResult res = run_formation(sc);
        CHECK(res.max_u_norm <= sc.config.u_max + 1e-9);
        CHECK(res.max_u_dot_c <= 1e-9);
        CHECK(res.max_c_norm_err <= 1e-9);
        CHECK(res.min_v >= sc.config.v_min);
        CHECK(res.max_v <= sc.config.v_max);
        CHECK(res.max_q_abs <= sc.config.u_max + 1e-9);
        CHECK(res.max_r_bound_excess <= 1e-9);
        CHECK(res.final_ey < 0.1 * res.peak_ey);
        CHECK(res.final_ez < 0.1 * res.peak_ez);
        // Absolute floor frozen from the first passing sweep: the discrete
        // sliding mode chatters at the 0.1 m scale with Ts = 0.01, u_max = 2.
        CHECK(res.final_ey < 0.25);
        CHECK(res.final_ez < 0.25);
    }
}

TEST_CASE("run_formation: anonymous assignment absorbs and matches offsets") {
    ScenarioConfig c = preset_scenario("formation-anonymous6", 3);
    FormationScenario sc;
    sc.config = c.formation->config;
    sc.r_c = c.r_c_m;
    sc.anonymous = true;
    sc.seed = 3;
    sc.t_end = c.formation->t_end_s;
    sc.init_box = c.formation->init_box_m;
    FormationResult res = run_formation(sc);
    CHECK(res.assignment_all_distinct);
    CHECK(res.last_assignment_change_epoch < res.total_epochs * 8 / 10);
    CHECK(res.final_offset_error < 1.0);
}

TEST_CASE("formation config validation") {
    FormationConfig config;
    config.offsets = {{0, 0, 0}, {0, 40, 0}};
    config.adjacency = {{0, 1}};
    CHECK_NOTHROW(config.validate(100.0));

    FormationConfig bad = config;
    bad.c0 = 7.9;  // needs > 2 * 8 / 2 = 8
    CHECK_THROWS_AS(bad.validate(100.0), std::invalid_argument);
    bad = config;
    bad.lambda_vac = 60.0;  // >= r_c / 2
    CHECK_THROWS_AS(bad.validate(100.0), std::invalid_argument);
    bad = config;
    bad.adjacency.clear();  // two offsets, no edge: disconnected
    CHECK_THROWS_AS(bad.validate(100.0), std::invalid_argument);
    bad = config;
    bad.v_min = 9.0;
    CHECK_THROWS_AS(bad.validate(100.0), std::invalid_argument);
}
