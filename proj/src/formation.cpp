#include "swarm3d/formation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace s3d {

Vec3 heading_vector(double theta, double psi) {
    return {std::cos(theta) * std::cos(psi), std::cos(theta) * std::sin(psi),
            -std::sin(theta)};
}

std::pair<Vec3, Vec3> frame_basis(double theta, double psi) {
    Vec3 a{-std::sin(theta) * std::cos(psi), -std::sin(theta) * std::sin(psi),
           -std::cos(theta)};
    Vec3 b{-std::cos(theta) * std::sin(psi), std::cos(theta) * std::cos(psi), 0.0};
    return {a, b};
}

void FormationConfig::validate(double r_c) const {
    if (offsets.empty()) throw std::invalid_argument("formation: offsets must be nonempty");
    if (!(v_min > 0 && v_min < v_max))
        throw std::invalid_argument("formation: need 0 < v_min < v_max");
    if (!(u_max > 0)) throw std::invalid_argument("formation: u_max must be > 0");
    if (!(c0 > 2.0 * v_max / u_max))
        throw std::invalid_argument("formation: c0 must exceed 2*v_max/u_max");
    if (!(ts > 0)) throw std::invalid_argument("formation: ts must be > 0");
    if (epoch_n <= 1) throw std::invalid_argument("formation: epoch_n must be > 1");
    if (!(lambda_vac > 0 && lambda_vac < r_c / 2.0))
        throw std::invalid_argument("formation: need 0 < lambda_vac < r_c/2");
    const int n = static_cast<int>(offsets.size());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : adjacency) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b)
            throw std::invalid_argument("formation: bad adjacency edge");
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    // Configuration graph must be connected for the anonymous chain to mix.
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    if (count != n) throw std::invalid_argument("formation: adjacency graph must be connected");
}

Vec3 fictitious_target(const RobotState& robot, const ConsensusState& cons,
                       Vec3 offset, double t, double c0) {
    double h = robot.xi.x + cons.x + offset.x + t * cons.v;
    double tx = (robot.xi.x <= h) ? h + c0 : robot.xi.x + c0;
    return {tx, robot.xi.y + cons.y + offset.y, robot.xi.z + cons.z + offset.z};
}

Vec3 control(const RobotState& robot, Vec3 target, double u_max) {
    if (!(robot.v > 0)) throw std::invalid_argument("control: v must be > 0");
    Vec3 d = target - robot.xi;
    Vec3 vel = robot.v * robot.c;
    Vec3 d_u = d - (dot(d, vel) / norm_sq(vel)) * vel;
    if (norm(d_u) < 1e-9 * norm(d)) return {0, 0, 0};  // on the sliding surface
    // Second projection pass: when d is nearly parallel to the velocity the
    // first subtraction cancels catastrophically and the residual along c would
    // survive normalization.
    d_u = d_u - dot(d_u, robot.c) * robot.c;
    if (norm(d_u) == 0.0) return {0, 0, 0};
    return u_max * normalized(d_u);
}

double speed_rule(double x, double h, double v_min, double v_max) {
    return x <= h ? v_max : v_min;
}

GuidanceFrame guidance_for(const RobotState& robot, const ConsensusState& cons,
                           Vec3 offset, double t, double c0, double u_max) {
    GuidanceFrame frame;
    frame.target = fictitious_target(robot, cons, offset, t, c0);
    frame.distance = frame.target - robot.xi;
    frame.control = control(robot, frame.target, u_max);
    return frame;
}

double alignment_angle(const RobotState& robot, Vec3 target) {
    Vec3 d = target - robot.xi;
    double dn = norm(d);
    if (dn == 0.0) return 0.0;
    double cosang = std::clamp(dot(robot.c, d) / dn, -1.0, 1.0);
    return std::acos(cosang);
}

std::pair<double, double> angular_rates(Vec3 u, double theta, double psi) {
    auto [a, b] = frame_basis(theta, psi);
    return {dot(u, a), dot(u, b)};
}

RobotState integrate_step(const RobotState& robot, Vec3 u, double v, double ts) {
    if (!(ts > 0)) throw std::invalid_argument("integrate_step: ts must be > 0");
    RobotState next = robot;
    next.xi = robot.xi + (ts * v) * robot.c;
    next.c = normalized(robot.c + ts * u);
    next.v = v;
    next.theta = -std::asin(std::clamp(next.c.z, -1.0, 1.0));
    next.psi = std::atan2(next.c.y, next.c.x);
    return next;
}

Vec3 slot_point(const RobotState& robot, const ConsensusState& cons, Vec3 offset,
                double t) {
    return {robot.xi.x + cons.x + offset.x + t * cons.v,
            robot.xi.y + cons.y + offset.y, robot.xi.z + cons.z + offset.z};
}

bool vacancy_test(std::span<const Vec3> robot_positions, const RobotState& self,
                  const ConsensusState& self_cons, Vec3 offset_j, double lambda_vac,
                  double t) {
    Vec3 point = slot_point(self, self_cons, offset_j, t);
    const double l2 = lambda_vac * lambda_vac;
    for (const Vec3& p : robot_positions)
        if (norm_sq(p - point) <= l2) return false;
    return true;
}

PermutationState permutation_step(const PermutationState& perm,
                                  std::span<const RobotState> robots,
                                  std::span<const ConsensusState> consensus,
                                  const FormationConfig& config, double t,
                                  std::uint64_t seed) {
    const int n = static_cast<int>(robots.size());
    if (static_cast<int>(perm.assignment.size()) != n ||
        static_cast<int>(consensus.size()) != n)
        throw std::invalid_argument("permutation_step: arrays must be aligned");

    std::vector<std::vector<int>> adj(config.offsets.size());
    for (auto [a, b] : config.adjacency) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());

    std::vector<Vec3> positions;
    positions.reserve(robots.size());
    for (const RobotState& r : robots) positions.push_back(r.xi);

    PermutationState next = perm;
    next.epoch = perm.epoch + 1;
    const double l2 = config.lambda_vac * config.lambda_vac;
    for (int i = 0; i < n; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const int slot = perm.assignment[ui];
        Vec3 own_point = slot_point(robots[ui], consensus[ui],
                                    config.offsets[static_cast<std::size_t>(slot)], t);
        bool contested = false;  // b_i: another robot sits inside my slot sphere
        for (int j = 0; j < n; ++j)
            if (j != i && norm_sq(positions[static_cast<std::size_t>(j)] - own_point) <= l2) {
                contested = true;
                break;
            }
        if (!contested) continue;

        std::vector<int> support{slot};
        for (int j : adj[static_cast<std::size_t>(slot)])
            if (vacancy_test(positions, robots[ui], consensus[ui],
                             config.offsets[static_cast<std::size_t>(j)],
                             config.lambda_vac, t))
                support.push_back(j);
        if (support.size() <= 1) continue;
        RngStream rng = RngStream::from(seed, ui, StreamTag::permutation,
                                        static_cast<std::uint64_t>(perm.epoch));
        next.assignment[ui] = support[rng.below(support.size())];
    }
    return next;
}

namespace {

double pair_error_max(std::span<const RobotState> robots,
                      const std::vector<Vec3>& offsets,
                      const std::vector<int>& assignment, bool z_axis) {
    double worst = 0.0;
    const int n = static_cast<int>(robots.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto oi = offsets[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
            const auto oj = offsets[static_cast<std::size_t>(assignment[static_cast<std::size_t>(j)])];
            double e = z_axis ? (robots[static_cast<std::size_t>(i)].xi.z -
                                 robots[static_cast<std::size_t>(j)].xi.z) - (oi.z - oj.z)
                              : (robots[static_cast<std::size_t>(i)].xi.y -
                                 robots[static_cast<std::size_t>(j)].xi.y) - (oi.y - oj.y);
            worst = std::max(worst, std::abs(e));
        }
    return worst;
}

}  // namespace

FormationResult run_formation(const FormationScenario& sc) {
    sc.config.validate(sc.r_c);
    sc.init_box.validate();
    const int n = static_cast<int>(sc.config.offsets.size());
    const double ts = sc.config.ts;
    const std::int64_t ticks = static_cast<std::int64_t>(std::llround(sc.t_end / ts));

    std::vector<RobotState> robots(static_cast<std::size_t>(n));
    std::vector<ConsensusState> cons(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        RngStream pos_rng = RngStream::from(sc.seed, ui, StreamTag::init_position);
        RngStream head_rng = RngStream::from(sc.seed, ui, StreamTag::init_heading);
        RngStream cons_rng = RngStream::from(sc.seed, ui, StreamTag::init_consensus);
        robots[ui].xi = uniform_in_region(sc.init_box, pos_rng);
        double theta0 = head_rng.uniform(0.0, 3.14159265358979323846);
        double psi0 = head_rng.uniform(0.0, 3.14159265358979323846);
        robots[ui].c = heading_vector(theta0, psi0);
        robots[ui].theta = -std::asin(std::clamp(robots[ui].c.z, -1.0, 1.0));
        robots[ui].psi = std::atan2(robots[ui].c.y, robots[ui].c.x);
        robots[ui].v = head_rng.uniform(sc.config.v_min, sc.config.v_max);
        cons[ui].v = cons_rng.uniform(sc.config.v_min, sc.config.v_max);
        if (sc.random_heading_consensus) {
            cons[ui].theta = cons_rng.uniform(0.0, 3.14159265358979323846);
            cons[ui].psi = cons_rng.uniform(0.0, 3.14159265358979323846);
        }
    }

    PermutationState perm;
    perm.assignment.resize(static_cast<std::size_t>(n));
    if (sc.anonymous) {
        // Anonymous robots start with an arbitrary (possibly colliding) guess.
        for (int i = 0; i < n; ++i) {
            RngStream rng = RngStream::from(sc.seed, static_cast<std::uint64_t>(i),
                                            StreamTag::permutation);
            perm.assignment[static_cast<std::size_t>(i)] =
                static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        }
    } else {
        for (int i = 0; i < n; ++i) perm.assignment[static_cast<std::size_t>(i)] = i;
    }

    FormationResult res;
    res.ticks = ticks;
    res.min_v = std::numeric_limits<double>::infinity();
    res.max_v = -std::numeric_limits<double>::infinity();
    res.max_ey.reserve(static_cast<std::size_t>(ticks));
    res.max_ez.reserve(static_cast<std::size_t>(ticks));

    for (std::int64_t tick = 0; tick < ticks; ++tick) {
        const double t = static_cast<double>(tick) * ts;

        if (sc.anonymous && tick % sc.config.epoch_n == 0) {
            PermutationState stepped =
                permutation_step(perm, robots, cons, sc.config, t, sc.seed);
            if (stepped.assignment != perm.assignment)
                res.last_assignment_change_epoch = stepped.epoch;
            perm = stepped;
            ++res.total_epochs;
        }

        CommGraph g = build_graph(
            [&] {
                std::vector<Vec3> ps;
                ps.reserve(robots.size());
                for (const RobotState& r : robots) ps.push_back(r.xi);
                return ps;
            }(),
            sc.r_c);

        std::vector<Vec3> pos_k(static_cast<std::size_t>(n));
        std::vector<Vec3> pos_k1(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            pos_k[ui] = robots[ui].xi;
            Vec3 offset = sc.config.offsets[static_cast<std::size_t>(perm.assignment[ui])];
            double h = robots[ui].xi.x + cons[ui].x + offset.x + t * cons[ui].v;
            double v = speed_rule(robots[ui].xi.x, h, sc.config.v_min, sc.config.v_max);
            // Guidance is computed at the commanded speed.
            RobotState commanded = robots[ui];
            commanded.v = v;
            GuidanceFrame frame =
                guidance_for(commanded, cons[ui], offset, t, sc.config.c0, sc.config.u_max);
            Vec3 u = frame.control;
            auto [q, r] = angular_rates(u, robots[ui].theta, robots[ui].psi);

            res.max_u_norm = std::max(res.max_u_norm, norm(u));
            res.max_u_dot_c = std::max(res.max_u_dot_c, std::abs(dot(u, robots[ui].c)));
            res.max_q_abs = std::max(res.max_q_abs, std::abs(q));
            res.max_r_bound_excess =
                std::max(res.max_r_bound_excess,
                         std::abs(r) - sc.config.u_max * std::abs(std::cos(robots[ui].theta)));
            res.min_v = std::min(res.min_v, v);
            res.max_v = std::max(res.max_v, v);

            if (sc.record_trajectory && tick % sc.trajectory_stride == 0)
                res.trajectory.push_back({tick, i, robots[ui].xi, robots[ui].theta,
                                          robots[ui].psi, v, norm(u), q, r});

            robots[ui] = integrate_step(robots[ui], u, v, ts);
            res.max_c_norm_err =
                std::max(res.max_c_norm_err, std::abs(norm(robots[ui].c) - 1.0));
            pos_k1[ui] = robots[ui].xi;
        }

        cons = formation_center_consensus_step(cons, pos_k, pos_k1, g);

        res.max_ey.push_back(pair_error_max(robots, sc.config.offsets, perm.assignment, false));
        res.max_ez.push_back(pair_error_max(robots, sc.config.offsets, perm.assignment, true));
    }

    res.peak_ey = res.max_ey.empty() ? 0.0 : *std::max_element(res.max_ey.begin(), res.max_ey.end());
    res.peak_ez = res.max_ez.empty() ? 0.0 : *std::max_element(res.max_ez.begin(), res.max_ez.end());
    const std::size_t tail = std::max<std::size_t>(1, res.max_ey.size() / 20);
    for (std::size_t i = res.max_ey.size() > tail ? res.max_ey.size() - tail : 0;
         i < res.max_ey.size(); ++i) {
        res.final_ey = std::max(res.final_ey, res.max_ey[i]);
        res.final_ez = std::max(res.final_ez, res.max_ez[i]);
    }

    double sum_psi = 0, sum_theta = 0;
    for (const RobotState& r : robots) {
        sum_psi += std::abs(r.psi);
        sum_theta += std::abs(r.theta);
    }
    res.final_mean_abs_psi = sum_psi / static_cast<double>(n);
    res.final_mean_abs_theta = sum_theta / static_cast<double>(n);

    res.final_assignment = perm.assignment;
    std::vector<int> sorted = perm.assignment;
    std::sort(sorted.begin(), sorted.end());
    res.assignment_all_distinct =
        std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();

    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const std::size_t ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            Vec3 oi = sc.config.offsets[static_cast<std::size_t>(perm.assignment[ui])];
            Vec3 oj = sc.config.offsets[static_cast<std::size_t>(perm.assignment[uj])];
            worst = std::max(worst, std::abs((robots[ui].xi.y - robots[uj].xi.y) - (oi.y - oj.y)));
            worst = std::max(worst, std::abs((robots[ui].xi.z - robots[uj].xi.z) - (oi.z - oj.z)));
        }
    res.final_offset_error = worst;
    return res;
}

}  // namespace s3d
