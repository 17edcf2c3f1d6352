#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "swarm3d/consensus.hpp"
#include "swarm3d/network.hpp"
#include "swarm3d/rng.hpp"
#include "swarm3d/vec3.hpp"

namespace s3d {

// Nonholonomic robot: position xi, unit centerline c, speed v. The centerline is
// the state; pitch/yaw are recomputed from it for reporting.
struct RobotState {
    Vec3 xi;
    Vec3 c{1, 0, 0};
    double v = 0.0;
    double theta = 0.0;  // pitch, c = (cos t cos p, cos t sin p, -sin t)
    double psi = 0.0;    // yaw
};

// c(theta, psi) = (cos theta cos psi, cos theta sin psi, -sin theta)
Vec3 heading_vector(double theta, double psi);

// A = (-sin t cos p, -sin t sin p, -cos t), B = (-cos t sin p, cos t cos p, 0);
// both orthogonal to c, |A| = 1, |B| = cos theta.
std::pair<Vec3, Vec3> frame_basis(double theta, double psi);

struct FormationConfig {
    std::vector<Vec3> offsets;                   // configuration C = {X_i, Y_i, Z_i}
    std::vector<std::pair<int, int>> adjacency;  // configuration graph g (undirected)
    double c0 = 10.0;                            // fictitious-target lead, > 2 Vmax/umax
    double v_min = 2.0;
    double v_max = 8.0;
    double u_max = 2.0;
    int epoch_n = 10;         // permutation epoch, ticks
    double lambda_vac = 20.0; // vacancy radius, 0 < lambda < r_c / 2
    double ts = 0.01;         // sampling time, seconds

    void validate(double r_c) const;
};

// Fictitious target per the two-case x rule:
//   h = x + x~ + X + t v~;  Tx = h + c0 if x <= h else x + c0;
//   Ty = y + y~ + Y;  Tz = z + z~ + Z.
Vec3 fictitious_target(const RobotState& robot, const ConsensusState& cons,
                       Vec3 offset, double t, double c0);

// Sliding-mode turn command: u = u_max * unit(d - <d,V>/|V|^2 V), orthogonal to c
// by construction; zero when d is (numerically) parallel to V.
Vec3 control(const RobotState& robot, Vec3 target, double u_max);

// One robot's guidance quantities for a tick: the fictitious target, the
// distance vector to it, and the turn command (<control, c> = 0, |control| is
// either u_max or 0).
struct GuidanceFrame {
    Vec3 target;
    Vec3 distance;
    Vec3 control;
};

GuidanceFrame guidance_for(const RobotState& robot, const ConsensusState& cons,
                           Vec3 offset, double t, double c0, double u_max);

double speed_rule(double x, double h, double v_min, double v_max);

// Angle between the velocity vector and the line of sight to the pursued
// target; the switching surface of the guidance law is alignment_angle = 0.
// Diagnostic only, drives no control decision.
double alignment_angle(const RobotState& robot, Vec3 target);

// (q, r) = (<u, A>, <u, B>); |q| <= u_max and |r| <= u_max cos theta.
std::pair<double, double> angular_rates(Vec3 u, double theta, double psi);

// Explicit Euler: xi += Ts v c, c += Ts u then renormalized; angles recomputed.
RobotState integrate_step(const RobotState& robot, Vec3 u, double v, double ts);

// The consensus-frame point where configuration slot `offset` currently sits for
// the evaluating robot.
Vec3 slot_point(const RobotState& robot, const ConsensusState& cons, Vec3 offset,
                double t);

// Definition-style vacancy: no robot (any index) within lambda of the slot point.
bool vacancy_test(std::span<const Vec3> robot_positions, const RobotState& self,
                  const ConsensusState& self_cons, Vec3 offset_j, double lambda_vac,
                  double t);

struct PermutationState {
    std::vector<int> assignment;  // p(i), configuration index per robot
    std::int64_t epoch = 0;
};

// One epoch of the anonymous-assignment chain: robot i keeps p(i) when its own
// slot is uncontested (b_i = 0); otherwise it jumps uniformly within
// S = {p(i)} u {vacant slots adjacent to p(i) in g}.
PermutationState permutation_step(const PermutationState& perm,
                                  std::span<const RobotState> robots,
                                  std::span<const ConsensusState> consensus,
                                  const FormationConfig& config, double t,
                                  std::uint64_t seed);

struct FormationScenario {
    FormationConfig config;
    double r_c = 100.0;
    bool anonymous = false;
    std::uint64_t seed = 0;
    double t_end = 200.0;
    Region init_box{{0, 0, 0}, {50, 50, 50}};
    // Heading-consensus initials theta~(0), psi~(0): zero by default, which picks
    // the world x-axis as the agreed travel direction; when true they are drawn
    // uniformly from [0, pi) per the stated assumption (diagnostic only, the
    // control law is expressed in the travel frame).
    bool random_heading_consensus = false;
    bool record_trajectory = false;
    int trajectory_stride = 10;
};

struct FormationTickRow {
    std::int64_t tick;
    int robot;
    Vec3 xi;
    double theta, psi, v, u_norm, q, r;
};

struct FormationResult {
    std::int64_t ticks = 0;
    std::vector<double> max_ey;  // per tick, max over pairs |ey_ij|
    std::vector<double> max_ez;
    double peak_ey = 0, final_ey = 0;  // final = max over the last 5% of ticks
    double peak_ez = 0, final_ez = 0;
    // Constraint extremes over the whole run.
    double max_u_norm = 0;
    double max_u_dot_c = 0;
    double max_c_norm_err = 0;
    double min_v = 0, max_v = 0;
    double max_q_abs = 0;
    double max_r_bound_excess = 0;  // max(|r| - u_max cos theta)
    double final_mean_abs_psi = 0, final_mean_abs_theta = 0;
    std::vector<int> final_assignment;
    bool assignment_all_distinct = false;
    std::int64_t last_assignment_change_epoch = -1;
    std::int64_t total_epochs = 0;
    double final_offset_error = 0;  // max | (xi_i - xi_j) - (C_p(i) - C_p(j)) | in y,z
    std::vector<FormationTickRow> trajectory;
};

FormationResult run_formation(const FormationScenario& scenario);

}  // namespace s3d
