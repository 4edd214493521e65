#pragma once

#include <vector>

#include "tunnel/wavepacket.hpp"

namespace tunnel {

// Local velocity J/rho = (hbar/m) Im(psi'/psi) in A/s.
double bohm_velocity(const PacketField& field, double x, double t);

struct BohmOptions {
    double t_start = -1e-13;
    double t_end = 1e-13;
    double abs_tol = 1e-7;  // A
    double rel_tol = 1e-9;
    double max_step = 2e-16;
    double rho_floor = 1e-16;
    std::size_t max_steps = 200000;
};

struct BohmTrajectory {
    std::vector<double> t;
    std::vector<double> x;
    double weight = 0.0;  // probability carried by the seed
    bool degenerate = false;
    bool transmitted = false;
    bool reflected = false;
    double t_enter = 0.0;  // first crossing of the left edge (NaN if never)
    double t_exit = 0.0;   // first crossing of the right edge (NaN if never)
    double dwell = 0.0;    // total time spent between the edges
};

struct BohmSeeds {
    std::vector<double> x;
    std::vector<double> weight;
};

std::vector<BohmTrajectory> bohm_trajectories(const PacketField& field, const BohmSeeds& seeds,
                                              const BohmOptions& opts = {});
std::vector<BohmTrajectory> bohm_trajectories(const PacketField& field, const std::vector<double>& seeds,
                                              const BohmOptions& opts = {});


// Seeds at the midpoints of n equal-probability slices of the cumulative |Psi(x, t)|^2
// between quantiles q_lo and q_hi, with the cumulative taken over [x_lo, x_hi].
BohmSeeds quantile_seeds(const PacketField& field, double t, double x_lo, double x_hi, double q_lo, double q_hi,
                         int n, int grid_points = 20001);

struct BohmSummary {
    int transmitted = 0;
    int reflected = 0;
    int degenerate = 0;
    double mean_exit_time;   // weighted over transmitted trajectories
    double mean_enter_time;  // same trajectories, crossing the left edge
    double mean_traversal;   // mean of t_exit - t_enter
    double var_traversal;    // variance of t_exit - t_enter, computed directly
    double mean_dwell;
    bool crossing_free;      // no two trajectories swapped order
};

BohmSummary summarize_trajectories(const std::vector<BohmTrajectory>& traj);

}  // namespace tunnel
