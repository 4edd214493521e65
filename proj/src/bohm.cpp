#include "tunnel/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tunnel {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double bohm_velocity(const PacketField& field, double x, double t) {
    const WaveValue w = field.evolve(x, t);
    return field.units().hbar_over_m() * std::imag(w.dpsi / w.psi);
}

namespace {

struct Rhs {
    const PacketField& field;
    double rho_floor;
    bool hit_floor = false;
    double operator()(double t, double x) {
        const WaveValue w = field.evolve(x, t);
        if (!(std::norm(w.psi) > rho_floor)) {
            hit_floor = true;
            return 0.0;
        }
        return field.units().hbar_over_m() * std::imag(w.dpsi / w.psi);
    }
};

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double crossing_time(double t0, double x0, double t1, double x1, double edge) {
    return t0 + (t1 - t0) * (edge - x0) / (x1 - x0);
}

}  // namespace

std::vector<BohmTrajectory> bohm_trajectories(const PacketField& field, const std::vector<double>& seeds,
                                              const BohmOptions& o) {
    if (!(o.t_end > o.t_start)) throw std::invalid_argument("bohm_trajectories needs t_end > t_start");
    const double a = field.potential().left_edge(), b = field.potential().right_edge();
    std::vector<BohmTrajectory> out;
    out.reserve(seeds.size());
    for (double x0 : seeds) {
        BohmTrajectory tr;
        tr.t_enter = tr.t_exit = kNaN;
        Rhs f{field, o.rho_floor};
        double t = o.t_start, x = x0;
        tr.t.push_back(t);
        tr.x.push_back(x);
        double k1 = f(t, x);
        double h = std::min(o.max_step, 1e-17);
        std::size_t steps = 0;
        while (t < o.t_end && !f.hit_floor) {
            if (++steps > o.max_steps) {
                tr.degenerate = true;
                break;
            }
            h = std::min({h, o.max_step, o.t_end - t});
            const double k2 = f(t + c2 * h, x + h * a21 * k1);
            const double k3 = f(t + c3 * h, x + h * (a31 * k1 + a32 * k2));
            const double k4 = f(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const double k5 = f(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const double k6 = f(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const double xn = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const double k7 = f(t + h, xn);
            if (f.hit_floor) break;
            const double err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
            const double tol = o.abs_tol + o.rel_tol * std::max(std::abs(x), std::abs(xn));
            if (err <= tol) {
                const double tn = t + h;
                if (std::isnan(tr.t_enter) && x < a && xn >= a) tr.t_enter = crossing_time(t, x, tn, xn, a);
                if (std::isnan(tr.t_exit) && x < b && xn >= b) tr.t_exit = crossing_time(t, x, tn, xn, b);
                // time inside [a, b], with linear interpolation at the edges
                const double lo = std::min(x, xn), hi = std::max(x, xn);
                if (hi > lo) {
                    const double overlap = std::max(0.0, std::min(hi, b) - std::max(lo, a));
                    tr.dwell += h * overlap / (hi - lo);
                } else if (x >= a && x <= b) {
                    tr.dwell += h;
                }
                t = tn;
                x = xn;
                k1 = k7;
                tr.t.push_back(t);
                tr.x.push_back(x);
            }
            const double fac = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        }
        if (f.hit_floor) tr.degenerate = true;
        if (!tr.degenerate) {
            tr.transmitted = x > b;
            tr.reflected = x < a;
        }
        out.push_back(std::move(tr));
    }
    return out;
}

std::vector<BohmTrajectory> bohm_trajectories(const PacketField& field, const BohmSeeds& seeds,
                                              const BohmOptions& opts) {
    std::vector<BohmTrajectory> out = bohm_trajectories(field, seeds.x, opts);
    for (std::size_t i = 0; i < out.size() && i < seeds.weight.size(); ++i) out[i].weight = seeds.weight[i];
    return out;
}

BohmSeeds quantile_seeds(const PacketField& field, double t, double x_lo, double x_hi, double q_lo, double q_hi,
                         int n, int grid_points) {
    if (!(x_lo < x_hi) || !(q_lo >= 0.0) || !(q_hi <= 1.0) || !(q_lo < q_hi) || n < 1 || grid_points < 3) {
        throw std::invalid_argument("quantile_seeds: bad arguments");
    }
    std::vector<double> xs(grid_points), cum(grid_points, 0.0);
    double prev = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        xs[i] = x_lo + (x_hi - x_lo) * i / (grid_points - 1);
        const double rho = std::norm(field.evolve(xs[i], t).psi);
        if (i > 0) cum[i] = cum[i - 1] + 0.5 * (rho + prev) * (xs[i] - xs[i - 1]);
        prev = rho;
    }
    const double total = cum.back();
    if (!(total > 0.0)) throw std::domain_error("quantile_seeds: no probability in the window");
    BohmSeeds s;
    for (int j = 0; j < n; ++j) {
        const double q = q_lo + (q_hi - q_lo) * (j + 0.5) / n;
        const double target = q * total;
        const auto it = std::lower_bound(cum.begin(), cum.end(), target);
        const std::size_t i = std::clamp<std::size_t>(it - cum.begin(), 1, cum.size() - 1);
        const double frac = cum[i] > cum[i - 1] ? (target - cum[i - 1]) / (cum[i] - cum[i - 1]) : 0.5;
        s.x.push_back(xs[i - 1] + frac * (xs[i] - xs[i - 1]));
        s.weight.push_back((q_hi - q_lo) * total / n);
    }
    return s;
}

BohmSummary summarize_trajectories(const std::vector<BohmTrajectory>& traj) {
    BohmSummary s{};
    double w = 0.0, w_exit = 0.0, w_enter = 0.0, w_trav = 0.0, w_trav2 = 0.0, w_dwell = 0.0;
    for (const BohmTrajectory& tr : traj) {
        if (tr.degenerate) ++s.degenerate;
        if (tr.reflected) ++s.reflected;
        if (!tr.transmitted || std::isnan(tr.t_exit) || std::isnan(tr.t_enter)) continue;
        ++s.transmitted;
        const double wt = tr.weight > 0.0 ? tr.weight : 1.0;
        const double d = tr.t_exit - tr.t_enter;
        w += wt;
        w_exit += wt * tr.t_exit;
        w_enter += wt * tr.t_enter;
        w_trav += wt * d;
        w_trav2 += wt * d * d;
        w_dwell += wt * tr.dwell;
    }
    s.mean_exit_time = w > 0 ? w_exit / w : kNaN;
    s.mean_enter_time = w > 0 ? w_enter / w : kNaN;
    s.mean_traversal = w > 0 ? w_trav / w : kNaN;
    s.var_traversal = w > 0 ? std::max(0.0, w_trav2 / w - s.mean_traversal * s.mean_traversal) : kNaN;
    s.mean_dwell = w > 0 ? w_dwell / w : kNaN;

    // 1-D Bohm trajectories keep their order; check it on the common start and final samples.
    s.crossing_free = true;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const BohmTrajectory& p = traj[i - 1];
        const BohmTrajectory& q = traj[i];
        if (p.x.empty() || q.x.empty() || p.degenerate || q.degenerate) continue;
        const bool start_order = p.x.front() < q.x.front();
        if (std::abs(p.t.back() - q.t.back()) < 1e-30 && (p.x.back() < q.x.back()) != start_order) {
            s.crossing_free = false;
        }
    }
    return s;
}

}  // namespace tunnel
