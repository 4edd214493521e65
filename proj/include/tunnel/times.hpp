#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tunnel/potential.hpp"
#include "tunnel/scattering.hpp"
#include "tunnel/units.hpp"

namespace tunnel {

struct PhaseTimes {
    double dtau_T;  // closed form (square barrier) or numeric (general potential)
    double dtau_R;
    double dtau_T_numeric;
    double dtau_R_numeric;
};

// Centred difference of a smooth scalar function, one Richardson step.
double derivative(const std::function<double(double)>& f, double x, double h);
// d arg f / dx for a complex function, branch-free via arg(f(x+h)/f(x-h)).
double phase_derivative(const std::function<cplx(double)>& f, double x, double h);

PhaseTimes extrapolated_phase_times(const SquareBarrierParams& params, double k,
                                    const UnitSystem& units = UnitSystem::electron());
// Phase times referred to the outer faces a, b of any finite potential:
// dtau_T = (b - a + alpha')/v, dtau_R = (beta' - 2a)/v.
PhaseTimes extrapolated_phase_times(const PiecewisePotential& potential, double k,
                                    const UnitSystem& units = UnitSystem::electron());

// The dimensionless factor v*kappa*dtau that tends to 2 for opaque barriers.
double phase_time_bracket(const SquareBarrierParams& params, double k,
                          const UnitSystem& units = UnitSystem::electron());

// Integral of |psi|^2 / v over [x1, x2]; x2 may be +infinity past a decaying step.
double dwell_time(const PiecewisePotential& potential, double k, double x1, double x2,
                  const UnitSystem& units = UnitSystem::electron());
double dwell_time_closed_form(const SquareBarrierParams& params, double k,
                              const UnitSystem& units = UnitSystem::electron());

struct LarmorTimes {
    double tau_y;
    double tau_z;
    double tau_x;
};

LarmorTimes larmor_times(const SquareBarrierParams& params, double k,
                         const UnitSystem& units = UnitSystem::electron());
// -(m/hbar kappa) d/dkappa of (alpha, ln T) at fixed k; below the barrier only.
LarmorTimes larmor_times_derivative(const SquareBarrierParams& params, double k,
                                    const UnitSystem& units = UnitSystem::electron());
// md/(hbar kappa) and 2mk/(hbar eps^2 kappa)
LarmorTimes larmor_thick_limits(const SquareBarrierParams& params, double k,
                                const UnitSystem& units = UnitSystem::electron());

struct ButtikerLandauer {
    double tau_BL_T;
    double tau_BL_R;
    double I_plus;
    double I_minus;
    double I_reflected;
    double band_ratio;
    bool in_validity_range;  // hbar*omega well below E and V0 - E, deltaV well below V0
};

ButtikerLandauer buttiker_landauer(const SquareBarrierParams& params, double k, double omega, double deltaV,
                                   const UnitSystem& units = UnitSystem::electron());

cplx complex_time(const SquareBarrierParams& params, double k, const UnitSystem& units = UnitSystem::electron());

struct SelfInterference {
    double tau_dwell;
    double tau_T_phase;
    double tau_R_phase;
    double interference;  // (mR/hbar k^2) sin(beta - 2k x1)
    double residual;      // relative to tau_dwell
};

SelfInterference self_interference_identity(const PiecewisePotential& potential, double k, double x1, double x2,
                                            const UnitSystem& units = UnitSystem::electron());
SelfInterference self_interference_identity(const SquareBarrierParams& params, double k, double x1,
                                            const UnitSystem& units = UnitSystem::electron());

struct ReshapingResult {
    double peak_k;
    double peak_shift;
    double transmitted_mean_k;
    double weight_above_k0;   // fraction of the |T f|^2 weight with k > k0
    double weight_above_eps;  // fraction with k > eps
    // Sub-intervals of k > k0 where T'(k) > T(k)(k - k0)/dk^2
    std::vector<std::pair<double, double>> violations;
    std::optional<std::pair<double, double>> violation_hull;
};

ReshapingResult reshaping_check(const SquareBarrierParams& params, double k0, double dk, int grid_points = 20001,
                                const UnitSystem& units = UnitSystem::electron());

struct PacketSpectrumSummary {
    double k0;
    double dk;
    double mean_k_in;
    double mean_k_T;
    double mean_k_R;
    double mean_alpha_prime_T;
    double mean_beta_prime_R;
    double x0;
    double weight_T;
    double weight_R;
};

PacketSpectrumSummary packet_spectrum_summary(const PiecewisePotential& potential, double k0, double dk, double x0,
                                              int nodes = 513, const UnitSystem& units = UnitSystem::electron());

struct CentroidTimes {
    double tau_C_T;
    double tau_C_R;
};

CentroidTimes centroid_times(const PacketSpectrumSummary& s, const SquareBarrierParams& params,
                             const UnitSystem& units = UnitSystem::electron());

struct TimeReport {
    double k;
    double E;
    double T;
    double R;
    double alpha;
    double beta;
    double tau_eq;
    double dtau_phase_T;
    double dtau_phase_R;
    double tau_dwell;
    double tau_larmor_y;
    double tau_larmor_z;
    double tau_larmor_x;
    double tau_BL_T;
    double tau_BL_R;
    double tau_semiclassical;
    cplx tau_complex;
    bool above_barrier;
};

TimeReport time_report(const SquareBarrierParams& params, double k, const UnitSystem& units = UnitSystem::electron());

}  // namespace tunnel
