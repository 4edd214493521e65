#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "tunnel/potential.hpp"
#include "tunnel/quadrature.hpp"
#include "tunnel/scattering.hpp"
#include "tunnel/units.hpp"

namespace tunnel {

// Gaussian spectrum f(k - k0) = exp[-(k - k0)^2 / 2 dk^2] on a Gauss-Legendre grid over
// [max(1e-4, k0 - 5 dk), k0 + 5 dk], rescaled so that sum w f^2 = 1. The spectral phase
// exp(-i k x_c) puts the free-motion centroid at x_c at t = 0.
struct SpectralPacket {
    double k0 = 0.0;
    double dk = 0.0;
    double x_c = 0.0;
    QuadratureRule grid;
    std::vector<double> f;
    double C = 0.0;  // 1/sqrt(2 pi) for the normalised f

    static SpectralPacket gaussian(double k0, double dk, double x_c = 0.0, int nodes = 513);
    int nodes() const { return static_cast<int>(grid.nodes.size()); }
    double spectral_norm() const;  // sum w f^2
};

enum class PacketPart {
    Full,       // the scattered packet
    Incident,   // exp(ikx) only, as if the barrier were absent
    Reflected,  // R exp(-ikx) only, meaningful left of the barrier
};

// Stationary states at every grid k, ready for superposition.
class PacketField {
public:
    PacketField(const SpectralPacket& packet, const PiecewisePotential& potential,
                const UnitSystem& units = UnitSystem::electron());

    WaveValue evolve(double x, double t, PacketPart part = PacketPart::Full) const;

    // Per-node coefficients at a fixed x: Psi(x,t) = sum_n a_n exp(-i w_n t).
    struct Probe {
        double x;
        std::vector<cplx> a;
        std::vector<cplx> b;  // same for dPsi/dx
    };
    Probe probe(double x, PacketPart part = PacketPart::Full) const;
    // Values on a uniform time grid t0 + j dt, j < count, via a phase recurrence.
    std::vector<WaveValue> series(const Probe& p, double t0, double dt, std::size_t count) const;

    const SpectralPacket& packet() const { return packet_; }
    const PiecewisePotential& potential() const { return potential_; }
    const UnitSystem& units() const { return units_; }
    const std::vector<ScatteringState>& states() const { return states_; }
    const std::vector<double>& omegas() const { return omega_; }
    // Spectral transmitted and reflected probabilities, sum w f^2 |T|^2 and sum w f^2 |R|^2.
    double transmitted_weight() const;
    double reflected_weight() const;

private:
    SpectralPacket packet_;
    PiecewisePotential potential_;
    UnitSystem units_;
    std::vector<ScatteringState> states_;
    std::vector<double> omega_;
    std::vector<cplx> coeff_;  // C w f exp(-i k x_c)
};

struct TimeGridOptions {
    double t_min = -1e-13;
    double t_max = 1e-13;
    double coarse_dt = 1e-15;
    double fine_dt = 1e-17;
    double support_threshold = 1e-12;  // relative to max |J| on the coarse scan
    double pad_widths = 10.0;          // support padding in units of the |J| rms width
    // A sign part is low-confidence when its integral is below this fraction of the probe's
    // total integral of |J| over time.
    double flux_floor = 1e-6;
};

struct ArrivalStats {
    double mean_t_plus;
    double mean_t_minus;
    double var_t_plus;
    double var_t_minus;
    double total_plus_flux;   // integral of J_+ dt
    double total_minus_flux;  // integral of J_- dt (<= 0)
    double total_abs_flux;
    bool low_confidence_plus;
    bool low_confidence_minus;
};

struct FluxRecord {
    double x = 0.0;
    std::vector<double> t;
    std::vector<double> J;
    std::vector<double> J_plus;
    std::vector<double> J_minus;
    std::vector<double> N_gt;  // integral of J_+ up to t
    std::vector<double> N_lt;  // minus the integral of J_- up to t
    ArrivalStats stats{};

    // w_+ and w_- densities, each normalised to unit integral when the part is nonzero.
    std::vector<double> w_plus() const;
    std::vector<double> w_minus() const;
};

// Integrals over a piecewise-linear J, split exactly at sign changes.
ArrivalStats arrival_stats(const std::vector<double>& t, const std::vector<double>& J, double flux_floor = 1e-6);

// Sampled on a uniform grid spanning [t_min, t_max].
FluxRecord flux_series(const PacketField& field, double x, const std::vector<double>& t_grid,
                       PacketPart part = PacketPart::Full, double flux_floor = 1e-6);
// Coarse scan (coarse_dt over [t_min, t_max]) to find where |J| lives at each probe, then one
// fine uniform grid covering the union of those supports.
std::pair<double, double> support_interval(const PacketField& field, double x, const TimeGridOptions& opts = {},
                                          PacketPart part = PacketPart::Full);
std::vector<double> adaptive_time_grid(const PacketField& field, const std::vector<double>& xs,
                                       const TimeGridOptions& opts = {}, PacketPart part = PacketPart::Full);
// Same, for a single probe.
FluxRecord flux_series(const PacketField& field, double x, const TimeGridOptions& opts = {},
                       PacketPart part = PacketPart::Full);

struct MeanTimes {
    double tau_T;    // t+(x_f) - t+(x_i)
    double tau_R;    // t-(x_i) - t+(x_i)
    double tau_Pen;  // t+(x_f) - t+(x_i), the same quantity read as a penetration time
    double tau_Ret;  // t-(x_f) - t+(x_f)
    double var_T_additive;
    double var_R_additive;
    bool low_confidence;
    ArrivalStats at_xi;
    ArrivalStats at_xf;
};

MeanTimes mean_times(const FluxRecord& at_xi, const FluxRecord& at_xf);

// Preliminary definitions that need fully separated packets: the incident flux at x_i
// against the full flux at x_f (transmission) or the reflected-only flux at x_i.
struct SeparatedTimes {
    double tau_T;
    double tau_R;
    bool valid_only_for_separated_packets = true;
};

SeparatedTimes mean_times_separated(const PacketField& field, double x_i, double x_f, const TimeGridOptions& opts = {});

// [int t J(x_f) dt - int t J(x_i) dt] / int J_in(x_i) dt
double dwell_time_packet(const PacketField& field, double x1, double x2, const TimeGridOptions& opts = {});

struct Centroid {
    double x_mean;
    double probability;  // probability inside the window
    bool low_probability;
};

Centroid centroid_trajectory(const PacketField& field, double t, double x_lo, double x_hi, int panels = 400,
                             double min_probability = 1e-8);

struct QuantumPotential {
    double Q;  // eV
    bool near_node;
};

QuantumPotential quantum_potential(const PacketField& field, double x, double t, double h = 1e-2,
                                   double rho_floor = 1e-14);
// -(hbar^2/2m) |psi|''/|psi| with a three-point stencil, for any wavefunction.
QuantumPotential quantum_potential(const std::function<cplx(double)>& psi, double x, double h, double rho_floor,
                                   const UnitSystem& units = UnitSystem::electron());

// Probability of |Psi|^2 over a window, composite Gauss-Legendre.
double window_probability(const PacketField& field, double t, double x_lo, double x_hi, int panels = 400);

}  // namespace tunnel
