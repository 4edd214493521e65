#pragma once

#include <complex>
#include <vector>

#include "tunnel/potential.hpp"
#include "tunnel/scattering.hpp"
#include "tunnel/units.hpp"

namespace tunnel {

// Rectangular guide with a single TE10-like cut-off, lambda_c = 2b. Lengths in A, omega in rad/s.
struct WaveguideSpec {
    double b = 0.0;
    double omega = 0.0;

    double omega_c(const UnitSystem& u = UnitSystem::electron()) const;
    double lambda_c() const { return 2.0 * b; }
    void validate() const;
};

struct Dispersion {
    cplx kappa;       // (omega/c) sqrt(1 - (omega_c/omega)^2), principal branch
    double v_group;   // c^2 kappa / omega when propagating, NaN when evanescent
    bool evanescent;
};

Dispersion waveguide_dispersion(const WaveguideSpec& spec, const UnitSystem& u = UnitSystem::electron());

// An undersized section of width b_inner and length L inside a guide of width b_outer.
struct OpticalBarrier {
    double omega = 0.0;
    double b_outer = 0.0;
    double b_inner = 0.0;
    double L = 0.0;

    void validate(const UnitSystem& u = UnitSystem::electron()) const;
};

// The quantum square barrier with hbar/m -> c^2/omega, i.e. a particle of rest energy hbar*omega.
struct QuantumEquivalent {
    UnitSystem units;
    SquareBarrierParams params;
    double k;
    double kappa;
    double eps;
};

QuantumEquivalent map_quantum_waveguide(const OpticalBarrier& guide, const UnitSystem& u = UnitSystem::electron());
OpticalBarrier map_waveguide_quantum(const QuantumEquivalent& q);

// Extrapolated phase time of the undersized section, three ways: the square-barrier closed form
// written in guide variables, the same closed form after mapping, and d(phase)/d(omega) of the
// mapped transfer-matrix amplitude.
double traversal_time_direct(const OpticalBarrier& guide, const UnitSystem& u = UnitSystem::electron());
double traversal_time_mapped(const OpticalBarrier& guide, const UnitSystem& u = UnitSystem::electron());
double traversal_time_frequency_derivative(const OpticalBarrier& guide,
                                           const UnitSystem& u = UnitSystem::electron());

// Smallest |kappa| L at which L / tau exceeds c, for omega = omega_ratio * omega_c(b_inner)
// and b_outer = outer_ratio * b_inner.
double superluminal_threshold(double b_inner, double omega_ratio = 0.8, double outer_ratio = 2.0,
                              const UnitSystem& u = UnitSystem::electron());

struct DoubleBarrierTime {
    double gap;
    double time;        // extrapolated phase time over the whole structure
    double T;           // transmission probability
    double resonance_metric;  // |sin(k gap + arg r_single)|; zero on a gap resonance
    bool near_resonance;
};

DoubleBarrierTime double_barrier_time(double d, double gap, double V0, double k, double margin = 0.1,
                                      const UnitSystem& u = UnitSystem::electron());
std::vector<DoubleBarrierTime> double_barrier_gap_sweep(double d, const std::vector<double>& gaps, double V0,
                                                        double k, double margin = 0.1,
                                                        const UnitSystem& u = UnitSystem::electron());

}  // namespace tunnel
