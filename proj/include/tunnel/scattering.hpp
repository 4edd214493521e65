#pragma once

#include <complex>
#include <vector>

#include "tunnel/potential.hpp"
#include "tunnel/units.hpp"

namespace tunnel {

using cplx = std::complex<double>;

// Coefficients inside one segment, referenced to its left edge:
// psi = A exp(-kappa (x - x_left)) + B exp(kappa (x - x_left)), or A + B (x - x_left) when kappa = 0.
// kappa = sqrt(2m(V - E))/hbar on the principal branch, so it is real and positive
// under the barrier and i*q in classically allowed segments. The semi-infinite
// final segment stores kappa = -i*q_R with B = 0, i.e. an outgoing or decaying wave.
struct SegmentState {
    double x_left;
    double x_right;
    double V;
    cplx kappa;
    cplx A;
    cplx B;
};

struct ScatteringState {
    double k = 0.0;
    double E = 0.0;
    cplx amp_T{1.0, 0.0};  // coefficient of exp(ikx) for x > right edge (flux-normalised for a step)
    cplx amp_R{0.0, 0.0};  // coefficient of exp(-ikx) for x < left edge
    double x_left = 0.0;
    double x_right = 0.0;
    bool semi_infinite = false;
    std::vector<SegmentState> segments;
    UnitSystem units;

    double transmission() const { return std::norm(amp_T); }
    double reflection() const { return std::norm(amp_R); }
};

ScatteringState solve_transfer_matrix(const PiecewisePotential& potential, double k,
                                      const UnitSystem& units = UnitSystem::electron());

// d/dk of arg amp_T, arg amp_R and ln|amp_T|, from the k-derivative of the transfer matrix.
// Step potentials have dargT = dlnT = 0 below the step.
struct AmplitudeDerivatives {
    double dargT = 0.0;
    double dargR = 0.0;
    double dlnT = 0.0;
};

AmplitudeDerivatives amplitude_derivatives(const PiecewisePotential& potential, double k,
                                           const UnitSystem& units = UnitSystem::electron());

struct SquareBarrierParams {
    double V0 = 0.0;
    double d = 0.0;

    double eps(const UnitSystem& u = UnitSystem::electron()) const;
    // Signed kappa^2 = eps^2 - k^2; negative above the barrier top.
    double kappa2(double k, const UnitSystem& u = UnitSystem::electron()) const;
    PiecewisePotential potential() const { return PiecewisePotential::square(V0, d); }
    void validate() const;
};

// Moduli and phases of the square-barrier amplitudes: amp_T = T exp(i alpha), amp_R = R exp(i beta).
// alpha includes the -kd of writing the transmitted wave in absolute x.
struct SquareAmplitudes {
    double T;
    double R;
    double alpha;
    double beta;
};

SquareAmplitudes closed_form_square(const SquareBarrierParams& params, double k,
                                    const UnitSystem& units = UnitSystem::electron());

struct WaveValue {
    cplx psi;
    cplx dpsi;
};

WaveValue wavefunction(const ScatteringState& state, double x);
inline cplx interior_wavefunction(const ScatteringState& state, double x) { return wavefunction(state, x).psi; }

struct DensityCurrent {
    double rho;  // 1/A for a stationary state normalised to a unit incident wave
    double j;    // 1/s
};

DensityCurrent density_and_current(cplx psi, cplx dpsi, const UnitSystem& units = UnitSystem::electron());

// V(x) = strength * delta(x), strength in eV*A.
SquareAmplitudes delta_barrier_limit(double strength, double k, const UnitSystem& units = UnitSystem::electron());

// Square barriers of width d and height strength/d, solved by transfer matrix.
std::vector<SquareAmplitudes> delta_barrier_sequence(double strength, double k, const std::vector<double>& widths,
                                                     const UnitSystem& units = UnitSystem::electron());

// sinh(kd)/k, cosh(kd) and friends continued through kappa2 = 0 (sin/cos for kappa2 < 0).
namespace detail {
double sh_over_kappa(double kappa2, double d);
double ch(double kappa2, double d);
// (sinh 2kd - 2kd) / (2 k^3)
double g_term(double kappa2, double d);
// (kd cosh kd - sinh kd) / k^3
double h_term(double kappa2, double d);
}  // namespace detail

}  // namespace tunnel
