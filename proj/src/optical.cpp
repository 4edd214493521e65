#include "tunnel/optical.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tunnel/times.hpp"

namespace tunnel {

namespace {
constexpr double kPi = std::numbers::pi;
}

double WaveguideSpec::omega_c(const UnitSystem& u) const { return kPi * u.c_A_per_s / b; }

void WaveguideSpec::validate() const {
    if (!(b > 0.0) || !(omega > 0.0)) throw std::invalid_argument("waveguide needs b > 0 and omega > 0");
}

Dispersion waveguide_dispersion(const WaveguideSpec& spec, const UnitSystem& u) {
    spec.validate();
    const double c = u.c_A_per_s;
    const double ratio = spec.omega_c(u) / spec.omega;
    Dispersion d{};
    d.kappa = spec.omega / c * std::sqrt(cplx(1.0 - ratio * ratio, 0.0));
    d.evanescent = d.kappa.imag() > 0.0;
    d.v_group = d.evanescent ? std::numeric_limits<double>::quiet_NaN() : c * c * d.kappa.real() / spec.omega;
    return d;
}

void OpticalBarrier::validate(const UnitSystem& u) const {
    if (!(omega > 0.0) || !(b_outer > 0.0) || !(b_inner > 0.0) || !(L >= 0.0)) {
        throw std::invalid_argument("optical barrier needs positive omega, widths and L >= 0");
    }
    if (!(b_inner < b_outer)) throw std::invalid_argument("the barrier section must be narrower than the guide");
    if (!(omega > kPi * u.c_A_per_s / b_outer)) {
        throw std::invalid_argument("the outer guide must propagate at this frequency");
    }
}

QuantumEquivalent map_quantum_waveguide(const OpticalBarrier& g, const UnitSystem& u) {
    g.validate(u);
    QuantumEquivalent q;
    q.units = UnitSystem::with_rest_energy(u.hbar_eV_s * g.omega);
    q.units.hbar_eV_s = u.hbar_eV_s;
    q.units.c_A_per_s = u.c_A_per_s;
    q.units.hbarc_eV_A = u.hbar_eV_s * u.c_A_per_s;
    const double c = u.c_A_per_s;
    const double w2 = g.omega * g.omega / (c * c);
    q.k = std::sqrt(w2 - kPi * kPi / (g.b_outer * g.b_outer));
    const double eps2 = kPi * kPi / (g.b_inner * g.b_inner) - kPi * kPi / (g.b_outer * g.b_outer);
    q.eps = std::sqrt(eps2);
    q.kappa = std::sqrt(std::max(0.0, kPi * kPi / (g.b_inner * g.b_inner) - w2));
    q.params = {q.units.hbar2_over_2m() * eps2, g.L};
    return q;
}

OpticalBarrier map_waveguide_quantum(const QuantumEquivalent& q) {
    const UnitSystem& u = q.units;
    const double c = u.c_A_per_s;
    OpticalBarrier g;
    g.omega = u.electron_rest_eV / u.hbar_eV_s;
    const double eps2 = q.params.V0 / u.hbar2_over_2m();
    g.b_outer = kPi / std::sqrt(g.omega * g.omega / (c * c) - q.k * q.k);
    g.b_inner = kPi / std::sqrt(eps2 + kPi * kPi / (g.b_outer * g.b_outer));
    g.L = q.params.d;
    return g;
}

double traversal_time_direct(const OpticalBarrier& g, const UnitSystem& u) {
    g.validate(u);
    const double c = u.c_A_per_s;
    const double k = waveguide_dispersion({g.b_outer, g.omega}, u).kappa.real();
    const cplx kin = waveguide_dispersion({g.b_inner, g.omega}, u).kappa;
    const double kap2 = -std::real(kin * kin);
    const double eps2 = k * k + kap2;
    const double d = g.L;
    if (d == 0.0) return 0.0;
    const double sh = detail::sh_over_kappa(kap2, d);
    const double gt = detail::g_term(kap2, d);
    const double num = 2.0 * d * k * k + 2.0 * eps2 * eps2 * gt + 2.0 * d * (eps2 + k * k);
    const double den = 4.0 * k * k + eps2 * eps2 * sh * sh;
    return g.omega / (c * c * k) * num / den;
}

double traversal_time_mapped(const OpticalBarrier& g, const UnitSystem& u) {
    const QuantumEquivalent q = map_quantum_waveguide(g, u);
    return extrapolated_phase_times(q.params, q.k, q.units).dtau_T;
}

double traversal_time_frequency_derivative(const OpticalBarrier& g, const UnitSystem& u) {
    g.validate(u);
    auto face_amplitude = [&](double w) {
        OpticalBarrier gw = g;
        gw.omega = w;
        const QuantumEquivalent q = map_quantum_waveguide(gw, u);
        const ScatteringState st = solve_transfer_matrix(q.params.potential(), q.k, q.units);
        return st.amp_T * std::exp(cplx(0.0, q.k * g.L));
    };
    return phase_derivative(face_amplitude, g.omega, 1e-6 * g.omega);
}

double superluminal_threshold(double b_inner, double omega_ratio, double outer_ratio, const UnitSystem& u) {
    if (!(omega_ratio > 0.0 && omega_ratio < 1.0) || !(outer_ratio * omega_ratio > 1.0)) {
        throw std::invalid_argument("superluminal_threshold: need evanescent inner and propagating outer guide");
    }
    const double c = u.c_A_per_s;
    OpticalBarrier g;
    g.b_inner = b_inner;
    g.b_outer = outer_ratio * b_inner;
    g.omega = omega_ratio * kPi * c / b_inner;
    const double kap = std::sqrt(kPi * kPi / (b_inner * b_inner) - g.omega * g.omega / (c * c));
    auto excess = [&](double kL) {
        g.L = kL / kap;
        return g.L / traversal_time_direct(g, u) - c;
    };
    double lo = 0.05, flo = excess(lo);
    if (flo > 0.0) return lo;
    for (double hi = lo * 1.25; hi < 200.0; hi *= 1.25) {
        const double fhi = excess(hi);
        if (fhi > 0.0) {
            for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (excess(mid) > 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        lo = hi;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

DoubleBarrierTime double_barrier_time(double d, double gap, double V0, double k, double margin,
                                      const UnitSystem& u) {
    const PiecewisePotential pot = PiecewisePotential::double_barrier(V0, d, gap);
    DoubleBarrierTime r{};
    r.gap = gap;
    r.time = extrapolated_phase_times(pot, k, u).dtau_T;
    r.T = solve_transfer_matrix(pot, k, u).transmission();
    const cplx r_single = solve_transfer_matrix(PiecewisePotential::square(V0, d), k, u).amp_R;
    r.resonance_metric = std::abs(std::sin(k * gap + std::arg(r_single)));
    r.near_resonance = r.resonance_metric < margin;
    return r;
}

std::vector<DoubleBarrierTime> double_barrier_gap_sweep(double d, const std::vector<double>& gaps, double V0,
                                                        double k, double margin, const UnitSystem& u) {
    std::vector<DoubleBarrierTime> out;
    out.reserve(gaps.size());
    for (double L : gaps) out.push_back(double_barrier_time(d, L, V0, k, margin, u));
    return out;
}

}  // namespace tunnel
