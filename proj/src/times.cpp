#include "tunnel/times.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tunnel/quadrature.hpp"

namespace tunnel {

double derivative(const std::function<double(double)>& f, double x, double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

double phase_derivative(const std::function<cplx(double)>& f, double x, double h) {
    const double d1 = std::arg(f(x + h) / f(x - h)) / (2.0 * h);
    const double d2 = std::arg(f(x + 0.5 * h) / f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

namespace {

constexpr double kRelStep = 1e-6;

// Regularised numerator and denominator of the square-barrier phase time, both divided by kappa^2.
struct PhaseParts {
    double num;
    double den;
};

PhaseParts phase_parts(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    const double eps2 = p.V0 / u.hbar2_over_2m();
    const double kap2 = eps2 - k * k;
    const double sh = detail::sh_over_kappa(kap2, p.d);
    const double g = detail::g_term(kap2, p.d);
    return {2.0 * p.d * k * k + 2.0 * eps2 * eps2 * g + 2.0 * p.d * (eps2 + k * k),
            4.0 * k * k + eps2 * eps2 * sh * sh};
}

void require_positive_k(double k, const char* who) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::domain_error(std::string(who) + ": k must be positive");
}

}  // namespace

PhaseTimes extrapolated_phase_times(const PiecewisePotential& potential, double k, const UnitSystem& u) {
    require_positive_k(k, "extrapolated_phase_times");
    const double h = kRelStep * k;
    const double v = u.group_velocity(k);
    const double a = potential.left_edge(), b = potential.right_edge();
    const AmplitudeDerivatives ad = amplitude_derivatives(potential, k, u);
    PhaseTimes out{std::numeric_limits<double>::quiet_NaN(), 0.0, std::numeric_limits<double>::quiet_NaN(), 0.0};
    if (!potential.semi_infinite_last()) {
        const double ap =
            phase_derivative([&](double q) { return solve_transfer_matrix(potential, q, u).amp_T; }, k, h);
        out.dtau_T = (b - a + ad.dargT) / v;
        out.dtau_T_numeric = (b - a + ap) / v;
    }
    if (!potential.empty()) {
        const double bp =
            phase_derivative([&](double q) { return solve_transfer_matrix(potential, q, u).amp_R; }, k, h);
        out.dtau_R = (ad.dargR - 2.0 * a) / v;
        out.dtau_R_numeric = (bp - 2.0 * a) / v;
    }
    return out;
}

PhaseTimes extrapolated_phase_times(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    require_positive_k(k, "extrapolated_phase_times");
    p.validate();
    PhaseTimes out = extrapolated_phase_times(p.potential(), k, u);
    if (p.d == 0.0) {
        out.dtau_T = out.dtau_R = 0.0;
        return out;
    }
    const PhaseParts pp = phase_parts(p, k, u);
    out.dtau_T = out.dtau_R = pp.num / pp.den / u.group_velocity(k);
    return out;
}

double phase_time_bracket(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    const double kap = std::sqrt(std::max(p.kappa2(k, u), 0.0));
    const PhaseParts pp = phase_parts(p, k, u);
    return kap * pp.num / pp.den;
}

double dwell_time(const PiecewisePotential& potential, double k, double x1, double x2, const UnitSystem& u) {
    require_positive_k(k, "dwell_time");
    if (!(x1 < x2)) throw std::invalid_argument("dwell_time needs x1 < x2");
    if (std::isinf(x1)) throw std::invalid_argument("dwell_time needs a finite x1");
    const ScatteringState st = solve_transfer_matrix(potential, k, u);

    double tail = 0.0;
    double upper = x2;
    if (std::isinf(x2)) {
        if (!potential.semi_infinite_last()) throw std::invalid_argument("infinite x2 needs a decaying step");
        const SegmentState& last = st.segments.back();
        if (!(last.kappa.real() > 0.0) || last.kappa.imag() != 0.0) {
            throw std::invalid_argument("infinite x2 needs E below the step height");
        }
        upper = std::max(x1, last.x_left);
        tail = std::norm(wavefunction(st, upper).psi) / (2.0 * last.kappa.real());
    }

    std::vector<double> cuts{x1, upper};
    for (const Segment& s : potential.segments()) {
        for (double x : {s.x_left, s.x_right}) {
            if (std::isfinite(x) && x > x1 && x < upper) cuts.push_back(x);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double integral = tail;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double p = cuts[i], q = cuts[i + 1];
        if (!(q > p)) continue;
        const double V = potential.value_at(0.5 * (p + q));
        const double rate = std::max(k, std::sqrt(std::abs(u.k2_local(st.E, V))));
        const int panels = static_cast<int>(std::ceil((q - p) * rate)) + 1;
        const QuadratureRule rule = composite_gauss_legendre(16, panels, p, q);
        double s = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) s += rule.weights[j] * std::norm(wavefunction(st, rule.nodes[j]).psi);
        integral += s;
    }
    return integral / u.group_velocity(k);
}

double dwell_time_closed_form(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    require_positive_k(k, "dwell_time_closed_form");
    if (p.d == 0.0) return 0.0;
    const double eps2 = p.V0 / u.hbar2_over_2m();
    const double kap2 = eps2 - k * k;
    const double sh = detail::sh_over_kappa(kap2, p.d);
    const double g = detail::g_term(kap2, p.d);
    return k / u.hbar_over_m() * (4.0 * p.d + 2.0 * eps2 * g) / (4.0 * k * k + eps2 * eps2 * sh * sh);
}

LarmorTimes larmor_times(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    require_positive_k(k, "larmor_times");
    if (p.d == 0.0) return {0.0, 0.0, 0.0};
    const double eps2 = p.V0 / u.hbar2_over_2m();
    const double kap2 = eps2 - k * k;
    const double sh = detail::sh_over_kappa(kap2, p.d);
    const double chv = detail::ch(kap2, p.d);
    const double hv = detail::h_term(kap2, p.d);
    const double den = 4.0 * k * k + eps2 * eps2 * sh * sh;
    const double ty = dwell_time_closed_form(p, k, u);
    const double tz = eps2 / u.hbar_over_m() * (sh * sh + p.d * sh * chv + k * k * sh * hv) / den;
    return {ty, tz, std::hypot(ty, tz)};
}

LarmorTimes larmor_times_derivative(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    require_positive_k(k, "larmor_times_derivative");
    const double kap2 = p.kappa2(k, u);
    if (!(kap2 > 0.0)) throw std::domain_error("larmor_times_derivative: defined below the barrier top only");
    if (p.d == 0.0) return {0.0, 0.0, 0.0};
    const double kap = std::sqrt(kap2);
    auto amp = [&](double K) {
        const double V0 = u.hbar2_over_2m() * (k * k + K * K);
        return solve_transfer_matrix(PiecewisePotential::square(V0, p.d), k, u).amp_T;
    };
    const double h = kRelStep * kap;
    const double dalpha = phase_derivative(amp, kap, h);
    const double dlnT = derivative([&](double K) { return std::log(std::abs(amp(K))); }, kap, h);
    const double pref = 1.0 / (u.hbar_over_m() * kap);
    const double ty = -pref * dalpha, tz = -pref * dlnT;
    return {ty, tz, std::hypot(ty, tz)};
}

LarmorTimes larmor_thick_limits(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    const double kap2 = p.kappa2(k, u);
    if (!(kap2 > 0.0)) throw std::domain_error("larmor_thick_limits: defined below the barrier top only");
    const double kap = std::sqrt(kap2);
    const double eps2 = p.V0 / u.hbar2_over_2m();
    const double tz = p.d / (u.hbar_over_m() * kap);
    const double ty = 2.0 * k / (u.hbar_over_m() * eps2 * kap);
    return {ty, tz, std::hypot(ty, tz)};
}

ButtikerLandauer buttiker_landauer(const SquareBarrierParams& p, double k, double omega, double deltaV,
                                   const UnitSystem& u) {
    require_positive_k(k, "buttiker_landauer");
    if (omega < 0.0) throw std::invalid_argument("buttiker_landauer: omega must be >= 0");
    const double kap2 = p.kappa2(k, u);
    if (kap2 == 0.0) throw std::domain_error("buttiker_landauer: undefined at the barrier top");
    const double kap = std::sqrt(std::abs(kap2));
    ButtikerLandauer out{};
    out.tau_BL_T = p.d / (u.hbar_over_m() * kap);
    out.tau_BL_R = u.hbar_eV_s * k / (p.V0 * kap);
    const double hbar = u.hbar_eV_s;
    if (omega == 0.0) {
        out.I_plus = out.I_minus = std::pow(deltaV * out.tau_BL_T / (2.0 * hbar), 2);
        out.band_ratio = 0.0;
    } else {
        const double x = omega * out.tau_BL_T;
        const double pre = deltaV / (2.0 * hbar * omega);
        out.I_plus = std::pow(pre * std::expm1(x), 2);
        out.I_minus = std::pow(pre * std::expm1(-x), 2);
        out.band_ratio = (out.I_plus - out.I_minus) / (out.I_plus + out.I_minus);
    }
    out.I_reflected = std::pow(deltaV * out.tau_BL_R / (2.0 * hbar), 2);
    const double E = u.E_of_k(k);
    const double hw = hbar * omega;
    out.in_validity_range = kap2 > 0.0 && hw < 0.1 * E && hw < 0.1 * (p.V0 - E) && std::abs(deltaV) < 0.1 * p.V0;
    return out;
}

cplx complex_time(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    const LarmorTimes l = larmor_times(p, k, u);
    return {l.tau_y, l.tau_z};
}

SelfInterference self_interference_identity(const PiecewisePotential& potential, double k, double x1, double x2,
                                            const UnitSystem& u) {
    require_positive_k(k, "self_interference_identity");
    if (x1 > potential.left_edge()) throw std::invalid_argument("self_interference_identity needs x1 <= left edge");
    if (!potential.semi_infinite_last() && x2 < potential.right_edge()) {
        throw std::invalid_argument("self_interference_identity needs x2 >= right edge");
    }
    const ScatteringState st = solve_transfer_matrix(potential, k, u);
    const double v = u.group_velocity(k);
    const AmplitudeDerivatives ad = amplitude_derivatives(potential, k, u);
    SelfInterference out{};
    out.tau_dwell = dwell_time(potential, k, x1, x2, u);
    const double T2 = st.transmission(), R = std::abs(st.amp_R);
    if (T2 > 0.0) out.tau_T_phase = (x2 - x1 + ad.dargT) / v;
    if (R > 0.0) {
        out.tau_R_phase = (ad.dargR - 2.0 * x1) / v;
        out.interference = R / (u.hbar_over_m() * k * k) * std::sin(std::arg(st.amp_R) - 2.0 * k * x1);
    }
    const double rhs = T2 * out.tau_T_phase + R * R * out.tau_R_phase + out.interference;
    out.residual = (out.tau_dwell - rhs) / out.tau_dwell;
    return out;
}

SelfInterference self_interference_identity(const SquareBarrierParams& p, double k, double x1, const UnitSystem& u) {
    return self_interference_identity(p.potential(), k, x1, p.d, u);
}

ReshapingResult reshaping_check(const SquareBarrierParams& p, double k0, double dk, int grid_points,
                                const UnitSystem& u) {
    require_positive_k(k0, "reshaping_check");
    if (!(dk > 0.0)) throw std::invalid_argument("reshaping_check: dk must be positive");
    if (grid_points < 11) throw std::invalid_argument("reshaping_check: grid too coarse");
    const double lo = std::max(1e-4, k0 - 6.0 * dk), hi = k0 + 6.0 * dk;
    const double eps = p.eps(u);
    std::vector<double> ks(grid_points), prod(grid_points), Tv(grid_points);
    auto Tof = [&](double k) { return closed_form_square(p, k, u).T; };
    for (int i = 0; i < grid_points; ++i) {
        const double k = lo + (hi - lo) * i / (grid_points - 1);
        ks[i] = k;
        Tv[i] = Tof(k);
        prod[i] = Tv[i] * std::exp(-(k - k0) * (k - k0) / (2.0 * dk * dk));
    }
    ReshapingResult out{};
    const auto imax = static_cast<int>(std::max_element(prod.begin(), prod.end()) - prod.begin());
    out.peak_k = ks[imax];
    if (imax > 0 && imax + 1 < grid_points) {
        const double ym = prod[imax - 1], y0 = prod[imax], yp = prod[imax + 1];
        const double den = ym - 2.0 * y0 + yp;
        if (den < 0.0) out.peak_k += 0.5 * (ym - yp) / den * (ks[1] - ks[0]);
    }
    out.peak_shift = out.peak_k - k0;

    double w = 0.0, wk = 0.0, w_k0 = 0.0, w_eps = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double c = (i == 0 || i + 1 == grid_points) ? 0.5 : 1.0;
        const double p2 = c * prod[i] * prod[i];
        w += p2;
        wk += p2 * ks[i];
        if (ks[i] > k0) w_k0 += p2;
        if (ks[i] > eps) w_eps += p2;
    }
    out.transmitted_mean_k = w > 0 ? wk / w : std::numeric_limits<double>::quiet_NaN();
    out.weight_above_k0 = w > 0 ? w_k0 / w : 0.0;
    out.weight_above_eps = w > 0 ? w_eps / w : 0.0;

    bool open = false;
    double start = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double k = ks[i];
        bool viol = false;
        if (k > k0) {
            const double Tp = derivative(Tof, k, kRelStep * k);
            viol = Tp > Tv[i] * (k - k0) / (dk * dk);
        }
        if (viol && !open) {
            open = true;
            start = k;
        } else if (!viol && open) {
            open = false;
            out.violations.emplace_back(start, ks[i - 1]);
        }
    }
    if (open) out.violations.emplace_back(start, ks.back());
    if (!out.violations.empty()) out.violation_hull = {out.violations.front().first, out.violations.back().second};
    return out;
}

PacketSpectrumSummary packet_spectrum_summary(const PiecewisePotential& potential, double k0, double dk, double x0,
                                              int nodes, const UnitSystem& u) {
    require_positive_k(k0, "packet_spectrum_summary");
    if (!(dk > 0.0)) throw std::invalid_argument("packet_spectrum_summary: dk must be positive");
    const QuadratureRule q = gauss_legendre(nodes, std::max(1e-4, k0 - 5.0 * dk), k0 + 5.0 * dk);
    double w_in = 0, k_in = 0, w_T = 0, k_T = 0, a_T = 0, w_R = 0, k_R = 0, b_R = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double k = q.nodes[i];
        const double f2 = q.weights[i] * std::exp(-(k - k0) * (k - k0) / (dk * dk));
        const ScatteringState st = solve_transfer_matrix(potential, k, u);
        const double T2 = st.transmission(), R2 = st.reflection();
        w_in += f2;
        k_in += f2 * k;
        const double h = kRelStep * k;
        if (T2 > 0.0) {
            const double ap =
                phase_derivative([&](double kk) { return solve_transfer_matrix(potential, kk, u).amp_T; }, k, h);
            w_T += f2 * T2;
            k_T += f2 * T2 * k;
            a_T += f2 * T2 * ap;
        }
        if (R2 > 0.0) {
            const double bp =
                phase_derivative([&](double kk) { return solve_transfer_matrix(potential, kk, u).amp_R; }, k, h);
            w_R += f2 * R2;
            k_R += f2 * R2 * k;
            b_R += f2 * R2 * bp;
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    PacketSpectrumSummary s{};
    s.k0 = k0;
    s.dk = dk;
    s.x0 = x0;
    s.mean_k_in = k_in / w_in;
    s.mean_k_T = w_T > 0 ? k_T / w_T : nan;
    s.mean_alpha_prime_T = w_T > 0 ? a_T / w_T : nan;
    s.mean_k_R = w_R > 0 ? k_R / w_R : nan;
    s.mean_beta_prime_R = w_R > 0 ? b_R / w_R : nan;
    s.weight_T = w_T / w_in;
    s.weight_R = w_R / w_in;
    return s;
}

CentroidTimes centroid_times(const PacketSpectrumSummary& s, const SquareBarrierParams& p, const UnitSystem& u) {
    if (!(s.weight_T > 0.0) || !std::isfinite(s.mean_k_T)) {
        throw std::domain_error("centroid_times: transmitted weight vanishes");
    }
    const double inv = 1.0 / u.hbar_over_m();
    CentroidTimes out{};
    out.tau_C_T = inv * ((p.d - s.x0 + s.mean_alpha_prime_T) / s.mean_k_T + s.x0 / s.mean_k_in);
    out.tau_C_R = s.weight_R > 0.0 ? inv * ((-s.x0 + s.mean_beta_prime_R) / s.mean_k_R + s.x0 / s.mean_k_in)
                                   : std::numeric_limits<double>::quiet_NaN();
    return out;
}

TimeReport time_report(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    require_positive_k(k, "time_report");
    p.validate();
    TimeReport r{};
    r.k = k;
    r.E = u.E_of_k(k);
    const SquareAmplitudes a = closed_form_square(p, k, u);
    r.T = a.T;
    r.R = a.R;
    r.alpha = a.alpha;
    r.beta = a.beta;
    r.tau_eq = p.d / u.group_velocity(k);
    const PhaseTimes pt = extrapolated_phase_times(p, k, u);
    r.dtau_phase_T = pt.dtau_T;
    r.dtau_phase_R = pt.dtau_R;
    r.tau_dwell = p.d > 0.0 ? dwell_time(p.potential(), k, 0.0, p.d, u) : 0.0;
    const LarmorTimes l = larmor_times(p, k, u);
    r.tau_larmor_y = l.tau_y;
    r.tau_larmor_z = l.tau_z;
    r.tau_larmor_x = l.tau_x;
    r.tau_complex = complex_time(p, k, u);
    const double kap2 = p.kappa2(k, u);
    r.above_barrier = kap2 < 0.0;
    // kappa = 0 exactly: one-sided continuation just below the barrier top
    const double k_bl = std::abs(kap2) > 1e-14 * k * k ? k : p.eps(u) * (1.0 - 1e-7);
    if (p.V0 > 0.0) {
        const ButtikerLandauer bl = buttiker_landauer(p, k_bl, 0.0, 0.0, u);
        r.tau_BL_T = bl.tau_BL_T;
        r.tau_BL_R = bl.tau_BL_R;
        r.tau_semiclassical = bl.tau_BL_T;
    } else {
        r.tau_BL_T = r.tau_semiclassical = r.tau_eq;
        r.tau_BL_R = 0.0;
    }
    return r;
}

}  // namespace tunnel
