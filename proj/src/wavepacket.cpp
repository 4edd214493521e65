#include "tunnel/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tunnel {

namespace {
const cplx I{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kResync = 512;
}  // namespace

SpectralPacket SpectralPacket::gaussian(double k0, double dk, double x_c, int nodes) {
    if (!(k0 > 0.0) || !(dk > 0.0)) throw std::invalid_argument("gaussian packet needs k0 > 0 and dk > 0");
    if (nodes < 8) throw std::invalid_argument("gaussian packet needs at least 8 nodes");
    SpectralPacket p;
    p.k0 = k0;
    p.dk = dk;
    p.x_c = x_c;
    p.grid = gauss_legendre(nodes, std::max(1e-4, k0 - 5.0 * dk), k0 + 5.0 * dk);
    p.f.resize(nodes);
    double norm = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double u = (p.grid.nodes[i] - k0) / dk;
        p.f[i] = std::exp(-0.5 * u * u);
        norm += p.grid.weights[i] * p.f[i] * p.f[i];
    }
    const double s = 1.0 / std::sqrt(norm);
    for (double& v : p.f) v *= s;
    p.C = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return p;
}

double SpectralPacket::spectral_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += grid.weights[i] * f[i] * f[i];
    return s;
}

PacketField::PacketField(const SpectralPacket& packet, const PiecewisePotential& potential, const UnitSystem& units)
    : packet_(packet), potential_(potential), units_(units) {
    const std::size_t n = packet_.grid.nodes.size();
    states_.reserve(n);
    omega_.resize(n);
    coeff_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = packet_.grid.nodes[i];
        states_.push_back(solve_transfer_matrix(potential_, k, units_));
        omega_[i] = units_.angular_frequency(k);
        coeff_[i] = packet_.C * packet_.grid.weights[i] * packet_.f[i] * std::exp(-I * k * packet_.x_c);
    }
}

PacketField::Probe PacketField::probe(double x, PacketPart part) const {
    Probe p;
    p.x = x;
    const std::size_t n = states_.size();
    p.a.resize(n);
    p.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = states_[i].k;
        WaveValue w;
        switch (part) {
            case PacketPart::Full:
                w = wavefunction(states_[i], x);
                break;
            case PacketPart::Incident: {
                const cplx e = std::exp(I * k * x);
                w = {e, I * k * e};
                break;
            }
            case PacketPart::Reflected: {
                const cplx e = states_[i].amp_R * std::exp(-I * k * x);
                w = {e, -I * k * e};
                break;
            }
        }
        p.a[i] = coeff_[i] * w.psi;
        p.b[i] = coeff_[i] * w.dpsi;
    }
    return p;
}

WaveValue PacketField::evolve(double x, double t, PacketPart part) const {
    const Probe p = probe(x, part);
    cplx psi = 0.0, dpsi = 0.0;
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        const cplx ph = std::exp(-I * omega_[i] * t);
        psi += p.a[i] * ph;
        dpsi += p.b[i] * ph;
    }
    return {psi, dpsi};
}

std::vector<WaveValue> PacketField::series(const Probe& p, double t0, double dt, std::size_t count) const {
    const std::size_t n = p.a.size();
    std::vector<cplx> phase(n), step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = std::exp(-I * omega_[i] * dt);
    std::vector<WaveValue> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        if (j % kResync == 0) {
            const double t = t0 + dt * static_cast<double>(j);
            for (std::size_t i = 0; i < n; ++i) phase[i] = std::exp(-I * omega_[i] * t);
        }
        cplx psi = 0.0, dpsi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            psi += p.a[i] * phase[i];
            dpsi += p.b[i] * phase[i];
            phase[i] *= step[i];
        }
        out[j] = {psi, dpsi};
    }
    return out;
}

double PacketField::transmitted_weight() const {
    double s = 0.0;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        s += packet_.grid.weights[i] * packet_.f[i] * packet_.f[i] * states_[i].transmission();
    }
    return s;
}

double PacketField::reflected_weight() const {
    double s = 0.0;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        s += packet_.grid.weights[i] * packet_.f[i] * packet_.f[i] * states_[i].reflection();
    }
    return s;
}

namespace {

struct Moments {
    double m0 = 0, m1 = 0, m2 = 0;
};

// Exact for J linear on [p, q] (Simpson is exact for cubics).
void accumulate(Moments& m, double p, double q, double Jp, double Jq) {
    const double h = q - p, mid = 0.5 * (p + q), Jm = 0.5 * (Jp + Jq);
    m.m0 += h / 6.0 * (Jp + 4.0 * Jm + Jq);
    m.m1 += h / 6.0 * (p * Jp + 4.0 * mid * Jm + q * Jq);
    m.m2 += h / 6.0 * (p * p * Jp + 4.0 * mid * mid * Jm + q * q * Jq);
}

}  // namespace

ArrivalStats arrival_stats(const std::vector<double>& t, const std::vector<double>& J, double flux_floor) {
    if (t.size() != J.size()) throw std::invalid_argument("arrival_stats: size mismatch");
    Moments plus, minus;
    double abs_total = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double p = t[i], q = t[i + 1], Jp = J[i], Jq = J[i + 1];
        if ((Jp >= 0 && Jq >= 0) || (Jp <= 0 && Jq <= 0)) {
            accumulate((Jp + Jq >= 0) ? plus : minus, p, q, Jp, Jq);
            abs_total += 0.5 * (q - p) * std::abs(Jp + Jq);
        } else {
            const double tz = p + (q - p) * Jp / (Jp - Jq);
            accumulate(Jp > 0 ? plus : minus, p, tz, Jp, 0.0);
            accumulate(Jq > 0 ? plus : minus, tz, q, 0.0, Jq);
            abs_total += 0.5 * ((tz - p) * std::abs(Jp) + (q - tz) * std::abs(Jq));
        }
    }
    ArrivalStats s{};
    s.total_plus_flux = plus.m0;
    s.total_minus_flux = minus.m0;
    s.total_abs_flux = abs_total;
    s.mean_t_plus = plus.m0 != 0.0 ? plus.m1 / plus.m0 : kNaN;
    s.mean_t_minus = minus.m0 != 0.0 ? minus.m1 / minus.m0 : kNaN;
    s.var_t_plus = plus.m0 != 0.0 ? std::max(0.0, plus.m2 / plus.m0 - s.mean_t_plus * s.mean_t_plus) : kNaN;
    s.var_t_minus = minus.m0 != 0.0 ? std::max(0.0, minus.m2 / minus.m0 - s.mean_t_minus * s.mean_t_minus) : kNaN;
    s.low_confidence_plus = !(plus.m0 > flux_floor * abs_total) || abs_total == 0.0;
    s.low_confidence_minus = !(-minus.m0 > flux_floor * abs_total) || abs_total == 0.0;
    return s;
}

std::vector<double> FluxRecord::w_plus() const {
    std::vector<double> w(J_plus.size(), 0.0);
    if (stats.total_plus_flux > 0.0) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = J_plus[i] / stats.total_plus_flux;
    }
    return w;
}

std::vector<double> FluxRecord::w_minus() const {
    std::vector<double> w(J_minus.size(), 0.0);
    if (stats.total_minus_flux < 0.0) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = J_minus[i] / stats.total_minus_flux;
    }
    return w;
}

namespace {

std::vector<double> current_on_grid(const PacketField& field, const PacketField::Probe& pr, double t0, double dt,
                                    std::size_t count) {
    const std::vector<WaveValue> vals = field.series(pr, t0, dt, count);
    std::vector<double> J(count);
    const double hm = field.units().hbar_over_m();
    for (std::size_t j = 0; j < count; ++j) J[j] = hm * std::imag(std::conj(vals[j].psi) * vals[j].dpsi);
    return J;
}

FluxRecord build_record(double x, std::vector<double> t, std::vector<double> J, double flux_floor) {
    FluxRecord r;
    r.x = x;
    const std::size_t n = t.size();
    r.J_plus.resize(n);
    r.J_minus.resize(n);
    r.N_gt.assign(n, 0.0);
    r.N_lt.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        r.J_plus[i] = std::max(J[i], 0.0);
        r.J_minus[i] = std::min(J[i], 0.0);
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double p = t[i - 1], q = t[i], Jp = J[i - 1], Jq = J[i];
        double gain_plus = 0.0, gain_minus = 0.0;
        if ((Jp >= 0 && Jq >= 0) || (Jp <= 0 && Jq <= 0)) {
            const double a = 0.5 * (q - p) * (Jp + Jq);
            (a >= 0 ? gain_plus : gain_minus) += a;
        } else {
            const double tz = p + (q - p) * Jp / (Jp - Jq);
            const double a1 = 0.5 * (tz - p) * Jp, a2 = 0.5 * (q - tz) * Jq;
            (a1 > 0 ? gain_plus : gain_minus) += a1;
            (a2 > 0 ? gain_plus : gain_minus) += a2;
        }
        r.N_gt[i] = r.N_gt[i - 1] + gain_plus;
        r.N_lt[i] = r.N_lt[i - 1] - gain_minus;
    }
    r.stats = arrival_stats(t, J, flux_floor);
    r.t = std::move(t);
    r.J = std::move(J);
    return r;
}

bool is_uniform(const std::vector<double>& t) {
    if (t.size() < 3) return true;
    const double dt = t[1] - t[0];
    for (std::size_t i = 2; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::abs(dt)) return false;
    }
    return true;
}

}  // namespace

FluxRecord flux_series(const PacketField& field, double x, const std::vector<double>& t_grid, PacketPart part,
                       double flux_floor) {
    if (t_grid.size() < 2) throw std::invalid_argument("flux_series: time grid needs at least two points");
    const PacketField::Probe pr = field.probe(x, part);
    std::vector<double> J;
    if (is_uniform(t_grid)) {
        J = current_on_grid(field, pr, t_grid.front(), t_grid[1] - t_grid[0], t_grid.size());
    } else {
        J.resize(t_grid.size());
        const double hm = field.units().hbar_over_m();
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            const std::vector<WaveValue> v = field.series(pr, t_grid[j], 0.0, 1);
            J[j] = hm * std::imag(std::conj(v[0].psi) * v[0].dpsi);
        }
    }
    return build_record(x, t_grid, std::move(J), flux_floor);
}

std::pair<double, double> support_interval(const PacketField& field, double x, const TimeGridOptions& o,
                                          PacketPart part) {
    if (!(o.t_max > o.t_min) || !(o.coarse_dt > 0) || !(o.fine_dt > 0)) {
        throw std::invalid_argument("flux_series: bad time grid options");
    }
    const PacketField::Probe pr = field.probe(x, part);
    const auto nc = static_cast<std::size_t>(std::llround((o.t_max - o.t_min) / o.coarse_dt)) + 1;
    const std::vector<double> Jc = current_on_grid(field, pr, o.t_min, o.coarse_dt, nc);
    double jmax = 0.0, s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < nc; ++j) {
        const double t = o.t_min + o.coarse_dt * static_cast<double>(j), a = std::abs(Jc[j]);
        jmax = std::max(jmax, a);
        s0 += a;
        s1 += a * t;
        s2 += a * t * t;
    }
    if (!(jmax > 0.0)) return {o.t_min, o.t_max};
    std::size_t first = nc, last = 0;
    for (std::size_t j = 0; j < nc; ++j) {
        if (std::abs(Jc[j]) > o.support_threshold * jmax) {
            first = std::min(first, j);
            last = j;
        }
    }
    const double mean = s1 / s0;
    const double width = std::sqrt(std::max(0.0, s2 / s0 - mean * mean));
    const double t_first = o.t_min + o.coarse_dt * (static_cast<double>(first) - 2.0);
    const double t_last = o.t_min + o.coarse_dt * (static_cast<double>(last) + 2.0);
    return {std::max(o.t_min, std::min(t_first, mean - o.pad_widths * width)),
            std::min(o.t_max, std::max(t_last, mean + o.pad_widths * width))};
}

std::vector<double> adaptive_time_grid(const PacketField& field, const std::vector<double>& xs,
                                       const TimeGridOptions& o, PacketPart part) {
    if (xs.empty()) throw std::invalid_argument("adaptive_time_grid needs at least one probe");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : xs) {
        const auto [a, b] = support_interval(field, x, o, part);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    const auto nf = static_cast<std::size_t>(std::ceil((hi - lo) / o.fine_dt)) + 1;
    std::vector<double> t(nf);
    for (std::size_t j = 0; j < nf; ++j) t[j] = lo + o.fine_dt * static_cast<double>(j);
    return t;
}

FluxRecord flux_series(const PacketField& field, double x, const TimeGridOptions& o, PacketPart part) {
    return flux_series(field, x, adaptive_time_grid(field, {x}, o, part), part, o.flux_floor);
}

MeanTimes mean_times(const FluxRecord& xi, const FluxRecord& xf) {
    if (xi.t != xf.t) throw std::invalid_argument("mean_times: records must share one time grid");
    MeanTimes m{};
    m.at_xi = xi.stats;
    m.at_xf = xf.stats;
    m.tau_T = xf.stats.mean_t_plus - xi.stats.mean_t_plus;
    m.tau_Pen = m.tau_T;
    m.tau_R = xi.stats.mean_t_minus - xi.stats.mean_t_plus;
    m.tau_Ret = xf.stats.mean_t_minus - xf.stats.mean_t_plus;
    m.var_T_additive = xf.stats.var_t_plus + xi.stats.var_t_plus;
    m.var_R_additive = xi.stats.var_t_minus + xi.stats.var_t_plus;
    m.low_confidence = xi.stats.low_confidence_plus || xf.stats.low_confidence_plus;
    return m;
}

namespace {

// First moment and zeroth moment of the signed current.
std::pair<double, double> signed_moments(const ArrivalStats& s) {
    double m0 = 0.0, m1 = 0.0;
    if (s.total_plus_flux != 0.0) {
        m0 += s.total_plus_flux;
        m1 += s.total_plus_flux * s.mean_t_plus;
    }
    if (s.total_minus_flux != 0.0) {
        m0 += s.total_minus_flux;
        m1 += s.total_minus_flux * s.mean_t_minus;
    }
    return {m0, m1};
}

}  // namespace

SeparatedTimes mean_times_separated(const PacketField& field, double x_i, double x_f, const TimeGridOptions& opts) {
    const FluxRecord in = flux_series(field, x_i, opts, PacketPart::Incident);
    const FluxRecord out = flux_series(field, x_f, opts, PacketPart::Full);
    const FluxRecord refl = flux_series(field, x_i, opts, PacketPart::Reflected);
    const auto [in0, in1] = signed_moments(in.stats);
    const auto [out0, out1] = signed_moments(out.stats);
    const auto [r0, r1] = signed_moments(refl.stats);
    SeparatedTimes s;
    const double t_in = in1 / in0;
    s.tau_T = out0 != 0.0 ? out1 / out0 - t_in : kNaN;
    s.tau_R = r0 != 0.0 ? r1 / r0 - t_in : kNaN;
    return s;
}

double dwell_time_packet(const PacketField& field, double x1, double x2, const TimeGridOptions& opts) {
    if (!(x1 < x2)) throw std::invalid_argument("dwell_time_packet needs x1 < x2");
    const FluxRecord a = flux_series(field, x1, opts, PacketPart::Full);
    const FluxRecord b = flux_series(field, x2, opts, PacketPart::Full);
    const FluxRecord in = flux_series(field, x1, opts, PacketPart::Incident);
    const double in0 = signed_moments(in.stats).first;
    return (signed_moments(b.stats).second - signed_moments(a.stats).second) / in0;
}

double window_probability(const PacketField& field, double t, double x_lo, double x_hi, int panels) {
    const QuadratureRule q = composite_gauss_legendre(8, panels, x_lo, x_hi);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::norm(field.evolve(q.nodes[i], t).psi);
    return s;
}

Centroid centroid_trajectory(const PacketField& field, double t, double x_lo, double x_hi, int panels,
                             double min_probability) {
    if (!(x_lo < x_hi)) throw std::invalid_argument("centroid_trajectory needs x_lo < x_hi");
    const QuadratureRule q = composite_gauss_legendre(8, panels, x_lo, x_hi);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double rho = std::norm(field.evolve(q.nodes[i], t).psi);
        s0 += q.weights[i] * rho;
        s1 += q.weights[i] * rho * q.nodes[i];
    }
    Centroid c{};
    c.probability = s0;
    c.low_probability = !(s0 > min_probability);
    c.x_mean = s0 > 0.0 ? s1 / s0 : kNaN;
    return c;
}

QuantumPotential quantum_potential(const std::function<cplx(double)>& psi, double x, double h, double rho_floor,
                                   const UnitSystem& units) {
    const double am = std::abs(psi(x - h)), a0 = std::abs(psi(x)), ap = std::abs(psi(x + h));
    QuantumPotential q{};
    q.near_node = !(a0 * a0 > rho_floor) || !(am * am > rho_floor) || !(ap * ap > rho_floor);
    q.Q = -units.hbar2_over_2m() * (ap - 2.0 * a0 + am) / (h * h) / a0;
    return q;
}

QuantumPotential quantum_potential(const PacketField& field, double x, double t, double h, double rho_floor) {
    return quantum_potential([&](double y) { return field.evolve(y, t).psi; }, x, h, rho_floor, field.units());
}

}  // namespace tunnel
