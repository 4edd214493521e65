#include "tunnel/scattering.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tunnel {

namespace detail {

namespace {
constexpr double kSeriesLimit = 1.0;
constexpr int kSeriesTerms = 24;
}  // namespace

double sh_over_kappa(double kappa2, double d) {
    const double u = kappa2 * d * d;
    if (std::abs(u) < kSeriesLimit) {
        double term = 1.0, sum = 1.0;
        for (int n = 1; n < kSeriesTerms; ++n) {
            term *= u / ((2.0 * n) * (2.0 * n + 1.0));
            sum += term;
        }
        return d * sum;
    }
    if (u > 0) {
        const double kap = std::sqrt(kappa2);
        return std::sinh(kap * d) / kap;
    }
    const double q = std::sqrt(-kappa2);
    return std::sin(q * d) / q;
}

double ch(double kappa2, double d) {
    if (kappa2 >= 0) return std::cosh(std::sqrt(kappa2) * d);
    return std::cos(std::sqrt(-kappa2) * d);
}

double g_term(double kappa2, double d) {
    const double u = kappa2 * d * d;
    const double d3 = d * d * d;
    if (std::abs(u) < kSeriesLimit) {
        // sum_{n>=1} 4^n u^{n-1} / (2n+1)!
        double coeff = 4.0 / 6.0, sum = coeff;
        for (int n = 2; n < kSeriesTerms; ++n) {
            coeff *= 4.0 * u / ((2.0 * n) * (2.0 * n + 1.0));
            sum += coeff;
        }
        return d3 * sum;
    }
    if (u > 0) {
        const double x = std::sqrt(u);
        return d3 * (std::sinh(2.0 * x) - 2.0 * x) / (2.0 * x * x * x);
    }
    const double y = std::sqrt(-u);
    return d3 * (2.0 * y - std::sin(2.0 * y)) / (2.0 * y * y * y);
}

double h_term(double kappa2, double d) {
    const double u = kappa2 * d * d;
    const double d3 = d * d * d;
    if (std::abs(u) < kSeriesLimit) {
        // sum_{n>=1} 2n u^{n-1} / (2n+1)!
        double fact = 6.0, upow = 1.0, sum = 0.0;
        for (int n = 1; n < kSeriesTerms; ++n) {
            sum += 2.0 * n * upow / fact;
            upow *= u;
            fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
        }
        return d3 * sum;
    }
    if (u > 0) {
        const double x = std::sqrt(u);
        return d3 * (x * std::cosh(x) - std::sinh(x)) / (x * x * x);
    }
    const double y = std::sqrt(-u);
    return d3 * (std::sin(y) - y * std::cos(y)) / (y * y * y);
}

}  // namespace detail

namespace {

// Real (psi, psi') transfer matrix of one segment, stored as M * exp(-scale).
struct ScaledMatrix {
    double m11 = 1, m12 = 0, m21 = 0, m22 = 1;
    double scale = 0;
};

ScaledMatrix segment_matrix(double q2, double w) {
    ScaledMatrix m;
    if (q2 > 0) {
        const double q = std::sqrt(q2);
        const double c = std::cos(q * w), s = std::sin(q * w);
        m = {c, s / q, -q * s, c, 0.0};
    } else if (q2 < 0) {
        const double kap = std::sqrt(-q2);
        const double x = kap * w;
        const double e2 = std::exp(-2.0 * x);
        const double c = 0.5 * (1.0 + e2);
        const double s = -0.5 * std::expm1(-2.0 * x);
        m = {c, s / kap, kap * s, c, x};
    } else {
        m = {1.0, w, 0.0, 1.0, 0.0};
    }
    return m;
}

ScaledMatrix multiply(const ScaledMatrix& a, const ScaledMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22, a.m21 * b.m11 + a.m22 * b.m21,
            a.m21 * b.m12 + a.m22 * b.m22, a.scale + b.scale};
}

const cplx I{0.0, 1.0};

// d/dk of segment_matrix(q2(k), w) with dq2/dk = 2k, carrying the same exp(-scale) factor.
ScaledMatrix segment_matrix_dk(double q2, double w, double k) {
    const double kap2 = -q2, dk2 = -2.0 * k;
    double sh, h;
    if (q2 < 0) {
        const double kap = std::sqrt(kap2), x = kap * w;
        if (x < 1.0) {
            const double e = std::exp(-x);
            sh = detail::sh_over_kappa(kap2, w) * e;
            h = detail::h_term(kap2, w) * e;
        } else {
            const double e2 = std::exp(-2.0 * x);
            const double c = 0.5 * (1.0 + e2), s = -0.5 * std::expm1(-2.0 * x);
            sh = s / kap;
            h = (x * c - s) / (kap2 * kap);
        }
    } else {
        sh = detail::sh_over_kappa(kap2, w);
        h = detail::h_term(kap2, w);
    }
    const double dch = 0.5 * w * sh * dk2;
    const double dsh = 0.5 * h * dk2;
    const double dm21 = (sh + 0.5 * kap2 * h) * dk2;
    return {dch, dsh, dm21, dch, 0.0};
}

// (M, dM/dk) pairs composed left to right.
struct MatrixWithDerivative {
    ScaledMatrix M;
    ScaledMatrix D{0, 0, 0, 0, 0};
};

MatrixWithDerivative compose(const PiecewisePotential& potential, std::size_t n_finite, double E, double k,
                             const UnitSystem& units) {
    MatrixWithDerivative acc;
    const auto& segs = potential.segments();
    for (std::size_t i = 0; i < n_finite; ++i) {
        const double w = segs[i].x_right - segs[i].x_left;
        const double q2 = units.k2_local(E, segs[i].V);
        const ScaledMatrix S = segment_matrix(q2, w);
        ScaledMatrix dS = segment_matrix_dk(q2, w, k);
        dS.scale = S.scale;
        const ScaledMatrix a = multiply(dS, acc.M), b = multiply(S, acc.D);
        acc.D = {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22, a.scale};
        acc.M = multiply(S, acc.M);
    }
    return acc;
}

}  // namespace

AmplitudeDerivatives amplitude_derivatives(const PiecewisePotential& potential, double k, const UnitSystem& units) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::domain_error("amplitude_derivatives: k must be positive");
    AmplitudeDerivatives out;
    if (potential.empty()) return out;
    const double E = units.E_of_k(k);
    const bool semi = potential.semi_infinite_last();
    const auto& segs = potential.segments();
    const std::size_t n_finite = semi ? segs.size() - 1 : segs.size();
    const MatrixWithDerivative md = compose(potential, n_finite, E, k, units);
    const ScaledMatrix& M = md.M;
    const ScaledMatrix& D = md.D;

    const cplx qR = semi ? std::sqrt(cplx(units.k2_local(E, segs.back().V), 0.0)) : cplx(k, 0.0);
    const cplx dqR = semi ? (qR == 0.0 ? cplx(0.0, 0.0) : k / qR) : cplx(1.0, 0.0);
    const cplx r = qR / k, dr = dqR / k - qR / (k * k);
    const cplx Dg = M.m22 + r * M.m11 - I * qR * M.m12 + I * M.m21 / k;
    const cplx Ng = M.m22 - r * M.m11 - I * qR * M.m12 - I * M.m21 / k;
    const cplx dDg = D.m22 + dr * M.m11 + r * D.m11 - I * (dqR * M.m12 + qR * D.m12) + I * (D.m21 / k - M.m21 / (k * k));
    const cplx dNg = D.m22 - dr * M.m11 - r * D.m11 - I * (dqR * M.m12 + qR * D.m12) - I * (D.m21 / k - M.m21 / (k * k));
    const double a = potential.left_edge(), b = potential.right_edge();
    const cplx lD = dDg / Dg;
    out.dargR = Ng == 0.0 ? 0.0 : 2.0 * a + std::imag(dNg / Ng - lD);

    if (semi) {
        const bool open = qR.imag() == 0.0 && qR.real() > 0.0;
        out.dargT = open ? a - std::imag(lD) : 0.0;
        out.dlnT = open ? 0.5 * (dqR.real() / qR.real() - 1.0 / k) - std::real(lD) : 0.0;
    } else {
        out.dargT = a - b - std::imag(lD);
        out.dlnT = -std::real(lD);
    }
    return out;
}

ScatteringState solve_transfer_matrix(const PiecewisePotential& potential, double k, const UnitSystem& units) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::domain_error("solve_transfer_matrix: k must be positive");
    ScatteringState st;
    st.k = k;
    st.E = units.E_of_k(k);
    st.units = units;
    st.semi_infinite = potential.semi_infinite_last();
    st.x_left = potential.left_edge();
    st.x_right = potential.right_edge();
    if (potential.empty()) return st;

    const auto& segs = potential.segments();
    const std::size_t n_finite = st.semi_infinite ? segs.size() - 1 : segs.size();

    ScaledMatrix M;
    for (std::size_t i = 0; i < n_finite; ++i) {
        const double w = segs[i].x_right - segs[i].x_left;
        M = multiply(segment_matrix(units.k2_local(st.E, segs[i].V), w), M);
    }

    // Outgoing wavenumber on the right, principal branch (Im >= 0).
    const cplx qR = st.semi_infinite ? std::sqrt(cplx(units.k2_local(st.E, segs.back().V), 0.0)) : cplx(k, 0.0);
    const double a = st.x_left, b = st.x_right;
    const cplx Dg = M.m22 + (qR / k) * M.m11 - I * qR * M.m12 + I * M.m21 / k;
    const cplx Ng = M.m22 - (qR / k) * M.m11 - I * qR * M.m12 - I * M.m21 / k;
    const cplx eka = std::exp(I * k * a);
    st.amp_R = eka * eka * Ng / Dg;
    // psi at the right edge
    const cplx c_out = 2.0 * eka * std::exp(-M.scale) / Dg;
    if (st.semi_infinite) {
        st.amp_T = qR.imag() == 0.0 && qR.real() > 0.0 ? std::sqrt(qR.real() / k) * c_out : cplx(0.0, 0.0);
    } else {
        st.amp_T = c_out * std::exp(-I * k * b);
    }

    // Interior coefficients by backward propagation from the transmitted side.
    st.segments.resize(segs.size());
    cplx psi_r = c_out, dpsi_r = I * qR * c_out;
    if (st.semi_infinite) {
        const Segment& s = segs.back();
        st.segments.back() = {s.x_left, s.x_right, s.V, -I * qR, c_out, 0.0};
    }
    for (std::size_t ii = n_finite; ii-- > 0;) {
        const Segment& s = segs[ii];
        const double w = s.x_right - s.x_left;
        const cplx kap = std::sqrt(cplx(-units.k2_local(st.E, s.V), 0.0));
        SegmentState& out = st.segments[ii];
        out.x_left = s.x_left;
        out.x_right = s.x_right;
        out.V = s.V;
        out.kappa = kap;
        if (kap == 0.0) {
            out.B = dpsi_r;
            out.A = psi_r - dpsi_r * w;
            psi_r = out.A;
            dpsi_r = out.B;
            continue;
        }
        // Right-edge referenced amplitudes, then shifted to the left edge.
        const cplx Ar = 0.5 * (psi_r - dpsi_r / kap);
        const cplx Br = 0.5 * (psi_r + dpsi_r / kap);
        out.A = Ar * std::exp(kap * w);
        out.B = Br * std::exp(-kap * w);
        psi_r = out.A + out.B;
        dpsi_r = kap * (out.B - out.A);
    }
    return st;
}

WaveValue wavefunction(const ScatteringState& st, double x) {
    const double k = st.k;
    if (st.segments.empty() || x <= st.x_left) {
        const cplx e = std::exp(I * k * x);
        const cplx em = std::exp(-I * k * x);
        return {e + st.amp_R * em, I * k * (e - st.amp_R * em)};
    }
    if (!st.semi_infinite && x >= st.x_right) {
        const cplx e = st.amp_T * std::exp(I * k * x);
        return {e, I * k * e};
    }
    for (const SegmentState& s : st.segments) {
        if (x <= s.x_right) {
            const double xi = x - s.x_left;
            if (s.kappa == 0.0) return {s.A + s.B * xi, s.B};
            const cplx em = std::exp(-s.kappa * xi), ep = std::exp(s.kappa * xi);
            return {s.A * em + s.B * ep, s.kappa * (s.B * ep - s.A * em)};
        }
    }
    const SegmentState& s = st.segments.back();
    const cplx e = s.A * std::exp(-s.kappa * (x - s.x_left));
    return {e, -s.kappa * e};
}

DensityCurrent density_and_current(cplx psi, cplx dpsi, const UnitSystem& units) {
    return {std::norm(psi), units.hbar_over_m() * std::imag(std::conj(psi) * dpsi)};
}

double SquareBarrierParams::eps(const UnitSystem& u) const { return u.k_of_E(V0); }

double SquareBarrierParams::kappa2(double k, const UnitSystem& u) const {
    return V0 / u.hbar2_over_2m() - k * k;
}

void SquareBarrierParams::validate() const {
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("barrier width must be finite and >= 0");
    if (!(V0 >= 0.0) || !std::isfinite(V0)) throw std::invalid_argument("barrier height must be finite and >= 0");
}

SquareAmplitudes closed_form_square(const SquareBarrierParams& p, double k, const UnitSystem& u) {
    if (!(k > 0.0)) throw std::domain_error("closed_form_square: k must be positive");
    p.validate();
    const double d = p.d;
    if (d == 0.0 || p.V0 == 0.0) return {1.0, 0.0, 0.0, -0.5 * std::numbers::pi};
    const double eps2 = p.V0 / u.hbar2_over_2m();
    const double kap2 = eps2 - k * k;
    const double sh = detail::sh_over_kappa(kap2, d);
    const double chv = detail::ch(kap2, d);
    const double den = 4.0 * k * k + eps2 * eps2 * sh * sh;
    const double T = 2.0 * k / std::sqrt(den);
    const double R = eps2 * std::abs(sh) / std::sqrt(den);

    double phi;
    double beta_shift = 0.0;
    if (kap2 >= 0.0) {
        phi = std::atan2((k * k - kap2) * sh, 2.0 * k * chv);
    } else {
        const double q = std::sqrt(-kap2);
        const double qd = q * d;
        const double s = (k * k + q * q) / (2.0 * k * q);
        phi = std::atan(s * std::tan(qd)) + std::numbers::pi * std::round(qd / std::numbers::pi);
        beta_shift = std::numbers::pi * std::floor(qd / std::numbers::pi);
    }
    return {T, R, -k * d + phi, -0.5 * std::numbers::pi + phi + beta_shift};
}

SquareAmplitudes delta_barrier_limit(double strength, double k, const UnitSystem& u) {
    if (!(k > 0.0)) throw std::domain_error("delta_barrier_limit: k must be positive");
    // psi' jumps by (2m/hbar^2) g psi(0)
    const double b = strength / (2.0 * u.hbar2_over_2m()) / k;
    const cplx t = 1.0 / cplx(1.0, b);
    const cplx r = cplx(0.0, -b) * t;
    return {std::abs(t), std::abs(r), std::arg(t), strength == 0.0 ? -0.5 * std::numbers::pi : std::arg(r)};
}

std::vector<SquareAmplitudes> delta_barrier_sequence(double strength, double k, const std::vector<double>& widths,
                                                     const UnitSystem& u) {
    std::vector<SquareAmplitudes> out;
    out.reserve(widths.size());
    for (double w : widths) {
        if (!(w > 0.0)) throw std::invalid_argument("delta_barrier_sequence: widths must be positive");
        const ScatteringState st = solve_transfer_matrix(PiecewisePotential::square(strength / w, w), k, u);
        out.push_back({std::abs(st.amp_T), std::abs(st.amp_R), std::arg(st.amp_T), std::arg(st.amp_R)});
    }
    return out;
}

}  // namespace tunnel
