// Acceptance suite: prints one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tunnel/optical.hpp"
#include "tunnel/scattering.hpp"
#include "tunnel/times.hpp"
#include "tunnel/wavepacket.hpp"

using namespace tunnel;

namespace {

const UnitSystem U = UnitSystem::electron();
const double PI = 3.14159265358979323846;

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string sci(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", v);
    return b;
}

double wrap(double a) { return std::remainder(a, 2.0 * PI); }

int failures = 0;

void report(int id, const std::string& title, const Verdict& v) {
    std::printf("%s [%d] %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str());
    for (const auto& n : v.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
}

const double V0 = 10.0;
double eps() { return SquareBarrierParams{V0, 0.0}.eps(U); }

std::vector<double> k_grid(int n) {
    std::vector<double> ks;
    for (int i = 0; i < n; ++i) ks.push_back(eps() * (0.05 + (3.0 - 0.05) * (i + 0.5) / n));
    return ks;
}

Verdict criterion1() {
    Verdict v;
    double worst_unit = 0, worst_T = 0, worst_ph = 0;
    for (int de = 1; de <= 25; ++de) {
        const SquareBarrierParams p{V0, de / eps()};
        for (double k : k_grid(120)) {
            const SquareAmplitudes cf = closed_form_square(p, k, U);
            const ScatteringState s = solve_transfer_matrix(p.potential(), k, U);
            worst_unit = std::max({worst_unit, std::abs(cf.T * cf.T + cf.R * cf.R - 1.0),
                                   std::abs(s.transmission() + s.reflection() - 1.0)});
            worst_T = std::max(worst_T, std::abs(cf.T - std::abs(s.amp_T)) / cf.T);
            worst_ph = std::max(worst_ph, std::abs(wrap(cf.alpha - std::arg(s.amp_T))));
            if (cf.R > 0.0) worst_ph = std::max(worst_ph, std::abs(wrap(cf.beta - std::arg(s.amp_R))));
        }
    }
    v.note("max | |T|^2+|R|^2-1 | = " + sci(worst_unit) + ", max rel |T| diff = " + sci(worst_T) +
           ", max phase diff = " + sci(worst_ph));
    v.require(worst_unit <= 1e-10, "unitarity 1e-10");
    v.require(worst_T <= 1e-10, "|T| agreement 1e-10");
    v.require(worst_ph <= 1e-8, "phase agreement 1e-8");
    return v;
}

Verdict criterion2() {
    Verdict v;
    const double k = U.k_of_E(5.0);
    const double kap = std::sqrt(SquareBarrierParams{V0, 1.0}.kappa2(k, U));
    const double sat = 2.0 / (U.hbar_over_m() * k * kap);
    v.note("2m/(hbar k kappa) = " + sci(sat) + " s");
    v.require(std::abs(sat - 1.32e-16) / 1.32e-16 < 0.01, "saturation value near 1.32e-16 s");
    double worst = 0, worst_b = 0;
    for (double kd = 10.25; kd <= 40.0; kd += 0.5) {
        const SquareBarrierParams p{V0, kd / kap};
        worst = std::max(worst, std::abs(extrapolated_phase_times(p, k, U).dtau_T / sat - 1.0));
        worst_b = std::max(worst_b, std::abs(phase_time_bracket(p, k, U) / 2.0 - 1.0));
    }
    v.note("kappa d > 10: max rel deviation of phase time = " + sci(worst) + ", of bracket from 2 = " + sci(worst_b));
    v.require(worst < 0.01, "phase time within 1% of saturation");
    v.require(worst_b < 0.01, "bracket within 1% of 2");
    return v;
}

Verdict criterion3() {
    Verdict v;
    double worst = 0;
    for (int de : {1, 2, 4, 7, 10, 15, 20, 25}) {
        const SquareBarrierParams p{V0, de / eps()};
        for (double k : k_grid(24)) {
            for (double x1 : {0.0, -1.3}) {
                worst = std::max(worst, std::abs(self_interference_identity(p.potential(), k, x1, p.d, U).residual));
            }
        }
    }
    v.note("max relative residual of the dwell identity = " + sci(worst));
    v.require(worst <= 1e-9, "dwell identity 1e-9");

    const double k = U.k_of_E(5.0);
    const double kap = std::sqrt(SquareBarrierParams{V0, 1.0}.kappa2(k, U));
    const SquareBarrierParams thick{V0, 15.0 / kap};
    const double asym = U.hbar_eV_s * k / (V0 * kap);
    const double dw = dwell_time(thick.potential(), k, 0.0, thick.d, U);
    v.note("kappa d = 15: dwell / (hbar k / V0 kappa) - 1 = " + sci(dw / asym - 1.0));
    v.require(std::abs(dw / asym - 1.0) < 0.005, "dwell asymptote 0.5%");

    double w1 = 0, w2 = 0;
    const double Vs = 4.0;
    const auto step = PiecewisePotential::step(Vs, 0.0);
    for (double E : {0.4, 1.0, 2.0, 3.0, 3.9}) {
        const double q = U.k_of_E(E);
        const auto s = self_interference_identity(step, q, 0.0, INFINITY, U);
        w1 = std::max(w1, std::abs(s.tau_dwell / (E / Vs * s.tau_R_phase) - 1.0));
        w2 = std::max(w2, std::abs(s.interference / ((E - Vs) / Vs * s.tau_R_phase) - 1.0));
    }
    v.note("step: tau_D vs (E/V0) tau_R " + sci(w1) + ", self-interference vs ((E-V0)/V0) tau_R " + sci(w2));
    v.require(w1 <= 1e-9 && w2 <= 1e-9, "step relations 1e-9");
    return v;
}

Verdict criterion4() {
    Verdict v;
    double wx = 0, wy = 0, wfd = 0;
    for (int de : {1, 3, 6, 10, 15, 20, 25}) {
        const SquareBarrierParams p{V0, de / eps()};
        for (double k : k_grid(60)) {
            const LarmorTimes l = larmor_times(p, k, U);
            wx = std::max(wx, std::abs(l.tau_x / std::hypot(l.tau_y, l.tau_z) - 1.0));
            wy = std::max(wy, std::abs(dwell_time(p.potential(), k, 0.0, p.d, U) / l.tau_y - 1.0));
            if (p.kappa2(k, U) > 0.0) {
                const LarmorTimes fd = larmor_times_derivative(p, k, U);
                wfd = std::max({wfd, std::abs(fd.tau_y / l.tau_y - 1.0), std::abs(fd.tau_z / l.tau_z - 1.0)});
            }
        }
    }
    const double k = U.k_of_E(5.0);
    const double kap = std::sqrt(SquareBarrierParams{V0, 1.0}.kappa2(k, U));
    const SquareBarrierParams thick{V0, 15.0 / kap};
    const LarmorTimes l = larmor_times(thick, k, U), lim = larmor_thick_limits(thick, k, U);
    const double wl = std::max(std::abs(l.tau_y / lim.tau_y - 1.0), std::abs(l.tau_z / lim.tau_z - 1.0));
    v.note("tau_x identity " + sci(wx) + ", dwell = tau_y " + sci(wy) + ", closed vs derivative " + sci(wfd) +
           ", thick limits " + sci(wl));
    v.require(wx <= 1e-10, "tau_x identity 1e-10");
    v.require(wl < 0.01, "thick-barrier limits 1%");
    v.require(wy <= 1e-8, "dwell equals tau_y 1e-8");
    v.require(wfd <= 1e-6, "closed forms vs kappa derivatives 1e-6");
    return v;
}

Verdict criterion5() {
    Verdict v;
    const double k = U.k_of_E(5.0);
    const double kap = std::sqrt(SquareBarrierParams{V0, 1.0}.kappa2(k, U));
    double wb = 0, wz = 0;
    for (double kd : {15.0, 20.0, 30.0}) {
        const SquareBarrierParams a{V0, kd / kap}, b{V0, 2 * kd / kap};
        wb = std::max(wb, std::abs(buttiker_landauer(b, k, 0, 0, U).tau_BL_T /
                                   buttiker_landauer(a, k, 0, 0, U).tau_BL_T / 2.0 - 1.0));
        wz = std::max(wz, std::abs(larmor_times(b, k, U).tau_z / larmor_times(a, k, U).tau_z / 2.0 - 1.0));
    }
    v.note("doubling d: tau_BL_T ratio deviation " + sci(wb) + ", tau_z ratio deviation " + sci(wz));
    v.require(wb < 0.02 && wz < 0.02, "linear scaling within 2%");
    return v;
}

struct EvolveRun {
    std::vector<double> xs, pen, ret;
    std::vector<bool> ret_low;
    double tau_tun = 0, ret00 = 0;
};

EvolveRun evolve(double d, double dk, int nodes = 513, const TimeGridOptions& o = {}, int nx = 21) {
    const PacketField f(SpectralPacket::gaussian(U.k_of_E(5.0), dk, 0.0, nodes), PiecewisePotential::square(V0, d), U);
    EvolveRun r;
    for (int j = 0; j < nx; ++j) r.xs.push_back(d * j / (nx - 1));
    const auto grid = adaptive_time_grid(f, r.xs, o);
    std::vector<FluxRecord> rec;
    for (double x : r.xs) rec.push_back(flux_series(f, x, grid, PacketPart::Full, o.flux_floor));
    for (int j = 0; j < nx; ++j) {
        const MeanTimes m = mean_times(rec[0], rec[j]);
        r.pen.push_back(m.tau_Pen);
        r.ret.push_back(m.tau_Ret);
        r.ret_low.push_back(rec[j].stats.low_confidence_minus);
    }
    r.tau_tun = r.pen.back();
    r.ret00 = r.ret.front();
    return r;
}

Verdict criterion6() {
    Verdict v;
    const EvolveRun a = evolve(5.0, 0.02), b = evolve(10.0, 0.02);
    const double dt = std::abs(b.tau_tun / a.tau_tun - 1.0);
    v.note("(a) tau_Tun(0,d): d=5 " + sci(a.tau_tun) + " s, d=10 " + sci(b.tau_tun) + " s, rel diff " + sci(dt));
    v.require(dt < 0.10, "(a) tau_Tun within 10%");

    for (const EvolveRun* r : {&a, &b}) {
        const std::size_t half = (r->xs.size() - 1) / 2;
        const double total = r->pen.back();
        const double first = r->pen[half], second = total - first;
        v.note("(b) d=" + sci(r->xs.back()) + ": tau_Pen(0,d/2) = " + sci(first) + ", tau_Pen(0,d) = " + sci(total) +
               ", second-half share " + sci(second / total));
        v.require(first >= second, "(b) faster rise in the first half");
        v.require(second < 0.25 * total, "(b) tau_Pen(0,d) - tau_Pen(0,d/2) < 25% of tau_Pen(0,d)");
    }

    const double dr = std::abs(b.ret00 / a.ret00 - 1.0);
    v.note("(c) tau_Ret(0,0): d=5 " + sci(a.ret00) + " s, d=10 " + sci(b.ret00) + " s, rel diff " + sci(dr));
    v.require(dr < 0.10, "(c) tau_Ret(0,0) within 10%");

    for (const EvolveRun* r : {&a, &b}) {
        const double d = r->xs.back();
        double worst = 0;
        bool low = false;
        for (std::size_t j = 0; j < r->xs.size(); ++j) {
            if (r->xs[j] > 0.6 * d + 1e-12) break;
            low = low || r->ret_low[j];
            worst = std::max(worst, std::abs(r->ret[j] / r->ret00 - 1.0));
        }
        v.note("(d) d=" + sci(d) + ": max |tau_Ret(x,x)/tau_Ret(0,0) - 1| on [0, 0.6d] = " + sci(worst) +
               (low ? " (some probes low-confidence)" : ""));
        v.require(std::isfinite(worst) && worst < 0.20, "(d) return-time plateau within 20%");
    }
    return v;
}

Verdict criterion7() {
    Verdict v;
    const PacketField f(SpectralPacket::gaussian(U.k_of_E(5.0), 0.02), PiecewisePotential::square(V0, 5.0), U);
    const double hm = U.hbar_over_m();
    double worst_c = 0;
    for (double x : {-4.0, 0.5, 2.5, 4.5, 9.0}) {
        for (double t : {-4e-15, -1e-15, 0.0, 2e-15}) {
            const double ht = 1e-19, hx = 1e-4;
            auto J = [&](double y) {
                const auto w = f.evolve(y, t);
                return hm * std::imag(std::conj(w.psi) * w.dpsi);
            };
            const double drho = (std::norm(f.evolve(x, t + ht).psi) - std::norm(f.evolve(x, t - ht).psi)) / (2 * ht);
            const double dJ = (J(x + hx) - J(x - hx)) / (2 * hx);
            worst_c = std::max(worst_c, std::abs(drho + dJ) / std::max(std::abs(drho), std::abs(dJ)));
        }
    }
    double worst_n = 0;
    for (double t : {-8e-14, -2e-14, 0.0, 3e-14, 8e-14}) {
        worst_n = std::max(worst_n, std::abs(window_probability(f, t, -3000.0, 3000.0, 1000) - 1.0));
    }
    v.note("continuity residual " + sci(worst_c) + ", norm drift " + sci(worst_n));
    v.require(worst_c <= 1e-4, "continuity 1e-4");
    v.require(worst_n <= 1e-4, "norm 1e-4");

    const EvolveRun base = evolve(5.0, 0.02);
    TimeGridOptions fine;
    fine.fine_dt *= 0.5;
    TimeGridOptions wide;
    wide.t_min *= 2;
    wide.t_max *= 2;
    wide.coarse_dt *= 0.5;
    const std::vector<std::pair<std::string, EvolveRun>> variants{
        {"nodes x2", evolve(5.0, 0.02, 1025)}, {"fine_dt / 2", evolve(5.0, 0.02, 513, fine)},
        {"window x2, coarse_dt / 2", evolve(5.0, 0.02, 513, wide)}};
    for (const auto& [name, r] : variants) {
        const double c1 = std::abs(r.tau_tun / base.tau_tun - 1.0);
        const double c2 = std::abs(r.ret00 / base.ret00 - 1.0);
        const double c3 = std::abs(r.pen[10] / base.pen[10] - 1.0);
        v.note(name + ": tau_Tun " + sci(c1) + ", tau_Ret(0,0) " + sci(c2) + ", tau_Pen(0,d/2) " + sci(c3));
        v.require(std::max({c1, c2, c3}) < 0.005, "refinement " + name + " changes times < 0.5%");
    }
    return v;
}

Verdict criterion8() {
    Verdict v;
    const SquareBarrierParams p{V0, 5.0};
    const double k0 = U.k_of_E(5.0);
    const double ref = extrapolated_phase_times(p, k0, U).dtau_T;
    std::vector<double> err;
    for (double dk : {0.02, 0.01, 0.005}) {
        const auto s = packet_spectrum_summary(p.potential(), k0, dk, -4.0 / dk, 513, U);
        err.push_back(std::abs(centroid_times(s, p, U).tau_C_T - ref));
    }
    const double r1 = err[0] / err[1], r2 = err[1] / err[2];
    v.note("errors " + sci(err[0]) + " " + sci(err[1]) + " " + sci(err[2]) + ", ratios " + sci(r1) + " " + sci(r2));
    v.require(std::abs(r1 - 2.0) <= 0.5 && std::abs(r2 - 2.0) <= 0.5, "first-order ratios 2 +- 0.5");
    return v;
}

Verdict criterion9() {
    Verdict v;
    double worst = 0;
    for (int de = 1; de <= 25; ++de) {
        const double k0 = 0.7 * eps();
        const auto r = reshaping_check({V0, de / eps()}, k0, 0.1 * k0, 20001, U);
        worst = std::max(worst, std::abs(r.peak_shift) / (0.1 * k0));
    }
    v.note("k0 = 0.7 eps: max |peak shift| / dk = " + sci(worst));
    v.require(worst < 1.0, "peak shift below dk");
    double least = 1.0;
    for (int de : {1, 3, 6, 10, 15, 20, 25}) {
        const double k0 = 0.9 * eps();
        least = std::min(least, reshaping_check({V0, de / eps()}, k0, 0.1 * k0, 20001, U).weight_above_k0);
    }
    v.note("k0 = 0.9 eps: min transmitted weight above k0 = " + sci(least));
    v.require(least > 0.5, "dominant transmitted weight above k0");
    return v;
}

Verdict criterion10() {
    Verdict v;
    double worst = 0;
    for (double wr : {0.6, 0.8, 0.95}) {
        for (double kL : {0.1, 0.5, 1.0, 3.0, 10.0, 25.0}) {
            OpticalBarrier g;
            g.b_inner = 1e8;
            g.b_outer = 2e8;
            g.omega = wr * PI * U.c_A_per_s / g.b_inner;
            g.L = kL / std::sqrt(PI * PI / 1e16 - std::pow(g.omega / U.c_A_per_s, 2));
            worst = std::max(worst, std::abs(traversal_time_mapped(g, U) / traversal_time_direct(g, U) - 1.0));
        }
    }
    v.note("mapped vs direct: max rel diff " + sci(worst));
    v.require(worst <= 1e-10, "mapping commutes to 1e-10");

    const double k = U.k_of_E(5.0);
    const double kap = std::sqrt(SquareBarrierParams{V0, 1.0}.kappa2(k, U));
    const double d = 15.0 / kap;
    double worst_gap = 0;
    int pairs = 0;
    for (double g = 1.0; g <= 20.0; g += 0.5) {
        const auto a = double_barrier_time(d, g, V0, k, 0.1, U), b = double_barrier_time(d, 2 * g, V0, k, 0.1, U);
        if (a.near_resonance || b.near_resonance) continue;
        ++pairs;
        worst_gap = std::max(worst_gap, std::abs(b.time / a.time - 1.0));
    }
    v.note("double barrier, kappa d = 15: " + std::to_string(pairs) + " off-resonant gap pairs, max change " +
           sci(worst_gap));
    v.require(pairs > 0 && worst_gap < 0.05, "gap doubling changes the time < 5%");
    return v;
}

}  // namespace

int main() {
    report(1, "unitarity and closed-form / transfer-matrix equivalence", criterion1());
    report(2, "Hartman saturation of the phase time", criterion2());
    report(3, "dwell-time identities", criterion3());
    report(4, "Larmor-time structure", criterion4());
    report(5, "linear scaling of tau_BL_T and tau_z", criterion5());
    report(6, "wavepacket penetration, tunnelling and return times", criterion6());
    report(7, "numerical hygiene", criterion7());
    report(8, "centroid-time convergence", criterion8());
    report(9, "spectral reshaping", criterion9());
    report(10, "optical equivalence and double-barrier gap independence", criterion10());
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
