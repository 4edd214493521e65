#include "tunnel/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tunnel/bohm.hpp"
#include "tunnel/optical.hpp"
#include "tunnel/report.hpp"
#include "tunnel/times.hpp"
#include "tunnel/wavepacket.hpp"

namespace tunnel {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

SquareBarrierParams barrier_from(const RunConfig& cfg, double d) {
    SquareBarrierParams p{cfg.get_positive("V0", 10.0), d};
    p.validate();
    return p;
}

// Wavenumber sweep from exactly one of k, E, k_over_eps.
std::vector<double> k_sweep(const RunConfig& cfg, const SquareBarrierParams& p, const UnitSystem& u) {
    const int given = cfg.has("k") + cfg.has("E") + cfg.has("k_over_eps");
    if (given > 1) throw ConfigError("give only one of 'k', 'E', 'k_over_eps'");
    if (cfg.has("k")) return cfg.get_positive_list("k", {});
    if (cfg.has("k_over_eps")) {
        std::vector<double> ks = cfg.get_positive_list("k_over_eps", {});
        for (double& k : ks) k *= p.eps(u);
        return ks;
    }
    std::vector<double> ks = cfg.get_positive_list("E", {5.0});
    for (double& k : ks) k = u.k_of_E(k);
    return ks;
}

std::vector<double> packet_k0s(const RunConfig& cfg, const UnitSystem& u) {
    if (cfg.has("k0") && cfg.has("E_mean")) throw ConfigError("give only one of 'k0', 'E_mean'");
    if (cfg.has("k0")) return cfg.get_positive_list("k0", {});
    std::vector<double> ks = cfg.get_positive_list("E_mean", {5.0});
    for (double& k : ks) k = u.k_of_E(k);
    return ks;
}

TimeGridOptions grid_options(const RunConfig& cfg) {
    TimeGridOptions o;
    o.t_min = cfg.get_double("t_min", o.t_min);
    o.t_max = cfg.get_double("t_max", o.t_max);
    if (!(o.t_max > o.t_min)) throw ConfigError("'t_max' must exceed 't_min'");
    o.coarse_dt = cfg.get_positive("coarse_dt", o.coarse_dt);
    o.fine_dt = cfg.get_positive("fine_dt", o.fine_dt);
    o.flux_floor = cfg.get_positive("flux_floor", o.flux_floor);
    if (o.fine_dt > o.coarse_dt) throw ConfigError("'fine_dt' must not exceed 'coarse_dt'");
    return o;
}

int packet_nodes(const RunConfig& cfg) {
    const int n = cfg.get_int("nodes", 513);
    if (n < 16) throw ConfigError("'nodes' must be at least 16");
    return n;
}

void add_grid_metadata(Metadata& m, const TimeGridOptions& o, int nodes) {
    m.emplace_back("quadrature_nodes", std::to_string(nodes));
    m.emplace_back("t_window_s", format_number(o.t_min) + " " + format_number(o.t_max));
    m.emplace_back("coarse_dt_s", format_number(o.coarse_dt));
    m.emplace_back("fine_dt_s", format_number(o.fine_dt));
    m.emplace_back("support_threshold", format_number(o.support_threshold));
    m.emplace_back("flux_floor", format_number(o.flux_floor));
}

struct Emitter {
    fs::path dir;
    CommandOutput out;

    void csv(const std::string& name, const Table& t, const Metadata& m) {
        write_csv(dir / name, t, m);
        out.files.push_back(dir / name);
    }
    void svg(const std::string& name, const std::string& text) {
        write_text(dir / name, text);
        out.files.push_back(dir / name);
    }
    void warn(const std::string& w) {
        out.warnings.push_back(w);
        out.confidence_ok = false;
    }
};

}  // namespace

CommandOutput cmd_times(const RunConfig& cfg, const fs::path& out_dir) {
    const UnitSystem u = UnitSystem::electron();
    const auto ds = cfg.get_list("d", {5.0});
    for (double d : ds) {
        if (!(d > 0.0)) throw ConfigError("'d' values must be positive");
    }
    const double omega = cfg.get_double("omega", 0.0);
    const double dV = cfg.get_double("deltaV", 0.0);
    if (omega < 0.0 || dV < 0.0) throw ConfigError("'omega' and 'deltaV' must not be negative");

    Table t({"k", "E_eV", "T", "R", "alpha", "beta", "tau_eq_s", "dtau_phase_T_s", "dtau_phase_R_s", "tau_dwell_s",
             "tau_larmor_y_s", "tau_larmor_z_s", "tau_larmor_x_s", "tau_BL_T_s", "tau_BL_R_s", "tau_complex_re_s",
             "tau_complex_im_s", "d_A", "above_barrier"});
    const bool sidebands = omega > 0.0 && dV > 0.0;
    if (sidebands) {
        for (const char* c : {"I_plus", "I_minus", "band_ratio", "BL_valid"}) t.columns.emplace_back(c);
    }
    Emitter em{out_dir, {}};
    for (double d : ds) {
        const SquareBarrierParams p = barrier_from(cfg, d);
        for (double k : k_sweep(cfg, p, u)) {
            const TimeReport r = time_report(p, k, u);
            std::vector<double> row{r.k, r.E, r.T, r.R, r.alpha, r.beta, r.tau_eq, r.dtau_phase_T, r.dtau_phase_R,
                                    r.tau_dwell, r.tau_larmor_y, r.tau_larmor_z, r.tau_larmor_x, r.tau_BL_T, r.tau_BL_R,
                                    r.tau_complex.real(), r.tau_complex.imag(), d, r.above_barrier ? 1.0 : 0.0};
            if (sidebands) {
                const ButtikerLandauer bl = buttiker_landauer(p, k, omega, dV, u);
                row.insert(row.end(), {bl.I_plus, bl.I_minus, bl.band_ratio, bl.in_validity_range ? 1.0 : 0.0});
                if (!bl.in_validity_range) em.warn("modulation outside the adiabatic range at k = " + fmt(k));
            }
            for (double v : row) {
                if (!std::isfinite(v)) em.warn("non-finite value at d = " + fmt(d) + ", k = " + fmt(k));
            }
            t.add_row(std::move(row));
        }
    }
    em.csv("times.csv", t, run_metadata("times", cfg, u));

    if (cfg.has("potential_file")) {
        const PiecewisePotential pot = load_potential(cfg.get_string("potential_file", ""));
        if (pot.semi_infinite_last()) throw ConfigError("times: potential_file must describe a finite potential");
        Table g({"k", "E_eV", "T", "R", "arg_T", "arg_R", "dtau_phase_T_s", "dtau_phase_R_s", "tau_dwell_s"});
        SquareBarrierParams ref{cfg.get_positive("V0", 10.0), 0.0};
        for (double k : k_sweep(cfg, ref, u)) {
            const ScatteringState s = solve_transfer_matrix(pot, k, u);
            const PhaseTimes ph = extrapolated_phase_times(pot, k, u);
            g.add_row({k, u.E_of_k(k), std::abs(s.amp_T), std::abs(s.amp_R), std::arg(s.amp_T), std::arg(s.amp_R),
                       ph.dtau_T, ph.dtau_R, dwell_time(pot, k, pot.left_edge(), pot.right_edge(), u)});
        }
        Metadata m = run_metadata("times", cfg, u);
        m.emplace_back("potential", pot.describe());
        em.csv("times_potential.csv", g, m);
    }
    return em.out;
}

namespace {

struct EvolveCase {
    double d, k0, dk;
};

std::vector<EvolveCase> evolve_cases(const RunConfig& cfg, const UnitSystem& u) {
    const auto ds = cfg.get_positive_list("d", {5.0});
    const auto k0s = packet_k0s(cfg, u);
    const auto dks = cfg.get_positive_list("dk", {0.02});
    const std::string combine = cfg.get_string("combine", "product");
    std::vector<EvolveCase> cases;
    if (combine == "zip") {
        const std::size_t n = std::max({ds.size(), k0s.size(), dks.size()});
        auto pick = [n](const std::vector<double>& v, const char* key) {
            if (v.size() != 1 && v.size() != n) {
                throw ConfigError(std::string("'") + key + "' length does not match the other zipped lists");
            }
            return [&v](std::size_t i) { return v.size() == 1 ? v[0] : v[i]; };
        };
        auto fd = pick(ds, "d");
        auto fk = pick(k0s, "E_mean/k0");
        auto fdk = pick(dks, "dk");
        for (std::size_t i = 0; i < n; ++i) cases.push_back({fd(i), fk(i), fdk(i)});
    } else if (combine == "product") {
        for (double d : ds)
            for (double k0 : k0s)
                for (double dk : dks) cases.push_back({d, k0, dk});
    } else {
        throw ConfigError("'combine' must be product or zip");
    }
    for (const auto& c : cases) {
        if (c.k0 - 5.0 * c.dk <= 0.0) throw ConfigError("packet spectrum k0 - 5 dk must stay positive");
    }
    return cases;
}

}  // namespace

CommandOutput cmd_evolve(const RunConfig& cfg, const fs::path& out_dir) {
    const UnitSystem u = UnitSystem::electron();
    const double V0 = cfg.get_positive("V0", 10.0);
    const int nx = cfg.get_int("x_points", 21);
    if (nx < 20) throw ConfigError("'x_points' must be at least 20");
    const int nodes = packet_nodes(cfg);
    const TimeGridOptions opts = grid_options(cfg);
    const bool svg = cfg.get_bool("svg", true);
    const auto cases = evolve_cases(cfg, u);

    Table curves({"case", "d_A", "E_mean_eV", "k0", "dk", "x_A", "tau_pen_s", "tau_ret_s", "t_plus_s", "t_minus_s",
                  "var_t_plus_s2", "var_t_minus_s2", "flux_plus", "flux_minus", "low_confidence_pen",
                  "low_confidence_ret"});
    Table summary({"case", "d_A", "E_mean_eV", "k0", "dk", "tau_tun_s", "tau_pen_half_s", "tau_ret_00_s",
                   "tau_phase_T_s", "var_T_additive_s2", "transmitted_weight", "low_confidence"});
    std::vector<SvgSeries> pen_series, ret_series;
    Emitter em{out_dir, {}};

    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const EvolveCase& c = cases[ci];
        const SquareBarrierParams p{V0, c.d};
        const PacketField field(SpectralPacket::gaussian(c.k0, c.dk, 0.0, nodes), p.potential(), u);
        std::vector<double> xs(nx);
        for (int j = 0; j < nx; ++j) xs[j] = c.d * j / (nx - 1);
        const std::vector<double> tg = adaptive_time_grid(field, xs, opts);
        std::vector<FluxRecord> recs;
        recs.reserve(xs.size());
        for (double x : xs) recs.push_back(flux_series(field, x, tg, PacketPart::Full, opts.flux_floor));

        const std::string label = "d=" + fmt(c.d) + " E=" + fmt(u.E_of_k(c.k0)) + " dk=" + fmt(c.dk);
        SvgSeries pen{label, {}, {}}, ret{label, {}, {}};
        bool any_low = false;
        for (int j = 0; j < nx; ++j) {
            const MeanTimes mt = mean_times(recs[0], recs[j]);
            const ArrivalStats& s = recs[j].stats;
            const bool low_pen = s.low_confidence_plus || recs[0].stats.low_confidence_plus;
            const bool low_ret = s.low_confidence_plus || s.low_confidence_minus;
            any_low = any_low || low_pen || low_ret;
            curves.add_row({double(ci), c.d, u.E_of_k(c.k0), c.k0, c.dk, xs[j], mt.tau_Pen, mt.tau_Ret, s.mean_t_plus,
                            s.mean_t_minus, s.var_t_plus, s.var_t_minus, s.total_plus_flux, s.total_minus_flux,
                            low_pen ? 1.0 : 0.0, low_ret ? 1.0 : 0.0});
            pen.x.push_back(xs[j]);
            pen.y.push_back(mt.tau_Pen);
            if (!low_ret) {
                ret.x.push_back(xs[j]);
                ret.y.push_back(mt.tau_Ret);
            }
        }
        const MeanTimes full = mean_times(recs.front(), recs.back());
        const MeanTimes half = mean_times(recs.front(), recs[(nx - 1) / 2]);
        const MeanTimes ret0 = mean_times(recs.front(), recs.front());
        summary.add_row({double(ci), c.d, u.E_of_k(c.k0), c.k0, c.dk, full.tau_Pen, half.tau_Pen, ret0.tau_Ret,
                         time_report(p, c.k0, u).dtau_phase_T, full.var_T_additive, field.transmitted_weight(),
                         any_low ? 1.0 : 0.0});
        if (any_low) em.warn("low-confidence flux probes in case " + label);
        pen_series.push_back(std::move(pen));
        ret_series.push_back(std::move(ret));
    }
    Metadata m = run_metadata("evolve", cfg, u);
    add_grid_metadata(m, opts, nodes);
    m.emplace_back("x_points", std::to_string(nx));
    em.csv("evolve.csv", curves, m);
    em.csv("evolve_summary.csv", summary, m);
    if (svg) {
        em.svg("tau_pen.svg", render_svg("Mean penetration time", "x (A)", "tau_Pen(0,x) (s)", pen_series));
        em.svg("tau_ret.svg", render_svg("Mean return time", "x (A)", "tau_Ret(x,x) (s)", ret_series));
    }
    return em.out;
}

CommandOutput cmd_hartman(const RunConfig& cfg, const fs::path& out_dir) {
    const UnitSystem u = UnitSystem::electron();
    const double V0 = cfg.get_positive("V0", 10.0);
    const double E = cfg.get_positive("E", 5.0);
    if (E >= V0) throw ConfigError("hartman: 'E' must lie below 'V0'");
    const auto ds = cfg.get_positive_list("d", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 15.0, 20.0});
    const bool flux = cfg.get_bool("flux", true);
    const double dk = cfg.get_positive("dk", 0.02);
    const int nodes = packet_nodes(cfg);
    const TimeGridOptions opts = grid_options(cfg);
    const double k = u.k_of_E(E);

    std::vector<std::string> cols{"d_A", "kappa_d", "dtau_phase_T_s", "tau_dwell_s", "tau_BL_T_s", "tau_larmor_z_s",
                                  "tau_saturation_s"};
    if (flux) cols.insert(cols.end(), {"tau_tun_flux_s", "flux_low_confidence"});
    Table t(cols);
    Emitter em{out_dir, {}};
    for (double d : ds) {
        const SquareBarrierParams p{V0, d};
        const TimeReport r = time_report(p, k, u);
        const double kap = std::sqrt(p.kappa2(k, u));
        std::vector<double> row{d, kap * d, r.dtau_phase_T, r.tau_dwell, r.tau_BL_T, r.tau_larmor_z,
                                2.0 / (u.hbar_over_m() * k * kap)};
        if (flux) {
            if (k - 5.0 * dk <= 0.0) throw ConfigError("packet spectrum k0 - 5 dk must stay positive");
            const PacketField field(SpectralPacket::gaussian(k, dk, 0.0, nodes), p.potential(), u);
            const std::vector<double> tg = adaptive_time_grid(field, {0.0, d}, opts);
            const MeanTimes mt = mean_times(flux_series(field, 0.0, tg, PacketPart::Full, opts.flux_floor),
                                            flux_series(field, d, tg, PacketPart::Full, opts.flux_floor));
            const bool low = mt.at_xi.low_confidence_plus || mt.at_xf.low_confidence_plus;
            if (low) em.warn("low-confidence flux time at d = " + fmt(d));
            row.insert(row.end(), {mt.tau_T, low ? 1.0 : 0.0});
        }
        t.add_row(std::move(row));
    }
    Metadata m = run_metadata("hartman", cfg, u);
    if (flux) add_grid_metadata(m, opts, nodes);
    em.csv("hartman.csv", t, m);
    return em.out;
}

CommandOutput cmd_reshape(const RunConfig& cfg, const fs::path& out_dir) {
    const UnitSystem u = UnitSystem::electron();
    const double V0 = cfg.get_positive("V0", 10.0);
    const auto k0e = cfg.get_positive_list("k0_over_eps", {0.3, 0.5, 0.7, 0.9});
    const auto des = cfg.get_list("d_eps", {1, 3, 6, 10, 15, 20, 25});
    for (double v : des) {
        if (v < 0.0) throw ConfigError("'d_eps' values must not be negative");
    }
    const double ratio = cfg.get_positive("dk_over_k0", 0.1);
    const int grid = cfg.get_int("grid_points", 20001);
    const int npts = cfg.get_int("table_points", 401);
    if (grid < 101 || npts < 11) throw ConfigError("'grid_points' >= 101 and 'table_points' >= 11 required");
    const double eps = SquareBarrierParams{V0, 0.0}.eps(u);

    Table summary({"k0_over_eps", "d_eps", "k0", "dk", "peak_k", "peak_shift", "peak_shift_over_dk",
                   "peak_change_on_refinement", "transmitted_mean_k", "weight_above_k0", "weight_above_eps",
                   "has_violation", "violation_lo", "violation_hi"});
    Table curves({"k0_over_eps", "d_eps", "k", "k_over_eps", "T", "f", "T_times_f"});
    Emitter em{out_dir, {}};
    for (double a : k0e) {
        for (double de : des) {
            const SquareBarrierParams p{V0, de / eps};
            const double k0 = a * eps, dk = ratio * k0;
            const ReshapingResult r = reshaping_check(p, k0, dk, grid, u);
            const ReshapingResult r2 = reshaping_check(p, k0, dk, 2 * grid - 1, u);
            const double change = std::abs(r2.peak_k - r.peak_k);
            if (change > 1e-3 * dk) em.warn("peak not stable under refinement at k0/eps = " + fmt(a));
            const bool v = r.violation_hull.has_value();
            summary.add_row({a, de, k0, dk, r.peak_k, r.peak_shift, r.peak_shift / dk, change, r.transmitted_mean_k,
                             r.weight_above_k0, r.weight_above_eps, v ? 1.0 : 0.0, v ? r.violation_hull->first : 0.0,
                             v ? r.violation_hull->second : 0.0});
            const double lo = std::max(1e-4, k0 - 6.0 * dk), hi = k0 + 6.0 * dk;
            for (int i = 0; i < npts; ++i) {
                const double k = lo + (hi - lo) * i / (npts - 1);
                const double T = closed_form_square(p, k, u).T;
                const double f = std::exp(-(k - k0) * (k - k0) / (2.0 * dk * dk));
                curves.add_row({a, de, k, k / eps, T, f, T * f});
            }
        }
    }
    const Metadata m = run_metadata("reshape", cfg, u);
    em.csv("reshape_summary.csv", summary, m);
    em.csv("reshape_curves.csv", curves, m);
    return em.out;
}

CommandOutput cmd_optical(const RunConfig& cfg, const fs::path& out_dir) {
    const UnitSystem u = UnitSystem::electron();
    const double c = u.c_A_per_s;
    const double b = cfg.get_positive("b", 1.0e8);
    const auto ratios = cfg.get_positive_list("omega_ratio", parse_number_list("0.5:1.5:21"));
    const double w_ratio = cfg.get_positive("barrier_omega_ratio", 0.8);
    const double outer = cfg.get_positive("outer_ratio", 2.0);
    if (!(w_ratio < 1.0) || !(outer * w_ratio > 1.0)) {
        throw ConfigError("need barrier_omega_ratio < 1 < outer_ratio * barrier_omega_ratio");
    }
    const auto kLs = cfg.get_positive_list("kappa_L", {0.5, 1, 2, 3, 5, 8, 10, 15, 20});
    const double tol = cfg.get_positive("mapping_tolerance", 1e-10);
    Emitter em{out_dir, {}};
    const Metadata meta = run_metadata("optical", cfg, u);

    Table disp({"omega_ratio", "omega_rad_s", "kappa_re", "kappa_im", "v_group_over_c", "evanescent"});
    for (double r : ratios) {
        WaveguideSpec g{b, 0.0};
        g.omega = r * g.omega_c(u);
        const Dispersion dsp = waveguide_dispersion(g, u);
        disp.add_row({r, g.omega, dsp.kappa.real(), dsp.kappa.imag(),
                      dsp.evanescent ? 0.0 : dsp.v_group / c, dsp.evanescent ? 1.0 : 0.0});
    }
    em.csv("optical_dispersion.csv", disp, meta);

    Table mapped({"kappa_L", "L_A", "k_outer", "kappa", "eps", "V0_equiv_eV", "tau_direct_s", "tau_mapped_s",
                  "tau_frequency_derivative_s", "mapped_rel_diff", "speed_over_c"});
    OpticalBarrier g;
    g.b_inner = b;
    g.b_outer = outer * b;
    g.omega = w_ratio * kPi * c / b;
    const double kap = std::sqrt(kPi * kPi / (b * b) - g.omega * g.omega / (c * c));
    for (double kL : kLs) {
        g.L = kL / kap;
        const QuantumEquivalent q = map_quantum_waveguide(g, u);
        const double td = traversal_time_direct(g, u), tm = traversal_time_mapped(g, u);
        const double tf = traversal_time_frequency_derivative(g, u);
        const double rel = std::abs(tm - td) / std::abs(td);
        if (rel > tol) em.warn("mapped and direct optical times disagree at kappa L = " + fmt(kL));
        mapped.add_row({kL, g.L, q.k, q.kappa, q.eps, q.params.V0, td, tm, tf, rel, g.L / td / c});
    }
    Metadata mm = meta;
    mm.emplace_back("superluminal_threshold_kappa_L", format_number(superluminal_threshold(b, w_ratio, outer, u)));
    em.csv("optical_mapped.csv", mapped, mm);

    const double V0 = cfg.get_positive("V0", 10.0);
    const double E = cfg.get_positive("E", 5.0);
    if (E >= V0) throw ConfigError("optical: 'E' must lie below 'V0'");
    const double kd = cfg.get_positive("kappa_d", 15.0);
    const double margin = cfg.get_positive("margin", 0.1);
    const double k = u.k_of_E(E);
    const double kq = std::sqrt(SquareBarrierParams{V0, 0.0}.kappa2(k, u));
    const double d = kd / kq;
    const auto gaps = cfg.get_positive_list("gap", {2.0, 4.0, 8.0, 16.0, 32.0});
    const double gtol = cfg.get_positive("gap_tolerance", 0.05);
    Table sweep({"gap_A", "d_A", "kappa_d", "time_s", "T", "resonance_metric", "near_resonance",
                 "rel_change_vs_first_off_resonant"});
    const auto rows = double_barrier_gap_sweep(d, gaps, V0, k, margin, u);
    double ref = 0.0;
    for (const auto& r : rows) {
        if (!r.near_resonance && ref == 0.0) ref = r.time;
    }
    for (const auto& r : rows) {
        const double rel = (ref != 0.0 && !r.near_resonance) ? std::abs(r.time - ref) / ref : 0.0;
        if (rel > gtol) em.warn("double-barrier time varies beyond tolerance at gap = " + fmt(r.gap));
        sweep.add_row({r.gap, d, kd, r.time, r.T, r.resonance_metric, r.near_resonance ? 1.0 : 0.0, rel});
    }
    em.csv("optical_double_barrier.csv", sweep, meta);
    return em.out;
}

CommandOutput cmd_bohm(const RunConfig& cfg, const fs::path& out_dir) {
    const UnitSystem u = UnitSystem::electron();
    const double V0 = cfg.get_positive("V0", 10.0);
    const double d = cfg.get_positive("d", 5.0);
    if (cfg.has("k0") && cfg.has("E_mean")) throw ConfigError("give only one of 'k0', 'E_mean'");
    const double k0 = cfg.has("k0") ? cfg.get_positive("k0", 1.0) : u.k_of_E(cfg.get_positive("E_mean", 5.0));
    const double dk = cfg.get_positive("dk", 0.02);
    if (k0 - 5.0 * dk <= 0.0) throw ConfigError("packet spectrum k0 - 5 dk must stay positive");
    const int n = cfg.get_int("seeds", 32);
    if (n < 1) throw ConfigError("'seeds' must be positive");
    const std::string mode = cfg.get_string("seed_mode", "transmitted");
    if (mode != "transmitted" && mode != "full") throw ConfigError("'seed_mode' must be transmitted or full");
    const int nodes = packet_nodes(cfg);
    TimeGridOptions opts = grid_options(cfg);

    const SquareBarrierParams p{V0, d};
    const PacketField field(SpectralPacket::gaussian(k0, dk, 0.0, nodes), p.potential(), u);
    BohmOptions bo;
    bo.t_start = opts.t_min;
    bo.t_end = opts.t_max;
    const double width = 12.0 / dk;
    const double x_lo = field.packet().x_c - width + u.hbar_over_m() * k0 * bo.t_start;
    const double x_hi = x_lo + 2.0 * width;
    const double PT = field.transmitted_weight();
    const double q_lo = mode == "transmitted" ? 1.0 - PT : 0.0;
    const BohmSeeds seeds = quantile_seeds(field, bo.t_start, x_lo, x_hi, q_lo, 1.0, n);
    const auto traj = bohm_trajectories(field, seeds, bo);
    const BohmSummary s = summarize_trajectories(traj);

    Table tt({"trajectory", "t_s", "x_A"});
    Table tr({"trajectory", "seed_x_A", "weight", "transmitted", "reflected", "degenerate", "t_enter_s", "t_exit_s",
              "dwell_s"});
    Emitter em{out_dir, {}};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& b = traj[i];
        const std::size_t stride = std::max<std::size_t>(1, b.t.size() / 400);
        for (std::size_t j = 0; j < b.t.size(); j += stride) tt.add_row({double(i), b.t[j], b.x[j]});
        tr.add_row({double(i), seeds.x[i], b.weight, b.transmitted ? 1.0 : 0.0, b.reflected ? 1.0 : 0.0,
                    b.degenerate ? 1.0 : 0.0, b.t_enter, b.t_exit, b.dwell});
    }
    if (s.degenerate > 0) em.warn(std::to_string(s.degenerate) + " degenerate trajectories");
    if (!s.crossing_free) em.warn("trajectories crossed");

    const std::vector<double> tg = adaptive_time_grid(field, {0.0, d}, opts);
    const MeanTimes mt = mean_times(flux_series(field, 0.0, tg, PacketPart::Full, opts.flux_floor),
                                    flux_series(field, d, tg, PacketPart::Full, opts.flux_floor));
    Table sm({"transmitted", "reflected", "degenerate", "crossing_free", "transmitted_weight", "mean_exit_time_s",
              "flux_mean_t_plus_at_d_s", "mean_enter_time_s", "mean_traversal_s", "var_traversal_s2",
              "flux_tau_T_s", "flux_var_T_additive_s2", "mean_dwell_s"});
    sm.add_row({double(s.transmitted), double(s.reflected), double(s.degenerate), s.crossing_free ? 1.0 : 0.0, PT,
                s.mean_exit_time, mt.at_xf.mean_t_plus, s.mean_enter_time, s.mean_traversal, s.var_traversal,
                mt.tau_T, mt.var_T_additive, s.mean_dwell});
    Metadata m = run_metadata("bohm", cfg, u);
    add_grid_metadata(m, opts, nodes);
    m.emplace_back("seed_quantiles", format_number(q_lo) + " 1");
    em.csv("bohm_trajectories.csv", tt, m);
    em.csv("bohm_crossings.csv", tr, m);
    em.csv("bohm_summary.csv", sm, m);
    if (cfg.get_bool("svg", true)) {
        std::vector<SvgSeries> ser;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            SvgSeries sv{i == 0 ? "trajectories" : "", {}, {}};
            for (std::size_t j = 0; j < traj[i].t.size(); j += std::max<std::size_t>(1, traj[i].t.size() / 400)) {
                sv.x.push_back(traj[i].t[j]);
                sv.y.push_back(traj[i].x[j]);
            }
            ser.push_back(std::move(sv));
        }
        em.svg("bohm_trajectories.svg", render_svg("Bohm trajectories", "t (s)", "x (A)", ser));
    }
    return em.out;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"times", "evolve", "hartman", "reshape", "optical", "bohm"};
    return names;
}

CommandOutput run_command(const std::string& name, const RunConfig& cfg, const fs::path& out_dir) {
    if (name == "times") return cmd_times(cfg, out_dir);
    if (name == "evolve") return cmd_evolve(cfg, out_dir);
    if (name == "hartman") return cmd_hartman(cfg, out_dir);
    if (name == "reshape") return cmd_reshape(cfg, out_dir);
    if (name == "optical") return cmd_optical(cfg, out_dir);
    if (name == "bohm") return cmd_bohm(cfg, out_dir);
    throw ConfigError("unknown command '" + name + "'");
}

}  // namespace tunnel
