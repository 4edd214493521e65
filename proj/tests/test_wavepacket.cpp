#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "tunnel/wavepacket.hpp"

using namespace tunnel;

namespace {

const UnitSystem U = UnitSystem::electron();

struct Moments {
    double m0_plus = 0, m1_plus = 0, m2_plus = 0, m0_minus = 0, m1_minus = 0, m2_minus = 0;
};

// Midpoint integration of the linear interpolant on a very fine subdivision.
Moments brute_moments(const std::vector<double>& t, const std::vector<double>& J, int sub = 20000) {
    Moments m;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = (t[i + 1] - t[i]) / sub;
        for (int j = 0; j < sub; ++j) {
            const double s = (j + 0.5) / sub;
            const double tt = t[i] + s * (t[i + 1] - t[i]);
            const double v = J[i] + s * (J[i + 1] - J[i]);
            if (v > 0) {
                m.m0_plus += v * h;
                m.m1_plus += v * tt * h;
                m.m2_plus += v * tt * tt * h;
            } else {
                m.m0_minus += v * h;
                m.m1_minus += v * tt * h;
                m.m2_minus += v * tt * tt * h;
            }
        }
    }
    return m;
}

}  // namespace

TEST_CASE("spectral packet is normalised") {
    const auto p = SpectralPacket::gaussian(1.1, 0.02);
    CHECK(p.spectral_norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.nodes() == 513);
    const auto clipped = SpectralPacket::gaussian(0.05, 0.02, 0.0, 129);
    CHECK(clipped.grid.nodes.front() >= 1e-4);
}

TEST_CASE("free packet matches the analytic gaussian") {
    const double k0 = 1.1, dk = 0.02;
    const PacketField f(SpectralPacket::gaussian(k0, dk), PiecewisePotential::free());
    for (double t : {-5e-14, 0.0, 3e-14}) {
        const double xc = U.hbar_over_m() * k0 * t;
        const oracle::cplx peak = oracle::free_gaussian(k0, dk, xc, t);
        for (double dx : {-40.0, 0.0, 25.0}) {
            const oracle::cplx ref = oracle::free_gaussian(k0, dk, xc + dx, t);
            CHECK(std::abs(f.evolve(xc + dx, t).psi - ref) < 2e-6 * std::abs(peak));
        }
    }
}

TEST_CASE("norm is conserved through a barrier") {
    const PacketField f(SpectralPacket::gaussian(U.k_of_E(5.0), 0.02), PiecewisePotential::square(10.0, 5.0));
    for (double t : {-6e-14, 0.0, 6e-14}) {
        CHECK(window_probability(f, t, -2500.0, 2500.0, 800) == doctest::Approx(1.0).epsilon(1e-4));
    }
    const double pt = f.transmitted_weight(), pr = f.reflected_weight();
    CHECK(pt + pr == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(window_probability(f, 8e-14, 5.0, 3000.0, 800) == doctest::Approx(pt).epsilon(1e-3));
}

TEST_CASE("continuity equation holds pointwise") {
    const PacketField f(SpectralPacket::gaussian(U.k_of_E(5.0), 0.04), PiecewisePotential::square(10.0, 5.0));
    const double hm = U.hbar_over_m();
    auto J = [&](double x, double t) {
        const auto w = f.evolve(x, t);
        return hm * std::imag(std::conj(w.psi) * w.dpsi);
    };
    for (double x : {-3.0, 1.0, 2.5, 4.5, 7.0}) {
        for (double t : {-2e-15, 0.0, 1e-15}) {
            const double ht = 1e-19, hx = 1e-4;
            const double drho = (std::norm(f.evolve(x, t + ht).psi) - std::norm(f.evolve(x, t - ht).psi)) / (2 * ht);
            const double dJ = (J(x + hx, t) - J(x - hx, t)) / (2 * hx);
            const double scale = std::max(std::abs(drho), std::abs(dJ));
            CHECK(std::abs(drho + dJ) <= 1e-4 * scale);
        }
    }
}

TEST_CASE("incident part is the free packet") {
    const double k0 = 1.0, dk = 0.03;
    const PacketField f(SpectralPacket::gaussian(k0, dk), PiecewisePotential::square(10.0, 5.0));
    const PacketField g(SpectralPacket::gaussian(k0, dk), PiecewisePotential::free());
    for (double x : {-20.0, 0.0, 30.0}) {
        CHECK(std::abs(f.evolve(x, 1e-14, PacketPart::Incident).psi - g.evolve(x, 1e-14).psi) < 1e-14);
    }
}

TEST_CASE("series recurrence equals direct evaluation") {
    const PacketField f(SpectralPacket::gaussian(1.0, 0.02), PiecewisePotential::square(10.0, 5.0));
    const auto pr = f.probe(2.0);
    const auto s = f.series(pr, -1e-14, 1e-17, 2000);
    for (std::size_t j : {0u, 511u, 512u, 1999u}) {
        const auto direct = f.evolve(2.0, -1e-14 + j * 1e-17);
        CHECK(std::abs(s[j].psi - direct.psi) < 1e-10 * std::abs(direct.psi) + 1e-16);
    }
}

TEST_CASE("arrival statistics are exact for a piecewise-linear current") {
    const std::vector<double> t{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> J{1.0, 3.0, -1.0, -1.0, 0.5, 0.0};
    const ArrivalStats s = arrival_stats(t, J);
    const Moments m = brute_moments(t, J);
    CHECK(s.total_plus_flux == doctest::Approx(m.m0_plus).epsilon(1e-9));
    CHECK(s.total_minus_flux == doctest::Approx(m.m0_minus).epsilon(1e-9));
    CHECK(s.mean_t_plus == doctest::Approx(m.m1_plus / m.m0_plus).epsilon(1e-8));
    CHECK(s.mean_t_minus == doctest::Approx(m.m1_minus / m.m0_minus).epsilon(1e-8));
    const double vp = m.m2_plus / m.m0_plus - std::pow(m.m1_plus / m.m0_plus, 2);
    const double vm = m.m2_minus / m.m0_minus - std::pow(m.m1_minus / m.m0_minus, 2);
    CHECK(s.var_t_plus == doctest::Approx(vp).epsilon(1e-7));
    CHECK(s.var_t_minus == doctest::Approx(vm).epsilon(1e-7));
    CHECK_FALSE(s.low_confidence_plus);
    CHECK_FALSE(s.low_confidence_minus);
}

TEST_CASE("tiny sign parts are flagged, not dropped") {
    const std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> J{0.0, 1.0, -1e-9, 0.0};
    const ArrivalStats s = arrival_stats(t, J, 1e-6);
    CHECK(s.low_confidence_minus);
    CHECK_FALSE(s.low_confidence_plus);
    CHECK(s.total_minus_flux < 0.0);
}

TEST_CASE("flux records must share a grid") {
    const PacketField f(SpectralPacket::gaussian(1.0, 0.05, 0.0, 129), PiecewisePotential::square(10.0, 2.0));
    const auto a = flux_series(f, 0.0, std::vector<double>{0.0, 1e-16, 2e-16});
    const auto b = flux_series(f, 2.0, std::vector<double>{0.0, 1e-16, 3e-16});
    CHECK_THROWS_AS(mean_times(a, b), std::invalid_argument);
}

TEST_CASE("free-packet flux times are kinematic") {
    const double k0 = 1.2, dk = 0.02;
    const PacketField f(SpectralPacket::gaussian(k0, dk), PiecewisePotential::free());
    const std::vector<double> xs{0.0, 50.0};
    const auto grid = adaptive_time_grid(f, xs);
    const auto mt = mean_times(flux_series(f, 0.0, grid), flux_series(f, 50.0, grid));
    // The time integral of J at fixed x weights each k by |f|^2, so t+(x) = x <1/v>.
    double num = 0.0, den = 0.0;
    const auto& p = f.packet();
    for (int i = 0; i < p.nodes(); ++i) {
        const double k = p.grid.nodes[i], w = p.grid.weights[i] * p.f[i] * p.f[i];
        num += w / k;
        den += w;
    }
    CHECK(mt.tau_T == doctest::Approx(50.0 * num / den / U.hbar_over_m()).epsilon(1e-6));
}

TEST_CASE("quantum potential of an exact gaussian") {
    const double sigma = 3.0;
    auto psi = [&](double x) { return oracle::cplx(std::exp(-x * x / (4 * sigma * sigma)), 0.0); };
    const auto q = quantum_potential(psi, 0.0, 1e-3, 1e-14);
    CHECK(q.Q == doctest::Approx(U.hbar2_over_2m() / (2 * sigma * sigma)).epsilon(1e-6));
    CHECK_FALSE(q.near_node);
    const auto far = quantum_potential(psi, 60.0, 1e-3, 1e-14);
    CHECK(far.near_node);
}

TEST_CASE("centroid follows free motion") {
    const double k0 = 1.2;
    const PacketField f(SpectralPacket::gaussian(k0, 0.05), PiecewisePotential::free());
    const double t = 2e-14;
    const auto c = centroid_trajectory(f, t, -400.0, 1200.0, 400);
    CHECK(c.probability == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c.x_mean == doctest::Approx(U.hbar_over_m() * k0 * t).epsilon(1e-5));
}
