#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tunnel/bohm.hpp"

using namespace tunnel;

namespace {
const UnitSystem U = UnitSystem::electron();
}

TEST_CASE("Bohm velocity is J / rho") {
    const double k0 = 1.1, dk = 0.03;
    const PacketField f(SpectralPacket::gaussian(k0, dk), PiecewisePotential::free());
    const double t = 1e-14, h = 1e-5;
    const double x = U.hbar_over_m() * k0 * t + 10.0;
    const oracle::cplx psi = oracle::free_gaussian(k0, dk, x, t);
    const oracle::cplx dpsi =
        (oracle::free_gaussian(k0, dk, x + h, t) - oracle::free_gaussian(k0, dk, x - h, t)) / (2 * h);
    CHECK(bohm_velocity(f, x, t) == doctest::Approx(U.hbar_over_m() * std::imag(dpsi / psi)).epsilon(1e-6));
}

TEST_CASE("free trajectories scale with the packet width") {
    const double k0 = 1.1, dk = 0.03;
    const PacketField f(SpectralPacket::gaussian(k0, dk), PiecewisePotential::free());
    BohmOptions o;
    o.t_start = 0.0;
    o.t_end = 4e-14;
    const double s0 = 1.0 / (std::sqrt(2.0) * dk);
    const auto tr = bohm_trajectories(f, std::vector<double>{-30.0, 0.0, 45.0}, o);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK_FALSE(tr[i].degenerate);
        const double t = tr[i].t.back();
        const double tau = U.hbar_over_m() * t / (2.0 * s0 * s0);
        const double expect = U.hbar_over_m() * k0 * t + tr[i].x.front() * std::sqrt(1.0 + tau * tau);
        CHECK(tr[i].x.back() == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("transmitted trajectories exit at the flux mean arrival time") {
    const double d = 5.0;
    const PacketField f(SpectralPacket::gaussian(U.k_of_E(5.0), 0.02), PiecewisePotential::square(10.0, d));
    BohmOptions o;
    const double width = 12.0 / 0.02;
    const double x_lo = -width + U.hbar_over_m() * f.packet().k0 * o.t_start;
    const auto seeds = quantile_seeds(f, o.t_start, x_lo, x_lo + 2 * width, 1.0 - f.transmitted_weight(), 1.0, 12);
    const auto tr = bohm_trajectories(f, seeds, o);
    const auto s = summarize_trajectories(tr);
    CHECK(s.transmitted == 12);
    CHECK(s.degenerate == 0);
    CHECK(s.crossing_free);

    const auto grid = adaptive_time_grid(f, {0.0, d});
    const auto at_d = flux_series(f, d, grid);
    CHECK(s.mean_exit_time == doctest::Approx(at_d.stats.mean_t_plus).epsilon(1e-2));
    CHECK(s.var_traversal >= 0.0);
}

TEST_CASE("trajectories started behind the transmitted mass are reflected") {
    const PacketField f(SpectralPacket::gaussian(U.k_of_E(5.0), 0.02), PiecewisePotential::square(10.0, 5.0));
    BohmOptions o;
    const double width = 12.0 / 0.02;
    const double x_lo = -width + U.hbar_over_m() * f.packet().k0 * o.t_start;
    const auto seeds = quantile_seeds(f, o.t_start, x_lo, x_lo + 2 * width, 0.2, 0.8, 4);
    const auto tr = bohm_trajectories(f, seeds, o);
    for (const auto& t : tr) {
        CHECK(t.reflected);
        CHECK_FALSE(t.transmitted);
    }
}
