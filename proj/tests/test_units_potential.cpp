#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tunnel/potential.hpp"
#include "tunnel/quadrature.hpp"
#include "tunnel/units.hpp"

using namespace tunnel;

TEST_CASE("unit constants give the electron scales") {
    const UnitSystem u = UnitSystem::electron();
    CHECK(u.hbar2_over_2m() == doctest::Approx(3.80998).epsilon(1e-5));
    CHECK(u.hbar_over_m() == doctest::Approx(1.15768e16).epsilon(1e-5));
    CHECK(u.k_of_E(5.0) == doctest::Approx(1.14558).epsilon(1e-5));
    CHECK(u.E_of_k(u.k_of_E(7.3)) == doctest::Approx(7.3).epsilon(1e-14));
    CHECK(u.angular_frequency(1.0) * u.hbar_eV_s == doctest::Approx(u.E_of_k(1.0)).epsilon(1e-9));
}

TEST_CASE("unit validation rejects non-positive constants") {
    CHECK_THROWS_AS(UnitSystem::with_rest_energy(0.0), std::invalid_argument);
    UnitSystem u;
    u.hbar_eV_s = -1.0;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
}

TEST_CASE("potential factories and accessors") {
    const auto sq = PiecewisePotential::square(10.0, 5.0);
    CHECK(sq.left_edge() == 0.0);
    CHECK(sq.right_edge() == 5.0);
    CHECK(sq.value_at(2.0) == 10.0);
    CHECK(sq.value_at(-1.0) == 0.0);
    CHECK(sq.value_at(6.0) == 0.0);
    CHECK(PiecewisePotential::square(10.0, 0.0).empty());

    const auto db = PiecewisePotential::double_barrier(10.0, 2.0, 3.0);
    CHECK(db.right_edge() == 7.0);
    CHECK(db.value_at(3.0) == 0.0);
    CHECK(db.value_at(6.0) == 10.0);
    CHECK(PiecewisePotential::double_barrier(10.0, 2.0, 0.0).right_edge() == 4.0);

    const auto st = PiecewisePotential::step(4.0, 1.0);
    CHECK(st.semi_infinite_last());
    CHECK(st.right_edge() == 1.0);
    CHECK(st.asymptotic_right() == 4.0);
    CHECK(st.value_at(1e6) == 4.0);
}

TEST_CASE("potential validation") {
    CHECK_THROWS_AS(PiecewisePotential({{0.0, 1.0, 1.0}, {1.5, 2.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewisePotential({{1.0, 1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewisePotential({{0.0, 1.0, NAN}}), std::invalid_argument);
}

TEST_CASE("reversed potential mirrors segments") {
    const PiecewisePotential p({{0.0, 1.0, 3.0}, {1.0, 4.0, 7.0}});
    const auto r = p.reversed();
    CHECK(r.value_at(0.5) == 7.0);
    CHECK(r.value_at(3.5) == 3.0);
    CHECK(r.left_edge() == 0.0);
    CHECK(r.right_edge() == 4.0);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const auto q = gauss_legendre(8, -1.0, 3.0);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], 15);
    CHECK(s == doctest::Approx((std::pow(3.0, 16) - 1.0) / 16.0).epsilon(1e-13));

    const auto c = composite_gauss_legendre(16, 10, 0.0, 3.14159265358979323846);
    double si = 0.0;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) si += c.weights[i] * std::sin(c.nodes[i]);
    CHECK(si == doctest::Approx(2.0).epsilon(1e-14));
}
