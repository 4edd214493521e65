#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "tunnel/potential.hpp"
#include "tunnel/units.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct Amplitudes {
    cplx t;
    cplx r;
};

// Plane-wave matching in absolute x: psi = a exp(iqx) + b exp(-iqx) in every region,
// q = sqrt((E - V)/h2m) on the complex principal branch. Only sensible for moderate kappa*d.
inline Amplitudes plane_wave(const tunnel::PiecewisePotential& pot, double k,
                             const tunnel::UnitSystem& u = tunnel::UnitSystem::electron()) {
    const double E = u.E_of_k(k);
    std::vector<double> xs;
    std::vector<cplx> qs{cplx(k, 0.0)};
    for (const auto& s : pot.segments()) {
        xs.push_back(s.x_left);
        qs.push_back(std::sqrt(cplx((E - s.V) / u.hbar2_over_2m(), 0.0)));
    }
    xs.push_back(pot.segments().back().x_right);
    qs.push_back(cplx(k, 0.0));
    const cplx I(0.0, 1.0);
    // (a, b) on the right of the last interface = (t, 0); walk leftwards.
    cplx a(1.0, 0.0), b(0.0, 0.0);
    for (int n = static_cast<int>(xs.size()) - 1; n >= 0; --n) {
        const cplx qr = qs[n + 1], ql = qs[n];
        const double x = xs[n];
        const cplx psi = a * std::exp(I * qr * x) + b * std::exp(-I * qr * x);
        const cplx dpsi = I * qr * (a * std::exp(I * qr * x) - b * std::exp(-I * qr * x));
        a = 0.5 * (psi + dpsi / (I * ql)) * std::exp(-I * ql * x);
        b = 0.5 * (psi - dpsi / (I * ql)) * std::exp(I * ql * x);
    }
    return {1.0 / a, b / a};
}

// Textbook single barrier on [0, d] below the top, kappa real.
inline Amplitudes textbook_square(double k, double kappa, double d) {
    const cplx I(0.0, 1.0);
    const cplx den = std::cosh(kappa * d) + I * (kappa * kappa - k * k) / (2.0 * k * kappa) * std::sinh(kappa * d);
    const cplx t = std::exp(-I * k * d) / den;
    const cplx r = -I * (k * k + kappa * kappa) / (2.0 * k * kappa) * std::sinh(kappa * d) / den;
    return {t, r};
}

// Free gaussian packet with spectrum (pi dk^2)^(-1/4) exp(-(k - k0)^2 / 2dk^2), centred at x = 0 at t = 0.
inline cplx free_gaussian(double k0, double dk, double x, double t,
                          const tunnel::UnitSystem& u = tunnel::UnitSystem::electron()) {
    const double pi = 3.14159265358979323846;
    const cplx I(0.0, 1.0);
    const cplx a = 1.0 / (2.0 * dk * dk) + I * u.hbar_over_m() * t / 2.0;
    const cplx z = k0 / (dk * dk) + I * x;
    const double N = std::pow(pi * dk * dk, -0.25);
    return N / std::sqrt(2.0 * pi) * std::sqrt(pi / a) * std::exp(z * z / (4.0 * a) - k0 * k0 / (2.0 * dk * dk));
}

inline double wrap(double a) {
    const double pi = 3.14159265358979323846;
    return std::remainder(a, 2.0 * pi);
}

}  // namespace oracle
