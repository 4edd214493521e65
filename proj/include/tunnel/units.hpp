#pragma once

#include <cmath>

namespace tunnel {

// Working units: energies in eV, lengths in angstrom, times in seconds.
struct UnitSystem {
    double hbar_eV_s = 6.582119569e-16;
    double hbarc_eV_A = 1973.269804;
    double electron_rest_eV = 510998.95;  // mc^2 of the particle being scattered
    double c_A_per_s = 2.99792458e18;

    static UnitSystem electron() { return {}; }

    // Same constants with a different rest energy (used by the waveguide mapping).
    static UnitSystem with_rest_energy(double mc2_eV);

    // hbar/m in A^2/s
    double hbar_over_m() const { return hbarc_eV_A * c_A_per_s / electron_rest_eV; }
    // hbar^2/2m in eV*A^2
    double hbar2_over_2m() const { return hbarc_eV_A * hbarc_eV_A / (2.0 * electron_rest_eV); }

    double k_of_E(double E_eV) const { return std::sqrt(2.0 * electron_rest_eV * E_eV) / hbarc_eV_A; }
    double E_of_k(double k) const { return hbar2_over_2m() * k * k; }
    // Signed k^2 inside a region of potential V: (2m/hbar^2)(E - V).
    double k2_local(double E_eV, double V_eV) const { return (E_eV - V_eV) / hbar2_over_2m(); }
    double group_velocity(double k) const { return hbar_over_m() * k; }
    double angular_frequency(double k) const { return 0.5 * hbar_over_m() * k * k; }

    void validate() const;
};

}  // namespace tunnel
