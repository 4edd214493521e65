#include "tunnel/units.hpp"

#include <stdexcept>

namespace tunnel {

UnitSystem UnitSystem::with_rest_energy(double mc2_eV) {
    UnitSystem u;
    u.electron_rest_eV = mc2_eV;
    u.validate();
    return u;
}

void UnitSystem::validate() const {
    if (!(hbar_eV_s > 0.0) || !(hbarc_eV_A > 0.0) || !(electron_rest_eV > 0.0) || !(c_A_per_s > 0.0)) {
        throw std::invalid_argument("UnitSystem: all constants must be strictly positive");
    }
}

}  // namespace tunnel
