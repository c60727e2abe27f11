#pragma once

// Spectra shared by several test files; each is solved once per process.

#include "qdot/dipole.hpp"
#include "qdot/spectral.hpp"

namespace qdot::testing {

inline const SpectrumTable& device_table(int which) {
    static const SpectrumTable d1 = solve_spectrum(device_preset("device1"), BasisSpec{});
    static const SpectrumTable d2 = solve_spectrum(device_preset("device2"), BasisSpec{});
    return which == 1 ? d1 : d2;
}

inline const DipoleMatrix& device_dipole(int which) {
    static const DipoleMatrix d1 = build_dipole(device_table(1));
    static const DipoleMatrix d2 = build_dipole(device_table(2));
    return which == 1 ? d1 : d2;
}

// Hard-wall sphere of radius R: flat potential inside, u(R) = 0 from the basis.
inline LayeredDevice flat_device(double mass) { return LayeredDevice({{std::numeric_limits<double>::infinity(), 0.0, mass}}, "flat"); }

}  // namespace qdot::testing
