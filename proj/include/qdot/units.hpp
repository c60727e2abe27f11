#pragma once

#include <string_view>

namespace qdot {

/// Physical constants of one unit system.
///
/// semiconductor: energies in eV, lengths in nm, times in fs, masses in m_e.
/// atomic:        hartree, bohr, hbar = m_e = 1.
struct UnitSystem {
    enum class Tag { semiconductor, atomic };

    Tag tag;
    double hbar;            // energy * time
    double hbar2_over_2me;  // energy * length^2
    std::string_view energy_unit;
    std::string_view length_unit;
    std::string_view time_unit;

    bool operator==(const UnitSystem& o) const { return tag == o.tag; }
};

inline constexpr UnitSystem kSemiconductorUnits{UnitSystem::Tag::semiconductor, 0.658212, 0.0380998,
                                                "eV", "nm", "fs"};
inline constexpr UnitSystem kAtomicUnits{UnitSystem::Tag::atomic, 1.0, 0.5, "hartree", "bohr", "au"};

// CODATA 2018
inline constexpr double kHartreeInEV = 27.211386245988;
inline constexpr double kBohrInNm = 0.0529177210903;

inline constexpr double ev_to_hartree(double e) { return e / kHartreeInEV; }
inline constexpr double hartree_to_ev(double e) { return e * kHartreeInEV; }
inline constexpr double nm_to_bohr(double r) { return r / kBohrInNm; }
inline constexpr double bohr_to_nm(double r) { return r * kBohrInNm; }

}  // namespace qdot
