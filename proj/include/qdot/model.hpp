#pragma once

// Radial confinement potentials and effective-mass profiles.

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qdot/units.hpp"

namespace qdot {

/// One spherical shell [previous outer radius, outer_radius). The last
/// shell of a device extends to infinity.
struct Shell {
    double outer_radius;
    double potential;
    double mass;
};

/// Piecewise-constant potential and mass in semiconductor units
/// (nm, eV, m_e).
class LayeredDevice {
public:
    /// Throws ConfigError unless radii strictly increase, masses are
    /// positive and the final radius is infinite.
    explicit LayeredDevice(std::vector<Shell> shells, std::string name = "custom");

    const std::vector<Shell>& shells() const { return shells_; }
    const std::string& name() const { return name_; }

    /// Index of the shell containing r, half-open [r_{i-1}, r_i).
    std::size_t shell_index(double r) const;
    /// Finite shell radii.
    std::vector<double> radii() const;
    double asymptotic_potential() const { return shells_.back().potential; }

private:
    std::vector<Shell> shells_;
    std::string name_;
};

/// V(r) = -v0 exp(-gamma r) sin(omega r), unit mass, atomic units.
struct ExpSinePotential {
    double v0 = 2.0;
    double gamma = 0.1;
    double omega = 1.0;
};

using RadialPotential = std::variant<LayeredDevice, ExpSinePotential>;

struct RadialInterval {
    double lo = 0;
    double hi = std::numeric_limits<double>::infinity();
};

/// Position of a mass step and the jump of 1/m across it (outer minus inner).
struct MassJump {
    double radius;
    double inverse_mass_jump;
};

inline constexpr double kBandOffsetCdSeZnS = 0.9;  // eV
inline constexpr double kMassCdSe = 0.13;
inline constexpr double kMassZnS = 0.28;

double potential_at(const RadialPotential& p, double r);
double mass_at(const RadialPotential& p, double r);

const UnitSystem& unit_system(const RadialPotential& p);
/// Potential value as r -> infinity; bound states lie below it.
double asymptotic_potential(const RadialPotential& p);
/// Global minimum of V(r); a lower bound for every eigenvalue.
double minimum_potential(const RadialPotential& p);
/// Radii where V or m is discontinuous.
std::vector<double> interfaces(const RadialPotential& p);
std::vector<MassJump> mass_jumps(const RadialPotential& p);

/// Region counted as "the innermost well" by the localization measure.
///
/// Layered devices: from the origin to the midpoint of the barrier shell
/// that follows the innermost well. ExpSine: from the origin to the first
/// local maximum of V beyond its first minimum.
RadialInterval inner_well(const RadialPotential& p);

/// Radius of the first minimum of the exp-sine potential (v0 > 0).
double first_minimum(const ExpSinePotential& p);
/// Radius of the first local maximum beyond the first minimum.
double first_barrier_top(const ExpSinePotential& p);

/// CdSe/ZnS core-well-barrier-well-cladding geometry with the given radii.
LayeredDevice layered_cdse_zns(double rc, double r1, double r2, double r3, std::string name);
/// Fixed well/barrier widths: r1 = rc + 0.8, r2 = r1 + 3.5, r3 = r2 + 1 (nm).
LayeredDevice fig2_device(double rc);
/// "device1", "device2", or "fig2" (requires rc). Throws NotFoundError.
LayeredDevice device_preset(std::string_view name, std::optional<double> rc = std::nullopt);

/// Scalar identifying a device within its family: r_c for layered devices,
/// v0 for the exp-sine potential.
double family_parameter(const RadialPotential& p);
std::string describe(const RadialPotential& p);

}  // namespace qdot
