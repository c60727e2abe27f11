#include "qdot/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qdot/error.hpp"

namespace qdot {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_radius(double r) {
    if (!(r >= 0)) throw DomainError("radius must be non-negative");
}

double expsine_value(const ExpSinePotential& p, double r) {
    return -p.v0 * std::exp(-p.gamma * r) * std::sin(p.omega * r);
}

}  // namespace

LayeredDevice::LayeredDevice(std::vector<Shell> shells, std::string name)
    : shells_(std::move(shells)), name_(std::move(name)) {
    if (shells_.empty()) throw ConfigError("layered device needs at least one shell");
    double previous = 0;
    for (std::size_t i = 0; i < shells_.size(); ++i) {
        const Shell& s = shells_[i];
        if (!(s.mass > 0)) throw ConfigError("shell masses must be positive");
        if (!std::isfinite(s.potential)) throw ConfigError("shell potentials must be finite");
        const bool last = i + 1 == shells_.size();
        if (last) {
            if (!std::isinf(s.outer_radius)) throw ConfigError("outermost shell must extend to infinity");
        } else if (!(s.outer_radius > previous) || !std::isfinite(s.outer_radius)) {
            throw ConfigError("shell radii not increasing");
        }
        previous = s.outer_radius;
    }
}

std::size_t LayeredDevice::shell_index(double r) const {
    std::size_t i = 0;
    while (i + 1 < shells_.size() && r >= shells_[i].outer_radius) ++i;
    return i;
}

std::vector<double> LayeredDevice::radii() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < shells_.size(); ++i) out.push_back(shells_[i].outer_radius);
    return out;
}

double potential_at(const RadialPotential& p, double r) {
    check_radius(r);
    return std::visit(overloaded{
                          [r](const LayeredDevice& d) { return d.shells()[d.shell_index(r)].potential; },
                          [r](const ExpSinePotential& e) { return expsine_value(e, r); },
                      },
                      p);
}

double mass_at(const RadialPotential& p, double r) {
    check_radius(r);
    return std::visit(overloaded{
                          [r](const LayeredDevice& d) { return d.shells()[d.shell_index(r)].mass; },
                          [](const ExpSinePotential&) { return 1.0; },
                      },
                      p);
}

const UnitSystem& unit_system(const RadialPotential& p) {
    return std::holds_alternative<LayeredDevice>(p) ? kSemiconductorUnits : kAtomicUnits;
}

double asymptotic_potential(const RadialPotential& p) {
    return std::visit(overloaded{
                          [](const LayeredDevice& d) { return d.asymptotic_potential(); },
                          [](const ExpSinePotential&) { return 0.0; },
                      },
                      p);
}

double minimum_potential(const RadialPotential& p) {
    return std::visit(overloaded{
                          [](const LayeredDevice& d) {
                              double v = d.shells().front().potential;
                              for (const Shell& s : d.shells()) v = std::min(v, s.potential);
                              return v;
                          },
                          [](const ExpSinePotential& e) {
                              // |V| <= |v0| everywhere
                              return -std::abs(e.v0);
                          },
                      },
                      p);
}

std::vector<double> interfaces(const RadialPotential& p) {
    if (const auto* d = std::get_if<LayeredDevice>(&p)) return d->radii();
    return {};
}

std::vector<MassJump> mass_jumps(const RadialPotential& p) {
    std::vector<MassJump> out;
    if (const auto* d = std::get_if<LayeredDevice>(&p)) {
        const auto& sh = d->shells();
        for (std::size_t i = 0; i + 1 < sh.size(); ++i) {
            const double jump = 1.0 / sh[i + 1].mass - 1.0 / sh[i].mass;
            if (jump != 0) out.push_back({sh[i].outer_radius, jump});
        }
    }
    return out;
}

double first_minimum(const ExpSinePotential& p) {
    // V'(r) = 0  <=>  tan(omega r) = omega / gamma
    return std::atan2(p.omega, p.gamma) / p.omega;
}

double first_barrier_top(const ExpSinePotential& p) {
    return (std::atan2(p.omega, p.gamma) + std::numbers::pi) / p.omega;
}

RadialInterval inner_well(const RadialPotential& p) {
    return std::visit(
        overloaded{
            [](const LayeredDevice& d) {
                const auto& sh = d.shells();
                for (std::size_t w = 0; w + 1 < sh.size(); ++w) {
                    const bool below_prev = w == 0 || sh[w].potential < sh[w - 1].potential;
                    if (!below_prev || !(sh[w].potential < sh[w + 1].potential)) continue;
                    const double lo = sh[w].outer_radius;
                    const double hi = sh[w + 1].outer_radius;
                    return RadialInterval{0.0, std::isinf(hi) ? hi : 0.5 * (lo + hi)};
                }
                return RadialInterval{};
            },
            [](const ExpSinePotential& e) { return RadialInterval{0.0, first_barrier_top(e)}; },
        },
        p);
}

LayeredDevice layered_cdse_zns(double rc, double r1, double r2, double r3, std::string name) {
    if (!(rc > 0)) throw InvalidParameter("core radius must be positive");
    const double v0 = kBandOffsetCdSeZnS;
    return LayeredDevice({{rc, v0, kMassZnS},
                          {r1, 0.0, kMassCdSe},
                          {r2, v0, kMassZnS},
                          {r3, 0.0, kMassCdSe},
                          {std::numeric_limits<double>::infinity(), v0, kMassZnS}},
                         std::move(name));
}

LayeredDevice fig2_device(double rc) {
    const double r1 = rc + 0.8;
    const double r2 = r1 + 3.5;
    const double r3 = r2 + 1.0;
    std::ostringstream name;
    name << "fig2(rc=" << rc << ")";
    return layered_cdse_zns(rc, r1, r2, r3, name.str());
}

LayeredDevice device_preset(std::string_view name, std::optional<double> rc) {
    if (name == "device1") return layered_cdse_zns(1.0, 1.8, 5.3, 6.3, "device1");
    if (name == "device2") return layered_cdse_zns(2.0, 2.8, 6.3, 7.3, "device2");
    if (name == "fig2") {
        if (!rc) throw InvalidParameter("preset fig2 needs a core radius");
        return fig2_device(*rc);
    }
    throw NotFoundError("unknown device preset '" + std::string(name) + "'");
}

double family_parameter(const RadialPotential& p) {
    return std::visit(overloaded{
                          [](const LayeredDevice& d) { return d.shells().front().outer_radius; },
                          [](const ExpSinePotential& e) { return e.v0; },
                      },
                      p);
}

std::string describe(const RadialPotential& p) {
    std::ostringstream os;
    os.precision(12);
    std::visit(overloaded{
                   [&os](const LayeredDevice& d) {
                       os << "layered " << d.name() << " radii_nm=[";
                       const auto r = d.radii();
                       for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
                       os << "]";
                   },
                   [&os](const ExpSinePotential& e) {
                       os << "expsine v0=" << e.v0 << " gamma=" << e.gamma << " omega=" << e.omega;
                   },
               },
               p);
    return os.str();
}

}  // namespace qdot
