#include <doctest.h>

#include <string>

#include "qdot/config.hpp"
#include "qdot/error.hpp"

using namespace qdot;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text, "t.cfg");
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("preset passthrough") {
    const RunConfig c = parse_config("[device]\npreset = device1\n");
    const auto p = std::get<LayeredDevice>(make_potential(c));
    const auto ref = device_preset("device1");
    CHECK(p.radii() == ref.radii());
    CHECK(p.shells().size() == ref.shells().size());
    for (std::size_t i = 0; i < ref.shells().size(); ++i) {
        CHECK(p.shells()[i].potential == ref.shells()[i].potential);
        CHECK(p.shells()[i].mass == ref.shells()[i].mass);
    }
}

TEST_CASE("custom layered device") {
    const RunConfig c = parse_config(R"(
[device]
preset = "layered"   # explicit shells
radii_nm = [1, 2]
potentials_meV = [900, 0, 900]
masses_me = [0.28, 0.13, 0.28]
)");
    const auto p = std::get<LayeredDevice>(make_potential(c));
    CHECK(p.radii() == std::vector<double>{1, 2});
    CHECK(p.shells()[0].potential == doctest::Approx(0.9));
}

TEST_CASE("decreasing radii are a semantic error") {
    const std::string e = error_of("[device]\npreset = layered\nradii_nm = [2, 1]\npotentials_eV = [1, 0, 1]\n"
                                   "masses_me = [0.1, 0.1, 0.1]\n");
    CHECK(e.find("shell radii not increasing") != std::string::npos);
}

TEST_CASE("exp-sine in atomic units") {
    const RunConfig c = parse_config("[device]\npreset = expsine\nv0_au = 2.0\ngamma_au = 0.1\nomega_p_au = 1\n");
    const auto p = std::get<ExpSinePotential>(make_potential(c));
    CHECK(p.v0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.gamma == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p.omega == doctest::Approx(1.0).epsilon(1e-14));
    const BasisSpec b = make_basis_spec(c, p);
    CHECK(b.cutoff == 40.0);
    CHECK(b.intervals == 400);
}

TEST_CASE("unit suffixes convert") {
    const RunConfig c = parse_config("[drive]\na0_au = 1e-3\nt_max_ps = 2\n[basis]\ncutoff_angstrom = 150\n");
    CHECK(c.a0 == doctest::Approx(1e-3 * 27.211386245988 / 0.0529177210903));
    CHECK(*c.t_max == doctest::Approx(2000));
    CHECK(*c.cutoff == doctest::Approx(15));
}

TEST_CASE("grids") {
    const RunConfig c = parse_config("[sweep.strength]\na0_meV_per_nm = logspace(1, 100, 3)\n"
                                     "[sweep.detuning]\nomega_rel = linspace(0.5, 1.5, 5)\n");
    REQUIRE(c.strength_a0.size() == 3);
    CHECK(c.strength_a0[1] == doctest::Approx(10e-3));
    CHECK(c.strength_a0[2] == 0.1);
    CHECK(c.detuning_omega_rel == std::vector<double>{0.5, 0.75, 1.0, 1.25, 1.5});
}

TEST_CASE("syntax errors carry line and column") {
    CHECK(error_of("[device]\npreset = device1\nrc_nm = 1.0 2\n").find("t.cfg:3:") == 0);
    CHECK(error_of("[device\n").find("t.cfg:1:1") == 0);
    CHECK(error_of("preset = device1\n").find("outside any section") != std::string::npos);
    CHECK(error_of("[nowhere]\n").find("unknown section") != std::string::npos);
    CHECK(error_of("[drive]\na0_meV_per_nm = [1, 2\n").find("t.cfg:2:") == 0);
}

TEST_CASE("semantic errors name the key") {
    CHECK(error_of("[drive]\na0 = 1\n").find("[drive] a0") != std::string::npos);
    CHECK(error_of("[drive]\na0_furlongs = 1\n").find("[drive] a0_furlongs") != std::string::npos);
    CHECK(error_of("[drive]\nomega_rel = -1\n").find("[drive] omega_rel") != std::string::npos);
    CHECK(error_of("[basis]\nintervals = 2.5\n").find("[basis] intervals") != std::string::npos);
    CHECK(error_of("[drive]\na0_eV_per_nm = 1\na0_meV_per_nm = 2\n").find("more than once") != std::string::npos);
    CHECK_THROWS_AS(parse_config("[device]\npreset = device9\n"), NotFoundError);
}

TEST_CASE("text round trip") {
    RunConfig c = parse_config("[device]\npreset = fig2\nrc_nm = 2.35\n[drive]\nt_max_fs = 123.25\n"
                               "[sweep]\nkind = v0\njobs = 3\n[output]\ntag = \"x y\"\n");
    c.cutoff = 17.0;
    c.intervals = 340;
    const RunConfig back = parse_config(to_text(c));
    CHECK(back == c);
    CHECK(to_text(back) == to_text(c));
}

}
