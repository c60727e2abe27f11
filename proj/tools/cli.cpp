#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdot/analytic.hpp"
#include "qdot/config.hpp"
#include "qdot/dipole.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/error.hpp"
#include "qdot/io.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

namespace {

namespace fs = std::filesystem;

struct Flags {
    std::string config;
    std::string out_dir;
    std::string tag;
    std::string preset;
    double rc = 0;
    double rc_min = 0, rc_max = 0;
    int rc_steps = 0;
    int l_max = 0;
    std::string method;
    bool densities = false;
    double cutoff = 0;
    int intervals = 0;
    double a0 = 0;
    double omega_rel = 0;
    double t_max = 0;
    int steps_per_period = 0;
    std::string sweep_kind;
    int jobs = 0;
    double resolution = 2e-5;
};

// Session state shared by the subcommands.
class Session {
public:
    Session(RunConfig cfg, std::string command, std::ostream& out) : cfg_(std::move(cfg)), out_(out) {
        manifest_.command = std::move(command);
        manifest_.version = version_string();
        manifest_.config_snapshot = to_text(cfg_);
        fs::create_directories(cfg_.out_dir);
    }

    const RunConfig& cfg() const { return cfg_; }
    nlohmann::json& parameters() { return manifest_.parameters; }
    std::ostream& out() { return out_; }

    /// Writes one output file through `fill` and records it.
    void write(const std::string& suffix, const std::function<void(std::ostream&)>& fill) {
        const fs::path path = fs::path(cfg_.out_dir) / (cfg_.tag + "_" + suffix);
        std::ofstream os(path);
        if (!os) throw ConfigError("cannot write " + path.string());
        fill(os);
        manifest_.outputs.push_back(path.string());
        out_ << path.string() << '\n';
    }

    void finish() {
        const std::string stem = cfg_.tag + "_" + manifest_.command;
        const fs::path snapshot = fs::path(cfg_.out_dir) / (stem + ".config");
        {
            std::ofstream os(snapshot);
            os << manifest_.config_snapshot;
        }
        manifest_.outputs.push_back(snapshot.string());
        manifest_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const fs::path path = fs::path(cfg_.out_dir) / (stem + ".json");
        write_manifest(path, manifest_);
        out_ << path.string() << '\n';
    }

private:
    RunConfig cfg_;
    std::ostream& out_;
    RunManifest manifest_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

nlohmann::json basis_json(const BasisSpec& b) {
    return {{"cutoff", b.cutoff}, {"intervals", b.intervals}, {"order", b.order}, {"quad_nodes", b.nodes_per_interval()}};
}

std::string summary(const std::string& key, double value) { return key + " = " + format_number(value); }

SpectrumOptions spectrum_options(const RunConfig& cfg) {
    SpectrumOptions o;
    o.l_max = cfg.l_max;
    o.solve.method = cfg.method;
    return o;
}

DipoleMatrix qubit_system(Session& s, const RadialPotential& p) {
    const BasisSpec spec = make_basis_spec(s.cfg(), p);
    const SpectrumTable table = solve_spectrum(p, spec, spectrum_options(s.cfg()));
    DipoleMatrix dm = build_dipole(table);
    s.parameters()["device"] = describe(p);
    s.parameters()["basis"] = basis_json(spec);
    s.parameters()["bound_states"] = dm.size();
    s.parameters()["omega_res"] = resonance_frequency(dm);
    s.parameters()["z_q1q2"] = dm.coupling();
    s.parameters()["units"] = {{"energy", dm.units.energy_unit}, {"length", dm.units.length_unit},
                               {"time", dm.units.time_unit}};
    return dm;
}

void cmd_spectrum(Session& s) {
    const RunConfig& cfg = s.cfg();
    std::vector<SpectrumTable> tables;
    if (cfg.rc_steps > 0) {
        if (cfg.preset != "fig2") throw ConfigError("[spectrum] rc_steps: core-radius sweeps need preset fig2");
        std::vector<double> grid;
        for (int i = 0; i < cfg.rc_steps; ++i)
            grid.push_back(cfg.rc_steps == 1 ? cfg.rc_min
                                             : cfg.rc_min + (cfg.rc_max - cfg.rc_min) * double(i) / (cfg.rc_steps - 1));
        tables = spectrum_sweep(grid, cfg.l_max, SweepBasisOptions{cfg.knot_spacing, cfg.tail, cfg.order}, cfg.jobs);
        s.parameters()["rc_grid"] = {{"min", cfg.rc_min}, {"max", cfg.rc_max}, {"steps", cfg.rc_steps}};
        s.parameters()["knot_spacing_nm"] = cfg.knot_spacing;
    } else {
        const RadialPotential p = make_potential(cfg);
        const BasisSpec spec = make_basis_spec(cfg, p);
        tables.push_back(solve_spectrum(p, spec, spectrum_options(cfg)));
        s.parameters()["device"] = describe(p);
        s.parameters()["basis"] = basis_json(spec);
        s.out() << "bound states: " << tables[0].states.size() << ", inner-localized: " << tables[0].count_localized()
                << '\n';
    }
    s.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, tables); });
    if (cfg.densities && tables.size() == 1)
        s.write("density.csv", [&](std::ostream& os) { write_density_csv(os, tables[0]); });
}

void cmd_drive(Session& s) {
    const RunConfig& cfg = s.cfg();
    const DipoleMatrix dm = qubit_system(s, make_potential(cfg));
    const double a0 = cfg.field(cfg.a0);
    DriveSpec d;
    d.amplitude = a0;
    d.omega = cfg.omega_rel * resonance_frequency(dm);
    if (cfg.t_max) {
        d.t_max = cfg.time(*cfg.t_max);
    } else if (a0 > 0) {
        d.t_max = 4 * rwa_period(dm, a0);
    } else {
        d.t_max = 4 * 2 * std::acos(-1.0) / d.omega;
    }
    if (cfg.stride) d.stride = cfg.time(*cfg.stride);
    d.steps_per_period = cfg.steps_per_period;
    const Trajectory traj = evolve(dm, d);
    s.parameters()["drive"] = {{"a0", a0},        {"omega", d.omega}, {"t_max", d.t_max},
                               {"dt", d.dt()},     {"steps_per_period", d.steps_per_period}};
    s.write("dipole.csv", [&](std::ostream& os) { write_dipole_csv(os, dm); });
    s.write("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); });
    s.out() << summary("omega_res", resonance_frequency(dm)) << '\n'
            << summary("L_p", time_averaged_leakage(traj)) << '\n'
            << summary("max_norm_deficit", traj.max_norm_deficit()) << '\n';
}

void cmd_sweep(Session& s) {
    const RunConfig& cfg = s.cfg();
    switch (cfg.sweep) {
        case SweepKind::strength: {
            const DipoleMatrix dm = qubit_system(s, make_potential(cfg));
            std::vector<double> a0;
            for (double a : cfg.strength_a0) a0.push_back(cfg.field(a));
            const auto rows = leakage_vs_strength(dm, a0, cfg.jobs, cfg.steps_per_period);
            s.write("sweep_strength.csv", [&](std::ostream& os) { write_strength_csv(os, rows); });
            break;
        }
        case SweepKind::detuning: {
            const DipoleMatrix dm = qubit_system(s, make_potential(cfg));
            const auto rows = detuning_sweep(dm, cfg.field(cfg.detuning_a0), cfg.detuning_omega_rel, cfg.jobs,
                                             cfg.steps_per_period);
            s.write("sweep_detuning.csv", [&](std::ostream& os) { write_detuning_csv(os, rows); });
            break;
        }
        case SweepKind::v0: {
            if (!cfg.atomic()) throw ConfigError("[sweep] kind: v0 sweeps need preset expsine");
            const auto p = std::get<ExpSinePotential>(make_potential(cfg));
            const BasisSpec spec = make_basis_spec(cfg, p);
            std::vector<double> v0;
            for (double v : cfg.v0_grid) v0.push_back(cfg.energy(v));
            std::vector<std::pair<double, std::vector<V0Row>>> runs;
            for (double a : cfg.v0_a0)
                runs.emplace_back(cfg.field(a), v0_leakage_sweep(p, v0, cfg.field(a), spec, cfg.jobs,
                                                                 cfg.steps_per_period));
            s.parameters()["basis"] = basis_json(spec);
            s.write("sweep_v0.csv", [&](std::ostream& os) {
                for (std::size_t i = 0; i < runs.size(); ++i) write_v0_csv(os, runs[i].first, runs[i].second, i == 0);
            });
            break;
        }
    }
    s.parameters()["sweep"] = to_string(cfg.sweep);
    s.parameters()["jobs"] = cfg.jobs;
}

void cmd_oracle(Session& s, double resolution) {
    const RunConfig& cfg = s.cfg();
    const RadialPotential p = make_potential(cfg);
    const auto* device = std::get_if<LayeredDevice>(&p);
    if (!device) throw ConfigError("[device] preset: the matching oracle needs a layered device");
    const BasisSpec spec = make_basis_spec(cfg, p);
    const SpectrumTable table = solve_spectrum(p, spec, spectrum_options(cfg));
    const OracleReport report = oracle_check(*device, table, resolution);
    for (const auto& w : report.warnings) s.out() << "warning: " << w << '\n';
    s.parameters()["device"] = describe(p);
    s.parameters()["basis"] = basis_json(spec);
    s.parameters()["resolution"] = resolution;
    s.write("oracle.csv", [&](std::ostream& os) { write_oracle_csv(os, report, table.sweep_param); });
    s.out() << summary("max_abs_dE", report.max_abs_diff()) << '\n';
}

RunConfig resolve_config(const Flags& f, const CLI::App& sub) {
    RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
    auto given = [&](const char* name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };
    if (given("--preset")) cfg.preset = f.preset;
    if (given("--rc")) cfg.rc = f.rc;
    if (given("--rc-min")) cfg.rc_min = f.rc_min;
    if (given("--rc-max")) cfg.rc_max = f.rc_max;
    if (given("--rc-steps")) cfg.rc_steps = f.rc_steps;
    if (given("--l-max")) cfg.l_max = f.l_max;
    if (given("--method")) {
        if (f.method == "dense") cfg.method = EigenMethod::dense;
        else if (f.method == "banded") cfg.method = EigenMethod::banded;
        else throw ConfigError("--method: expected dense or banded");
    }
    if (given("--densities")) cfg.densities = true;
    if (given("--cutoff")) cfg.cutoff = cfg.from_length(f.cutoff);
    if (given("--intervals")) cfg.intervals = f.intervals;
    // amplitudes on the command line: meV/nm for layered devices, a.u. for expsine
    const double a0 = cfg.atomic() ? cfg.from_field(f.a0) : f.a0 * 1e-3;
    if (given("--a0")) {
        if (sub.get_name() == "sweep") cfg.detuning_a0 = a0;
        else cfg.a0 = a0;
    }
    if (given("--omega-rel")) cfg.omega_rel = f.omega_rel;
    if (given("--t-max")) cfg.t_max = cfg.from_time(f.t_max);
    if (given("--steps-per-period")) cfg.steps_per_period = f.steps_per_period;
    if (given("--jobs")) cfg.jobs = f.jobs;
    if (given("kind")) {
        if (f.sweep_kind == "strength") cfg.sweep = SweepKind::strength;
        else if (f.sweep_kind == "detuning") cfg.sweep = SweepKind::detuning;
        else cfg.sweep = SweepKind::v0;
    }
    if (given("--out-dir")) cfg.out_dir = f.out_dir;
    if (given("--tag")) cfg.tag = f.tag;
    // validates the merged result and pins the snapshot that reproduces it
    return parse_config(to_text(cfg), "<resolved>");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bound states and driven dynamics of layered spherical quantum dots", "qdot"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "run configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out-dir", f.out_dir, "output directory");
        sub->add_option("--tag", f.tag, "file-name stem of the outputs");
        sub->add_option("--preset", f.preset, "device1, device2, fig2, layered or expsine");
        sub->add_option("--rc", f.rc, "core radius of the fig2 preset (nm)");
        sub->add_option("--l-max", f.l_max, "highest angular momentum channel");
        sub->add_option("--method", f.method, "eigensolver: dense or banded");
        sub->add_option("--cutoff", f.cutoff, "basis cutoff radius (nm, or bohr for expsine)");
        sub->add_option("--intervals", f.intervals, "number of knot intervals");
    };
    auto dynamic = [&](CLI::App* sub) {
        sub->add_option("--a0", f.a0, "drive amplitude (meV/nm, or a.u. for expsine)");
        sub->add_option("--steps-per-period", f.steps_per_period, "RK4 steps per drive period");
        sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "bound spectrum of one device or a core-radius sweep");
    common(spectrum);
    spectrum->add_option("--rc-min", f.rc_min, "first core radius of a fig2 sweep (nm)");
    spectrum->add_option("--rc-max", f.rc_max, "last core radius of a fig2 sweep (nm)");
    spectrum->add_option("--rc-steps", f.rc_steps, "number of sweep points");
    spectrum->add_flag("--densities", f.densities, "also write u(r)^2 of every state");
    spectrum->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);

    CLI::App* drive = app.add_subcommand("drive", "one driven trajectory");
    common(drive);
    dynamic(drive);
    drive->add_option("--omega-rel", f.omega_rel, "drive frequency over the qubit resonance");
    drive->add_option("--t-max", f.t_max, "propagation time (fs, or a.u. for expsine)");

    CLI::App* sweep = app.add_subcommand("sweep", "leakage sweeps");
    common(sweep);
    dynamic(sweep);
    sweep->add_option("kind", f.sweep_kind, "strength, detuning or v0")
        ->check(CLI::IsMember({"strength", "detuning", "v0"}));

    CLI::App* oracle = app.add_subcommand("oracle-check", "spline spectrum against the exact matching solver");
    common(oracle);
    oracle->add_option("--resolution", f.resolution, "energy scan step of the matching solver")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        Session session(resolve_config(f, *sub), sub->get_name(), out);
        if (sub == spectrum) cmd_spectrum(session);
        else if (sub == drive) cmd_drive(session);
        else if (sub == sweep) cmd_sweep(session);
        else cmd_oracle(session, f.resolution);
        session.finish();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NotFoundError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidParameter& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IntegratorError& e) {
        err << "integrator error: " << e.what() << '\n';
        return kExitIntegrator;
    } catch (const Error& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace qdot
