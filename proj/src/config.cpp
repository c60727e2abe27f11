#include "qdot/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qdot/error.hpp"

namespace qdot {

namespace {

constexpr double kAuField = kHartreeInEV / kBohrInNm;                  // eV/nm
constexpr double kAuTime = kSemiconductorUnits.hbar / kHartreeInEV;    // fs

enum class Dim { number, integer, text, flag, length, energy, field, time, inverse_length, mass };

struct Unit {
    std::string_view suffix;
    double scale;  // to nm, eV, fs, eV/nm, 1/nm
};

std::vector<Unit> units_of(Dim d) {
    switch (d) {
        case Dim::length: return {{"nm", 1.0}, {"angstrom", 0.1}, {"bohr", kBohrInNm}, {"au", kBohrInNm}};
        case Dim::energy: return {{"eV", 1.0}, {"meV", 1e-3}, {"hartree", kHartreeInEV}, {"au", kHartreeInEV}};
        case Dim::field: return {{"eV_per_nm", 1.0}, {"meV_per_nm", 1e-3}, {"au", kAuField}};
        case Dim::time: return {{"fs", 1.0}, {"ps", 1e3}, {"au", kAuTime}};
        case Dim::inverse_length: return {{"per_nm", 1.0}, {"per_bohr", 1.0 / kBohrInNm}, {"au", 1.0 / kBohrInNm}};
        case Dim::mass: return {{"me", 1.0}};
        default: return {};
    }
}

struct Value {
    bool is_text = false;
    bool is_list = false;
    std::string text;
    std::vector<double> numbers;
    int line = 0;
    int column = 0;
};

struct Location {
    std::string origin;
    int line;
    int column;
};

[[noreturn]] void syntax_error(const Location& at, const std::string& what) {
    throw ConfigError(at.origin + ":" + std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + what);
}

// Parser for the right-hand side of one assignment.
class ValueParser {
public:
    ValueParser(std::string_view s, Location at) : s_(s), at_(at) {}

    Value parse() {
        skip_space();
        Value v;
        v.line = at_.line;
        v.column = column();
        if (done()) fail("missing value");
        const char c = s_[pos_];
        if (c == '[') {
            v.is_list = true;
            ++pos_;
            skip_space();
            if (peek() == ']') {
                ++pos_;
            } else {
                for (;;) {
                    v.numbers.push_back(number());
                    skip_space();
                    if (peek() == ',') {
                        ++pos_;
                        continue;
                    }
                    if (peek() == ']') {
                        ++pos_;
                        break;
                    }
                    fail("expected ',' or ']' in list");
                }
            }
        } else if (c == '"') {
            v.is_text = true;
            ++pos_;
            const std::size_t end = s_.find('"', pos_);
            if (end == std::string_view::npos) fail("unterminated string");
            v.text = std::string(s_.substr(pos_, end - pos_));
            pos_ = end + 1;
        } else if (s_.substr(pos_, 9) == "linspace(" || s_.substr(pos_, 9) == "logspace(") {
            const bool log = s_[pos_ + 1] == 'o';
            pos_ += 9;
            const double a = number();
            expect(',');
            const double b = number();
            expect(',');
            const double n = number();
            expect(')');
            if (n < 1 || n != std::floor(n)) fail("grid size must be a positive integer");
            if (log && !(a > 0 && b > 0)) fail("logspace bounds must be positive");
            v.is_list = true;
            const int count = int(n);
            for (int i = 0; i < count; ++i) {
                const double f = count == 1 ? 0.0 : double(i) / double(count - 1);
                v.numbers.push_back(log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a));
            }
            if (count > 1) v.numbers.back() = b;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            v.numbers.push_back(number());
        } else {
            v.is_text = true;
            const std::size_t start = pos_;
            while (!done() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                               s_[pos_] == '-' || s_[pos_] == '.' || s_[pos_] == '/'))
                ++pos_;
            if (pos_ == start) fail("unexpected character '" + std::string(1, c) + "'");
            v.text = std::string(s_.substr(start, pos_ - start));
        }
        skip_space();
        if (!done()) fail("trailing characters after value");
        return v;
    }

private:
    bool done() const { return pos_ >= s_.size(); }
    char peek() const { return done() ? '\0' : s_[pos_]; }
    int column() const { return at_.column + int(pos_); }
    void skip_space() {
        while (!done() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const { syntax_error({at_.origin, at_.line, column()}, what); }
    void expect(char c) {
        skip_space();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    double number() {
        skip_space();
        const std::string rest(s_.substr(pos_));
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(rest, &used);
        } catch (const std::exception&) {
            fail("expected a number");
        }
        if (!std::isfinite(x)) fail("number is not finite");
        pos_ += used;
        return x;
    }

    std::string_view s_;
    Location at_;
    std::size_t pos_ = 0;
};

using Setter = std::function<void(RunConfig&, const Value&, double)>;

struct KeySpec {
    std::string_view base;
    Dim dim;
    bool list;
    Setter set;
};

std::string describe_key(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double scalar(const Value& v, const std::string& name) {
    if (v.is_text || v.is_list || v.numbers.size() != 1) throw ConfigError(name + ": expected a single number");
    return v.numbers[0];
}

int integer(const Value& v, const std::string& name) {
    const double x = scalar(v, name);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(name + ": expected an integer");
    return int(x);
}

std::vector<double> numbers(const Value& v, const std::string& name) {
    if (v.is_text) throw ConfigError(name + ": expected numbers");
    return v.numbers;
}

std::string text(const Value& v, const std::string& name) {
    if (!v.is_text) throw ConfigError(name + ": expected a string");
    return v.text;
}

bool flag(const Value& v, const std::string& name) {
    if (v.is_text && v.text == "true") return true;
    if (v.is_text && v.text == "false") return false;
    throw ConfigError(name + ": expected true or false");
}

std::vector<double> scaled(std::vector<double> xs, double f) {
    for (double& x : xs) x *= f;
    return xs;
}

const std::map<std::string, std::vector<KeySpec>, std::less<>>& schema() {
    static const std::map<std::string, std::vector<KeySpec>, std::less<>> table = [] {
        std::map<std::string, std::vector<KeySpec>, std::less<>> s;
        auto num = [](double RunConfig::*m) {
            return [m](RunConfig& c, const Value& v, double f) { c.*m = scalar(v, "") * f; };
        };
        s["device"] = {
            {"preset", Dim::text, false, [](RunConfig& c, const Value& v, double) { c.preset = text(v, ""); }},
            {"rc", Dim::length, false, num(&RunConfig::rc)},
            {"radii", Dim::length, true, [](RunConfig& c, const Value& v, double f) { c.radii = scaled(numbers(v, ""), f); }},
            {"potentials", Dim::energy, true,
             [](RunConfig& c, const Value& v, double f) { c.potentials = scaled(numbers(v, ""), f); }},
            {"masses", Dim::mass, true, [](RunConfig& c, const Value& v, double f) { c.masses = scaled(numbers(v, ""), f); }},
            {"v0", Dim::energy, false, num(&RunConfig::v0)},
            {"gamma", Dim::inverse_length, false, num(&RunConfig::gamma)},
            {"omega_p", Dim::inverse_length, false, num(&RunConfig::omega_p)},
        };
        s["basis"] = {
            {"cutoff", Dim::length, false, [](RunConfig& c, const Value& v, double f) { c.cutoff = scalar(v, "") * f; }},
            {"intervals", Dim::integer, false, [](RunConfig& c, const Value& v, double) { c.intervals = integer(v, ""); }},
            {"order", Dim::integer, false, [](RunConfig& c, const Value& v, double) { c.order = integer(v, ""); }},
            {"quad_nodes", Dim::integer, false, [](RunConfig& c, const Value& v, double) { c.quad_nodes = integer(v, ""); }},
        };
        s["spectrum"] = {
            {"l_max", Dim::integer, false, [](RunConfig& c, const Value& v, double) { c.l_max = integer(v, ""); }},
            {"method", Dim::text, false,
             [](RunConfig& c, const Value& v, double) {
                 const std::string m = text(v, "");
                 if (m == "dense") c.method = EigenMethod::dense;
                 else if (m == "banded") c.method = EigenMethod::banded;
                 else throw ConfigError("expected dense or banded, got '" + m + "'");
             }},
            {"rc_min", Dim::length, false, num(&RunConfig::rc_min)},
            {"rc_max", Dim::length, false, num(&RunConfig::rc_max)},
            {"rc_steps", Dim::integer, false, [](RunConfig& c, const Value& v, double) { c.rc_steps = integer(v, ""); }},
            {"knot_spacing", Dim::length, false, num(&RunConfig::knot_spacing)},
            {"tail", Dim::length, false, num(&RunConfig::tail)},
            {"densities", Dim::flag, false, [](RunConfig& c, const Value& v, double) { c.densities = flag(v, ""); }},
        };
        s["drive"] = {
            {"a0", Dim::field, false, num(&RunConfig::a0)},
            {"omega_rel", Dim::number, false, num(&RunConfig::omega_rel)},
            {"t_max", Dim::time, false, [](RunConfig& c, const Value& v, double f) { c.t_max = scalar(v, "") * f; }},
            {"stride", Dim::time, false, [](RunConfig& c, const Value& v, double f) { c.stride = scalar(v, "") * f; }},
            {"steps_per_period", Dim::integer, false,
             [](RunConfig& c, const Value& v, double) { c.steps_per_period = integer(v, ""); }},
        };
        s["sweep"] = {
            {"kind", Dim::text, false,
             [](RunConfig& c, const Value& v, double) {
                 const std::string k = text(v, "");
                 if (k == "strength") c.sweep = SweepKind::strength;
                 else if (k == "detuning") c.sweep = SweepKind::detuning;
                 else if (k == "v0") c.sweep = SweepKind::v0;
                 else throw ConfigError("expected strength, detuning or v0, got '" + k + "'");
             }},
            {"jobs", Dim::integer, false, [](RunConfig& c, const Value& v, double) { c.jobs = integer(v, ""); }},
        };
        s["sweep.strength"] = {
            {"a0", Dim::field, true, [](RunConfig& c, const Value& v, double f) { c.strength_a0 = scaled(numbers(v, ""), f); }},
        };
        s["sweep.detuning"] = {
            {"a0", Dim::field, false, num(&RunConfig::detuning_a0)},
            {"omega_rel", Dim::number, true,
             [](RunConfig& c, const Value& v, double) { c.detuning_omega_rel = numbers(v, ""); }},
        };
        s["sweep.v0"] = {
            {"v0", Dim::energy, true, [](RunConfig& c, const Value& v, double f) { c.v0_grid = scaled(numbers(v, ""), f); }},
            {"a0", Dim::field, true, [](RunConfig& c, const Value& v, double f) { c.v0_a0 = scaled(numbers(v, ""), f); }},
        };
        s["output"] = {
            {"dir", Dim::text, false, [](RunConfig& c, const Value& v, double) { c.out_dir = text(v, ""); }},
            {"tag", Dim::text, false, [](RunConfig& c, const Value& v, double) { c.tag = text(v, ""); }},
        };
        return s;
    }();
    return table;
}

// Finds the key spec and unit scale for `key` within a section.
std::pair<const KeySpec*, double> resolve_key(const std::vector<KeySpec>& specs, std::string_view key) {
    for (const KeySpec& k : specs) {
        const auto units = units_of(k.dim);
        if (units.empty()) {
            if (key == k.base) return {&k, 1.0};
            continue;
        }
        if (key.size() <= k.base.size() + 1 || key.substr(0, k.base.size()) != k.base || key[k.base.size()] != '_')
            continue;
        const std::string_view suffix = key.substr(k.base.size() + 1);
        for (const Unit& u : units)
            if (suffix == u.suffix) return {&k, u.scale};
    }
    return {nullptr, 0.0};
}

void validate(const RunConfig& c) {
    static const std::set<std::string, std::less<>> presets{"device1", "device2", "fig2", "layered", "expsine"};
    if (!presets.count(c.preset)) throw NotFoundError("[device] preset: unknown preset '" + c.preset + "'");
    auto need = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    need(c.order >= 2 && c.order <= 15, "[basis] order: must lie in [2, 15]");
    need(c.quad_nodes >= 0, "[basis] quad_nodes: must be non-negative");
    need(!c.cutoff || *c.cutoff > 0, "[basis] cutoff: must be positive");
    need(!c.intervals || *c.intervals >= c.order, "[basis] intervals: must be at least the order");
    need(c.l_max >= 0, "[spectrum] l_max: must be non-negative");
    need(c.rc_steps >= 0, "[spectrum] rc_steps: must be non-negative");
    need(c.rc_steps == 0 || (c.rc_min > 0 && c.rc_max >= c.rc_min), "[spectrum] rc_min/rc_max: need 0 < rc_min <= rc_max");
    need(c.knot_spacing > 0, "[spectrum] knot_spacing: must be positive");
    need(c.tail > 0, "[spectrum] tail: must be positive");
    need(c.a0 >= 0, "[drive] a0: must be non-negative");
    need(c.omega_rel > 0, "[drive] omega_rel: must be positive");
    need(!c.t_max || *c.t_max > 0, "[drive] t_max: must be positive");
    need(!c.stride || *c.stride > 0, "[drive] stride: must be positive");
    need(c.steps_per_period >= 4, "[drive] steps_per_period: must be at least 4");
    need(c.jobs >= 1, "[sweep] jobs: must be at least 1");
    for (double a : c.strength_a0) need(a > 0, "[sweep.strength] a0: values must be positive");
    need(c.detuning_a0 > 0, "[sweep.detuning] a0: must be positive");
    for (double w : c.detuning_omega_rel) need(w > 0, "[sweep.detuning] omega_rel: values must be positive");
    for (double a : c.v0_a0) need(a > 0, "[sweep.v0] a0: values must be positive");
    need(!c.tag.empty() && c.tag.find('/') == std::string::npos, "[output] tag: must be a non-empty file stem");
    if (c.preset == "layered") {
        need(!c.potentials.empty(), "[device] potentials: required for a layered device");
        need(c.potentials.size() == c.radii.size() + 1, "[device] potentials: need one value per shell (radii + 1)");
        need(c.masses.size() == c.potentials.size(), "[device] masses: need one value per shell (radii + 1)");
    }
    if (c.preset == "fig2") need(c.rc > 0, "[device] rc: must be positive");
    try {
        make_potential(c);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("[device] ") + e.what());
    }
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s + "]";
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

RunConfig::RunConfig() {
    for (int i = 0; i <= 10; ++i) strength_a0.push_back(1e-3 * std::pow(50.0, i / 10.0));
    strength_a0.back() = 50e-3;
    for (int i = -35; i <= 35; ++i) detuning_omega_rel.push_back((100 + i) / 100.0);
    for (int i = 0; i <= 30; ++i) v0_grid.push_back(hartree_to_ev((30 + i) / 20.0));
    v0_a0 = {1e-3 * kAuField, 1e-2 * kAuField};
}

double RunConfig::field(double ev_per_nm) const { return atomic() ? ev_per_nm / kAuField : ev_per_nm; }
double RunConfig::time(double fs) const { return atomic() ? fs / kAuTime : fs; }
double RunConfig::from_field(double x) const { return atomic() ? x * kAuField : x; }
double RunConfig::from_time(double x) const { return atomic() ? x * kAuTime : x; }

RunConfig parse_config(std::string_view text, const std::string& origin) {
    RunConfig cfg;
    std::string section;
    std::set<std::string> seen;
    const auto& table = schema();
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;

        // strip comments outside quotes
        bool in_quote = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            if (line[i] == '#' && !in_quote) {
                line = line.substr(0, i);
                break;
            }
        }
        std::size_t first = 0;
        while (first < line.size() && std::isspace(static_cast<unsigned char>(line[first]))) ++first;
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
        if (first >= line.size()) continue;
        const Location at{origin, line_no, int(first) + 1};

        if (line[first] == '[') {
            if (line.back() != ']') syntax_error(at, "section header must end with ']'");
            std::string name(line.substr(first + 1, line.size() - first - 2));
            for (char ch : name)
                if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.'))
                    syntax_error(at, "invalid section name '" + name + "'");
            if (!table.count(name)) syntax_error(at, "unknown section [" + name + "]");
            section = name;
            continue;
        }

        const std::size_t eq = line.find('=', first);
        if (eq == std::string_view::npos) syntax_error(at, "expected 'key = value'");
        std::string_view key = line.substr(first, eq - first);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.remove_suffix(1);
        if (key.empty()) syntax_error(at, "missing key before '='");
        for (char ch : key)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
                syntax_error(at, "invalid key '" + std::string(key) + "'");
        if (section.empty()) syntax_error(at, "key '" + std::string(key) + "' outside any section");

        const std::string name = describe_key(section, std::string(key));
        const auto [spec, scale] = resolve_key(table.find(section)->second, key);
        if (!spec) throw ConfigError(name + ": unknown key or unit suffix");
        const std::string canonical = section + "." + std::string(spec->base);
        if (!seen.insert(canonical).second) throw ConfigError(name + ": given more than once");

        const Value v = ValueParser(line.substr(eq + 1), {origin, line_no, int(eq) + 2}).parse();
        if (spec->list != v.is_list && !(spec->list && !v.is_text && v.numbers.size() == 1)) {
            if (spec->list) throw ConfigError(name + ": expected a list");
            throw ConfigError(name + ": expected a single value");
        }
        try {
            spec->set(cfg, v, scale);
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            throw ConfigError(name + (what.rfind(':', 0) == 0 ? "" : ": ") + what);
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

std::string to_string(SweepKind k) {
    switch (k) {
        case SweepKind::strength: return "strength";
        case SweepKind::detuning: return "detuning";
        case SweepKind::v0: return "v0";
    }
    return "?";
}

std::string to_text(const RunConfig& c) {
    std::ostringstream os;
    os << "[device]\npreset = " << quoted(c.preset) << "\nrc_nm = " << fmt(c.rc) << "\n";
    if (!c.potentials.empty()) {
        os << "radii_nm = " << fmt_list(c.radii) << "\npotentials_eV = " << fmt_list(c.potentials)
           << "\nmasses_me = " << fmt_list(c.masses) << "\n";
    }
    os << "v0_eV = " << fmt(c.v0) << "\ngamma_per_nm = " << fmt(c.gamma) << "\nomega_p_per_nm = " << fmt(c.omega_p)
       << "\n\n[basis]\n";
    if (c.cutoff) os << "cutoff_nm = " << fmt(*c.cutoff) << "\n";
    if (c.intervals) os << "intervals = " << *c.intervals << "\n";
    os << "order = " << c.order << "\nquad_nodes = " << c.quad_nodes << "\n\n[spectrum]\nl_max = " << c.l_max
       << "\nmethod = " << (c.method == EigenMethod::dense ? "dense" : "banded") << "\nrc_min_nm = " << fmt(c.rc_min)
       << "\nrc_max_nm = " << fmt(c.rc_max) << "\nrc_steps = " << c.rc_steps
       << "\nknot_spacing_nm = " << fmt(c.knot_spacing) << "\ntail_nm = " << fmt(c.tail)
       << "\ndensities = " << (c.densities ? "true" : "false") << "\n\n[drive]\na0_eV_per_nm = " << fmt(c.a0)
       << "\nomega_rel = " << fmt(c.omega_rel) << "\n";
    if (c.t_max) os << "t_max_fs = " << fmt(*c.t_max) << "\n";
    if (c.stride) os << "stride_fs = " << fmt(*c.stride) << "\n";
    os << "steps_per_period = " << c.steps_per_period << "\n\n[sweep]\nkind = " << to_string(c.sweep)
       << "\njobs = " << c.jobs << "\n\n[sweep.strength]\na0_eV_per_nm = " << fmt_list(c.strength_a0)
       << "\n\n[sweep.detuning]\na0_eV_per_nm = " << fmt(c.detuning_a0)
       << "\nomega_rel = " << fmt_list(c.detuning_omega_rel) << "\n\n[sweep.v0]\nv0_eV = " << fmt_list(c.v0_grid)
       << "\na0_eV_per_nm = " << fmt_list(c.v0_a0) << "\n\n[output]\ndir = " << quoted(c.out_dir)
       << "\ntag = " << quoted(c.tag) << "\n";
    return os.str();
}

RadialPotential make_potential(const RunConfig& c) { return make_potential(c, c.rc); }

RadialPotential make_potential(const RunConfig& c, double rc) {
    if (c.preset == "expsine")
        return ExpSinePotential{ev_to_hartree(c.v0), c.inverse_length(c.gamma), c.inverse_length(c.omega_p)};
    if (c.preset == "layered") {
        std::vector<Shell> shells;
        for (std::size_t i = 0; i < c.potentials.size(); ++i) {
            const double r = i < c.radii.size() ? c.radii[i] : std::numeric_limits<double>::infinity();
            shells.push_back({r, c.potentials[i], i < c.masses.size() ? c.masses[i] : 0.0});
        }
        return LayeredDevice(std::move(shells), "layered");
    }
    return device_preset(c.preset, rc);
}

BasisSpec make_basis_spec(const RunConfig& c, const RadialPotential& p) {
    BasisSpec spec = default_basis(p);
    if (c.cutoff) spec.cutoff = c.length(*c.cutoff);
    if (c.intervals) spec.intervals = *c.intervals;
    spec.order = c.order;
    spec.quad_nodes = c.quad_nodes;
    return spec;
}

}  // namespace qdot
