#include "qnd/scenario.hpp"

#include "qnd/constants.hpp"
#include "qnd/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <string_view>
#include <vector>

namespace qnd {

namespace pt = boost::property_tree;

namespace {

double parse_double(const std::string& path, const std::string& text)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ConfigError(path + ": expected a number, got '" + text + "'");
    return v;
}

template <typename Int>
Int parse_integer(const std::string& path, const std::string& text)
{
    Int v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ConfigError(path + ": expected an integer, got '" + text + "'");
    return v;
}

// Shortest text that parses back to the same double.
std::string exact(double v)
{
    return fmt::format("{}", v);
}

struct Field {
    std::string path;
    std::function<void(Scenario&, const std::string&)> set;
    std::function<std::optional<std::string>(const Scenario&)> get;
};

Field real(std::string path, double Scenario::*member)
{
    return {path,
            [member, path](Scenario& s, const std::string& t) { s.*member = parse_double(path, t); },
            [member](const Scenario& s) -> std::optional<std::string> { return exact(s.*member); }};
}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real("top.density", &Scenario::density));
        f.push_back(real("top.semi_axis_x", &Scenario::semi_axis_x));
        f.push_back(real("top.semi_axis_y", &Scenario::semi_axis_y));
        f.push_back(real("top.semi_axis_z", &Scenario::semi_axis_z));
        f.push_back(real("top.spin_rate_hz", &Scenario::spin_rate_hz));
        f.push_back({"slab.n_e",
                     [](Scenario& s, const std::string& t) { s.slab.n_e = parse_double("slab.n_e", t); },
                     [](const Scenario& s) -> std::optional<std::string> { return exact(s.slab.n_e); }});
        f.push_back({"slab.n_o",
                     [](Scenario& s, const std::string& t) { s.slab.n_o = parse_double("slab.n_o", t); },
                     [](const Scenario& s) -> std::optional<std::string> { return exact(s.slab.n_o); }});
        f.push_back({"slab.length",
                     [](Scenario& s, const std::string& t) { s.slab.length = parse_double("slab.length", t); },
                     [](const Scenario& s) -> std::optional<std::string> { return exact(s.slab.length); }});
        f.push_back(real("probe.wavelength", &Scenario::wavelength));
        f.push_back(real("probe.photons", &Scenario::probe_photons));
        f.push_back(real("interaction.tau", &Scenario::tau));
        f.push_back(real("interaction.phi", &Scenario::phi));
        f.push_back({"interaction.theta_prime",
                     [](Scenario& s, const std::string& t) {
                         s.theta_prime = parse_double("interaction.theta_prime", t);
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         if (!s.theta_prime) return std::nullopt;
                         return exact(*s.theta_prime);
                     }});
        f.push_back({"exact.n_max",
                     [](Scenario& s, const std::string& t) { s.n_max = parse_integer<int>("exact.n_max", t); },
                     [](const Scenario& s) -> std::optional<std::string> { return std::to_string(s.n_max); }});
        f.push_back(real("exact.j", &Scenario::j));
        f.push_back({"exact.dimension_cap",
                     [](Scenario& s, const std::string& t) {
                         s.dimension_cap = parse_integer<int>("exact.dimension_cap", t);
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         return std::to_string(s.dimension_cap);
                     }});
        f.push_back(real("exact.twist_j", &Scenario::twist_j));
        f.push_back({"run.seed",
                     [](Scenario& s, const std::string& t) { s.seed = parse_integer<std::uint64_t>("run.seed", t); },
                     [](const Scenario& s) -> std::optional<std::string> { return std::to_string(s.seed); }});
        f.push_back({"run.shots",
                     [](Scenario& s, const std::string& t) {
                         s.shots = parse_integer<std::uint64_t>("run.shots", t);
                     },
                     [](const Scenario& s) -> std::optional<std::string> { return std::to_string(s.shots); }});
        f.push_back({"run.output", [](Scenario& s, const std::string& t) { s.output = t; },
                     [](const Scenario& s) -> std::optional<std::string> { return s.output; }});
        return f;
    }();
    return table;
}

const Field& find_field(const std::string& path)
{
    for (const Field& f : fields())
        if (f.path == path) return f;
    throw ConfigError(path + ": unknown configuration key");
}

void apply_tree(Scenario& s, const pt::ptree& tree)
{
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(section + ": key outside of a [section]");
        for (const auto& [key, value] : body) find_field(section + "." + key).set(s, value.data());
    }
}

bool is_half_integer(double j)
{
    return j > 0.0 && std::abs(2.0 * j - std::round(2.0 * j)) < 1e-12;
}

void require(bool ok, const char* path, const char* what)
{
    if (!ok) throw ConfigError(std::string(path) + ": " + what);
}

} // namespace

top::SymmetricTop Scenario::top() const
{
    top::SymmetricTop t;
    t.density = density;
    t.semi_axis_x = semi_axis_x;
    t.semi_axis_y = semi_axis_y;
    t.semi_axis_z = semi_axis_z;
    t.spin_rate = 2.0 * kPi * spin_rate_hz;
    return t;
}

top::InteractionParams Scenario::interaction() const
{
    top::InteractionParams p = top::interaction_params(slab, wavelength, top(), tau, phi);
    if (theta_prime) p.theta_prime = *theta_prime;
    return p;
}

void Scenario::validate() const
{
    require(density > 0.0, "top.density", "must be positive");
    require(semi_axis_x > 0.0, "top.semi_axis_x", "must be positive");
    require(semi_axis_y > 0.0, "top.semi_axis_y", "must be positive");
    require(semi_axis_z > 0.0, "top.semi_axis_z", "must be positive");
    require(std::abs(semi_axis_x - semi_axis_z) <= 1e-12 * semi_axis_x, "top.semi_axis_z",
            "must equal semi_axis_x for a symmetric top");
    require(semi_axis_y < semi_axis_x, "top.semi_axis_y", "must be smaller than semi_axis_x (oblate)");
    require(spin_rate_hz > 0.0, "top.spin_rate_hz", "must be positive");
    require(slab.n_o > 1.0, "slab.n_o", "must exceed 1");
    require(slab.n_e > slab.n_o, "slab.n_e", "must exceed slab.n_o (uniaxial positive)");
    require(slab.length > 0.0, "slab.length", "must be positive");
    require(wavelength > 0.0, "probe.wavelength", "must be positive");
    require(probe_photons >= 0.0, "probe.photons", "must be non-negative");
    require(tau >= 0.0, "interaction.tau", "must be non-negative");
    require(std::isfinite(phi), "interaction.phi", "must be finite");
    require(!theta_prime || std::isfinite(*theta_prime), "interaction.theta_prime", "must be finite");
    require(n_max >= 1, "exact.n_max", "must be at least 1");
    require(is_half_integer(j), "exact.j", "must be a positive half-integer");
    require(dimension_cap > 0, "exact.dimension_cap", "must be positive");
    require(is_half_integer(twist_j), "exact.twist_j", "must be a positive half-integer");
    require(shots >= 1, "run.shots", "must be at least 1");
}

Scenario paper_quartz()
{
    return Scenario{};
}

Scenario parse_scenario(std::istream& is)
{
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("scenario file: ") + e.what());
    }
    Scenario s = paper_quartz();
    apply_tree(s, tree);
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open scenario file");
    return parse_scenario(in);
}

void apply_override(Scenario& s, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected section.key=value");
    std::string key = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    const auto trim = [](std::string& x) {
        const auto b = x.find_first_not_of(" \t");
        const auto e = x.find_last_not_of(" \t");
        x = b == std::string::npos ? std::string{} : x.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    find_field(key).set(s, value);
}

void dump_scenario(const Scenario& s, std::ostream& os)
{
    pt::ptree tree;
    for (const Field& f : fields())
        if (auto v = f.get(s)) tree.put(pt::ptree::path_type(f.path, '.'), *v);
    pt::write_ini(os, tree);
}

Scenario resolve_scenario(const std::optional<std::string>& path, std::span<const std::string> overrides)
{
    Scenario s = path ? load_scenario(*path) : paper_quartz();
    for (const std::string& o : overrides) apply_override(s, o);
    s.validate();
    return s;
}

} // namespace qnd
