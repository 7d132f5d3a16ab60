#pragma once

#include "qnd/jones_optics.hpp"
#include "qnd/rigid_top.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace qnd {

/// Everything a CLI run needs. Defaults are the quartz top probed at 600 nm.
///
/// File format is INI-style, one section per module:
///
///     [top]         density, semi_axis_x, semi_axis_y, semi_axis_z, spin_rate_hz
///     [slab]        n_e, n_o, length
///     [probe]       wavelength, photons
///     [interaction] tau, phi, theta_prime (optional; overrides 2 theta / N)
///     [exact]       n_max, j, dimension_cap, twist_j
///     [run]         seed, shots, output
struct Scenario {
    double density = 2650.0;
    double semi_axis_x = 2e-6;
    double semi_axis_y = 1e-6;
    double semi_axis_z = 2e-6;
    double spin_rate_hz = 1.0;

    jones::BirefringentSlab slab{};

    double wavelength = 600e-9;
    double probe_photons = 7.9e10;

    double tau = 1e-3;
    double phi = 0.0;
    std::optional<double> theta_prime;

    int n_max = 3;
    double j = 4.0;
    int dimension_cap = 4096;
    double twist_j = 10.0;

    std::uint64_t seed = 42;
    std::uint64_t shots = 100000;
    std::string output;

    top::SymmetricTop top() const;
    /// Coupling constants, honoring the theta_prime override.
    top::InteractionParams interaction() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario paper_quartz();

/// Reads a scenario file over the defaults. Unknown sections or keys are errors.
Scenario parse_scenario(std::istream& is);
Scenario load_scenario(const std::string& path);

/// Applies "section.key=value" on top of `s`.
void apply_override(Scenario& s, const std::string& assignment);

/// Full INI dump; parse_scenario(dump) reproduces `s` exactly.
void dump_scenario(const Scenario& s, std::ostream& os);

/// Defaults, then optional file, then overrides; validated.
Scenario resolve_scenario(const std::optional<std::string>& path, std::span<const std::string> overrides);

} // namespace qnd
