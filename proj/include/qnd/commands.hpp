#pragma once

#include "qnd/scenario.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qnd::cli {

struct ReferenceRow {
    std::string quantity;
    double value = 0.0;
    std::optional<double> reference;
    std::string unit;
};

/// Every number of the quartz worked example, recomputed from `s`.
std::vector<ReferenceRow> paper_numbers(const Scenario& s);
void cmd_paper_numbers(const Scenario& s, std::ostream& os);

struct CheckRow {
    std::string check;
    std::string parameter;
    double value = 0.0;
    std::string threshold; // e.g. "<1e-10", ">=2.5", or empty for informational rows
    std::optional<bool> pass;
};

std::vector<CheckRow> exact_checks(const Scenario& s);
void cmd_exact_checks(const Scenario& s, std::ostream& os);

struct MonteCarloSummary {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    bool persistent = false;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    double analytic_mean = 0.0;
    double analytic_variance = 0.0;
    double variance_ratio = 0.0;
};

MonteCarloSummary cmd_montecarlo(const Scenario& s, std::ostream* outcomes, std::ostream& summary,
                                 bool persistent = false);

struct TopDynamicsOptions {
    enum class Mode { free, stabilize } mode = Mode::free;
    std::optional<std::array<double, 3>> omega; // defaults to (2 pi f, 0.1, 0)
    double duration = 1047.2; // ~10 precession periods of the default tilted spin
    double dt = 0.01;
    int stride = 100;
    double stiffness = 1e-25;
    double damping = 1e-25;
    double gain = 1.0;
    double phi0 = 0.3;
};

void cmd_top_dynamics(const Scenario& s, const TopDynamicsOptions& opt, std::ostream& os, std::ostream& report);

void cmd_snr_scan(const Scenario& s, double n_min, double n_max, int points, std::ostream& os);

} // namespace qnd::cli
