// qndtop: scenario-driven front end for the spinning-top QND measurement model.
//
//   qndtop paper-numbers [--config f] [--override k=v ...]
//   qndtop exact-checks
//   qndtop montecarlo  [--seed s] [--shots n] [--persistent] [--out f]
//   qndtop top-dynamics [--mode free|stabilize] [--omega wx,wy,wz] ...
//   qndtop snr-scan    [--n-min a] [--n-max b] [--points k]
//
// Exit codes: 0 ok, 2 config error, 3 contract violation, 4 resource error,
// 5 integration-quality error, 1 anything else.

#include "qnd/commands.hpp"
#include "qnd/errors.hpp"
#include "qnd/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kConfig = 2,
    kContract = 3,
    kResource = 4,
    kIntegration = 5,
};

struct CommonOptions {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOptions& c)
{
    sub->add_option("--config", c.config, "Scenario file (INI sections per module)");
    sub->add_option("--seed", c.seed, "Random seed (overrides run.seed)");
    sub->add_option("--out", c.out, "Output CSV path (overrides run.output; '-' or empty for stdout)");
    sub->add_option("--override", c.overrides, "section.key=value, repeatable");
}

qnd::Scenario scenario_from(const CommonOptions& c)
{
    qnd::Scenario s = qnd::resolve_scenario(c.config, c.overrides);
    if (c.seed) s.seed = *c.seed;
    if (c.out) s.output = *c.out;
    return s;
}

// Output goes to s.output when set, otherwise stdout.
class OutputSink {
public:
    explicit OutputSink(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw qnd::ConfigError("run.output: cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polarimetric readout of a spinning birefringent top"};
    app.require_subcommand(1);

    CommonOptions paper_opts, exact_opts, mc_opts, top_opts, scan_opts;

    auto* paper = app.add_subcommand("paper-numbers", "Recompute the quartz worked example");
    add_common(paper, paper_opts);

    auto* exact = app.add_subcommand("exact-checks", "Exact small-space operator checks");
    add_common(exact, exact_opts);

    auto* mc = app.add_subcommand("montecarlo", "Shot-noise Monte Carlo of the polarimeter output");
    add_common(mc, mc_opts);
    std::optional<std::uint64_t> shots;
    bool persistent = false;
    mc->add_option("--shots", shots, "Number of probe pulses (overrides run.shots)");
    mc->add_flag("--persistent", persistent, "Probe one object repeatedly instead of fresh objects");

    auto* topc = app.add_subcommand("top-dynamics", "Classical rigid-top trajectories");
    add_common(topc, top_opts);
    qnd::cli::TopDynamicsOptions tdo;
    std::string mode = "free";
    std::vector<double> omega;
    topc->add_option("--mode", mode, "free | stabilize")->check(CLI::IsMember({"free", "stabilize"}));
    topc->add_option("--omega", omega, "Initial body angular velocity wx,wy,wz [rad/s]")->delimiter(',')->expected(3);
    topc->add_option("--duration", tdo.duration, "Duration [s]");
    topc->add_option("--dt", tdo.dt, "Step [s]");
    topc->add_option("--stride", tdo.stride, "Record every k-th step");
    topc->add_option("--stiffness", tdo.stiffness, "Alignment stiffness kappa [N m]");
    topc->add_option("--damping", tdo.damping, "Alignment damping Gamma [N m s]");
    topc->add_option("--gain", tdo.gain, "Spin-rate feedback gain [1/s]");
    topc->add_option("--phi0", tdo.phi0, "Initial misalignment [rad]");

    auto* scan = app.add_subcommand("snr-scan", "SNR against probe photon number");
    add_common(scan, scan_opts);
    double n_min = 1e9, n_max = 1e12;
    int points = 31;
    scan->add_option("--n-min", n_min, "Smallest photon number");
    scan->add_option("--n-max", n_max, "Largest photon number");
    scan->add_option("--points", points, "Log-spaced points");

    CLI11_PARSE(app, argc, argv);

    try {
        if (paper->parsed()) {
            const qnd::Scenario s = scenario_from(paper_opts);
            OutputSink sink(s.output);
            qnd::cli::cmd_paper_numbers(s, sink.stream());
        } else if (exact->parsed()) {
            const qnd::Scenario s = scenario_from(exact_opts);
            OutputSink sink(s.output);
            qnd::cli::cmd_exact_checks(s, sink.stream());
        } else if (mc->parsed()) {
            qnd::Scenario s = scenario_from(mc_opts);
            if (shots) s.shots = *shots;
            s.validate();
            OutputSink sink(s.output);
            if (sink.to_file())
                qnd::cli::cmd_montecarlo(s, &sink.stream(), std::cout, persistent);
            else
                qnd::cli::cmd_montecarlo(s, &std::cout, std::cerr, persistent);
        } else if (topc->parsed()) {
            const qnd::Scenario s = scenario_from(top_opts);
            tdo.mode = mode == "stabilize" ? qnd::cli::TopDynamicsOptions::Mode::stabilize
                                           : qnd::cli::TopDynamicsOptions::Mode::free;
            if (!omega.empty()) tdo.omega = std::array<double, 3>{omega[0], omega[1], omega[2]};
            OutputSink sink(s.output);
            qnd::cli::cmd_top_dynamics(s, tdo, sink.stream(), sink.to_file() ? std::cout : std::cerr);
        } else if (scan->parsed()) {
            const qnd::Scenario s = scenario_from(scan_opts);
            OutputSink sink(s.output);
            qnd::cli::cmd_snr_scan(s, n_min, n_max, points, sink.stream());
        }
    } catch (const qnd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const qnd::ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kContract;
    } catch (const qnd::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kResource;
    } catch (const qnd::IntegrationQualityError& e) {
        std::cerr << "integration error: " << e.what() << '\n';
        return kIntegration;
    } catch (const qnd::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOk;
}
