#include "qnd/commands.hpp"

#include "qnd/constants.hpp"
#include "qnd/counter_rng.hpp"
#include "qnd/csv.hpp"
#include "qnd/errors.hpp"
#include "qnd/gaussian_measurement.hpp"
#include "qnd/hilbert.hpp"
#include "qnd/jones_optics.hpp"
#include "qnd/rigid_top.hpp"

#include <cmath>
#include <ostream>

namespace qnd::cli {

namespace {

const std::complex<double> kI{0.0, 1.0};

double uniform(CounterRng& rng, double lo, double hi)
{
    return lo + (hi - lo) * rng.next_open_unit();
}

} // namespace

std::vector<ReferenceRow> paper_numbers(const Scenario& s)
{
    const top::TopInertia in = top::ellipsoid_inertia(s.top());
    const top::InteractionParams p = s.interaction();
    const double n = s.probe_photons;
    const gauss::OutputObservable obs = gauss::output_observable(p, n, p.spin_quanta);
    const jones::RetarderDecomposition d =
        jones::circular_basis_decomposition(jones::slab_jones(s.slab, s.wavelength));
    const double theta0 = 0.5 * (jones::wavenumber(s.slab.n_e, s.wavelength)
                                 + jones::wavenumber(s.slab.n_o, s.wavelength)) * s.slab.length;

    std::vector<ReferenceRow> rows;
    rows.push_back({"mass", in.mass, 4.44e-14, "kg"});
    rows.push_back({"i_x", in.i_x, 4.44e-26, "kg m^2"});
    rows.push_back({"i_y", in.i_y, std::nullopt, "kg m^2"});
    rows.push_back({"spin_quanta", p.spin_quanta, 2.6e9, "hbar"});
    rows.push_back({"theta", p.theta, 0.094, "rad"});
    rows.push_back({"theta0", theta0, std::nullopt, "rad"});
    rows.push_back({"theta0_mod_2pi", d.theta0, std::nullopt, "rad"});
    // The printed 2.2e-12 disagrees with 2 theta / N; kept so the gap stays visible.
    rows.push_back({"theta_prime", p.theta_prime, 2.2e-12, "rad"});
    rows.push_back({"chi", p.chi, std::nullopt, "rad"});
    rows.push_back({"signal_coeff_per_n", obs.signal_coeff / n, 5.1e-6, "1"});
    rows.push_back({"qp_coeff_per_sqrt_n", obs.qp_coeff / std::sqrt(n), 0.27, "1"});
    rows.push_back({"pp_coeff_abs_per_sqrt_n", std::abs(obs.pp_coeff) / std::sqrt(n), 1.4, "1"});
    rows.push_back({"probe_photons", n, std::nullopt, "1"});
    rows.push_back({"snr", gauss::snr(obs, gauss::GaussianState::vacuum()), std::nullopt, "1"});
    rows.push_back({"n_snr1", gauss::solve_photon_number(1.0, p.spin_quanta, p.theta), 7.9e10, "1"});
    return rows;
}

void cmd_paper_numbers(const Scenario& s, std::ostream& os)
{
    csv::Writer w(os);
    w.row({"quantity", "value", "reference_value", "rel_deviation", "unit"});
    for (const ReferenceRow& r : paper_numbers(s)) {
        if (r.reference)
            w.row({r.quantity, r.value, *r.reference, (r.value - *r.reference) / *r.reference, r.unit});
        else
            w.row({r.quantity, r.value, "", "", r.unit});
    }
}

std::vector<CheckRow> exact_checks(const Scenario& s)
{
    using namespace hilbert;
    std::vector<CheckRow> rows;
    const auto add = [&rows](std::string check, std::string param, double value, std::string thr,
                             std::optional<bool> pass) {
        rows.push_back({std::move(check), std::move(param), value, std::move(thr), pass});
    };

    const long long dim = static_cast<long long>(s.n_max + 1) * (s.n_max + 1) * static_cast<long long>(2.0 * s.j + 1.5);
    if (dim > s.dimension_cap)
        throw ResourceError("exact-checks: dimension " + std::to_string(dim) + " exceeds cap "
                            + std::to_string(s.dimension_cap));

    // Operator algebra.
    const HilbertSpace photon = HilbertSpace::two_mode_fock(s.n_max);
    const StokesOperators st = stokes_operators(photon);
    const QuantumOperator safe = truncation_safe_projector(photon);
    const double tol_alg = 1e-12;
    const auto stokes_residual = [&](const QuantumOperator& a, const QuantumOperator& b, const QuantumOperator& c) {
        return ((commutator(a, b) - 2.0 * kI * c) * safe).norm();
    };
    const double rxy = stokes_residual(st.sx, st.sy, st.sz);
    const double ryz = stokes_residual(st.sy, st.sz, st.sx);
    const double rzx = stokes_residual(st.sz, st.sx, st.sy);
    add("stokes_commutator", "[Sx,Sy]-2iSz", rxy, "<1e-12", rxy < tol_alg);
    add("stokes_commutator", "[Sy,Sz]-2iSx", ryz, "<1e-12", ryz < tol_alg);
    add("stokes_commutator", "[Sz,Sx]-2iSy", rzx, "<1e-12", rzx < tol_alg);

    const SpinOperators l = spin_operators(s.j);
    const double lxy = (commutator(l.lx, l.ly) - kI * l.lz).norm();
    const double lyz = (commutator(l.ly, l.lz) - kI * l.lx).norm();
    const double lzx = (commutator(l.lz, l.lx) - kI * l.ly).norm();
    const double cas = (l.lx * l.lx + l.ly * l.ly + l.lz * l.lz - l.l0_squared).norm();
    add("spin_commutator", "[Lx,Ly]-iLz", lxy, "<1e-12", lxy < tol_alg);
    add("spin_commutator", "[Ly,Lz]-iLx", lyz, "<1e-12", lyz < tol_alg);
    add("spin_commutator", "[Lz,Lx]-iLy", lzx, "<1e-12", lzx < tol_alg);
    add("spin_casimir", "L^2-j(j+1)", cas, "<1e-12", cas < tol_alg);

    // QND property over random couplings.
    const QuantumOperator ly_lifted = tensor(QuantumOperator::identity(photon), l.ly);
    const QuantumOperator lz_lifted = tensor(QuantumOperator::identity(photon), l.lz);
    double qnd_max = 0.0;
    double unitary_max = 0.0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        CounterRng rng(s.seed, k);
        top::InteractionParams p;
        p.theta = uniform(rng, -1.0, 1.0);
        p.theta_prime = uniform(rng, -1.0, 1.0);
        p.chi = uniform(rng, -1.0, 1.0);
        const QuantumOperator b = evolution_operator(p, s.n_max, s.j, s.dimension_cap);
        qnd_max = std::max(qnd_max, qnd_commutator_norm(b, ly_lifted));
        unitary_max = std::max(unitary_max, b.unitarity_residual());
    }
    add("qnd_commutator_max", "100 random (theta,theta',chi)", qnd_max, "<1e-10", qnd_max < 1e-10);
    add("unitarity_max", "100 random (theta,theta',chi)", unitary_max, "<1e-10", unitary_max < 1e-10);
    {
        top::InteractionParams p;
        p.theta = 0.1;
        p.theta_prime = 0.1;
        p.chi = 0.0;
        const double contrast = qnd_commutator_norm(evolution_operator(p, s.n_max, s.j, s.dimension_cap), lz_lifted);
        add("lz_not_qnd", "theta=theta'=0.1,chi=0", contrast, ">0", contrast > 1e-6);
    }

    // Linearized Stokes map convergence.
    const StateVector probe = coherent_polarization_state({0.1, 0.0}, {0.0, 0.0}, s.n_max);
    const StateVector css = css_along_x(s.j);
    const std::array<double, 3> thetas{0.05, 0.025, 0.0125};
    std::array<double, 3> devs{};
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        top::InteractionParams p;
        p.theta = thetas[i];
        p.theta_prime = 2.0 * thetas[i] / (2.0 * s.j);
        p.chi = 0.0;
        const LinearizationReport r = linearized_comparison(p, s.n_max, s.j, probe, css);
        devs[i] = r.max_deviation;
        add("linearization_deviation", "theta=" + csv::format_number(thetas[i]) + ",Sx", r.deviation[0], "", {});
        add("linearization_deviation", "theta=" + csv::format_number(thetas[i]) + ",Sy", r.deviation[1], "", {});
        add("linearization_deviation", "theta=" + csv::format_number(thetas[i]) + ",Sz", r.deviation[2], "", {});
    }
    const double order = convergence_order(thetas, devs);
    add("linearization_order", "theta in {0.05,0.025,0.0125}", order, ">=2.5", order >= 2.5);

    // One-axis twisting curve.
    double previous = twist_squeezing(0.0, s.twist_j).min_variance;
    bool initial_decrease = true;
    for (int k = 0; k <= 25; ++k) {
        const double chi_t = 0.02 * k;
        const TwistResult t = twist_squeezing(chi_t, s.twist_j);
        add("twist_min_variance", "chi_t=" + csv::format_number(chi_t), t.min_variance, "", {});
        if (k >= 1 && k <= 5) initial_decrease = initial_decrease && t.min_variance < previous;
        previous = t.min_variance;
    }
    add("twist_initial_decrease", "j=" + csv::format_number(s.twist_j), initial_decrease ? 1.0 : 0.0, "", initial_decrease);
    return rows;
}

void cmd_exact_checks(const Scenario& s, std::ostream& os)
{
    csv::Writer w(os);
    w.row({"check", "parameter", "value", "threshold", "pass"});
    for (const CheckRow& r : exact_checks(s)) {
        w.row({r.check, r.parameter, r.value, r.threshold,
               r.pass ? csv::Cell(*r.pass) : csv::Cell("")});
    }
}

MonteCarloSummary cmd_montecarlo(const Scenario& s, std::ostream* outcomes, std::ostream& summary,
                                 bool persistent)
{
    const top::InteractionParams p = s.interaction();
    const gauss::OutputObservable obs = gauss::output_observable(p, s.probe_photons, p.spin_quanta);
    const gauss::GaussianState state = gauss::GaussianState::vacuum();
    const gauss::MeasurementRecord rec =
        gauss::sample_shots(obs, state, s.shots, s.seed,
                            persistent ? gauss::ObjectSampling::persistent : gauss::ObjectSampling::fresh_per_shot);
    if (outcomes) gauss::write_csv(rec, *outcomes);

    MonteCarloSummary m;
    m.shots = s.shots;
    m.seed = s.seed;
    m.persistent = persistent;
    double sum = 0.0;
    for (double x : rec.outcomes) sum += x;
    m.empirical_mean = sum / static_cast<double>(rec.outcomes.size());
    double ss = 0.0;
    for (double x : rec.outcomes) ss += (x - m.empirical_mean) * (x - m.empirical_mean);
    m.empirical_variance = rec.outcomes.size() > 1 ? ss / static_cast<double>(rec.outcomes.size() - 1) : 0.0;
    m.analytic_mean = gauss::outcome_mean(obs, state);
    // With a persistent object, shot-to-shot scatter is probe noise only.
    if (persistent) {
        gauss::OutputObservable probe_only = obs;
        probe_only.signal_coeff = 0.0;
        m.analytic_variance = gauss::outcome_variance(probe_only, state);
    } else {
        m.analytic_variance = gauss::outcome_variance(obs, state);
    }
    m.variance_ratio = m.empirical_variance / m.analytic_variance;

    csv::Writer w(summary);
    w.row({"shots", "seed", "mode", "empirical_mean", "empirical_variance", "analytic_mean", "analytic_variance",
           "variance_ratio"});
    w.row({static_cast<unsigned long long>(m.shots), static_cast<unsigned long long>(m.seed),
           persistent ? "persistent" : "fresh", m.empirical_mean, m.empirical_variance, m.analytic_mean,
           m.analytic_variance, m.variance_ratio});
    return m;
}

void cmd_top_dynamics(const Scenario& s, const TopDynamicsOptions& opt, std::ostream& os, std::ostream& report)
{
    const top::TopInertia in = top::ellipsoid_inertia(s.top());
    const double spin = 2.0 * kPi * s.spin_rate_hz;
    const std::array<double, 3> w0 = opt.omega.value_or(std::array<double, 3>{spin, 0.1, 0.0});
    csv::Writer out(os);
    csv::Writer rep(report);

    if (opt.mode == TopDynamicsOptions::Mode::free) {
        const top::FreeEvolution ev =
            top::euler_free_evolution({w0[0], w0[1], w0[2]}, in, opt.duration, opt.dt, opt.stride);
        out.row({"t", "omega_x", "omega_y", "omega_z", "energy", "l_squared"});
        double phase = 0.0;
        double last = std::atan2(-ev.samples.front().omega.z, ev.samples.front().omega.x);
        for (const top::TrajectorySample& smp : ev.samples) {
            out.row({smp.t, smp.omega.x, smp.omega.y, smp.omega.z, smp.energy, smp.l_squared});
            const double a = std::atan2(-smp.omega.z, smp.omega.x);
            double step = a - last;
            while (step > kPi) step -= 2.0 * kPi;
            while (step < -kPi) step += 2.0 * kPi;
            phase += step;
            last = a;
        }
        const double t_end = ev.samples.back().t;
        const double analytic = top::precession_rate(in, w0[1]);
        const double measured = t_end > 0.0 ? phase / t_end : 0.0;
        const double rel = analytic != 0.0 ? std::abs(measured - analytic) / std::abs(analytic) : std::abs(measured);
        rep.row({"max_energy_drift", "max_l_squared_drift", "precession_analytic", "precession_measured",
                 "precession_rel_error"});
        rep.row({ev.max_energy_drift, ev.max_l_squared_drift, analytic, measured, rel});
        return;
    }

    top::StabilizationConfig cfg;
    cfg.stiffness = opt.stiffness;
    cfg.damping = opt.damping;
    cfg.gain = opt.gain;
    cfg.target_omega_x = spin;
    cfg.duration = opt.duration;
    cfg.dt = opt.dt;
    cfg.stride = opt.stride;
    const top::StabilizationResult r = top::alignment_stabilization_sim({w0[0], w0[1], w0[2]}, opt.phi0, in, cfg);
    out.row({"t", "omega_x", "omega_y", "omega_z", "phi"});
    for (const top::StabilizationSample& smp : r.samples)
        out.row({smp.t, smp.omega.x, smp.omega.y, smp.omega.z, smp.phi});
    rep.row({"converged", "settling_time", "final_phi", "final_omega_error"});
    rep.row({r.converged, r.settling_time, r.final_phi, r.final_omega_error});
}

void cmd_snr_scan(const Scenario& s, double n_min, double n_max, int points, std::ostream& os)
{
    if (!(n_min > 0.0) || !(n_max >= n_min) || points < 1)
        throw DomainError("snr-scan needs 0 < n_min <= n_max and points >= 1");
    const top::InteractionParams p = s.interaction();
    csv::Writer w(os);
    w.row({"n", "snr", "signal_coeff", "qp_coeff", "pp_coeff"});
    for (int k = 0; k < points; ++k) {
        const double f = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
        const double n = n_min * std::pow(n_max / n_min, f);
        const gauss::OutputObservable obs = gauss::output_observable(p, n, p.spin_quanta);
        w.row({n, gauss::snr(obs, gauss::GaussianState::vacuum()), obs.signal_coeff, obs.qp_coeff, obs.pp_coeff});
    }
}

} // namespace qnd::cli
