// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include "qnd/constants.hpp"
#include "qnd/gaussian_measurement.hpp"
#include "qnd/hilbert.hpp"
#include "qnd/jones_optics.hpp"
#include "qnd/rigid_top.hpp"
#include "qnd/scenario.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <random>
#include <string>

using namespace qnd;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail)
{
    if (!pass) ++failures;
    fmt::print("criterion {:>2} {} {}: {}\n", id, pass ? "PASS" : "FAIL", name, detail);
}

bool within(double value, double target, double rel)
{
    return std::abs(value - target) <= rel * std::abs(target);
}

double rel(double value, double target)
{
    return std::abs(value - target) / std::abs(target);
}

void quartz_numbers(const Scenario& s)
{
    const top::TopInertia in = top::ellipsoid_inertia(s.top());
    const top::InteractionParams p = s.interaction();

    report(1, "quartz mass", within(in.mass, 4.44e-14, 0.01),
           fmt::format("mu = {:.6e} kg, target 4.44e-14 within 1% (rel {:.2e})", in.mass, rel(in.mass, 4.44e-14)));
    report(2, "quartz inertia", within(in.i_x, 4.44e-26, 0.01),
           fmt::format("I_X = {:.6e} kg m^2, target 4.44e-26 within 1% (rel {:.2e})", in.i_x, rel(in.i_x, 4.44e-26)));
    report(3, "spin quanta", within(p.spin_quanta, 2.6e9, 0.05),
           fmt::format("N = {:.6e}, target 2.6e9 within 5% (rel {:.2e})", p.spin_quanta, rel(p.spin_quanta, 2.6e9)));

    const jones::RetarderDecomposition d = jones::circular_basis_decomposition(jones::slab_jones(s.slab, s.wavelength));
    report(4, "retardance", within(d.theta, 0.094, 0.02),
           fmt::format("theta = {:.6f}, target 0.094 within 2% (rel {:.2e})", d.theta, rel(d.theta, 0.094)));

    const double n = s.probe_photons;
    const gauss::OutputObservable o = gauss::output_observable(p, n, p.spin_quanta);
    const double sig = o.signal_coeff / n;
    const double qp = o.qp_coeff / std::sqrt(n);
    const double pp = std::abs(o.pp_coeff) / std::sqrt(n);
    report(5, "output coefficients", within(sig, 5.1e-6, 0.03) && within(qp, 0.27, 0.03) && within(pp, 1.4, 0.03),
           fmt::format("signal {:.4e} n (vs 5.1e-6), qP {:.4f} sqrt(n) (vs 0.27), |pP| {:.4f} sqrt(n) (vs 1.4), "
                       "all within 3%",
                       sig, qp, pp));

    const double n1 = gauss::solve_photon_number(1.0, p.spin_quanta, p.theta);
    report(6, "SNR threshold", n1 >= 7.1e10 && n1 <= 8.7e10,
           fmt::format("n(SNR=1) = {:.4e}, required in [7.1e10, 8.7e10]", n1));
}

void qnd_property(const Scenario& s)
{
    using namespace hilbert;
    const int n_max = 3;
    const double j = 4;
    const QuantumOperator ly = tensor(QuantumOperator::identity(HilbertSpace::two_mode_fock(n_max)),
                                      spin_operators(j).ly);
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        top::InteractionParams p;
        p.theta = u(rng);
        p.theta_prime = u(rng);
        p.chi = u(rng);
        worst = std::max(worst, qnd_commutator_norm(evolution_operator(p, n_max, j), ly));
    }
    report(7, "QND property", worst < 1e-10,
           fmt::format("max ||[1 x L_y, B]|| over 100 random couplings = {:.3e}, required < 1e-10", worst));
}

void linearization()
{
    using namespace hilbert;
    const int n_max = 3;
    const double j = 4;
    const StateVector probe = coherent_polarization_state(0.1, 0.0, n_max);
    const StateVector css = css_along_x(j);
    const std::array<double, 3> thetas{0.05, 0.025, 0.0125};
    std::array<double, 3> dev{};
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        top::InteractionParams p;
        p.theta = thetas[i];
        p.theta_prime = 2 * thetas[i] / (2 * j);
        dev[i] = linearized_comparison(p, n_max, j, probe, css).max_deviation;
    }
    const double order = convergence_order(thetas, dev);
    report(8, "linearized Stokes map", order >= 2.5,
           fmt::format("fitted order {:.4f} (deviations {:.3e}, {:.3e}, {:.3e}), required >= 2.5", order, dev[0],
                       dev[1], dev[2]));
}

void twisting()
{
    const double j = 10;
    const double css = j / 2;
    double lowest = css;
    bool drops = true;
    for (double chi_t : {0.01, 0.02, 0.05, 0.1}) {
        const double v = hilbert::twist_squeezing(chi_t, j).min_variance;
        drops = drops && v < css;
        lowest = std::min(lowest, v);
    }
    const double late = hilbert::twist_squeezing(0.5, j).min_variance;
    const double revival = hilbert::twist_squeezing(kPi, j).min_variance;
    const bool returns = late > lowest && std::abs(revival - css) < 1e-9;
    report(9, "one-axis twisting", drops && returns,
           fmt::format("j = 10: min variance {:.4f} < {} for chi t in (0, 0.1]; {:.4f} at chi t = 0.5; "
                       "{:.10f} at chi t = pi",
                       lowest, css, late, revival));
}

void algebra()
{
    using namespace hilbert;
    const std::complex<double> i{0.0, 1.0};
    double stokes = 0.0;
    for (int n_max : {1, 2, 3, 4}) {
        const HilbertSpace space = HilbertSpace::two_mode_fock(n_max);
        const StokesOperators st = stokes_operators(space);
        const QuantumOperator p = truncation_safe_projector(space);
        stokes = std::max({stokes, (p * (commutator(st.sx, st.sy) - 2.0 * i * st.sz) * p).norm(),
                           (p * (commutator(st.sy, st.sz) - 2.0 * i * st.sx) * p).norm(),
                           (p * (commutator(st.sz, st.sx) - 2.0 * i * st.sy) * p).norm()});
    }
    double spin = 0.0;
    for (double j : {0.5, 1.0, 1.5, 4.0, 10.0}) {
        const SpinOperators l = spin_operators(j);
        spin = std::max({spin, (commutator(l.lx, l.ly) - i * l.lz).norm(), (commutator(l.ly, l.lz) - i * l.lx).norm(),
                         (commutator(l.lz, l.lx) - i * l.ly).norm()});
    }
    report(10, "operator algebra", stokes < 1e-12 && spin < 1e-12,
           fmt::format("Stokes residual {:.3e}, spin residual {:.3e}, required < 1e-12", stokes, spin));
}

void classical_dynamics(const Scenario& s)
{
    const top::TopInertia in = top::ellipsoid_inertia(s.top());
    const double wy = 0.1;
    const double omega = top::precession_rate(in, wy);
    const double t_final = 10 * 2 * kPi / omega;
    const top::FreeEvolution ev = top::euler_free_evolution({2 * kPi * s.spin_rate_hz, wy, 0.0}, in, t_final, 0.01, 10);
    double phase = 0.0;
    double last = 0.0;
    for (const top::TrajectorySample& p : ev.samples) {
        const double a = std::atan2(-p.omega.z, p.omega.x);
        double step = a - last;
        if (step > kPi) step -= 2 * kPi;
        if (step < -kPi) step += 2 * kPi;
        phase += step;
        last = a;
    }
    const double phase_err = std::abs(phase - omega * t_final) / (omega * t_final);
    report(11, "classical dynamics",
           phase_err < 1e-6 && ev.max_energy_drift < 1e-6 && ev.max_l_squared_drift < 1e-6,
           fmt::format("precession phase error {:.3e}, energy drift {:.3e}, |L|^2 drift {:.3e} over 10 periods, "
                       "required < 1e-6",
                       phase_err, ev.max_energy_drift, ev.max_l_squared_drift));
}

void monte_carlo(const Scenario& s)
{
    const top::InteractionParams p = s.interaction();
    const gauss::GaussianState vac = gauss::GaussianState::vacuum();
    const gauss::OutputObservable o = gauss::output_observable(p, s.probe_photons, p.spin_quanta);
    const gauss::MeasurementRecord r = gauss::sample_shots(o, vac, 100000, s.seed);
    double mean = 0.0;
    for (double x : r.outcomes) mean += x;
    mean /= static_cast<double>(r.outcomes.size());
    double ss = 0.0;
    for (double x : r.outcomes) ss += (x - mean) * (x - mean);
    const double ratio = ss / static_cast<double>(r.outcomes.size() - 1) / gauss::outcome_variance(o, vac);

    // SNR = 1: closed form, then a regression estimate of Var(q_O | outcome).
    const double n1 = gauss::solve_photon_number(1.0, p.spin_quanta, p.theta);
    const gauss::OutputObservable o1 = gauss::output_observable(p, n1, p.spin_quanta);
    const double post = gauss::conditional_update(vac, o1, 0.0).variance(gauss::kQO);
    const int shots = 100000;
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> g(0.0, std::sqrt(gauss::kVacuumVariance));
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int k = 0; k < shots; ++k) {
        const double q = g(rng);
        const double y = o1.signal_coeff * q + o1.qp_coeff * g(rng) + o1.pp_coeff * g(rng);
        sxx += q * q;
        sxy += q * y;
        syy += y * y;
    }
    const double empirical = (sxx - sxy * sxy / syy) / shots;
    const double mc_error = 4 * empirical * std::sqrt(2.0 / shots);
    const bool halving = std::abs(post - vac.variance(gauss::kQO) / 2) < 1e-12
                         && std::abs(empirical - post) < mc_error;
    report(12, "Monte Carlo and conditioning", std::abs(ratio - 1) < 0.05 && halving,
           fmt::format("variance ratio {:.4f} at 1e5 shots (within 5%); posterior Var(q_O) {:.6f} vs prior/2 = 0.25; "
                       "regression {:.6f} +/- {:.6f}",
                       ratio, post, empirical, mc_error));
}

} // namespace

int main()
{
    const Scenario s = paper_quartz();
    quartz_numbers(s);
    qnd_property(s);
    linearization();
    twisting();
    algebra();
    classical_dynamics(s);
    monte_carlo(s);
    fmt::print("{} of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
