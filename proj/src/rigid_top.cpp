#include "qnd/rigid_top.hpp"

#include "qnd/constants.hpp"
#include "qnd/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace qnd::top {

void SymmetricTop::validate() const
{
    if (!(density > 0.0) || !(semi_axis_x > 0.0) || !(semi_axis_y > 0.0) || !(semi_axis_z > 0.0))
        throw DomainError("density and semi-axes must be positive");
    if (std::abs(semi_axis_x - semi_axis_z) > 1e-12 * semi_axis_x)
        throw DomainError("symmetric top requires semi_axis_x == semi_axis_z");
    if (!(semi_axis_y < semi_axis_x))
        throw DomainError("oblate top requires semi_axis_y < semi_axis_x");
}

TopInertia ellipsoid_inertia(const SymmetricTop& top)
{
    top.validate();
    const double a = top.semi_axis_x;
    const double b = top.semi_axis_y;
    const double c = top.semi_axis_z;
    TopInertia in;
    in.mass = 4.0 / 3.0 * kPi * top.density * a * b * c;
    in.i_x = in.mass * (b * b + c * c) / 5.0;
    in.i_y = in.mass * (a * a + c * c) / 5.0;
    in.i_z = in.mass * (a * a + b * b) / 5.0;
    in.i = in.i_x;
    return in;
}

double spin_quanta(const TopInertia& inertia, double omega_x)
{
    if (!(omega_x > 0.0))
        throw DomainError("spin rate must be positive, got " + std::to_string(omega_x));
    return inertia.i_x * omega_x / kHbar;
}

InteractionParams interaction_params(const jones::BirefringentSlab& slab, double wavelength,
                                     const SymmetricTop& top, double tau, double phi)
{
    slab.validate();
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    if (!(tau >= 0.0)) throw DomainError("tau must be non-negative");

    const TopInertia in = ellipsoid_inertia(top);
    InteractionParams p;
    p.theta = 0.5 * (jones::wavenumber(slab.n_e, wavelength) - jones::wavenumber(slab.n_o, wavelength))
              * slab.length;
    p.spin_quanta = spin_quanta(in, top.spin_rate);
    p.theta_prime = 2.0 * p.theta / p.spin_quanta;
    p.chi = kHbar * (1.0 / (2.0 * in.i_y) - 1.0 / (2.0 * in.i)) * tau;
    p.phi = phi;
    p.tau = tau;
    p.below_linearization_floor = p.spin_quanta < kLinearizationFloor;
    return p;
}

double precession_rate(const TopInertia& inertia, double omega_y)
{
    return omega_y * (inertia.i_y - inertia.i) / inertia.i;
}

namespace {

using State3 = std::array<double, 3>;

State3 euler_rhs(const State3& w, const TopInertia& in)
{
    return {(in.i_y - in.i_z) * w[1] * w[2] / in.i_x,
            (in.i_z - in.i_x) * w[2] * w[0] / in.i_y,
            (in.i_x - in.i_y) * w[0] * w[1] / in.i_z};
}

template <typename State, typename Rhs>
State rk4_step(const State& y, double dt, Rhs&& f)
{
    auto axpy = [](const State& a, double s, const State& b) {
        State r{};
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    const State k1 = f(y);
    const State k2 = f(axpy(y, 0.5 * dt, k1));
    const State k3 = f(axpy(y, 0.5 * dt, k2));
    const State k4 = f(axpy(y, dt, k3));
    State out{};
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

TrajectorySample make_sample(double t, const State3& w, const TopInertia& in)
{
    TrajectorySample s;
    s.t = t;
    s.omega = {w[0], w[1], w[2]};
    s.energy = 0.5 * (in.i_x * w[0] * w[0] + in.i_y * w[1] * w[1] + in.i_z * w[2] * w[2]);
    const double lx = in.i_x * w[0];
    const double ly = in.i_y * w[1];
    const double lz = in.i_z * w[2];
    s.l_squared = lx * lx + ly * ly + lz * lz;
    return s;
}

double relative_drift(double value, double reference)
{
    if (reference == 0.0) return std::abs(value);
    return std::abs(value - reference) / std::abs(reference);
}

} // namespace

FreeEvolution euler_free_evolution(const BodyAngularVelocity& omega0, const TopInertia& inertia,
                                   double t_final, double dt, int stride, double max_drift)
{
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(t_final >= 0.0)) throw DomainError("t_final must be non-negative");
    if (stride < 1) throw DomainError("stride must be at least 1");

    const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
    const double h = steps > 0 ? t_final / static_cast<double>(steps) : dt;

    FreeEvolution out;
    State3 w{omega0.x, omega0.y, omega0.z};
    const TrajectorySample first = make_sample(0.0, w, inertia);
    out.samples.push_back(first);
    const auto rhs = [&](const State3& y) { return euler_rhs(y, inertia); };

    for (long long k = 1; k <= steps; ++k) {
        w = rk4_step(w, h, rhs);
        const TrajectorySample s = make_sample(static_cast<double>(k) * h, w, inertia);
        out.max_energy_drift = std::max(out.max_energy_drift, relative_drift(s.energy, first.energy));
        out.max_l_squared_drift =
            std::max(out.max_l_squared_drift, relative_drift(s.l_squared, first.l_squared));
        if (out.max_energy_drift > max_drift)
            throw IntegrationQualityError("relative energy drift " + std::to_string(out.max_energy_drift)
                                          + " exceeds budget at t = " + std::to_string(s.t)
                                          + "; reduce dt");
        if (k % stride == 0 || k == steps) out.samples.push_back(s);
    }
    return out;
}

StabilizationResult alignment_stabilization_sim(const BodyAngularVelocity& initial, double phi0,
                                                const TopInertia& inertia,
                                                const StabilizationConfig& cfg)
{
    if (cfg.stiffness < 0.0 || cfg.damping < 0.0 || cfg.gain < 0.0)
        throw DomainError("stiffness, damping and gain must be non-negative");
    if (!(cfg.dt > 0.0)) throw DomainError("dt must be positive");
    if (!(cfg.duration >= 0.0)) throw DomainError("duration must be non-negative");
    if (cfg.stride < 1) throw DomainError("stride must be at least 1");

    // (phi, dphi/dt, omega_X, omega_Y)
    using State4 = std::array<double, 4>;
    const auto rhs = [&](const State4& y) -> State4 {
        return {y[1],
                (-cfg.stiffness * std::sin(2.0 * y[0]) - cfg.damping * y[1]) / inertia.i_z,
                cfg.gain * (cfg.target_omega_x - y[2]),
                -cfg.damping * y[3] / inertia.i_y};
    };

    const auto steps = static_cast<long long>(std::ceil(cfg.duration / cfg.dt - 1e-9));
    const double h = steps > 0 ? cfg.duration / static_cast<double>(steps) : cfg.dt;
    const double omega_tol = cfg.omega_tolerance * std::max(std::abs(cfg.target_omega_x), 1e-300);

    StabilizationResult out;
    State4 y{phi0, initial.z, initial.x, initial.y};
    auto record = [&](double t) {
        out.samples.push_back({t, {y[2], y[3], y[1]}, y[0]});
    };
    auto within = [&] {
        return std::abs(y[0]) < cfg.phi_tolerance && std::abs(y[2] - cfg.target_omega_x) < omega_tol;
    };

    record(0.0);
    double last_violation = within() ? -1.0 : 0.0;
    for (long long k = 1; k <= steps; ++k) {
        y = rk4_step(y, h, rhs);
        const double t = static_cast<double>(k) * h;
        if (!within()) last_violation = t;
        if (k % cfg.stride == 0 || k == steps) record(t);
    }

    out.final_phi = y[0];
    out.final_omega_error = std::abs(y[2] - cfg.target_omega_x);
    out.converged = within();
    if (out.converged) out.settling_time = last_violation < 0.0 ? 0.0 : last_violation;
    return out;
}

} // namespace qnd::top
