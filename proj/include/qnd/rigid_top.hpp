#pragma once

#include "qnd/constants.hpp"
#include "qnd/jones_optics.hpp"

#include <vector>

namespace qnd::top {

/// Uniform oblate ellipsoid. Semi-axis X is the extraordinary axis, Y the short one.
struct SymmetricTop {
    double density = 2650.0;     // kg/m^3
    double semi_axis_x = 2e-6;   // a [m]
    double semi_axis_y = 1e-6;   // b [m]
    double semi_axis_z = 2e-6;   // c [m]
    double spin_rate = 2.0 * kPi;  // omega_X [rad/s]

    /// Throws DomainError for non-positive values, a != c, or b >= a.
    void validate() const;
};

struct TopInertia {
    double mass = 0.0;
    double i_x = 0.0;
    double i_y = 0.0;
    double i_z = 0.0;
    double i = 0.0; // common value I_X = I_Z
};

/// Coupling constants of the probe/top evolution exp(i theta Sx + i theta' Sy Ly - i chi Ly^2).
struct InteractionParams {
    double theta = 0.0;
    double theta_prime = 0.0; // 2 theta / N
    double chi = 0.0;
    double phi = 0.0;
    double tau = 0.0;
    double spin_quanta = 0.0; // N = <L_x> in units of hbar
    bool below_linearization_floor = false; // N < kLinearizationFloor
};

inline constexpr double kLinearizationFloor = 1e3;

struct BodyAngularVelocity {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct TrajectorySample {
    double t = 0.0;
    BodyAngularVelocity omega;
    double energy = 0.0;    // 1/2 sum I_k w_k^2
    double l_squared = 0.0; // sum (I_k w_k)^2
};

struct FreeEvolution {
    std::vector<TrajectorySample> samples;
    double max_energy_drift = 0.0;    // relative
    double max_l_squared_drift = 0.0; // relative
};

TopInertia ellipsoid_inertia(const SymmetricTop& top);

/// N = I_X omega_X / hbar.
double spin_quanta(const TopInertia& inertia, double omega_x);

InteractionParams interaction_params(const jones::BirefringentSlab& slab, double wavelength,
                                     const SymmetricTop& top, double tau, double phi);

/// Body-frame precession rate of (w_X, w_Z) for a symmetric top: w_Y (I_Y - I)/I.
double precession_rate(const TopInertia& inertia, double omega_y);

/// Torque-free Euler equations by fixed-step RK4. Every `stride`-th step is
/// recorded (the last step always is). Throws IntegrationQualityError when the
/// relative kinetic-energy drift exceeds `max_drift`.
FreeEvolution euler_free_evolution(const BodyAngularVelocity& omega0, const TopInertia& inertia,
                                   double t_final, double dt, int stride = 1,
                                   double max_drift = 1e-6);

// Phenomenological preparation stage: a sin(2 phi) alignment torque with
// linear damping about z, and proportional feedback on the spin rate.
struct StabilizationConfig {
    double stiffness = 0.0; // kappa [N m]
    double damping = 0.0;   // Gamma [N m s]
    double gain = 0.0;      // g [1/s]
    double target_omega_x = 0.0;
    double duration = 0.0;
    double dt = 1e-3;
    int stride = 1;
    double phi_tolerance = 1e-3;
    double omega_tolerance = 1e-3; // relative to target
};

struct StabilizationSample {
    double t = 0.0;
    BodyAngularVelocity omega; // omega.z is the alignment rate dphi/dt
    double phi = 0.0;
};

struct StabilizationResult {
    std::vector<StabilizationSample> samples;
    bool converged = false;
    double settling_time = -1.0; // first time after which both residuals stay within tolerance
    double final_phi = 0.0;
    double final_omega_error = 0.0; // |omega_X - target|
};

StabilizationResult alignment_stabilization_sim(const BodyAngularVelocity& initial, double phi0,
                                                const TopInertia& inertia,
                                                const StabilizationConfig& cfg);

} // namespace qnd::top
