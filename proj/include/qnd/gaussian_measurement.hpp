/**
 * @file gaussian_measurement.hpp
 * @brief Linearized measurement model in the macroscopic regime (N, n >> 1).
 *
 * The object's transverse angular momentum and the probe's y mode are
 * represented by quadratures q = (a^dagger + a)/sqrt(2), p = i(a^dagger - a)/sqrt(2)
 * with vacuum variance 1/2. The balanced-polarimeter reading is
 *
 *     S_z^(O) = sqrt(2) n sqrt(N) theta' q_O + 2 sqrt(2n) theta q_P - sqrt(2n) p_P.
 *
 * State vectors are ordered (q_O, p_O, q_P, p_P).
 */

#pragma once

#include "qnd/rigid_top.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qnd::gauss {

enum Quadrature : int { kQO = 0, kPO = 1, kQP = 2, kPP = 3 };

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kPhotonFloor = 1e3;
inline constexpr double kSpinFloor = 1e3;

struct GaussianState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d covariance = kVacuumVariance * Eigen::Matrix4d::Identity();

    /// Object and probe both in their vacuum / coherent-spin-state noise.
    static GaussianState vacuum() { return {}; }

    /// Throws ContractViolation unless the covariance is symmetric, PSD and
    /// satisfies Var(q) Var(p) >= 1/4 for both conjugate pairs.
    void validate() const;

    double variance(Quadrature q) const { return covariance(q, q); }
};

struct OutputObservable {
    double signal_coeff = 0.0; // multiplies q_O
    double qp_coeff = 0.0;     // multiplies q_P
    double pp_coeff = 0.0;     // multiplies p_P

    Eigen::Vector4d row() const { return {signal_coeff, 0.0, qp_coeff, pp_coeff}; }
};

struct MeasurementRecord {
    std::vector<double> outcomes;
    std::uint64_t seed = 0;
    std::size_t shot_count = 0;
};

enum class ObjectSampling {
    fresh_per_shot, // independent objects, one pulse each
    persistent,     // one object, repeated QND pulses with fresh probe noise
};

/// Throws LinearizationFloorError when n or N is below 1e3; use the exact hilbert path there.
OutputObservable output_observable(const top::InteractionParams& params, double n, double spin_quanta);
OutputObservable output_observable(double theta, double theta_prime, double n, double spin_quanta);

double outcome_mean(const OutputObservable& obs, const GaussianState& state);
double outcome_variance(const OutputObservable& obs, const GaussianState& state);

/// Signal variance over shot-noise variance.
double snr(const OutputObservable& obs, const GaussianState& state);
/// Vacuum-noise SNR with theta' = 2 theta / N: 4 n theta^2 / (N (4 theta^2 + 1)).
double snr(double n, double spin_quanta, double theta);

/// Photon number achieving `target_snr`; throws DomainError for theta == 0.
double solve_photon_number(double target_snr, double spin_quanta, double theta);

MeasurementRecord sample_shots(const OutputObservable& obs, const GaussianState& state, std::size_t shots,
                               std::uint64_t seed, ObjectSampling mode = ObjectSampling::fresh_per_shot);

/// Conditions the object quadratures on one outcome. The pulse first kicks
/// p_O by (signal_coeff / pp_coeff) q_P, the back-action of the coupling; q_O is
/// untouched by it. The consumed probe block is replaced by a fresh vacuum probe.
GaussianState conditional_update(const GaussianState& prior, const OutputObservable& obs, double outcome);

/// Symplectic shear p_O -> p_O + s q_O, the macroscopic image of one-axis twisting.
GaussianState apply_twist_shear(const GaussianState& state, double shear);

struct RepeatedProbeOptions {
    // Twisting between pulses needs a physical tau; disabled until one is supplied.
    bool twist_enabled = false;
    double twist_shear = 0.0;
};

GaussianState repeated_probe_update(const GaussianState& prior, const OutputObservable& obs,
                                    std::span<const double> outcomes, const RepeatedProbeOptions& opt = {});

/// "shot_index,outcome" CSV with header.
void write_csv(const MeasurementRecord& record, std::ostream& os);

} // namespace qnd::gauss
