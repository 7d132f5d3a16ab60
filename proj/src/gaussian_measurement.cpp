#include "qnd/gaussian_measurement.hpp"

#include "qnd/counter_rng.hpp"
#include "qnd/csv.hpp"
#include "qnd/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace qnd::gauss {

namespace {

constexpr double kCovTol = 1e-12;
constexpr std::uint64_t kObjectStream = std::numeric_limits<std::uint64_t>::max();

// A with A A^T = cov, for PSD cov (clamps rounding-level negative eigenvalues).
template <int N>
Eigen::Matrix<double, N, N> psd_factor(const Eigen::Matrix<double, N, N>& cov)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(cov);
    const Eigen::Matrix<double, N, 1> root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal();
}

void check_floors(double n, double spin_quanta)
{
    if (!(n >= kPhotonFloor) || !(spin_quanta >= kSpinFloor))
        throw LinearizationFloorError("linearized model needs n >= 1e3 and N >= 1e3 (got n = "
                                      + std::to_string(n) + ", N = " + std::to_string(spin_quanta)
                                      + "); use the exact hilbert simulation");
}

} // namespace

void GaussianState::validate() const
{
    if (!mean.allFinite() || !covariance.allFinite())
        throw ContractViolation("Gaussian state has non-finite entries");
    if ((covariance - covariance.transpose()).norm() > kCovTol * (1.0 + covariance.norm()))
        throw ContractViolation("covariance is not symmetric");
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(covariance);
    if (es.eigenvalues().minCoeff() < -kCovTol * (1.0 + covariance.norm()))
        throw ContractViolation("covariance is not positive semidefinite");
    for (int k : {kQO, kQP})
        if (covariance(k, k) * covariance(k + 1, k + 1) < 0.25 * (1.0 - 1e-12))
            throw ContractViolation("uncertainty bound Var(q) Var(p) >= 1/4 violated");
}

OutputObservable output_observable(double theta, double theta_prime, double n, double spin_quanta)
{
    check_floors(n, spin_quanta);
    OutputObservable o;
    o.signal_coeff = std::sqrt(2.0) * n * std::sqrt(spin_quanta) * theta_prime;
    o.qp_coeff = 2.0 * std::sqrt(2.0 * n) * theta;
    o.pp_coeff = -std::sqrt(2.0 * n);
    return o;
}

OutputObservable output_observable(const top::InteractionParams& params, double n, double spin_quanta)
{
    return output_observable(params.theta, params.theta_prime, n, spin_quanta);
}

double outcome_mean(const OutputObservable& obs, const GaussianState& state)
{
    return obs.row().dot(state.mean);
}

double outcome_variance(const OutputObservable& obs, const GaussianState& state)
{
    const Eigen::Vector4d h = obs.row();
    return h.dot(state.covariance * h);
}

double snr(const OutputObservable& obs, const GaussianState& state)
{
    const double signal = obs.signal_coeff * obs.signal_coeff * state.variance(kQO);
    Eigen::Vector4d h = obs.row();
    h(kQO) = 0.0;
    return signal / h.dot(state.covariance * h);
}

double snr(double n, double spin_quanta, double theta)
{
    return snr(output_observable(theta, 2.0 * theta / spin_quanta, n, spin_quanta), GaussianState::vacuum());
}

double solve_photon_number(double target_snr, double spin_quanta, double theta)
{
    if (!(target_snr > 0.0)) throw DomainError("target SNR must be positive");
    if (theta == 0.0) throw DomainError("theta = 0: probe does not couple to the object");
    const double t2 = 4.0 * theta * theta;
    return target_snr * spin_quanta * (t2 + 1.0) / t2;
}

MeasurementRecord sample_shots(const OutputObservable& obs, const GaussianState& state, std::size_t shots,
                               std::uint64_t seed, ObjectSampling mode)
{
    if (shots < 1) throw DomainError("shots must be at least 1");
    state.validate();

    MeasurementRecord rec;
    rec.seed = seed;
    rec.shot_count = shots;
    rec.outcomes.reserve(shots);
    const Eigen::Vector4d h = obs.row();

    if (mode == ObjectSampling::fresh_per_shot) {
        const Eigen::Matrix4d a = psd_factor<4>(state.covariance);
        for (std::size_t i = 0; i < shots; ++i) {
            CounterRng rng(seed, i);
            Eigen::Vector4d z;
            for (int k = 0; k < 4; ++k) z(k) = rng.next_normal();
            rec.outcomes.push_back(h.dot(state.mean + a * z));
        }
        return rec;
    }

    // Persistent object: draw (q_O, p_O) once, then the probe conditional on it per shot.
    const Eigen::Matrix2d soo = state.covariance.topLeftCorner<2, 2>();
    const Eigen::Matrix2d spo = state.covariance.bottomLeftCorner<2, 2>();
    const Eigen::Matrix2d spp = state.covariance.bottomRightCorner<2, 2>();
    const Eigen::Matrix2d gain = spo * soo.completeOrthogonalDecomposition().pseudoInverse();

    CounterRng object_rng(seed, kObjectStream);
    Eigen::Vector2d zo(object_rng.next_normal(), object_rng.next_normal());
    const Eigen::Vector2d object = state.mean.head<2>() + psd_factor<2>(soo) * zo;

    const Eigen::Vector2d probe_mean = state.mean.tail<2>() + gain * (object - state.mean.head<2>());
    const Eigen::Matrix2d probe_factor = psd_factor<2>(Eigen::Matrix2d(spp - gain * spo.transpose()));
    for (std::size_t i = 0; i < shots; ++i) {
        CounterRng rng(seed, i);
        Eigen::Vector2d z(rng.next_normal(), rng.next_normal());
        const Eigen::Vector2d probe = probe_mean + probe_factor * z;
        rec.outcomes.push_back(h.head<2>().dot(object) + h.tail<2>().dot(probe));
    }
    return rec;
}

GaussianState conditional_update(const GaussianState& prior, const OutputObservable& obs, double outcome)
{
    prior.validate();
    const Eigen::Vector4d h = obs.row();
    if (!h.allFinite()) throw ContractViolation("observable coefficients must be finite");
    if (obs.signal_coeff != 0.0 && obs.pp_coeff == 0.0)
        throw ContractViolation("a coupled readout needs a nonzero p_P coefficient");

    // Back-action of the q_O q_P coupling: p_O picks up q_P with the gain that
    // keeps the interaction symplectic.
    GaussianState kicked = prior;
    if (obs.signal_coeff != 0.0) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m(kPO, kQP) = obs.signal_coeff / obs.pp_coeff;
        kicked.mean = m * prior.mean;
        kicked.covariance = m * prior.covariance * m.transpose();
    }

    const double s = h.dot(kicked.covariance * h);
    if (!(s > 0.0)) throw DegenerateConditioningError("outcome distribution has zero variance");

    const Eigen::Vector4d cross = kicked.covariance * h;
    GaussianState post;
    post.mean = kicked.mean + cross * ((outcome - h.dot(kicked.mean)) / s);
    post.covariance = kicked.covariance - cross * cross.transpose() / s;
    post.covariance = 0.5 * (post.covariance + post.covariance.transpose()).eval();

    // The probe pulse is spent; the next one arrives in vacuum, uncorrelated.
    post.mean.tail<2>().setZero();
    post.covariance.bottomRows<2>().setZero();
    post.covariance.rightCols<2>().setZero();
    post.covariance.bottomRightCorner<2, 2>() = kVacuumVariance * Eigen::Matrix2d::Identity();
    return post;
}

GaussianState apply_twist_shear(const GaussianState& state, double shear)
{
    Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
    s(kPO, kQO) = shear;
    GaussianState out;
    out.mean = s * state.mean;
    out.covariance = s * state.covariance * s.transpose();
    return out;
}

GaussianState repeated_probe_update(const GaussianState& prior, const OutputObservable& obs,
                                    std::span<const double> outcomes, const RepeatedProbeOptions& opt)
{
    GaussianState state = prior;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (k > 0 && opt.twist_enabled) state = apply_twist_shear(state, opt.twist_shear);
        state = conditional_update(state, obs, outcomes[k]);
    }
    return state;
}

void write_csv(const MeasurementRecord& record, std::ostream& os)
{
    csv::Writer w(os);
    w.row({"shot_index", "outcome"});
    for (std::size_t i = 0; i < record.outcomes.size(); ++i)
        w.row({static_cast<unsigned long long>(i), record.outcomes[i]});
}

} // namespace qnd::gauss
