/**
 * @file hilbert.hpp
 * @brief Dense finite-dimensional quantum mechanics for the probe/top system.
 *
 * Spaces:
 *   - two-mode Fock space truncated at n_max photons per mode, basis |n_x, n_y>
 *     with index n_x (n_max + 1) + n_y;
 *   - spin j, basis |j, m> ordered m = j, j-1, ..., -j;
 *   - the tensor product photon (x) spin, photon index major.
 *
 * All matrix functions of Hermitian operators go through an eigendecomposition,
 * so exponentials of Hermitian generators are unitary to rounding.
 */

#pragma once

#include "qnd/rigid_top.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <iosfwd>
#include <span>

namespace qnd::hilbert {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr int kDefaultDimensionCap = 4096;

class HilbertSpace {
public:
    enum class Kind { two_mode_fock, spin, tensor };

    static HilbertSpace two_mode_fock(int n_max);
    static HilbertSpace spin(double j);
    static HilbertSpace tensor(const HilbertSpace& photon, const HilbertSpace& spin);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    int n_max() const { return n_max_; }
    int two_j() const { return two_j_; }
    double j() const { return 0.5 * two_j_; }
    int photon_dim() const { return (n_max_ + 1) * (n_max_ + 1); }
    int spin_dim() const { return two_j_ + 1; }

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

private:
    HilbertSpace(Kind k, int n_max, int two_j, int dim) : kind_(k), n_max_(n_max), two_j_(two_j), dim_(dim) {}

    Kind kind_;
    int n_max_ = 0;
    int two_j_ = 0;
    int dim_ = 0;
};

class QuantumOperator {
public:
    QuantumOperator(HilbertSpace space, MatrixXc m);

    const HilbertSpace& space() const { return space_; }
    const MatrixXc& matrix() const { return m_; }

    QuantumOperator adjoint() const;

    /// || M - M^dagger || (Frobenius)
    double hermiticity_residual() const;
    /// || M^dagger M - 1 || (Frobenius)
    double unitarity_residual() const;

    bool is_hermitian(double tol = kHermitianTol) const { return hermiticity_residual() < tol; }
    bool is_unitary(double tol = kUnitaryTol) const { return unitarity_residual() < tol; }

    /// Frobenius norm; bounds the operator norm from above.
    double norm() const { return m_.norm(); }

    QuantumOperator& operator+=(const QuantumOperator& o);
    QuantumOperator& operator-=(const QuantumOperator& o);
    QuantumOperator& operator*=(Complex s);

    friend QuantumOperator operator+(QuantumOperator a, const QuantumOperator& b) { return a += b; }
    friend QuantumOperator operator-(QuantumOperator a, const QuantumOperator& b) { return a -= b; }
    friend QuantumOperator operator*(QuantumOperator a, Complex s) { return a *= s; }
    friend QuantumOperator operator*(Complex s, QuantumOperator a) { return a *= s; }
    friend QuantumOperator operator*(const QuantumOperator& a, const QuantumOperator& b);

    static QuantumOperator identity(const HilbertSpace& space);

private:
    HilbertSpace space_;
    MatrixXc m_;
};

class StateVector {
public:
    /// Throws ContractViolation unless ||v|| = 1 within kNormTol.
    StateVector(HilbertSpace space, VectorXc v);

    const HilbertSpace& space() const { return space_; }
    const VectorXc& amplitudes() const { return v_; }

private:
    HilbertSpace space_;
    VectorXc v_;
};

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b);

/// photon (x) spin
QuantumOperator tensor(const QuantumOperator& photon, const QuantumOperator& spin);
StateVector tensor(const StateVector& photon, const StateVector& spin);

Complex expectation(const QuantumOperator& op, const StateVector& psi);
/// <A^2> - <A>^2 for Hermitian A
double variance(const QuantumOperator& op, const StateVector& psi);

/// exp(i s H) for Hermitian H.
QuantumOperator hermitian_exponential(const QuantumOperator& h, double s);

struct FockModes {
    HilbertSpace space;
    QuantumOperator a_x;
    QuantumOperator a_y;
};

FockModes two_mode_fock(int n_max);

struct StokesOperators {
    QuantumOperator s0, sx, sy, sz;
};

/// S built from a_+/- = (a_x +/- i a_y)/sqrt(2).
StokesOperators stokes_operators(const HilbertSpace& space);

/// Projector onto total photon number <= n_max, where truncated Stokes
/// operators and their products are exact.
QuantumOperator truncation_safe_projector(const HilbertSpace& space);

struct SpinOperators {
    QuantumOperator lx, ly, lz, l0_squared;
};

SpinOperators spin_operators(double j);

/// Two-mode coherent state |beta>_x (x) |gamma>_y truncated at n_max, renormalized.
/// Throws DomainError if |beta|^2 + |gamma|^2 > n_max/4 or the truncated tail exceeds 1e-8.
StateVector coherent_polarization_state(Complex beta, Complex gamma, int n_max);

/// Photon-number probability lost to truncation of the untruncated coherent state.
double coherent_truncation_deficit(Complex beta, Complex gamma, int n_max);

/// Highest-weight eigenstate of L_x (coherent spin state along x).
StateVector css_along_x(double j);

/// Eigenstate of L_y with eigenvalue m.
StateVector ly_eigenstate(double j, double m);

/// B = exp(i theta Sx (x) 1 + i theta' Sy (x) Ly - i chi 1 (x) Ly^2).
/// Only theta, theta_prime and chi of `params` are used.
QuantumOperator evolution_operator(const top::InteractionParams& params, int n_max, double j,
                                   int dimension_cap = kDefaultDimensionCap);

/// B^dagger O B
QuantumOperator heisenberg_map(const QuantumOperator& b, const QuantumOperator& o);

/// || [L, B] ||, L already lifted to the tensor space.
double qnd_commutator_norm(const QuantumOperator& b, const QuantumOperator& lifted);

/// 3x3 linear map of (Sx, Sy, Sz) across the interaction with L_y taken as a c-number.
Eigen::Matrix3d linearized_stokes_map(double theta, double theta_prime, double ly);

struct LinearizationReport {
    std::array<double, 3> exact{};     // <B^dagger S_i B>
    std::array<double, 3> predicted{}; // map * <S^(I)>
    std::array<double, 3> deviation{}; // |exact - predicted|
    double max_deviation = 0.0;
    double ly_mean = 0.0;
    bool regime_violation = false; // theta > 0.1
};

LinearizationReport linearized_comparison(const top::InteractionParams& params, int n_max, double j,
                                          const StateVector& probe, const StateVector& spin);

/// Least-squares slope of log(err) against log(step).
double convergence_order(std::span<const double> steps, std::span<const double> errors);

struct TwistResult {
    double min_variance = 0.0;
    double optimal_angle = 0.0; // direction cos(a) L_y + sin(a) L_z, a in (-pi/2, pi/2]
    double mean_lx = 0.0;
};

/// CSS along x evolved by exp(-i chi_t L_y^2); minimal transverse variance over the Y-Z plane.
TwistResult twist_squeezing(double chi_t, double j);

/// Rows of "re,im,re,im,..." for debugging.
void dump_csv(const QuantumOperator& op, std::ostream& os);
void dump_csv(const StateVector& psi, std::ostream& os);

} // namespace qnd::hilbert
