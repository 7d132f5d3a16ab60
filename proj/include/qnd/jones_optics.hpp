/**
 * @file jones_optics.hpp
 * @brief Classical polarization optics of a birefringent slab.
 *
 * Jones matrices act on the linear (x, y) amplitude pair. The circular basis
 * uses the mode operators a_+ = (a_x + i a_y)/sqrt(2), a_- = (a_x - i a_y)/sqrt(2),
 * so amplitudes map as alpha_circ = C alpha_lin with
 *
 *     C = 1/sqrt(2) [[1,  i],
 *                    [1, -i]].
 *
 * In that basis the Stokes generators are the Pauli matrices
 * (S0 = 1, Sx = sigma_x, Sy = sigma_y, Sz = sigma_z), and a retarder with
 * fast/slow axes rotated by phi becomes
 *
 *     exp(i theta0 S0 + i theta (cos 2phi Sx + sin 2phi Sy)).
 */

#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>

namespace qnd::jones {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr double kUnitarityTol = 1e-12;

/// Uniaxial positive slab seen by the probe along its propagation axis.
struct BirefringentSlab {
    double n_e = 1.553;   // extraordinary index
    double n_o = 1.544;   // ordinary index
    double length = 2e-6; // path length [m]

    /// Throws DomainError unless n_e >= n_o > 1 and length > 0 (n_e = n_o is the isotropic limit).
    void validate() const;

    friend bool operator==(const BirefringentSlab&, const BirefringentSlab&) = default;
};

struct ProbeLight {
    double wavelength = 600e-9; // vacuum wavelength [m]
    double photon_number = 0.0;
    Complex beta{0.0, 0.0};  // x-polarized coherent amplitude
    Complex gamma{0.0, 0.0}; // y-polarized coherent amplitude

    /// x-polarized probe with |beta|^2 = n, gamma = 0.
    static ProbeLight x_polarized(double wavelength, double n);
    void validate() const;
};

/// Lossless 2x2 Jones matrix in the linear basis. Construction checks unitarity.
class JonesMatrix {
public:
    explicit JonesMatrix(const Matrix2c& m);

    const Matrix2c& matrix() const { return m_; }
    Complex operator()(int r, int c) const { return m_(r, c); }

    /// || J^dagger J - 1 || (Frobenius).
    double unitarity_residual() const;

private:
    Matrix2c m_;
};

struct GeneratorCoefficients {
    double k_e = 0.0;      // rad/m
    double k_o = 0.0;      // rad/m
    double s0_coeff = 0.0; // hbar (k_e + k_o)/2       [J s/m]
    double sx_coeff = 0.0; // hbar (k_e - k_o)/2
    double sy_coeff = 0.0; // phi hbar (k_e - k_o), small-angle form
    double phi = 0.0;
    bool large_angle_warning = false; // |phi| > 0.1, sy_coeff no longer meaningful

    /// exp(i G l / hbar) as a 2x2 matrix in the circular basis.
    Matrix2c circular_exponential(double length) const;
};

/// Canonical form of a rotated retarder: theta0 in [0, 2pi), theta in [0, pi/2],
/// phi in (-pi/2, pi/2]. theta == 0 reports phi = 0.
struct RetarderDecomposition {
    double theta0 = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

struct ClassicalOutput {
    Vector2c amplitudes;
    /// (S0, Sx, Sy, Sz) with the quantized-Stokes sign convention:
    /// Sx = |ax|^2 - |ay|^2, Sy = -2 Re(ax* ay), Sz = -2 Im(ax* ay).
    std::array<double, 4> stokes{};
};

/// 2pi n / lambda.
double wavenumber(double index, double wavelength);

/// diag(exp(i k_e l), exp(i k_o l)).
JonesMatrix slab_jones(const BirefringentSlab& slab, double wavelength);

/// R(phi) J R(-phi), R(phi) = [[cos, sin], [-sin, cos]].
JonesMatrix rotated_slab_jones(const JonesMatrix& j, double phi);
Matrix2c rotation(double phi);

Matrix2c to_circular(const Matrix2c& linear);
Matrix2c to_linear(const Matrix2c& circular);

RetarderDecomposition circular_basis_decomposition(const JonesMatrix& j);

/// Inverse of circular_basis_decomposition, in the linear basis.
JonesMatrix reconstruct(const RetarderDecomposition& d);

/// exp(i theta0 S0 + i theta (cos 2phi Sx + sin 2phi Sy)) in the circular basis.
Matrix2c circular_retarder(double theta0, double theta, double phi);

GeneratorCoefficients translation_generator(const BirefringentSlab& slab, double phi, double wavelength);

ClassicalOutput propagate_classical(const Vector2c& input, const JonesMatrix& j);
std::array<double, 4> classical_stokes(const Vector2c& amplitudes);

/// Largest singular value.
double operator_norm(const Matrix2c& m);

} // namespace qnd::jones
