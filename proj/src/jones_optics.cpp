#include "qnd/jones_optics.hpp"

#include "qnd/constants.hpp"
#include "qnd/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace qnd::jones {

namespace {

const Complex kI{0.0, 1.0};

Matrix2c circular_change()
{
    const double r = 1.0 / std::sqrt(2.0);
    Matrix2c c;
    c << r, kI * r,
         r, -kI * r;
    return c;
}

Matrix2c pauli_x()
{
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}

Matrix2c pauli_y()
{
    Matrix2c m;
    m << 0, -kI, kI, 0;
    return m;
}

Matrix2c pauli_z()
{
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}

double wrap_two_pi(double a)
{
    double w = std::fmod(a, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    if (w >= 2.0 * kPi) w -= 2.0 * kPi;
    return w;
}

} // namespace

void BirefringentSlab::validate() const
{
    if (!(length > 0.0) || !std::isfinite(length))
        throw DomainError("slab length must be positive, got " + std::to_string(length));
    if (!(n_o > 1.0) || !(n_e >= n_o))
        throw DomainError("slab must be uniaxial positive with n_e >= n_o > 1");
}

ProbeLight ProbeLight::x_polarized(double wavelength, double n)
{
    ProbeLight p;
    p.wavelength = wavelength;
    p.photon_number = n;
    p.beta = Complex{std::sqrt(n), 0.0};
    p.gamma = Complex{0.0, 0.0};
    p.validate();
    return p;
}

void ProbeLight::validate() const
{
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    if (!(photon_number >= 0.0)) throw DomainError("photon number must be non-negative");
}

JonesMatrix::JonesMatrix(const Matrix2c& m) : m_(m)
{
    if (unitarity_residual() > kUnitarityTol)
        throw ContractViolation("Jones matrix is not unitary (residual "
                                + std::to_string(unitarity_residual()) + ")");
}

double JonesMatrix::unitarity_residual() const
{
    return (m_.adjoint() * m_ - Matrix2c::Identity()).norm();
}

double wavenumber(double index, double wavelength)
{
    return 2.0 * kPi * index / wavelength;
}

JonesMatrix slab_jones(const BirefringentSlab& slab, double wavelength)
{
    slab.validate();
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    const double ke = wavenumber(slab.n_e, wavelength);
    const double ko = wavenumber(slab.n_o, wavelength);
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = std::exp(kI * (ke * slab.length));
    m(1, 1) = std::exp(kI * (ko * slab.length));
    return JonesMatrix(m);
}

Matrix2c rotation(double phi)
{
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Matrix2c r;
    r << c, s,
         -s, c;
    return r;
}

JonesMatrix rotated_slab_jones(const JonesMatrix& j, double phi)
{
    return JonesMatrix(rotation(phi) * j.matrix() * rotation(-phi));
}

Matrix2c to_circular(const Matrix2c& linear)
{
    const Matrix2c c = circular_change();
    return c * linear * c.adjoint();
}

Matrix2c to_linear(const Matrix2c& circular)
{
    const Matrix2c c = circular_change();
    return c.adjoint() * circular * c;
}

Matrix2c circular_retarder(double theta0, double theta, double phi)
{
    // exp(i theta n.sigma) = cos(theta) 1 + i sin(theta) n.sigma for a unit n.
    const Matrix2c axis = std::cos(2.0 * phi) * pauli_x() + std::sin(2.0 * phi) * pauli_y();
    const Matrix2c su2 = std::cos(theta) * Matrix2c::Identity() + kI * std::sin(theta) * axis;
    return std::exp(kI * theta0) * su2;
}

RetarderDecomposition circular_basis_decomposition(const JonesMatrix& j)
{
    const Matrix2c u = to_circular(j.matrix());

    // det = exp(2 i theta0); the half-angle branch is fixed below by cos(theta) >= 0.
    double theta0 = 0.5 * std::arg(u.determinant());
    Matrix2c su2 = std::exp(-kI * theta0) * u;

    double c = 0.5 * su2.trace().real();
    double vx = ((su2 * pauli_x()).trace() / (2.0 * kI)).real();
    double vy = ((su2 * pauli_y()).trace() / (2.0 * kI)).real();
    const double vz = ((su2 * pauli_z()).trace() / (2.0 * kI)).real();

    if (std::abs(vz) > 1e-9)
        throw ContractViolation("Jones matrix is not a rotated linear retarder (circular component "
                                + std::to_string(vz) + ")");

    // theta = pi/2 sits on the branch cut: keep theta0 in [0, pi) there.
    const bool on_cut = std::abs(c) < 1e-15 && wrap_two_pi(theta0) >= kPi;
    if (c < 0.0 || on_cut) {
        theta0 += kPi;
        c = -c;
        vx = -vx;
        vy = -vy;
    }

    RetarderDecomposition d;
    d.theta0 = wrap_two_pi(theta0);
    const double v = std::hypot(vx, vy);
    d.theta = std::atan2(v, c);
    if (v < 1e-15) {
        d.theta = 0.0;
        d.phi = 0.0;
        return d;
    }
    d.phi = 0.5 * std::atan2(vy, vx); // atan2 in (-pi, pi] keeps phi in (-pi/2, pi/2]
    return d;
}

JonesMatrix reconstruct(const RetarderDecomposition& d)
{
    return JonesMatrix(to_linear(circular_retarder(d.theta0, d.theta, d.phi)));
}

Matrix2c GeneratorCoefficients::circular_exponential(double length) const
{
    // S0, Sx, Sy are 1, sigma_x, sigma_y on the single-photon block.
    const double a0 = s0_coeff * length / kHbar;
    const double ax = sx_coeff * length / kHbar;
    const double ay = sy_coeff * length / kHbar;
    const double mag = std::hypot(ax, ay);
    Matrix2c su2 = std::cos(mag) * Matrix2c::Identity();
    if (mag > 0.0) su2 += kI * (std::sin(mag) / mag) * (ax * pauli_x() + ay * pauli_y());
    return std::exp(kI * a0) * su2;
}

GeneratorCoefficients translation_generator(const BirefringentSlab& slab, double phi, double wavelength)
{
    slab.validate();
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    GeneratorCoefficients g;
    g.phi = phi;
    g.k_e = wavenumber(slab.n_e, wavelength);
    g.k_o = wavenumber(slab.n_o, wavelength);
    g.s0_coeff = kHbar * 0.5 * (g.k_e + g.k_o);
    g.sx_coeff = kHbar * 0.5 * (g.k_e - g.k_o);
    g.sy_coeff = phi * (kHbar * g.k_e - kHbar * g.k_o);
    g.large_angle_warning = std::abs(phi) > 0.1;
    return g;
}

std::array<double, 4> classical_stokes(const Vector2c& a)
{
    const double ix = std::norm(a(0));
    const double iy = std::norm(a(1));
    const Complex cross = std::conj(a(0)) * a(1);
    return {ix + iy, ix - iy, -2.0 * cross.real(), -2.0 * cross.imag()};
}

ClassicalOutput propagate_classical(const Vector2c& input, const JonesMatrix& j)
{
    ClassicalOutput out;
    out.amplitudes = j.matrix() * input;
    out.stokes = classical_stokes(out.amplitudes);
    return out;
}

double operator_norm(const Matrix2c& m)
{
    return Eigen::JacobiSVD<Matrix2c>(m).singularValues()(0);
}

} // namespace qnd::jones
