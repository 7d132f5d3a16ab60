#include "qnd/errors.hpp"
#include "qnd/hilbert.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

using namespace qnd;
using namespace qnd::hilbert;

namespace {

const Complex kI{0.0, 1.0};

StateVector fock_state(int n_max, int nx, int ny)
{
    const HilbertSpace space = HilbertSpace::two_mode_fock(n_max);
    VectorXc v = VectorXc::Zero(space.dim());
    v(nx * (n_max + 1) + ny) = 1.0;
    return StateVector(space, v);
}

// P (A) P on the truncation-safe sector
double safe_norm(const QuantumOperator& p, const QuantumOperator& a)
{
    return (p * a * p).norm();
}

top::InteractionParams couplings(double theta, double theta_prime, double chi)
{
    top::InteractionParams p;
    p.theta = theta;
    p.theta_prime = theta_prime;
    p.chi = chi;
    return p;
}

std::vector<double> sorted_eigenvalues(const MatrixXc& m)
{
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(m);
    const Eigen::VectorXd v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

// Eigenvector of L_x with eigenvalue j - k.
StateVector lx_state(double j, int k)
{
    const SpinOperators l = spin_operators(j);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(l.lx.matrix());
    const int idx = static_cast<int>(es.eigenvalues().size()) - 1 - k; // ascending order
    VectorXc v = es.eigenvectors().col(idx);
    v.normalize();
    return StateVector(l.lx.space(), v);
}

} // namespace

TEST_CASE("space dimensions")
{
    CHECK(HilbertSpace::two_mode_fock(3).dim() == 16);
    CHECK(HilbertSpace::spin(4).dim() == 9);
    CHECK(HilbertSpace::spin(0.5).dim() == 2);
    CHECK(HilbertSpace::tensor(HilbertSpace::two_mode_fock(3), HilbertSpace::spin(4)).dim() == 144);
    CHECK_THROWS_AS(HilbertSpace::two_mode_fock(0), DomainError);
    CHECK_THROWS_AS(HilbertSpace::spin(0.3), DomainError);
    CHECK_THROWS_AS(HilbertSpace::spin(0.0), DomainError);
}

TEST_CASE("ladder operators")
{
    const int n_max = 4;
    const FockModes f = two_mode_fock(n_max);
    const StateVector vac = fock_state(n_max, 0, 0);
    CHECK((f.a_x.matrix() * vac.amplitudes()).norm() == 0.0);
    CHECK((f.a_y.matrix() * vac.amplitudes()).norm() == 0.0);

    const QuantumOperator nx = f.a_x.adjoint() * f.a_x;
    const std::vector<double> ev = sorted_eigenvalues(nx.matrix());
    for (std::size_t k = 0; k < ev.size(); ++k) CHECK(ev[k] == doctest::Approx(static_cast<double>(k / (n_max + 1))));

    // [a, a^dagger] = 1 away from the top level of each mode.
    const QuantumOperator c = commutator(f.a_x, f.a_x.adjoint());
    for (int nxi = 0; nxi < n_max; ++nxi)
        for (int nyi = 0; nyi <= n_max; ++nyi) {
            const VectorXc v = fock_state(n_max, nxi, nyi).amplitudes();
            CHECK((c.matrix() * v - v).norm() < 1e-14);
        }
}

TEST_CASE("coherent states")
{
    const StateVector vac = coherent_polarization_state(0.0, 0.0, 3);
    CHECK(std::abs(vac.amplitudes()(0) - 1.0) < 1e-15);

    const int n_max = 16;
    const StateVector psi = coherent_polarization_state(1.0, 0.0, n_max);
    const FockModes f = two_mode_fock(n_max);
    CHECK(std::abs(expectation(f.a_x, psi) - 1.0) < 1e-6);
    CHECK(std::abs(expectation(f.a_y, psi)) < 1e-12);
    CHECK(expectation(f.a_x.adjoint() * f.a_x, psi).real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(expectation(stokes_operators(f.space).sx, psi).real() == doctest::Approx(1.0).epsilon(1e-8));

    const StateVector mixed = coherent_polarization_state({1.0, 0.5}, {0.0, -1.0}, n_max);
    CHECK(expectation(f.a_y.adjoint() * f.a_y, mixed).real() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("coherent truncation guard")
{
    CHECK_THROWS_AS(coherent_polarization_state(1.0, 0.0, 3), DomainError);  // above n_max/4
    CHECK_THROWS_AS(coherent_polarization_state(0.85, 0.0, 3), DomainError); // under the cap, tail 7e-3
    CHECK(coherent_truncation_deficit(0.85, 0.0, 3) > 1e-3);
    CHECK(coherent_truncation_deficit(1.0, 0.0, 16) < 1e-12);
    CHECK(coherent_truncation_deficit(2.0, 0.0, 16) > 1e-8);
}

TEST_CASE("Stokes algebra on the truncation-safe sector")
{
    for (int n_max : {1, 2, 3, 5}) {
        const HilbertSpace space = HilbertSpace::two_mode_fock(n_max);
        const StokesOperators s = stokes_operators(space);
        const QuantumOperator p = truncation_safe_projector(space);
        CHECK(s.s0.is_hermitian());
        CHECK(s.sx.is_hermitian());
        CHECK(s.sy.is_hermitian());
        CHECK(s.sz.is_hermitian());
        CHECK(safe_norm(p, commutator(s.sx, s.sy) - 2.0 * kI * s.sz) < 1e-12);
        CHECK(safe_norm(p, commutator(s.sy, s.sz) - 2.0 * kI * s.sx) < 1e-12);
        CHECK(safe_norm(p, commutator(s.sz, s.sx) - 2.0 * kI * s.sy) < 1e-12);
        // S^2 = S0 (S0 + 2)
        CHECK(safe_norm(p, s.sx * s.sx + s.sy * s.sy + s.sz * s.sz - s.s0 * (s.s0 + 2.0 * QuantumOperator::identity(space)))
              < 1e-12);

        const FockModes f = two_mode_fock(n_max);
        CHECK((s.s0 - f.a_x.adjoint() * f.a_x - f.a_y.adjoint() * f.a_y).norm() < 1e-12);
    }
    CHECK_THROWS_AS(stokes_operators(HilbertSpace::spin(1)), ContractViolation);
}

TEST_CASE("one x-polarized photon")
{
    const StateVector one = fock_state(2, 1, 0);
    const StokesOperators s = stokes_operators(one.space());
    CHECK(expectation(s.sx, one).real() == doctest::Approx(1.0));
    CHECK(std::abs(expectation(s.sy, one)) < 1e-15);
    CHECK(std::abs(expectation(s.sz, one)) < 1e-15);
    CHECK(expectation(s.s0, one).real() == doctest::Approx(1.0));
}

TEST_CASE("spin one-half is Pauli over two")
{
    const SpinOperators l = spin_operators(0.5);
    Eigen::Matrix2cd sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, -kI, kI, 0;
    sz << 1, 0, 0, -1;
    CHECK((l.lx.matrix() - 0.5 * sx).norm() < 1e-15);
    CHECK((l.ly.matrix() - 0.5 * sy).norm() < 1e-15);
    CHECK((l.lz.matrix() - 0.5 * sz).norm() < 1e-15);
}

TEST_CASE("spin algebra and Casimir")
{
    for (double j : {0.5, 1.0, 1.5, 4.0, 7.5, 10.0, 32.0}) {
        const SpinOperators l = spin_operators(j);
        CHECK((commutator(l.lx, l.ly) - kI * l.lz).norm() < 1e-12);
        CHECK((commutator(l.ly, l.lz) - kI * l.lx).norm() < 1e-12);
        CHECK((commutator(l.lz, l.lx) - kI * l.ly).norm() < 1e-12);
        const QuantumOperator one = QuantumOperator::identity(l.lx.space());
        CHECK((l.lx * l.lx + l.ly * l.ly + l.lz * l.lz - j * (j + 1) * one).norm() < 1e-12 * (1 + j * j));
        CHECK((l.l0_squared - j * (j + 1) * one).norm() == 0.0);
    }
}

TEST_CASE("coherent spin state along x")
{
    for (double j : {0.5, 2.0, 4.0, 10.0}) {
        const StateVector css = css_along_x(j);
        const SpinOperators l = spin_operators(j);
        CHECK(expectation(l.lx, css).real() == doctest::Approx(j).epsilon(1e-12));
        CHECK(std::abs(expectation(l.ly, css)) < 1e-12);
        CHECK(std::abs(expectation(l.lz, css)) < 1e-12);
        CHECK(variance(l.ly, css) == doctest::Approx(j / 2).epsilon(1e-12));
        CHECK(variance(l.lz, css) == doctest::Approx(j / 2).epsilon(1e-12));
    }
}

TEST_CASE("L_y eigenstates")
{
    const SpinOperators l = spin_operators(4);
    for (double m : {-4.0, -1.0, 0.0, 2.0, 4.0}) {
        const StateVector s = ly_eigenstate(4, m);
        CHECK(expectation(l.ly, s).real() == doctest::Approx(m).epsilon(1e-12));
        CHECK(variance(l.ly, s) < 1e-12);
    }
    CHECK_THROWS_AS(ly_eigenstate(4, 0.5), DomainError);
}

TEST_CASE("states must be normalized")
{
    CHECK_THROWS_AS(StateVector(HilbertSpace::spin(1), VectorXc::Ones(3)), ContractViolation);
    CHECK_THROWS_AS(StateVector(HilbertSpace::spin(1), VectorXc::Ones(2)), ContractViolation);
}

TEST_CASE("evolution operator special cases")
{
    const int n_max = 3;
    const double j = 4;
    const HilbertSpace ph = HilbertSpace::two_mode_fock(n_max);
    const HilbertSpace sp = HilbertSpace::spin(j);

    const QuantumOperator b0 = evolution_operator(couplings(0, 0, 0), n_max, j);
    CHECK((b0 - QuantumOperator::identity(b0.space())).norm() < 1e-13);

    const QuantumOperator b1 = evolution_operator(couplings(0.37, 0, 0), n_max, j);
    const QuantumOperator product =
        tensor(hermitian_exponential(stokes_operators(ph).sx, 0.37), QuantumOperator::identity(sp));
    CHECK((b1 - product).norm() < 1e-12);
    CHECK(b1.is_unitary());

    const QuantumOperator bh = evolution_operator(couplings(0, 0, 0.8), 2, 0.5);
    CHECK((bh - std::exp(-kI * 0.2) * QuantumOperator::identity(bh.space())).norm() < 1e-13);

    CHECK_THROWS_AS(evolution_operator(couplings(0.1, 0.1, 0.1), n_max, j, 143), ResourceError);
    CHECK_NOTHROW(evolution_operator(couplings(0.1, 0.1, 0.1), n_max, j, 144));
}

TEST_CASE("Heisenberg map preserves trace, spectrum and Hermiticity")
{
    const int n_max = 2;
    const double j = 2;
    const HilbertSpace ph = HilbertSpace::two_mode_fock(n_max);
    const HilbertSpace sp = HilbertSpace::spin(j);
    const QuantumOperator sz = tensor(stokes_operators(ph).sz, QuantumOperator::identity(sp));
    const QuantumOperator lz = tensor(QuantumOperator::identity(ph), spin_operators(j).lz);
    const QuantumOperator o = sz + 0.3 * (sz * lz);

    const QuantumOperator one = QuantumOperator::identity(o.space());
    CHECK((heisenberg_map(one, o) - o).norm() == 0.0);

    const QuantumOperator b = evolution_operator(couplings(0.4, -0.7, 0.25), n_max, j);
    const QuantumOperator mapped = heisenberg_map(b, o);
    CHECK(std::abs(mapped.matrix().trace() - o.matrix().trace()) < 1e-10);
    CHECK(mapped.is_hermitian());
    const std::vector<double> before = sorted_eigenvalues(o.matrix());
    const std::vector<double> after = sorted_eigenvalues(mapped.matrix());
    for (std::size_t k = 0; k < before.size(); ++k) CHECK(std::abs(before[k] - after[k]) < 1e-10);

    const QuantumOperator spin_only = spin_operators(j).lz;
    CHECK_THROWS_AS(heisenberg_map(b, spin_only), ContractViolation);
}

TEST_CASE("L_y is a QND observable, L_z is not")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n_max = 2;
    const double j = 2;
    const HilbertSpace ph = HilbertSpace::two_mode_fock(n_max);
    const QuantumOperator ly = tensor(QuantumOperator::identity(ph), spin_operators(j).ly);
    const QuantumOperator lz = tensor(QuantumOperator::identity(ph), spin_operators(j).lz);
    for (int k = 0; k < 100; ++k) {
        const QuantumOperator b = evolution_operator(couplings(u(rng), u(rng), u(rng)), n_max, j);
        CHECK(qnd_commutator_norm(b, ly) < 1e-10);
        CHECK(b.unitarity_residual() < 1e-10);
    }
    CHECK(qnd_commutator_norm(evolution_operator(couplings(0.1, 0.1, 0), n_max, j), lz) > 1e-3);
}

TEST_CASE("without theta', only twisting disturbs L_z")
{
    const int n_max = 2;
    const double j = 2;
    const HilbertSpace ph = HilbertSpace::two_mode_fock(n_max);
    const SpinOperators l = spin_operators(j);
    const QuantumOperator lz = tensor(QuantumOperator::identity(ph), l.lz);

    CHECK(qnd_commutator_norm(evolution_operator(couplings(0.6, 0, 0), n_max, j), lz) < 1e-12);

    const double chi = 0.45;
    const double expected = std::sqrt(static_cast<double>(ph.dim()))
                            * commutator(l.lz, hermitian_exponential(l.ly * l.ly, -chi)).norm();
    const double got = qnd_commutator_norm(evolution_operator(couplings(0.6, 0, chi), n_max, j), lz);
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("linearized map is exact at zero coupling")
{
    const StateVector probe = coherent_polarization_state(0.1, 0.0, 3);
    const LinearizationReport r = linearized_comparison(couplings(0, 0, 0), 3, 4, probe, css_along_x(4));
    CHECK(r.max_deviation < 1e-15);
    CHECK_FALSE(r.regime_violation);
    CHECK(linearized_comparison(couplings(0.2, 0, 0), 3, 4, probe, css_along_x(4)).regime_violation);
}

TEST_CASE("linearized map: measured convergence per row")
{
    const int n_max = 3;
    const double j = 4;
    const StateVector probe = coherent_polarization_state(0.1, 0.0, n_max);
    const std::array<double, 3> thetas{0.05, 0.025, 0.0125};

    // CSS along x, x-polarized probe: <L_y> = 0 leaves only the S_x row, which is second order.
    std::array<double, 3> sx{};
    for (std::size_t i = 0; i < 3; ++i) {
        const LinearizationReport r =
            linearized_comparison(couplings(thetas[i], 2 * thetas[i] / (2 * j), 0), n_max, j, probe, css_along_x(j));
        CHECK(r.deviation[1] < 1e-15);
        CHECK(r.deviation[2] < 1e-15);
        CHECK(r.max_deviation == r.deviation[0]);
        sx[i] = r.deviation[0];
    }
    CHECK(convergence_order(thetas, sx) == doctest::Approx(2.0).epsilon(0.01));

    // With <L_y> != 0 the measured S_z row is better than second order.
    const StateVector tilted = ly_eigenstate(j, 2);
    std::array<double, 3> sz{};
    for (std::size_t i = 0; i < 3; ++i)
        sz[i] = linearized_comparison(couplings(thetas[i], 2 * thetas[i] / (2 * j), 0), n_max, j, probe, tilted)
                    .deviation[2];
    CHECK(convergence_order(thetas, sz) >= 2.5);
}

TEST_CASE("S_z responds to S_y with slope -2 theta")
{
    const int n_max = 3;
    const double j = 4;
    const double theta = 0.01;
    const StateVector css = css_along_x(j);
    auto response = [&](double eps) {
        // <S_y> = -2 Re(beta* gamma)
        const StateVector probe = coherent_polarization_state(0.1, eps, n_max);
        const LinearizationReport r =
            linearized_comparison(couplings(theta, 2 * theta / (2 * j), 0), n_max, j, probe, css);
        const double sy_in = expectation(stokes_operators(probe.space()).sy, probe).real();
        return std::make_pair(sy_in, r.exact[2]);
    };
    const auto [sy_p, sz_p] = response(1e-3);
    const auto [sy_m, sz_m] = response(-1e-3);
    const double slope = (sz_p - sz_m) / (sy_p - sy_m);
    CHECK(std::abs(slope + 2 * theta) < 1e-5);
}

TEST_CASE("convergence order fit")
{
    const std::array<double, 3> h{0.1, 0.05, 0.025};
    const std::array<double, 3> e{3e-3, 3e-3 / 8, 3e-3 / 64};
    CHECK(convergence_order(h, e) == doctest::Approx(3.0));
    const std::array<double, 1> one{1.0};
    CHECK_THROWS_AS(convergence_order(one, one), ContractViolation);
}

TEST_CASE("twisting squeezes the coherent spin state")
{
    const TwistResult t0 = twist_squeezing(0.0, 10);
    CHECK(t0.min_variance == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(t0.mean_lx == doctest::Approx(10.0).epsilon(1e-12));

    for (double chi_t : {0.02, 0.05, 0.1}) {
        const TwistResult t = twist_squeezing(chi_t, 10);
        CHECK(t.min_variance < 5.0);
        CHECK(t.mean_lx < 10.0);
    }

    // Integer j revives at chi t = pi.
    CHECK(twist_squeezing(3.141592653589793, 10).min_variance == doctest::Approx(5.0).epsilon(1e-9));

    for (double chi_t : {0.0, 0.3, 1.0, 2.5})
        CHECK(twist_squeezing(chi_t, 0.5).min_variance == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("twist minimum agrees with a brute-force direction scan")
{
    const double j = 10;
    const double chi_t = 0.08;
    const SpinOperators l = spin_operators(j);
    VectorXc v = hermitian_exponential(l.ly * l.ly, -chi_t).matrix() * css_along_x(j).amplitudes();
    const StateVector psi(l.ly.space(), v);

    double best = 1e300;
    double best_angle = 0.0;
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
        const double a = -1.5707963267948966 + 3.141592653589793 * k / steps;
        const double var = variance(std::cos(a) * l.ly + std::sin(a) * l.lz, psi);
        if (var < best) {
            best = var;
            best_angle = a;
        }
    }
    const TwistResult t = twist_squeezing(chi_t, j);
    CHECK(t.min_variance == doctest::Approx(best).epsilon(1e-6));
    CHECK(std::abs(t.optimal_angle - best_angle) < 1e-3);
}

TEST_CASE("angle-operator approximation improves as 1/j")
{
    for (double j : {4.0, 16.0, 64.0}) {
        const SpinOperators l = spin_operators(j);

        // On the coherent state the mean commutator is exact.
        const StateVector css = css_along_x(j);
        const Complex ratio = expectation(commutator(l.ly, l.lz), css) / expectation(l.lx, css);
        CHECK(std::abs(ratio - kI) < 1e-12);
        CHECK(variance(l.ly, css) * variance(l.lz, css) == doctest::Approx(j * j / 4).epsilon(1e-12));

        // One quantum above the coherent state: oscillator values are [q, p] = i and Var(q) = 3/2.
        const StateVector one = lx_state(j, 1);
        const Complex c = expectation(commutator(l.ly * (1.0 / j), l.lz), one);
        CHECK(std::abs(c - kI) == doctest::Approx(1.0 / j).epsilon(1e-10));
        CHECK(std::abs(variance(l.ly, one) / j - 1.5) == doctest::Approx(0.5 / j).epsilon(1e-10));
    }
}

TEST_CASE("operator bookkeeping")
{
    const SpinOperators l = spin_operators(1);
    CHECK_THROWS_AS(l.lx + QuantumOperator::identity(HilbertSpace::spin(2)), ContractViolation);
    CHECK_THROWS_AS(hermitian_exponential(l.lx * kI, 1.0), ContractViolation);
    CHECK(hermitian_exponential(l.lx, 0.7).is_unitary());
    CHECK((l.lx.adjoint() - l.lx).norm() == 0.0);
}
