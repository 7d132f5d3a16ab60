#include "qnd/hilbert.hpp"

#include "qnd/constants.hpp"
#include "qnd/csv.hpp"
#include "qnd/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace qnd::hilbert {

namespace {

const Complex kI{0.0, 1.0};

int checked_two_j(double j)
{
    const double two_j = 2.0 * j;
    const double r = std::round(two_j);
    if (!(j > 0.0) || std::abs(two_j - r) > 1e-12)
        throw DomainError("spin j must be a positive half-integer, got " + std::to_string(j));
    return static_cast<int>(r);
}

void require_same_space(const QuantumOperator& a, const QuantumOperator& b, const char* what)
{
    if (!(a.space() == b.space()))
        throw ContractViolation(std::string(what) + ": operators act on different spaces");
}

MatrixXc single_mode_lowering(int n_max)
{
    MatrixXc a = MatrixXc::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// Truncated single-mode coherent amplitudes (unnormalized by the tail).
VectorXc coherent_amplitudes(Complex alpha, int n_max)
{
    VectorXc c(n_max + 1);
    Complex term = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n <= n_max; ++n) {
        c(n) = term;
        term *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return c;
}

} // namespace

// --- spaces ----------------------------------------------------------------

HilbertSpace HilbertSpace::two_mode_fock(int n_max)
{
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    return {Kind::two_mode_fock, n_max, 0, (n_max + 1) * (n_max + 1)};
}

HilbertSpace HilbertSpace::spin(double j)
{
    const int two_j = checked_two_j(j);
    return {Kind::spin, 0, two_j, two_j + 1};
}

HilbertSpace HilbertSpace::tensor(const HilbertSpace& photon, const HilbertSpace& spin)
{
    if (photon.kind() != Kind::two_mode_fock || spin.kind() != Kind::spin)
        throw ContractViolation("tensor space expects (two-mode Fock, spin)");
    return {Kind::tensor, photon.n_max(), spin.two_j(), photon.dim() * spin.dim()};
}

// --- operators -------------------------------------------------------------

QuantumOperator::QuantumOperator(HilbertSpace space, MatrixXc m) : space_(space), m_(std::move(m))
{
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
        throw ContractViolation("operator matrix does not match space dimension");
}

QuantumOperator QuantumOperator::identity(const HilbertSpace& space)
{
    return {space, MatrixXc::Identity(space.dim(), space.dim())};
}

QuantumOperator QuantumOperator::adjoint() const
{
    return {space_, m_.adjoint()};
}

double QuantumOperator::hermiticity_residual() const
{
    return (m_ - m_.adjoint()).norm();
}

double QuantumOperator::unitarity_residual() const
{
    return (m_.adjoint() * m_ - MatrixXc::Identity(m_.rows(), m_.cols())).norm();
}

QuantumOperator& QuantumOperator::operator+=(const QuantumOperator& o)
{
    require_same_space(*this, o, "operator+");
    m_ += o.m_;
    return *this;
}

QuantumOperator& QuantumOperator::operator-=(const QuantumOperator& o)
{
    require_same_space(*this, o, "operator-");
    m_ -= o.m_;
    return *this;
}

QuantumOperator& QuantumOperator::operator*=(Complex s)
{
    m_ *= s;
    return *this;
}

QuantumOperator operator*(const QuantumOperator& a, const QuantumOperator& b)
{
    require_same_space(a, b, "operator*");
    return {a.space(), a.matrix() * b.matrix()};
}

StateVector::StateVector(HilbertSpace space, VectorXc v) : space_(space), v_(std::move(v))
{
    if (v_.size() != space_.dim()) throw ContractViolation("state size does not match space dimension");
    if (std::abs(v_.norm() - 1.0) > kNormTol) throw ContractViolation("state vector is not normalized");
}

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b)
{
    return a * b - b * a;
}

QuantumOperator tensor(const QuantumOperator& photon, const QuantumOperator& spin)
{
    const HilbertSpace space = HilbertSpace::tensor(photon.space(), spin.space());
    return {space, Eigen::kroneckerProduct(photon.matrix(), spin.matrix()).eval()};
}

StateVector tensor(const StateVector& photon, const StateVector& spin)
{
    const HilbertSpace space = HilbertSpace::tensor(photon.space(), spin.space());
    VectorXc v = Eigen::kroneckerProduct(photon.amplitudes(), spin.amplitudes()).eval();
    v.normalize();
    return {space, std::move(v)};
}

Complex expectation(const QuantumOperator& op, const StateVector& psi)
{
    if (!(op.space() == psi.space())) throw ContractViolation("expectation: space mismatch");
    return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

double variance(const QuantumOperator& op, const StateVector& psi)
{
    const double mean = expectation(op, psi).real();
    return expectation(op * op, psi).real() - mean * mean;
}

QuantumOperator hermitian_exponential(const QuantumOperator& h, double s)
{
    if (!h.is_hermitian()) throw ContractViolation("hermitian_exponential: generator is not Hermitian");
    // Symmetrize to strip rounding-level anti-Hermitian parts before diagonalizing.
    const MatrixXc sym = 0.5 * (h.matrix() + h.matrix().adjoint());
    const Eigen::SelfAdjointEigenSolver<MatrixXc> es(sym);
    if (es.info() != Eigen::Success) throw ContractViolation("eigendecomposition failed");
    const VectorXc phases = (kI * s * es.eigenvalues().cast<Complex>()).array().exp();
    MatrixXc u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return {h.space(), std::move(u)};
}

// --- photon modes ----------------------------------------------------------

FockModes two_mode_fock(int n_max)
{
    const HilbertSpace space = HilbertSpace::two_mode_fock(n_max);
    const MatrixXc a = single_mode_lowering(n_max);
    const MatrixXc id = MatrixXc::Identity(n_max + 1, n_max + 1);
    return {space,
            QuantumOperator(space, Eigen::kroneckerProduct(a, id).eval()),
            QuantumOperator(space, Eigen::kroneckerProduct(id, a).eval())};
}

StokesOperators stokes_operators(const HilbertSpace& space)
{
    if (space.kind() != HilbertSpace::Kind::two_mode_fock)
        throw ContractViolation("Stokes operators need a two-mode Fock space");
    const FockModes modes = two_mode_fock(space.n_max());
    const double r = 1.0 / std::sqrt(2.0);
    const QuantumOperator ap = r * (modes.a_x + kI * modes.a_y);
    const QuantumOperator am = r * (modes.a_x - kI * modes.a_y);
    const QuantumOperator apd = ap.adjoint();
    const QuantumOperator amd = am.adjoint();
    return {apd * ap + amd * am,
            apd * am + amd * ap,
            -kI * (apd * am - amd * ap),
            apd * ap - amd * am};
}

QuantumOperator truncation_safe_projector(const HilbertSpace& space)
{
    if (space.kind() != HilbertSpace::Kind::two_mode_fock)
        throw ContractViolation("truncation projector needs a two-mode Fock space");
    const int n = space.n_max();
    MatrixXc p = MatrixXc::Zero(space.dim(), space.dim());
    for (int nx = 0; nx <= n; ++nx)
        for (int ny = 0; nx + ny <= n; ++ny) {
            const int k = nx * (n + 1) + ny;
            p(k, k) = 1.0;
        }
    return {space, std::move(p)};
}

double coherent_truncation_deficit(Complex beta, Complex gamma, int n_max)
{
    const double kept = coherent_amplitudes(beta, n_max).squaredNorm()
                        * coherent_amplitudes(gamma, n_max).squaredNorm();
    return std::max(0.0, 1.0 - kept);
}

StateVector coherent_polarization_state(Complex beta, Complex gamma, int n_max)
{
    const HilbertSpace space = HilbertSpace::two_mode_fock(n_max);
    const double mean = std::norm(beta) + std::norm(gamma);
    if (mean > 0.25 * n_max)
        throw DomainError("coherent amplitude too large for truncation: |beta|^2 + |gamma|^2 = "
                          + std::to_string(mean) + " > n_max/4");
    const double deficit = coherent_truncation_deficit(beta, gamma, n_max);
    if (deficit > 1e-8)
        throw DomainError("coherent state truncation deficit " + std::to_string(deficit)
                          + " exceeds 1e-8; raise n_max");
    VectorXc v = Eigen::kroneckerProduct(coherent_amplitudes(beta, n_max),
                                         coherent_amplitudes(gamma, n_max)).eval();
    v.normalize();
    return {space, std::move(v)};
}

// --- spin ------------------------------------------------------------------

SpinOperators spin_operators(double j)
{
    const HilbertSpace space = HilbertSpace::spin(j);
    const int d = space.dim();
    MatrixXc raise = MatrixXc::Zero(d, d);
    MatrixXc lz = MatrixXc::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = j - k;
        lz(k, k) = m;
        // L_+ |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>, and |j, m+1> has index k - 1.
        if (k > 0) raise(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    const MatrixXc lower = raise.adjoint();
    return {QuantumOperator(space, 0.5 * (raise + lower)),
            QuantumOperator(space, (raise - lower) / (2.0 * kI)),
            QuantumOperator(space, lz),
            QuantumOperator(space, j * (j + 1.0) * MatrixXc::Identity(d, d))};
}

namespace {

StateVector top_eigenstate(const QuantumOperator& op, double value)
{
    const Eigen::SelfAdjointEigenSolver<MatrixXc> es(op.matrix());
    Eigen::Index best = 0;
    (es.eigenvalues().array() - value).abs().minCoeff(&best);
    if (std::abs(es.eigenvalues()(best) - value) > 1e-9)
        throw DomainError("requested eigenvalue " + std::to_string(value) + " not in spectrum");
    VectorXc v = es.eigenvectors().col(best);
    // Fix the global phase so the largest component is real positive.
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    v *= std::conj(v(k)) / std::abs(v(k));
    v.normalize();
    return {op.space(), std::move(v)};
}

} // namespace

StateVector css_along_x(double j)
{
    return top_eigenstate(spin_operators(j).lx, j);
}

StateVector ly_eigenstate(double j, double m)
{
    return top_eigenstate(spin_operators(j).ly, m);
}

// --- interaction -----------------------------------------------------------

QuantumOperator evolution_operator(const top::InteractionParams& params, int n_max, double j,
                                   int dimension_cap)
{
    const HilbertSpace photon = HilbertSpace::two_mode_fock(n_max);
    const HilbertSpace spin = HilbertSpace::spin(j);
    const long long dim = static_cast<long long>(photon.dim()) * spin.dim();
    if (dim > dimension_cap)
        throw ResourceError("combined dimension " + std::to_string(dim) + " exceeds cap "
                            + std::to_string(dimension_cap));

    const StokesOperators s = stokes_operators(photon);
    const SpinOperators l = spin_operators(j);
    const QuantumOperator one_photon = QuantumOperator::identity(photon);
    const QuantumOperator one_spin = QuantumOperator::identity(spin);

    const QuantumOperator generator = params.theta * tensor(s.sx, one_spin)
                                      + params.theta_prime * tensor(s.sy, l.ly)
                                      - params.chi * tensor(one_photon, l.ly * l.ly);
    return hermitian_exponential(generator, 1.0);
}

QuantumOperator heisenberg_map(const QuantumOperator& b, const QuantumOperator& o)
{
    require_same_space(b, o, "heisenberg_map");
    return b.adjoint() * o * b;
}

double qnd_commutator_norm(const QuantumOperator& b, const QuantumOperator& lifted)
{
    require_same_space(b, lifted, "qnd_commutator_norm");
    return commutator(lifted, b).norm();
}

Eigen::Matrix3d linearized_stokes_map(double theta, double theta_prime, double ly)
{
    const double t2 = theta * theta;
    const double cross = 2.0 * theta * theta_prime * ly;
    const double kick = 2.0 * theta_prime * ly;
    Eigen::Matrix3d m;
    m << t2 + 1.0, cross, -kick,
         cross, 1.0 - t2, 2.0 * theta,
         kick, -2.0 * theta, 1.0;
    return m;
}

LinearizationReport linearized_comparison(const top::InteractionParams& params, int n_max, double j,
                                          const StateVector& probe, const StateVector& spin)
{
    const HilbertSpace photon_space = HilbertSpace::two_mode_fock(n_max);
    const HilbertSpace spin_space = HilbertSpace::spin(j);
    if (!(probe.space() == photon_space) || !(spin.space() == spin_space))
        throw ContractViolation("linearized_comparison: states do not live on (n_max, j) spaces");

    LinearizationReport r;
    r.regime_violation = params.theta > 0.1;

    const StokesOperators s = stokes_operators(photon_space);
    const SpinOperators l = spin_operators(j);
    const QuantumOperator one_spin = QuantumOperator::identity(spin_space);
    const QuantumOperator b = evolution_operator(params, n_max, j);
    const StateVector joint = tensor(probe, spin);

    const std::array<const QuantumOperator*, 3> stokes{&s.sx, &s.sy, &s.sz};
    Eigen::Vector3d input;
    for (int i = 0; i < 3; ++i) {
        input(i) = expectation(*stokes[i], probe).real();
        r.exact[i] = expectation(heisenberg_map(b, tensor(*stokes[i], one_spin)), joint).real();
    }
    r.ly_mean = expectation(l.ly, spin).real();
    const Eigen::Vector3d predicted = linearized_stokes_map(params.theta, params.theta_prime, r.ly_mean) * input;
    for (int i = 0; i < 3; ++i) {
        r.predicted[i] = predicted(i);
        r.deviation[i] = std::abs(r.exact[i] - r.predicted[i]);
        r.max_deviation = std::max(r.max_deviation, r.deviation[i]);
    }
    return r;
}

double convergence_order(std::span<const double> steps, std::span<const double> errors)
{
    if (steps.size() != errors.size() || steps.size() < 2)
        throw ContractViolation("convergence_order needs at least two (step, error) pairs");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0) || !(errors[i] > 0.0))
            throw DomainError("convergence_order needs positive steps and errors");
        const double x = std::log(steps[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TwistResult twist_squeezing(double chi_t, double j)
{
    const SpinOperators l = spin_operators(j);
    const StateVector css = css_along_x(j);
    const QuantumOperator twist = hermitian_exponential(l.ly * l.ly, -chi_t);
    VectorXc v = twist.matrix() * css.amplitudes();
    v.normalize();
    const StateVector psi(css.space(), std::move(v));

    const double my = expectation(l.ly, psi).real();
    const double mz = expectation(l.lz, psi).real();
    Eigen::Matrix2d cov;
    cov(0, 0) = variance(l.ly, psi);
    cov(1, 1) = variance(l.lz, psi);
    cov(0, 1) = cov(1, 0) = 0.5 * expectation(l.ly * l.lz + l.lz * l.ly, psi).real() - my * mz;

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    TwistResult r;
    r.min_variance = es.eigenvalues()(0);
    const Eigen::Vector2d dir = es.eigenvectors().col(0);
    double a = std::atan2(dir(1), dir(0));
    if (a <= -0.5 * kPi) a += kPi;
    if (a > 0.5 * kPi) a -= kPi;
    r.optimal_angle = a;
    r.mean_lx = expectation(l.lx, psi).real();
    return r;
}

void dump_csv(const QuantumOperator& op, std::ostream& os)
{
    csv::Writer w(os);
    const MatrixXc& m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<csv::Cell> cells;
        cells.reserve(static_cast<std::size_t>(2 * m.cols()));
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            cells.emplace_back(m(r, c).real());
            cells.emplace_back(m(r, c).imag());
        }
        w.row(cells);
    }
}

void dump_csv(const StateVector& psi, std::ostream& os)
{
    csv::Writer w(os);
    for (Eigen::Index k = 0; k < psi.amplitudes().size(); ++k)
        w.row({psi.amplitudes()(k).real(), psi.amplitudes()(k).imag()});
}

} // namespace qnd::hilbert
