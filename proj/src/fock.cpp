#include "h10/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "h10/error.hpp"

namespace h10 {

FockBasis::FockBasis(std::size_t modes, std::uint64_t cutoff, std::size_t dimension_guard)
    : modes_(modes), cutoff_(cutoff), dimension_(1), strides_(modes, 1) {
    if (modes == 0) throw ConfigError("basis needs at least one mode");
    const std::uint64_t per_mode = cutoff + 1;
    for (std::size_t i = 0; i < modes; ++i) {
        if (per_mode == 0 || dimension_ > dimension_guard / per_mode) {
            throw GuardError("basis dimension (" + std::to_string(cutoff) + "+1)^" +
                             std::to_string(modes) + " exceeds guard " +
                             std::to_string(dimension_guard) + "; reduce the cutoff");
        }
        dimension_ *= per_mode;
    }
    for (std::size_t i = modes; i-- > 1;) strides_[i - 1] = strides_[i] * per_mode;
}

std::size_t FockBasis::index_of(const Occupation& n) const {
    if (n.size() != modes_) {
        throw DimensionError("occupation tuple has " + std::to_string(n.size()) +
                             " entries, basis has " + std::to_string(modes_) + " modes");
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < modes_; ++i) {
        if (n[i] > cutoff_) throw DimensionError("occupation exceeds cutoff");
        index += n[i] * strides_[i];
    }
    return index;
}

Occupation FockBasis::tuple_of(std::size_t index) const {
    if (index >= dimension_) throw DimensionError("basis index out of range");
    Occupation n(modes_);
    for (std::size_t i = 0; i < modes_; ++i) n[i] = occupation(index, i);
    return n;
}

std::uint64_t FockBasis::occupation(std::size_t index, std::size_t mode) const {
    return (index / strides_[mode]) % (cutoff_ + 1);
}

// ---------------------------------------------------------------- Operator

double hermiticity_defect(const SparseMatrix& m) {
    const SparseMatrix diff = m - SparseMatrix(m.adjoint());
    double worst = 0.0;
    for (Eigen::Index c = 0; c < diff.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(diff, c); it; ++it) worst = std::max(worst, std::abs(it.value()));
    }
    return worst;
}

Operator::Operator(Eigen::VectorXd diagonal) : storage_(std::move(diagonal)), hermitian_(true) {}

Operator::Operator(SparseMatrix matrix, bool hermitian) : storage_(std::move(matrix)) {
    const auto& m = std::get<SparseMatrix>(storage_);
    if (m.rows() != m.cols()) throw DimensionError("operator matrix must be square");
    if (hermitian) {
        const double defect = hermiticity_defect(m);
        if (defect > kHermitianTolerance) {
            throw NumericError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
        }
    }
    hermitian_ = hermitian;
}

std::size_t Operator::dimension() const noexcept {
    if (is_diagonal()) return static_cast<std::size_t>(std::get<Eigen::VectorXd>(storage_).size());
    return static_cast<std::size_t>(std::get<SparseMatrix>(storage_).rows());
}

SparseMatrix Operator::to_sparse() const {
    if (!is_diagonal()) return std::get<SparseMatrix>(storage_);
    const auto& d = diagonal();
    SparseMatrix m(d.size(), d.size());
    m.reserve(Eigen::VectorXi::Constant(d.size(), 1));
    for (Eigen::Index i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
    m.makeCompressed();
    return m;
}

Eigen::MatrixXcd Operator::to_dense() const {
    if (is_diagonal()) return diagonal().cast<Complex>().asDiagonal();
    return Eigen::MatrixXcd(std::get<SparseMatrix>(storage_));
}

Eigen::VectorXcd Operator::apply(const Eigen::VectorXcd& v) const {
    if (static_cast<std::size_t>(v.size()) != dimension()) throw DimensionError("vector size mismatch");
    if (is_diagonal()) return diagonal().cast<Complex>().cwiseProduct(v);
    return std::get<SparseMatrix>(storage_) * v;
}

double Operator::max_abs_entry() const {
    if (is_diagonal()) return diagonal().size() ? diagonal().cwiseAbs().maxCoeff() : 0.0;
    const auto& m = std::get<SparseMatrix>(storage_);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.nonZeros(); ++i) worst = std::max(worst, std::abs(m.valuePtr()[i]));
    return worst;
}

Operator Operator::adjoint() const {
    if (is_diagonal()) return *this;
    return Operator(SparseMatrix(std::get<SparseMatrix>(storage_).adjoint()), hermitian_);
}

// ---------------------------------------------------------------- builders

namespace {

void check_mode(const FockBasis& basis, std::size_t mode) {
    if (mode >= basis.modes()) {
        throw DimensionError("mode " + std::to_string(mode) + " out of range for " +
                             std::to_string(basis.modes()) + " modes");
    }
}

} // namespace

Operator annihilation_operator(const FockBasis& basis, std::size_t mode) {
    check_mode(basis, mode);
    const auto d = static_cast<Eigen::Index>(basis.dimension());
    const auto st = static_cast<Eigen::Index>(basis.stride(mode));
    std::vector<Eigen::Triplet<Complex>> entries;
    for (Eigen::Index j = 0; j < d; ++j) {
        const auto n = basis.occupation(static_cast<std::size_t>(j), mode);
        if (n > 0) entries.emplace_back(j - st, j, std::sqrt(static_cast<double>(n)));
    }
    SparseMatrix m(d, d);
    m.setFromTriplets(entries.begin(), entries.end());
    return Operator(std::move(m), false);
}

Operator number_operator(const FockBasis& basis, std::size_t mode) {
    check_mode(basis, mode);
    Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dimension()));
    for (Eigen::Index j = 0; j < d.size(); ++j) {
        d[j] = static_cast<double>(basis.occupation(static_cast<std::size_t>(j), mode));
    }
    return Operator(std::move(d));
}

Operator build_problem_hamiltonian(const Polynomial& p, const FockBasis& basis) {
    if (p.arity() != basis.modes()) {
        throw DimensionError("polynomial has " + std::to_string(p.arity()) + " variables, basis has " +
                             std::to_string(basis.modes()) + " modes");
    }
    static const BigInt kExactLimit = BigInt(1) << 53;
    Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t j = 0; j < basis.dimension(); ++j) {
        const BigInt v = evaluate_squared(p, basis.tuple_of(j));
        if (v >= kExactLimit) {
            throw GuardError("H_P entry " + v.str() + " at basis index " + std::to_string(j) +
                             " is not exactly representable as a double; reduce the cutoff");
        }
        d[static_cast<Eigen::Index>(j)] = v.convert_to<double>();
    }
    return Operator(std::move(d));
}

Operator build_initial_hamiltonian(const FockBasis& basis, const std::vector<Complex>& alpha) {
    if (alpha.size() != basis.modes()) {
        throw DimensionError("alpha has " + std::to_string(alpha.size()) + " entries, basis has " +
                             std::to_string(basis.modes()) + " modes");
    }
    for (const auto& a : alpha) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw ConfigError("alpha must be finite");
    }
    const auto d = static_cast<Eigen::Index>(basis.dimension());
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(static_cast<std::size_t>(d) * (1 + 2 * basis.modes()));
    for (Eigen::Index j = 0; j < d; ++j) {
        double diag = 0.0;
        for (std::size_t i = 0; i < basis.modes(); ++i) {
            const auto n = basis.occupation(static_cast<std::size_t>(j), i);
            diag += static_cast<double>(n) + std::norm(alpha[i]);
            if (n == 0) continue;
            const auto lower = j - static_cast<Eigen::Index>(basis.stride(i));
            const double amp = std::sqrt(static_cast<double>(n));
            // -conj(alpha) a   and   -alpha a^dag
            entries.emplace_back(lower, j, -std::conj(alpha[i]) * amp);
            entries.emplace_back(j, lower, -alpha[i] * amp);
        }
        entries.emplace_back(j, j, diag);
    }
    SparseMatrix m(d, d);
    m.setFromTriplets(entries.begin(), entries.end());
    return Operator(std::move(m), true);
}

std::vector<std::size_t> poorly_truncated_modes(const FockBasis& basis,
                                                const std::vector<Complex>& alpha) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (std::norm(alpha[i]) > static_cast<double>(basis.cutoff()) / 2.0) out.push_back(i);
    }
    return out;
}

Operator interpolate(const Operator& initial, const Operator& problem, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("interpolation parameter s must lie in [0,1]");
    if (initial.dimension() != problem.dimension()) throw DimensionError("operator dimensions differ");
    if (s == 0.0) return initial;
    if (s == 1.0) return problem;
    if (initial.is_diagonal() && problem.is_diagonal()) {
        return Operator(Eigen::VectorXd((1.0 - s) * initial.diagonal() + s * problem.diagonal()));
    }
    SparseMatrix m = Complex(1.0 - s, 0.0) * initial.to_sparse() + Complex(s, 0.0) * problem.to_sparse();
    return Operator(std::move(m), initial.is_hermitian() && problem.is_hermitian());
}

// ---------------------------------------------------------------- spectrum

double default_degeneracy_tolerance(const Operator& h) {
    return 1e-8 * (1.0 + h.max_abs_entry());
}

namespace {

std::vector<std::vector<std::size_t>> group_levels(const Eigen::VectorXd& ascending, double tol) {
    std::vector<std::vector<std::size_t>> groups;
    for (Eigen::Index i = 0; i < ascending.size(); ++i) {
        if (i == 0 || ascending[i] - ascending[i - 1] >= tol) groups.emplace_back();
        groups.back().push_back(static_cast<std::size_t>(i));
    }
    return groups;
}

} // namespace

SpectralDecomposition spectral_decomposition(const Operator& h, double degeneracy_tol,
                                             std::size_t dense_guard) {
    if (!h.is_hermitian()) throw NumericError("spectral decomposition requires a Hermitian operator");
    const double tol = degeneracy_tol < 0.0 ? default_degeneracy_tolerance(h) : degeneracy_tol;
    const auto d = static_cast<Eigen::Index>(h.dimension());
    SpectralDecomposition out;

    if (h.is_diagonal()) {
        const auto& diag = h.diagonal();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return diag[a] < diag[b]; });
        out.eigenvalues.resize(d);
        out.eigenvectors = Eigen::MatrixXcd::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            out.eigenvalues[i] = diag[order[static_cast<std::size_t>(i)]];
            out.eigenvectors(order[static_cast<std::size_t>(i)], i) = 1.0;
        }
    } else {
        if (h.dimension() > dense_guard) {
            throw GuardError("dimension " + std::to_string(h.dimension()) +
                             " exceeds dense eigensolver guard " + std::to_string(dense_guard));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.to_dense());
        if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
        out.eigenvalues = solver.eigenvalues();
        out.eigenvectors = solver.eigenvectors();
    }
    out.degeneracy_groups = group_levels(out.eigenvalues, tol);
    return out;
}

} // namespace h10
