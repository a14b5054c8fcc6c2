#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "h10/diophantine.hpp"

namespace h10 {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr std::size_t kDefaultDimensionGuard = std::size_t{1} << 16;
inline constexpr std::size_t kDefaultDenseGuard = 4096;

/// Occupation tuple (n_1, ..., n_k), each n_i in [0, cutoff].
using Occupation = std::vector<std::uint64_t>;

/// Box-truncated multi-mode Fock basis. Index order is row-major over
/// occupation tuples with n_1 varying slowest.
class FockBasis {
public:
    FockBasis(std::size_t modes, std::uint64_t cutoff,
              std::size_t dimension_guard = kDefaultDimensionGuard);

    std::size_t modes() const noexcept { return modes_; }
    std::uint64_t cutoff() const noexcept { return cutoff_; }
    std::size_t dimension() const noexcept { return dimension_; }

    std::size_t index_of(const Occupation& n) const;
    Occupation tuple_of(std::size_t index) const;

    /// Occupation of `mode` (0-based) in basis state `index`.
    std::uint64_t occupation(std::size_t index, std::size_t mode) const;

    /// Index distance between tuples differing by one quantum in `mode`.
    std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

    friend bool operator==(const FockBasis& a, const FockBasis& b) {
        return a.modes_ == b.modes_ && a.cutoff_ == b.cutoff_;
    }

private:
    std::size_t modes_;
    std::uint64_t cutoff_;
    std::size_t dimension_;
    std::vector<std::size_t> strides_;
};

inline FockBasis build_basis(std::size_t modes, std::uint64_t cutoff,
                             std::size_t dimension_guard = kDefaultDimensionGuard) {
    return FockBasis(modes, cutoff, dimension_guard);
}

/// Finite operator on a truncated basis. Diagonal operators are stored as a
/// real vector; everything else as a sparse complex matrix. The hermitian
/// flag is set only after the 1e-12 entrywise symmetry check passes.
class Operator {
public:
    static constexpr double kHermitianTolerance = 1e-12;

    explicit Operator(Eigen::VectorXd diagonal);
    Operator(SparseMatrix matrix, bool hermitian);

    std::size_t dimension() const noexcept;
    bool is_diagonal() const noexcept { return std::holds_alternative<Eigen::VectorXd>(storage_); }
    bool is_hermitian() const noexcept { return hermitian_; }

    /// Throws std::bad_variant_access if the operator is not diagonal.
    const Eigen::VectorXd& diagonal() const { return std::get<Eigen::VectorXd>(storage_); }
    SparseMatrix to_sparse() const;
    Eigen::MatrixXcd to_dense() const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    double max_abs_entry() const;
    Operator adjoint() const;

private:
    std::variant<Eigen::VectorXd, SparseMatrix> storage_;
    bool hermitian_ = false;
};

/// Largest |A_ij - conj(A_ji)|.
double hermiticity_defect(const SparseMatrix& m);

/// Ladder operator a_mode (0-based mode), truncated to the box.
Operator annihilation_operator(const FockBasis& basis, std::size_t mode);
Operator number_operator(const FockBasis& basis, std::size_t mode);

/// Diagonal H_P with entry D(n)^2 on each basis tuple. Throws GuardError when
/// an entry is not exactly representable as a double (>= 2^53).
Operator build_problem_hamiltonian(const Polynomial& p, const FockBasis& basis);

/// H_I = sum_i (a_i^dag - conj(alpha_i)) (a_i - alpha_i). `alpha` must have one
/// entry per mode.
Operator build_initial_hamiltonian(const FockBasis& basis, const std::vector<Complex>& alpha);

/// Modes whose |alpha_i|^2 exceeds cutoff/2, where truncation visibly
/// distorts the coherent ground state.
std::vector<std::size_t> poorly_truncated_modes(const FockBasis& basis,
                                                const std::vector<Complex>& alpha);

/// (1-s) H_I + s H_P, s in [0,1]. Returns the endpoints exactly at s = 0, 1.
Operator interpolate(const Operator& initial, const Operator& problem, double s);

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // orthonormal columns
    std::vector<std::vector<std::size_t>> degeneracy_groups;

    const std::vector<std::size_t>& ground_group() const { return degeneracy_groups.front(); }
};

/// Default degeneracy tolerance 1e-8 (1 + max|H_ij|).
double default_degeneracy_tolerance(const Operator& h);

/// Full spectrum. Diagonal operators are sorted directly (ties by index);
/// others go through a dense Hermitian eigensolver limited to `dense_guard`.
/// A negative `degeneracy_tol` selects the default.
SpectralDecomposition spectral_decomposition(const Operator& h, double degeneracy_tol = -1.0,
                                             std::size_t dense_guard = kDefaultDenseGuard);

} // namespace h10
