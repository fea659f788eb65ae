#pragma once
// Sparse operators over interior unknowns and the direct linear solver.

#include <Eigen/Sparse>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdstab/grid.hpp"

namespace cdstab {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Compressed sparse matrix; duplicates summed, explicit zeros dropped.
class SparseOperator {
public:
    SparseOperator() = default;
    SparseOperator(int rows, int cols) : m_(rows, cols) {}
    explicit SparseOperator(SpMat m);

    static SparseOperator from_triplets(int rows, int cols, const std::vector<Triplet>& t);
    static SparseOperator identity(int n);
    static SparseOperator diagonal(const Vec& d);

    int rows() const { return static_cast<int>(m_.rows()); }
    int cols() const { return static_cast<int>(m_.cols()); }
    long nnz() const { return static_cast<long>(m_.nonZeros()); }
    double coeff(int r, int c) const { return m_.coeff(r, c); }
    const SpMat& mat() const { return m_; }

    Vec apply(const Vec& x) const { return m_ * x; }
    std::vector<Triplet> entries() const;
    double max_abs() const;
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }

    bool operator==(const SparseOperator& o) const;

private:
    SpMat m_;
};

SparseOperator transpose(const SparseOperator& A);
SparseOperator operator+(const SparseOperator& A, const SparseOperator& B);
SparseOperator operator-(const SparseOperator& A, const SparseOperator& B);
SparseOperator operator*(const SparseOperator& A, const SparseOperator& B);
SparseOperator operator*(double s, const SparseOperator& A);
SparseOperator kron(const SparseOperator& A, const SparseOperator& B);
SparseOperator symmetrized(const SparseOperator& A);  // (A + A^T)/2

// Dt * diag(w) * D
SparseOperator triple_product(const SparseOperator& Dt, const Vec& w, const SparseOperator& D);

// max |A - A^T| relative to max |A|
double asymmetry(const SparseOperator& A);

void write_matrix_market(std::ostream& os, const SparseOperator& A);

enum class SolveMethod { direct, iterative };

struct SolveReport {
    double residual_norm = 0.0;  // ||Ax - b||_2
    SolveMethod method = SolveMethod::direct;
    int iterations = 0;
};

struct SolveResult {
    Vec x;
    SolveReport report;
};

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual(best_residual) {}
    double best_residual;
};

// Sparse LU with residual check; a few refinement sweeps, then BiCGSTAB
// as fallback if the relative residual is still above tol.
SolveResult solve(const SparseOperator& A, const Vec& b, double tol = 1e-12);

}  // namespace cdstab
