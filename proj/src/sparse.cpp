#include "cdstab/sparse.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace cdstab {

SparseOperator::SparseOperator(SpMat m) : m_(std::move(m))
{
    m_.prune(0.0, 0.0);  // keep every nonzero, drop exact zeros
    m_.makeCompressed();
}

SparseOperator SparseOperator::from_triplets(int rows, int cols, const std::vector<Triplet>& t)
{
    SpMat m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(int n)
{
    SpMat m(n, n);
    m.setIdentity();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::diagonal(const Vec& d)
{
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(d.size()));
    for (int k = 0; k < d.size(); ++k) t.emplace_back(k, k, d[k]);
    return from_triplets(static_cast<int>(d.size()), static_cast<int>(d.size()), t);
}

std::vector<Triplet> SparseOperator::entries() const
{
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(m_.nonZeros()));
    for (int c = 0; c < m_.outerSize(); ++c)
        for (SpMat::InnerIterator it(m_, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
        return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    return t;
}

double SparseOperator::max_abs() const
{
    double s = 0.0;
    for (int k = 0; k < m_.nonZeros(); ++k) s = std::max(s, std::abs(m_.valuePtr()[k]));
    return s;
}

bool SparseOperator::operator==(const SparseOperator& o) const
{
    if (rows() != o.rows() || cols() != o.cols() || nnz() != o.nnz()) return false;
    const auto a = entries(), b = o.entries();
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].row() != b[k].row() || a[k].col() != b[k].col() || a[k].value() != b[k].value())
            return false;
    return true;
}

SparseOperator transpose(const SparseOperator& A) { return SparseOperator(SpMat(A.mat().transpose())); }
SparseOperator operator+(const SparseOperator& A, const SparseOperator& B) { return SparseOperator(SpMat(A.mat() + B.mat())); }
SparseOperator operator-(const SparseOperator& A, const SparseOperator& B) { return SparseOperator(SpMat(A.mat() - B.mat())); }
SparseOperator operator*(const SparseOperator& A, const SparseOperator& B) { return SparseOperator(SpMat(A.mat() * B.mat())); }
SparseOperator operator*(double s, const SparseOperator& A) { return SparseOperator(SpMat(s * A.mat())); }

SparseOperator kron(const SparseOperator& A, const SparseOperator& B)
{
    SpMat k = Eigen::kroneckerProduct(A.mat(), B.mat());
    return SparseOperator(std::move(k));
}

SparseOperator symmetrized(const SparseOperator& A)
{
    SpMat s = 0.5 * (A.mat() + SpMat(A.mat().transpose()));
    return SparseOperator(std::move(s));
}

SparseOperator triple_product(const SparseOperator& Dt, const Vec& w, const SparseOperator& D)
{
    if (Dt.cols() != w.size() || D.rows() != w.size())
        throw std::invalid_argument("triple_product: dimension mismatch");
    SpMat wd = w.asDiagonal() * D.mat();
    return SparseOperator(SpMat(Dt.mat() * wd));
}

double asymmetry(const SparseOperator& A)
{
    const double m = A.max_abs();
    if (m == 0.0) return 0.0;
    return (A - transpose(A)).max_abs() / m;
}

void write_matrix_market(std::ostream& os, const SparseOperator& A)
{
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << A.rows() << ' ' << A.cols() << ' ' << A.nnz() << '\n';
    os << std::setprecision(17);
    for (const auto& t : A.entries()) os << t.row() + 1 << ' ' << t.col() + 1 << ' ' << t.value() << '\n';
}

SolveResult solve(const SparseOperator& A, const Vec& b, double tol)
{
    if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("solve: dimension mismatch");
    const double bn = b.norm();
    SolveResult out;
    if (bn == 0.0) {
        out.x = Vec::Zero(b.size());
        return out;
    }
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A.mat());
    lu.factorize(A.mat());
    if (lu.info() != Eigen::Success) throw SingularMatrixError("solve: matrix is singular to working precision");
    out.x = lu.solve(b);
    if (!out.x.allFinite()) throw SingularMatrixError("solve: factorization produced non-finite values");
    Vec r = b - A.mat() * out.x;
    double rn = r.norm();
    for (int sweep = 0; sweep < 3 && rn > tol * bn; ++sweep) {
        out.x += lu.solve(r);
        r = b - A.mat() * out.x;
        rn = r.norm();
    }
    out.report.residual_norm = rn;
    if (rn <= tol * bn) return out;

    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
    it.setTolerance(tol);
    it.setMaxIterations(2000);
    it.compute(A.mat());
    Vec x = it.solveWithGuess(b, out.x);
    const double rit = (b - A.mat() * x).norm();
    if (rit <= tol * bn) {
        out.x = x;
        out.report = {rit, SolveMethod::iterative, static_cast<int>(it.iterations())};
        return out;
    }
    throw SolveError("solve: residual above tolerance", std::min(rn, rit));
}

}  // namespace cdstab
