#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/KroneckerProduct>

#include "cdstab/adsc.hpp"
#include "cdstab/lfa.hpp"
#include "cdstab/operators.hpp"

using namespace cdstab;
using std::numbers::pi;

namespace {

const Beta kMain{1.0 / std::sqrt(1.36), 0.6 / std::sqrt(1.36)};

ProblemSpec main_spec()
{
    ProblemSpec s;
    s.eps = 2e-3;
    s.beta = kMain;
    s.source = gaussian_source();
    return s;
}

double max_abs_diff(const SparseOperator& a, const SparseOperator& b) { return (a - b).max_abs(); }

bool symmetric_psd(const SparseOperator& S, unsigned seed)
{
    if (asymmetry(S) > 1e-13) return false;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        Vec x(S.cols());
        for (int k = 0; k < x.size(); ++k) x[k] = g(rng);
        if (x.dot(S.apply(x)) < -1e-12 * x.squaredNorm()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("galerkin: pure diffusion is the scaled 5-point Laplacian")
{
    ProblemSpec s = main_spec();
    s.beta = {0.0, 0.0};
    const Mesh2D m = uniform_square(7);
    const SparseOperator K = assemble_galerkin(m, s);
    const double h = 1.0 / 7;
    CHECK(asymmetry(K) == 0.0);
    for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i) {
            const int k = m.index(i, j);
            CHECK(K.coeff(k, k) == rel(4 * s.eps / (h * h)));
            double off = 0.0;
            for (int c = 0; c < m.size(); ++c)
                if (c != k) {
                    CHECK(K.coeff(k, c) <= 0.0);
                    off += std::abs(K.coeff(k, c));
                }
            CHECK(off <= K.coeff(k, k) * (1 + 1e-14));
            if (i > 0) CHECK(K.coeff(k, m.index(i - 1, j)) == rel(-s.eps / (h * h)));
            if (j > 0) CHECK(K.coeff(k, m.index(i, j - 1)) == rel(-s.eps / (h * h)));
        }
}

TEST_CASE("galerkin: centered convection")
{
    const Mesh2D m = uniform_square(9);
    const SparseOperator C = convection_part(m, kMain);
    const Vec rs = C.apply(Vec::Ones(m.size()));
    for (int j = 1; j + 1 < m.ny(); ++j)
        for (int i = 1; i + 1 < m.nx(); ++i) CHECK(std::abs(rs[m.index(i, j)]) < 1e-14);
    CHECK((C + transpose(C)).max_abs() <= 1e-13 * C.max_abs());
    const double h = 1.0 / 9;
    CHECK(C.coeff(m.index(3, 3), m.index(4, 3)) == rel(kMain[0] / (2 * h)));
    CHECK(C.coeff(m.index(3, 3), m.index(3, 2)) == rel(-kMain[1] / (2 * h)));
}

TEST_CASE("galerkin: manufactured sine, eps=1, Ne=20")
{
    ProblemSpec s;
    s.eps = 1.0;
    s.beta = kMain;
    s.source = SourceSpec{SourceKind::manufactured_sine, {}};
    const Mesh2D m = uniform_square(20);
    const Vec U = solve(assemble_galerkin(m, s), assemble_source(m, s)).x;
    const double e = discrete_l2_norm(m, U - sample_exact(m, s));
    MESSAGE("L2 error " << e);
    CHECK(e == rel(1.039e-3, 0.01));
}

TEST_CASE("edge differences")
{
    const Mesh2D m = uniform_square(6);
    const double h = 1.0 / 6, c = 2.0;
    const SparseOperator Dx = assemble_edge_difference(m, Direction::x);
    CHECK(Dx.rows() == 6 * m.ny());
    const Vec e = Dx.apply(Vec::Constant(m.size(), c));
    for (int j = 0; j < m.ny(); ++j)
        for (int k = 0; k < 6; ++k) {
            const double v = e[j * 6 + k];
            if (k == 0) CHECK(v == rel(c / h));
            else if (k == 5) CHECK(v == rel(-c / h));
            else CHECK(std::abs(v) < 1e-12);
        }
    const SparseOperator Dy = assemble_edge_difference(m, Direction::y);
    CHECK(Dy.rows() == 6 * m.nx());

    const SparseOperator D4 = edge_difference_1d(build_uniform_mesh(4));
    CHECK(D4.rows() == 4);
    CHECK(D4.cols() == 3);
    for (const auto& t : D4.entries()) CHECK(std::abs(t.value()) == rel(4.0));

    // D^T D against the dense Dirichlet Laplacian
    const Mesh1D m5 = build_uniform_mesh(5);
    const Eigen::MatrixXd d = edge_difference_1d(m5).dense();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        lap(i, i) = 2 * 25.0;
        if (i > 0) lap(i, i - 1) = -25.0;
        if (i < 3) lap(i, i + 1) = -25.0;
    }
    CHECK((d.transpose() * d - lap).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("upwind")
{
    ProblemSpec s = main_spec();
    const Mesh2D m = uniform_square(15);
    ProblemSpec z = s;
    z.beta = {0.0, 0.0};
    CHECK(assemble_upwind(m, z) == assemble_galerkin(m, z));

    for (Beta b : {kMain, Beta{-0.3, 0.9}, Beta{1.0, 0.0}}) {
        s.beta = b;
        CHECK(symmetric_psd(assemble_upwind(m, s) - assemble_galerkin(m, s), 3));
    }

    // on a uniform mesh the artificial diffusion form equals first-order coordinate upwinding
    s.beta = kMain;
    const double h = 1.0 / 15;
    const SparseOperator up = lift(m, one_sided_difference(m.x, true), Direction::x);
    const SparseOperator vp = lift(m, one_sided_difference(m.y, true), Direction::y);
    const SparseOperator oracle = s.eps * assemble_diffusion(m) + kMain[0] * up + kMain[1] * vp;
    CHECK(max_abs_diff(assemble_upwind(m, s), oracle) < 1e-12 / (h * h));
}

TEST_CASE("supg")
{
    ProblemSpec s = main_spec();
    const Mesh2D m = uniform_square(15);
    const Vec f = assemble_source(m, s);
    ProblemSpec z = s;
    z.beta = {0.0, 0.0};
    const Discretization d0 = assemble_supg(m, z, f);
    CHECK(d0.A == assemble_galerkin(m, z));
    CHECK((d0.rhs - f).norm() == 0.0);

    const Discretization d = assemble_supg(m, s, f);
    CHECK(symmetric_psd(d.A - assemble_galerkin(m, s), 5));
    CHECK(supg_tau(m, s) == rel((1.0 / 15) / 2));

    // one-dimensional reduction: SUPG and upwinding add the same matrix
    ProblemSpec l;
    l.eps = 1e-3;
    l.beta = {1.0, 0.0};
    l.source = gaussian_source(0.03);
    const Mesh2D line = make_line_mesh(build_uniform_mesh(80));
    const Vec fl = assemble_source(line, l);
    const SparseOperator A1 = assemble_supg(line, l, fl).A;
    const SparseOperator A2 = assemble_upwind(line, l);
    CHECK(max_abs_diff(A1, A2) <= 1e-13 * A2.max_abs());
}

TEST_CASE("cip")
{
    const ProblemSpec s = main_spec();
    const Mesh2D m = uniform_square(15);
    CHECK(assemble_cip(m, s, 0.0) == assemble_galerkin(m, s));
    const SparseOperator S = assemble_cip(m, s) - assemble_galerkin(m, s);
    CHECK(symmetric_psd(S, 9));
    CHECK(S.nnz() > 0);
}

TEST_CASE("lps")
{
    const ProblemSpec s = main_spec();
    const Mesh2D m = uniform_square(45);
    const Vec f = assemble_source(m, s);
    const Discretization d0 = assemble_lps(m, s, f, 0.0);
    CHECK(d0.A == assemble_galerkin(m, s));
    CHECK((d0.rhs - f).norm() == 0.0);
    CHECK(symmetric_psd(assemble_lps(m, s, f).A - assemble_galerkin(m, s), 13));

    // fluctuation operator H = I - T(x)T on the lowest sine mode, dense application
    const int n = m.nx();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        T(i, i) = 0.5;
        if (i > 0) T(i, i - 1) = 0.25;
        if (i + 1 < n) T(i, i + 1) = 0.25;
    }
    const Eigen::MatrixXd P = Eigen::kroneckerProduct(T, T);
    const Vec phi = sine_mode(45, 1, 1);
    const Vec Hphi = phi - P * phi;
    MESSAGE("|H phi_11|/|phi_11| = " << Hphi.norm() / phi.norm());
    CHECK(Hphi.norm() / phi.norm() < 0.2);
    CHECK((smoothing_average(n).dense() - T).norm() == 0.0);
}

TEST_CASE("afc-inspired comparator")
{
    const ProblemSpec s = main_spec();
    const Mesh2D m = uniform_square(15);
    CHECK(afc_correction(m, s, Vec::Zero(m.size()), 1.0).nnz() == 0);
    // zero data: the detector never fires and the result is the Galerkin solution
    const Vec zero = Vec::Zero(m.size());
    const AfcResult r = solve_afc(m, s, zero);
    CHECK(r.solution.norm() == 0.0);
    CHECK(r.chi.norm() == 0.0);
    CHECK(r.passes == 80);

    Vec chi = Vec::Zero(m.size());
    chi[m.index(4, 5)] = 1.0;
    chi[m.index(9, 2)] = 1.0;
    CHECK(symmetric_psd(afc_correction(m, s, chi, 1.0), 17));
}

TEST_CASE("sources and exact solutions")
{
    for (double eps : {1.0, 1e-2, 1e-3}) {
        CHECK(nist_layer(0.0, eps) == rel(0.0));
        CHECK(std::abs(nist_layer(1.0, eps)) < 1e-15);
    }
    // long double oracle for the interior value
    const long double e = 1e-2L;
    const long double l05 = 0.5L - (std::exp(-0.5L / e) - std::exp(-1.0L / e)) / (1.0L - std::exp(-1.0L / e));
    CHECK(std::abs(nist_layer(0.5, 1e-2) - 0.5) < 1e-20);
    CHECK(std::abs(static_cast<long double>(nist_layer(0.5, 1e-2)) - l05) < 1e-20L);

    ProblemSpec s;
    s.eps = 1.0;
    s.beta = kMain;
    s.source = SourceSpec{SourceKind::manufactured_sine, {}};
    CHECK(source_value(s, 0.5, 0.5) == rel(2 * pi * pi, 1e-14));

    const ProblemSpec g = main_spec();
    CHECK(source_value(g, 0.5, 0.5) == rel(1.0));
    CHECK(source_value(g, 0.57, 0.5) == rel(std::exp(-1.0)));
}

TEST_CASE("NIST exact solution satisfies the equation")
{
    // independently differentiated layer function
    auto l = [](double t, double e) { return t - (std::exp((t - 1) / e) - std::exp(-1 / e)) / (1 - std::exp(-1 / e)); };
    auto l1 = [](double t, double e) { return 1 - std::exp((t - 1) / e) / (e * (1 - std::exp(-1 / e))); };
    auto l2 = [](double t, double e) { return -std::exp((t - 1) / e) / (e * e * (1 - std::exp(-1 / e))); };
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double eps : {1e-2, 1e-3}) {
        ProblemSpec s;
        s.eps = eps;
        s.beta = {0.5, std::sqrt(3.0) / 2};
        s.source = SourceSpec{SourceKind::nist_layer, {}};
        double worst = 0.0, worst_u = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double x = u(rng), y = u(rng);
            const double lap = l2(x, eps) * l(y, eps) + l(x, eps) * l2(y, eps);
            const double conv = s.beta[0] * l1(x, eps) * l(y, eps) + s.beta[1] * l(x, eps) * l1(y, eps);
            worst = std::max(worst, std::abs(-eps * lap + conv - source_value(s, x, y)));
            worst_u = std::max(worst_u, std::abs(exact_solution(s, x, y) - l(x, eps) * l(y, eps)));
        }
        MESSAGE("eps " << eps << " max residual " << worst);
        CHECK(worst < 1e-10);
        CHECK(worst_u < 1e-14);
    }
}
