#include "cdstab/lfa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace cdstab {

namespace {
constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

// entries of A grouped by the node offset (ci - ri, cj - rj)
std::map<std::pair<int, int>, std::vector<Triplet>> offsets(const SparseOperator& A, int nx)
{
    std::map<std::pair<int, int>, std::vector<Triplet>> out;
    const SpMat& M = A.mat();
    for (int c = 0; c < M.outerSize(); ++c)
        for (SpMat::InnerIterator it(M, c); it; ++it) {
            const int r = static_cast<int>(it.row()), col = static_cast<int>(it.col());
            out[{col % nx - r % nx, col / nx - r / nx}].emplace_back(r, col, it.value());
        }
    return out;
}

std::vector<double> thetas(int n)
{
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) t[p] = (p + 1) * pi / (n + 1);
    return t;
}

// orthonormal sine basis, column p
Eigen::MatrixXd sine_basis(int n)
{
    Eigen::MatrixXd S(n, n);
    const double c = std::sqrt(2.0 / (n + 1));
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p) S(i, p) = c * std::sin((i + 1.0) * (p + 1.0) * pi / (n + 1));
    return S;
}

}  // namespace

Symbol symbol(double eps, const Beta& beta, double h, double t1, double t2)
{
    return {2.0 * eps / (h * h) * (2.0 - std::cos(t1) - std::cos(t2)),
            (beta[0] * std::sin(t1) + beta[1] * std::sin(t2)) / h};
}

std::vector<cplx> modal_forms(const SparseOperator& A, int nx, int ny, ModalProbe probe)
{
    if (A.rows() != nx * ny || A.cols() != nx * ny) throw std::invalid_argument("modal_forms: size mismatch");
    std::vector<cplx> z(static_cast<std::size_t>(nx) * ny, cplx(0.0, 0.0));
    const auto groups = offsets(A, nx);
    const auto tx = thetas(nx), ty = thetas(ny);

    if (probe == ModalProbe::exponential) {
        for (const auto& [off, entries] : groups) {
            double w = 0.0;
            for (const auto& t : entries) w += t.value();
            for (int q = 0; q < ny; ++q)
                for (int p = 0; p < nx; ++p)
                    z[p + q * nx] += w * std::exp(cplx(0.0, off.first * tx[p] + off.second * ty[q]));
        }
        const double nrm = static_cast<double>(nx) * ny;
        for (auto& v : z) v /= nrm;
        return z;
    }

    // sine probe: for every offset, Xd^T C Yd with Xd(i,p) = s_p(i) s_p(i+di)
    const Eigen::MatrixXd Sx = sine_basis(nx);
    const Eigen::MatrixXd Sy = ny == 1 ? Eigen::MatrixXd::Ones(1, 1) : sine_basis(ny);
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(nx, ny);
    for (const auto& [off, entries] : groups) {
        const auto [di, dj] = off;
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nx, ny);
        for (const auto& t : entries) C(t.row() % nx, t.row() / nx) += t.value();
        Eigen::MatrixXd Xd = Eigen::MatrixXd::Zero(nx, nx), Yd = Eigen::MatrixXd::Zero(ny, ny);
        for (int i = 0; i < nx; ++i)
            if (i + di >= 0 && i + di < nx) Xd.row(i) = Sx.row(i).cwiseProduct(Sx.row(i + di));
        for (int j = 0; j < ny; ++j)
            if (j + dj >= 0 && j + dj < ny) Yd.row(j) = Sy.row(j).cwiseProduct(Sy.row(j + dj));
        Z += Xd.transpose() * C * Yd;
    }
    for (int q = 0; q < ny; ++q)
        for (int p = 0; p < nx; ++p) z[p + q * nx] = Z(p, q);
    return z;
}

ModalSet modal_set(const Mesh2D& m, const ProblemSpec& spec, ModalEvaluation ev)
{
    if (!m.uniform()) throw std::invalid_argument("modal_set: uniform mesh required");
    ModalSet s;
    s.Ne = m.x.Ne();
    s.nx = m.nx();
    s.ny = m.ny();
    s.eps = spec.eps;
    s.h = m.x.step(0);
    s.beta = spec.beta;
    s.evaluation = ev;
    s.theta_x = thetas(s.nx);
    s.theta_y = m.has_y ? thetas(s.ny) : std::vector<double>{0.0};
    const int M = s.modes();
    s.a.resize(M);
    s.b.resize(M);
    s.rho.resize(M);
    s.B.resize(M);
    s.dominant_mask.assign(M, 0);

    if (ev == ModalEvaluation::dirichlet_rayleigh) {
        const auto z = modal_forms(assemble_galerkin(m, spec), s.nx, s.ny);
        for (int k = 0; k < M; ++k) {
            s.a[k] = z[k].real();
            s.b[k] = std::abs(z[k].imag());
        }
    } else {
        for (int q = 0; q < s.ny; ++q)
            for (int p = 0; p < s.nx; ++p) {
                const Symbol l = symbol(s.eps, s.beta, s.h, s.theta_x[p], s.theta_y[q]);
                s.a[p + q * s.nx] = l.a;
                s.b[p + q * s.nx] = std::abs(l.b);
            }
    }

    const double nb = spec.beta_norm();
    double rho_sum = 0.0, B_sum = 0.0;
    for (int q = 0; q < s.ny; ++q)
        for (int p = 0; p < s.nx; ++p) {
            const int k = p + q * s.nx;
            s.rho[k] = s.b[k] / s.a[k];
            const double rp = 1.0 - std::cos(s.theta_x[p]);
            const double rq = m.has_y ? 1.0 - std::cos(s.theta_y[q]) : 0.0;
            s.B[k] = nb == 0.0 ? 0.0 : (std::abs(s.beta[0]) * rp + std::abs(s.beta[1]) * rq) / (nb * (rp + rq));
            if (s.rho[k] > 1.0) {
                s.dominant_mask[k] = 1;
                ++s.dominant_count;
                rho_sum += s.rho[k];
                B_sum += s.B[k];
            }
        }
    if (s.dominant_count > 0) {
        s.mean_rho_gal = rho_sum / s.dominant_count;
        s.B_mean = B_sum / s.dominant_count;
    }
    return s;
}

ModalSet modal_set(double eps, const Beta& beta, int Ne, ModalEvaluation ev)
{
    ProblemSpec spec;
    spec.eps = eps;
    spec.beta = beta;
    return modal_set(uniform_square(Ne), spec, ev);
}

Gamma0Balance gamma0_balance(const ModalSet& modal, double Pe_h, double rho_target, double gamma_min,
                             double gamma_max)
{
    Gamma0Balance g;
    const double excess = std::max(modal.mean_rho_gal - rho_target, 0.0);
    g.raw = (excess == 0.0 || modal.B_mean == 0.0) ? 0.0 : excess / (2.0 * Pe_h * modal.B_mean);
    g.projected = std::clamp(g.raw, gamma_min, gamma_max);
    return g;
}

Vec sine_mode(int Ne, int p, int q)
{
    const int N = Ne - 1;
    if (p < 1 || p > N || q < 1 || q > N) throw std::invalid_argument("sine_mode: mode index out of range");
    Vec v(N * N);
    const double c = 2.0 / (N + 1);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
            v[j * N + i] = c * std::sin((i + 1.0) * p * pi / (N + 1)) * std::sin((j + 1.0) * q * pi / (N + 1));
    return v;
}

std::vector<double> modal_increments(const SparseOperator& S, const ModalSet& modal, ModalProbe probe)
{
    const auto z = modal_forms(S, modal.nx, modal.ny, probe);
    std::vector<double> d(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) d[k] = z[k].real();
    return d;
}

double rayleigh_rho_stab(const SparseOperator& S, const ModalSet& modal, ModalProbe probe)
{
    if (modal.dominant_count == 0) return 0.0;
    const auto d = modal_increments(S, modal, probe);
    double s = 0.0;
    for (int k = 0; k < modal.modes(); ++k)
        if (modal.dominant_mask[k]) s += modal.b[k] / (modal.a[k] + d[k]);
    return s / modal.dominant_count;
}

Vec reference_modal_solve(const ModalSet& modal, const Vec& f)
{
    const int nx = modal.nx, ny = modal.ny;
    if (f.size() != nx * ny) throw std::invalid_argument("reference_modal_solve: size mismatch");
    const Eigen::MatrixXd Sx = sine_basis(nx);
    const Eigen::MatrixXd Sy = ny == 1 ? Eigen::MatrixXd::Ones(1, 1) : sine_basis(ny);
    const Eigen::Map<const Eigen::MatrixXd> F(f.data(), nx, ny);
    Eigen::MatrixXd C = Sx.transpose() * F * Sy;
    for (int q = 0; q < ny; ++q)
        for (int p = 0; p < nx; ++p) {
            const Symbol l = symbol(modal.eps, modal.beta, modal.h, modal.theta_x[p], modal.theta_y[q]);
            C(p, q) /= std::hypot(l.a, l.b);
        }
    const Eigen::MatrixXd U = Sx * C * Sy.transpose();
    return Eigen::Map<const Vec>(U.data(), nx * ny);
}

double alpha_star(double eps, double rho) { return eps * (std::sqrt(1.0 + rho * rho) - 1.0); }

std::vector<FootprintPoint> footprint_sample(double eps, const Beta& beta, double h, int density)
{
    std::vector<FootprintPoint> pts;
    pts.reserve(static_cast<std::size_t>(density) * density);
    for (int k2 = 0; k2 < density; ++k2)
        for (int k1 = 0; k1 < density; ++k1) {
            const double t1 = (k1 + 1.0) * pi / (density + 1), t2 = (k2 + 1.0) * pi / (density + 1);
            const Symbol l = symbol(eps, beta, h, t1, t2);
            const double J = 2.0 * eps / (h * h * h) *
                             (beta[1] * std::sin(t1) * std::cos(t2) - beta[0] * std::sin(t2) * std::cos(t1));
            pts.push_back({t1, t2, l.a, l.b, J});
        }
    return pts;
}

double symbol_identity_error(double eps, const Beta& beta, int n, int k1, int k2)
{
    const double h = 1.0 / n;
    const double t1 = 2.0 * pi * k1 / n, t2 = 2.0 * pi * k2 / n;
    auto mode = [&](int i, int j) {
        i = ((i % n) + n) % n;
        j = ((j % n) + n) % n;
        return std::exp(cplx(0.0, i * t1 + j * t2));
    };
    const Symbol l = symbol(eps, beta, h, t1, t2);
    const cplx lam(l.a, l.b);
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const cplx applied =
                eps / (h * h) * (4.0 * mode(i, j) - mode(i + 1, j) - mode(i - 1, j) - mode(i, j + 1) - mode(i, j - 1)) +
                beta[0] * (mode(i + 1, j) - mode(i - 1, j)) / (2.0 * h) +
                beta[1] * (mode(i, j + 1) - mode(i, j - 1)) / (2.0 * h);
            const cplx expect = lam * mode(i, j);
            worst = std::max(worst, std::abs(applied - expect) / std::max(std::abs(lam), 1e-300));
        }
    return worst;
}

}  // namespace cdstab
