#include "cdstab/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cdstab {

double ProblemSpec::beta_norm() const { return std::hypot(beta[0], beta[1]); }

SourceSpec gaussian_source(double sigma, double amplitude)
{
    return SourceSpec{SourceKind::gaussian, {Gaussian{0.5, 0.5, sigma, amplitude}}};
}

SourceSpec narrow_gaussian_source() { return gaussian_source(0.035, 1.0); }

SourceSpec double_gaussian_source()
{
    return SourceSpec{SourceKind::gaussian, {Gaussian{0.35, 0.35, 0.07, 1.0}, Gaussian{0.65, 0.65, 0.07, 1.0}}};
}

double nist_layer(double t, double eps)
{
    const double e1 = std::exp(-1.0 / eps);
    return t - (std::exp((t - 1.0) / eps) - e1) / (1.0 - e1);
}

double nist_layer_d1(double t, double eps)
{
    return 1.0 - std::exp((t - 1.0) / eps) / (eps * (1.0 - std::exp(-1.0 / eps)));
}

double nist_layer_d2(double t, double eps)
{
    return -std::exp((t - 1.0) / eps) / (eps * eps * (1.0 - std::exp(-1.0 / eps)));
}

namespace {
constexpr double pi = std::numbers::pi;

// flags: the second coordinate is absent on line meshes
double exact_impl(const ProblemSpec& s, double x, double y, bool two_d)
{
    switch (s.source.kind) {
    case SourceKind::manufactured_sine:
        return std::sin(pi * x) * (two_d ? std::sin(pi * y) : 1.0);
    case SourceKind::nist_layer:
        return nist_layer(x, s.eps) * (two_d ? nist_layer(y, s.eps) : 1.0);
    default:
        throw std::logic_error("exact_solution: Gaussian sources have no closed-form solution");
    }
}

double source_impl(const ProblemSpec& s, double x, double y, bool two_d)
{
    const double eps = s.eps, b1 = s.beta[0], b2 = two_d ? s.beta[1] : 0.0;
    switch (s.source.kind) {
    case SourceKind::gaussian: {
        double f = 0.0;
        for (const auto& g : s.source.bumps) {
            double r2 = (x - g.xc) * (x - g.xc);
            if (two_d) r2 += (y - g.yc) * (y - g.yc);
            f += g.amplitude * std::exp(-r2 / (g.sigma * g.sigma));
        }
        return f;
    }
    case SourceKind::manufactured_sine: {
        const double sx = std::sin(pi * x), cx = std::cos(pi * x);
        const double sy = two_d ? std::sin(pi * y) : 1.0, cy = two_d ? std::cos(pi * y) : 0.0;
        const double lap = (two_d ? 2.0 : 1.0) * pi * pi * sx * sy;
        return eps * lap + b1 * pi * cx * sy + b2 * pi * sx * cy;
    }
    case SourceKind::nist_layer: {
        const double lx = nist_layer(x, eps), dx = nist_layer_d1(x, eps), ddx = nist_layer_d2(x, eps);
        if (!two_d) return -eps * ddx + b1 * dx;
        const double ly = nist_layer(y, eps), dy = nist_layer_d1(y, eps), ddy = nist_layer_d2(y, eps);
        return -eps * (ddx * ly + lx * ddy) + b1 * dx * ly + b2 * lx * dy;
    }
    }
    return 0.0;
}

template <class F>
Vec sample(const Mesh2D& m, F f)
{
    Vec v(m.size());
    for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i) v[m.index(i, j)] = f(m.x.x(i), m.has_y ? m.y.x(j) : 0.0);
    return v;
}

}  // namespace

double exact_solution(const ProblemSpec& spec, double x, double y) { return exact_impl(spec, x, y, true); }
double source_value(const ProblemSpec& spec, double x, double y) { return source_impl(spec, x, y, true); }

Vec assemble_source(const Mesh2D& m, const ProblemSpec& spec)
{
    return sample(m, [&](double x, double y) { return source_impl(spec, x, y, m.has_y); });
}

Vec sample_exact(const Mesh2D& m, const ProblemSpec& spec)
{
    return sample(m, [&](double x, double y) { return exact_impl(spec, x, y, m.has_y); });
}

SparseOperator second_difference(const Mesh1D& m)
{
    const int n = m.interior();
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        const double hm = m.step(i), hp = m.step(i + 1), s = hm + hp;
        if (i > 0) t.emplace_back(i, i - 1, -2.0 / (hm * s));
        t.emplace_back(i, i, 2.0 / (hm * hp));
        if (i + 1 < n) t.emplace_back(i, i + 1, -2.0 / (hp * s));
    }
    return SparseOperator::from_triplets(n, n, t);
}

SparseOperator first_derivative(const Mesh1D& m)
{
    const int n = m.interior();
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        if (m.uniform) {
            const double h = m.step(i);
            if (i > 0) t.emplace_back(i, i - 1, -1.0 / (2 * h));
            if (i + 1 < n) t.emplace_back(i, i + 1, 1.0 / (2 * h));
            continue;
        }
        const double hm = m.step(i), hp = m.step(i + 1), s = hm + hp;
        if (i > 0) t.emplace_back(i, i - 1, -hp / (hm * s));
        t.emplace_back(i, i, (hp - hm) / (hm * hp));
        if (i + 1 < n) t.emplace_back(i, i + 1, hm / (hp * s));
    }
    return SparseOperator::from_triplets(n, n, t);
}

SparseOperator edge_difference_1d(const Mesh1D& m)
{
    const int n = m.interior(), ne = m.Ne();
    std::vector<Triplet> t;
    for (int e = 0; e < ne; ++e) {
        const double h = m.step(e);
        if (e < n) t.emplace_back(e, e, 1.0 / h);
        if (e > 0) t.emplace_back(e, e - 1, -1.0 / h);
    }
    return SparseOperator::from_triplets(ne, n, t);
}

SparseOperator one_sided_difference(const Mesh1D& m, bool backward)
{
    const int n = m.interior();
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        if (backward) {
            const double h = m.step(i);
            t.emplace_back(i, i, 1.0 / h);
            if (i > 0) t.emplace_back(i, i - 1, -1.0 / h);
        } else {
            const double h = m.step(i + 1);
            t.emplace_back(i, i, -1.0 / h);
            if (i + 1 < n) t.emplace_back(i, i + 1, 1.0 / h);
        }
    }
    return SparseOperator::from_triplets(n, n, t);
}

SparseOperator smoothing_average(int n)
{
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        if (i > 0) t.emplace_back(i, i - 1, 0.25);
        t.emplace_back(i, i, 0.5);
        if (i + 1 < n) t.emplace_back(i, i + 1, 0.25);
    }
    return SparseOperator::from_triplets(n, n, t);
}

SparseOperator lift(const Mesh2D& m, const SparseOperator& A1, Direction d)
{
    if (!m.has_y) {
        if (d == Direction::y) throw std::invalid_argument("lift: line mesh has no y direction");
        return A1;
    }
    if (d == Direction::x) return kron(SparseOperator::identity(m.ny()), A1);
    return kron(A1, SparseOperator::identity(m.nx()));
}

SparseOperator assemble_diffusion(const Mesh2D& m)
{
    SparseOperator L = lift(m, second_difference(m.x), Direction::x);
    if (m.has_y) L = L + lift(m, second_difference(m.y), Direction::y);
    return L;
}

SparseOperator convection_part(const Mesh2D& m, const Beta& beta)
{
    SparseOperator C = beta[0] * lift(m, first_derivative(m.x), Direction::x);
    if (m.has_y) C = C + beta[1] * lift(m, first_derivative(m.y), Direction::y);
    return C;
}

SparseOperator assemble_galerkin(const Mesh2D& m, const ProblemSpec& spec)
{
    return spec.eps * assemble_diffusion(m) + convection_part(m, spec.beta);
}

SparseOperator assemble_edge_difference(const Mesh2D& m, Direction d)
{
    if (d == Direction::x) return lift(m, edge_difference_1d(m.x), Direction::x);
    if (!m.has_y) return SparseOperator(0, m.size());
    return lift(m, edge_difference_1d(m.y), Direction::y);
}

Vec edge_steps(const Mesh2D& m, Direction d)
{
    if (d == Direction::x) {
        const int ne = m.x.Ne();
        Vec h(static_cast<Eigen::Index>(ne) * m.ny());
        for (int j = 0; j < m.ny(); ++j)
            for (int e = 0; e < ne; ++e) h[j * ne + e] = m.x.step(e);
        return h;
    }
    if (!m.has_y) return Vec(0);
    const int ne = m.y.Ne();
    Vec h(static_cast<Eigen::Index>(ne) * m.nx());
    for (int e = 0; e < ne; ++e)
        for (int i = 0; i < m.nx(); ++i) h[e * m.nx() + i] = m.y.step(e);
    return h;
}

SparseOperator assemble_upwind(const Mesh2D& m, const ProblemSpec& spec)
{
    const auto& b = spec.beta;
    if (m.uniform()) {
        SparseOperator A = assemble_galerkin(m, spec);
        const SparseOperator Dx = assemble_edge_difference(m, Direction::x);
        A = A + triple_product(transpose(Dx), 0.5 * std::abs(b[0]) * edge_steps(m, Direction::x), Dx);
        if (m.has_y) {
            const SparseOperator Dy = assemble_edge_difference(m, Direction::y);
            A = A + triple_product(transpose(Dy), 0.5 * std::abs(b[1]) * edge_steps(m, Direction::y), Dy);
        }
        return A;
    }
    // first-order one-sided differences taken against the flow
    SparseOperator A = spec.eps * assemble_diffusion(m);
    A = A + b[0] * lift(m, one_sided_difference(m.x, b[0] >= 0), Direction::x);
    if (m.has_y) A = A + b[1] * lift(m, one_sided_difference(m.y, b[1] >= 0), Direction::y);
    return A;
}

double mesh_peclet(const Mesh2D& m, const ProblemSpec& spec)
{
    return spec.beta_norm() * m.max_step() / (2.0 * spec.eps);
}

double supg_tau(const Mesh2D& m, const ProblemSpec& spec)
{
    const double nb = spec.beta_norm();
    return nb == 0.0 ? 0.0 : m.max_step() / (2.0 * nb);
}

namespace {

// streamline derivative used by SUPG and LPS
SparseOperator streamline_derivative(const Mesh2D& m, const Beta& beta)
{
    if (!m.has_y) return beta[0] * assemble_edge_difference(m, Direction::x);
    return convection_part(m, beta);
}

}  // namespace

Discretization assemble_supg(const Mesh2D& m, const ProblemSpec& spec, const Vec& f)
{
    SparseOperator K = assemble_galerkin(m, spec);
    if (spec.beta_norm() == 0.0) return {K, f};
    const double tau = supg_tau(m, spec);
    const SparseOperator Db = streamline_derivative(m, spec.beta);
    const SparseOperator DbT = transpose(Db);
    Discretization d{K + tau * (DbT * Db), f};
    // the line reduction uses edge differences, which carry no source correction
    if (m.has_y) d.rhs = f + tau * DbT.apply(f);
    return d;
}

SparseOperator assemble_cip(const Mesh2D& m, const ProblemSpec& spec, double gamma)
{
    SparseOperator A = assemble_galerkin(m, spec);
    const double h = m.max_step();
    const double c = gamma * spec.beta_norm() * h * h * h;
    if (c == 0.0) return A;
    const SparseOperator Lxx = lift(m, second_difference(m.x), Direction::x);
    SparseOperator J = transpose(Lxx) * Lxx;
    if (m.has_y) {
        const SparseOperator Lyy = lift(m, second_difference(m.y), Direction::y);
        J = J + transpose(Lyy) * Lyy;
    }
    return A + c * J;
}

Discretization assemble_lps(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, double gamma)
{
    SparseOperator K = assemble_galerkin(m, spec);
    if (spec.beta_norm() == 0.0 || gamma == 0.0) return {K, f};
    SparseOperator P = smoothing_average(m.nx());
    if (m.has_y) P = kron(smoothing_average(m.ny()), P);
    const SparseOperator H = SparseOperator::identity(m.size()) - P;
    const double tau = supg_tau(m, spec);
    const SparseOperator HD = H * convection_part(m, spec.beta);
    const SparseOperator HDt = transpose(HD);
    return {K + (gamma * tau) * (HDt * HD), f + gamma * tau * HDt.apply(H.apply(f))};
}

}  // namespace cdstab
