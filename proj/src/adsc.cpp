#include "cdstab/adsc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdstab {

void AdscParams::validate() const
{
    if (!(gamma_min >= 0 && gamma_min <= gamma_max)) throw std::invalid_argument("AdscParams: need 0 <= gamma_min <= gamma_max");
    if (!(kappa >= 1)) throw std::invalid_argument("AdscParams: kappa must be >= 1");
    if (!(omega > 0 && omega <= 1)) throw std::invalid_argument("AdscParams: omega must lie in (0,1]");
    if (!(delta_h > 0 && eta_det > 0)) throw std::invalid_argument("AdscParams: delta_h and eta_det must be > 0");
    if (max_iterations < 0) throw std::invalid_argument("AdscParams: max_iterations must be >= 0");
}

DirectionalDifferences directional_differences(const Mesh2D& m, const Vec& U, const Beta& beta)
{
    const double b1p = std::max(beta[0], 0.0), b1m = std::min(beta[0], 0.0);
    const double b2p = std::max(beta[1], 0.0), b2m = std::min(beta[1], 0.0);
    DirectionalDifferences d{Vec(m.size()), Vec(m.size())};
    for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i) {
            const double c = U[m.index(i, j)];
            const double mx = (c - at(m, U, i - 1, j)) / m.x.step(i);
            const double px = (at(m, U, i + 1, j) - c) / m.x.step(i + 1);
            double my = 0.0, py = 0.0;
            if (m.has_y) {
                my = (c - at(m, U, i, j - 1)) / m.y.step(j);
                py = (at(m, U, i, j + 1) - c) / m.y.step(j + 1);
            }
            d.minus[m.index(i, j)] = b1p * mx + b1m * px + b2p * my + b2m * py;
            d.plus[m.index(i, j)] = b1p * px + b1m * mx + b2p * py + b2m * my;
        }
    return d;
}

Vec theta_score(const Mesh2D& m, const Vec& U, const Beta& beta, double delta_h)
{
    const auto d = directional_differences(m, U, beta);
    Vec t(m.size());
    for (int k = 0; k < m.size(); ++k) {
        const double a = d.minus[k], b = d.plus[k];
        t[k] = 2.0 * std::max(-a * b, 0.0) / (a * a + b * b + delta_h);
    }
    return t;
}

Vec activation(const Vec& theta, double eta_det)
{
    return theta.array() / (theta.array() + eta_det);
}

Vec sharp_activation(const Mesh2D& m, const Vec& U, const Beta& beta)
{
    const auto d = directional_differences(m, U, beta);
    Vec c(m.size());
    for (int k = 0; k < m.size(); ++k) c[k] = d.minus[k] * d.plus[k] < 0 ? 1.0 : 0.0;
    return c;
}

Vec detect(const Mesh2D& m, const Vec& U, const Beta& beta, const AdscParams& p)
{
    if (p.detector == DetectorKind::sharp) return sharp_activation(m, U, beta);
    return activation(theta_score(m, U, beta, p.delta_h), p.eta_det);
}

EdgeActivation edge_transfer(const Mesh2D& m, const Vec& chi, TransferKind kind)
{
    auto combine = [kind](double a, double b) { return kind == TransferKind::averaged ? 0.5 * (a + b) : std::max(a, b); };
    EdgeActivation e;
    const int nex = m.x.Ne();
    e.x.resize(static_cast<Eigen::Index>(nex) * m.ny());
    for (int j = 0; j < m.ny(); ++j)
        for (int k = 0; k < nex; ++k) e.x[j * nex + k] = combine(at(m, chi, k - 1, j), at(m, chi, k, j));
    if (!m.has_y) return e;
    const int ney = m.y.Ne();
    e.y.resize(static_cast<Eigen::Index>(ney) * m.nx());
    for (int k = 0; k < ney; ++k)
        for (int i = 0; i < m.nx(); ++i) e.y[k * m.nx() + i] = combine(at(m, chi, i, k - 1), at(m, chi, i, k));
    return e;
}

GammaLaw gamma_law(double Pe, const AdscParams& p)
{
    if (Pe <= 1.0) return {};
    GammaLaw g;
    g.gamma0 = p.gamma_min + (p.gamma_max - p.gamma_min) * (Pe - 1.0) / (Pe + 1.0);
    g.gamma1 = p.kappa * g.gamma0;
    g.eta_pe = 1.0 - 1.0 / Pe;
    return g;
}

EdgeWeights edge_coefficients(const Mesh2D& m, const EdgeActivation& chi, const ProblemSpec& spec,
                              const AdscParams& p)
{
    const double nb = spec.beta_norm();
    auto weights = [&](const Vec& he, const Vec& c, double br) {
        Vec w = Vec::Zero(he.size());
        if (br == 0.0) return w;
        for (int k = 0; k < he.size(); ++k) {
            const GammaLaw g = gamma_law(nb * he[k] / (2.0 * spec.eps), p);
            w[k] = br * he[k] * (g.gamma0 + g.gamma1 * g.eta_pe * c[k]);
        }
        return w;
    };
    EdgeWeights w;
    w.wx = weights(edge_steps(m, Direction::x), chi.x, std::abs(spec.beta[0]));
    w.wy = weights(edge_steps(m, Direction::y), chi.y, std::abs(spec.beta[1]));
    return w;
}

SparseOperator adsc_correction(const Mesh2D& m, const ProblemSpec& spec, const Vec& chi, const AdscParams& p)
{
    const EdgeWeights w = edge_coefficients(m, edge_transfer(m, chi, p.transfer), spec, p);
    const SparseOperator Dx = assemble_edge_difference(m, Direction::x);
    SparseOperator S = triple_product(transpose(Dx), w.wx, Dx);
    if (m.has_y) {
        const SparseOperator Dy = assemble_edge_difference(m, Direction::y);
        S = S + triple_product(transpose(Dy), w.wy, Dy);
    }
    return symmetrized(S);
}

Vec warm_start(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, WarmStart w)
{
    switch (w) {
    case WarmStart::zero:
        return Vec::Zero(m.size());
    case WarmStart::upwind:
        return solve(assemble_upwind(m, spec), f).x;
    case WarmStart::coarse:
        if (m.uniform() && m.x.Ne() >= 4) {
            const int Nc = m.x.Ne() / 2;
            const Mesh2D c = m.has_y ? uniform_square(Nc) : make_line_mesh(build_uniform_mesh(Nc));
            const Vec Uc = solve(assemble_galerkin(c, spec), assemble_source(c, spec)).x;
            return interpolate_to_coarse(c, Uc, m);
        }
        [[fallthrough]];
    case WarmStart::galerkin:
        break;
    }
    return solve(assemble_galerkin(m, spec), f).x;
}

namespace {

double rel_inf(const Vec& d, const Vec& ref)
{
    return d.lpNorm<Eigen::Infinity>() / std::max(ref.lpNorm<Eigen::Infinity>(), 1e-30);
}

SparseOperator system_matrix(const SparseOperator& K, const SparseOperator& S)
{
    return S.nnz() == 0 ? K : K + S;
}

void finish(AdscResult& r, const Mesh2D& m, const ProblemSpec& spec, const Vec& f, const SparseOperator& K,
            const Vec& chi, const AdscParams& p)
{
    r.activation.chi = chi;
    r.activation.edges = edge_transfer(m, chi, p.transfer);
    r.correction = adsc_correction(m, spec, chi, p);
    SolveResult s = solve(system_matrix(K, r.correction), f);
    r.solution = std::move(s.x);
    r.report = s.report;
    r.activation_mass = chi.sum();
    r.active_nodes = static_cast<int>((chi.array() > 1e-3).count());
}

}  // namespace

AdscResult solve_adsc(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, const AdscParams& p,
                      const AdscOptions& opt)
{
    p.validate();
    const SparseOperator K = assemble_galerkin(m, spec);
    AdscResult r;

    if (opt.mode == AdscMode::fixed_activation) {
        if (opt.chi.size() != m.size()) throw std::invalid_argument("solve_adsc: fixed activation has wrong size");
        finish(r, m, spec, f, K, opt.chi, p);
        return r;
    }
    if (opt.mode == AdscMode::fixed_reference) {
        if (opt.reference.size() != m.size()) throw std::invalid_argument("solve_adsc: reference has wrong size");
        finish(r, m, spec, f, K, detect(m, opt.reference, spec.beta, p), p);
        return r;
    }

    Vec U = opt.initial.size() == m.size() ? opt.initial : warm_start(m, spec, f, p.warm_start);
    Vec chi = Vec::Zero(m.size());
    const int cap = p.few_shot_cap ? std::min(*p.few_shot_cap, p.max_iterations) : p.max_iterations;
    double var = 0.0;
    bool converged = false;
    while (r.iterations < cap) {
        Vec next = chi.cwiseMax(detect(m, U, spec.beta, p));
        if ((next.array() < chi.array()).any()) r.monotone = false;
        var = rel_inf(next - chi, next);
        chi = std::move(next);
        ++r.iterations;
        const Vec Ut = solve(system_matrix(K, adsc_correction(m, spec, chi, p)), f).x;
        Vec Un = (1.0 - p.omega) * U + p.omega * Ut;
        // an all-zero activation carries no information; watch the iterate instead
        if (chi.isZero(0.0)) var = rel_inf(Un - U, Un);
        U = std::move(Un);
        r.variation_history.push_back(var);
        if (var <= p.activation_tol) {
            converged = true;
            break;
        }
    }
    r.final_variation = var;
    r.stationary = converged;
    finish(r, m, spec, f, K, chi, p);
    return r;
}

RelaxedIterates relaxed_fixed_iterates(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, const Vec& chi,
                                       const AdscParams& p, const Vec& U0, int steps)
{
    const SparseOperator A = system_matrix(assemble_galerkin(m, spec), adsc_correction(m, spec, chi, p));
    RelaxedIterates out;
    out.fixed_point = solve(A, f).x;
    out.iterates.push_back(U0);
    Vec U = U0;
    for (int k = 0; k < steps; ++k) {
        const Vec Ut = solve(A, f).x;
        U = (1.0 - p.omega) * U + p.omega * Ut;
        out.iterates.push_back(U);
    }
    return out;
}

SparseOperator afc_correction(const Mesh2D& m, const ProblemSpec& spec, const Vec& chi, double theta)
{
    const EdgeActivation e = edge_transfer(m, chi, TransferKind::max);
    const SparseOperator Dx = assemble_edge_difference(m, Direction::x);
    const Vec wx = (0.5 * theta * std::abs(spec.beta[0])) * edge_steps(m, Direction::x).cwiseProduct(e.x);
    SparseOperator S = triple_product(transpose(Dx), wx, Dx);
    if (m.has_y) {
        const SparseOperator Dy = assemble_edge_difference(m, Direction::y);
        const Vec wy = (0.5 * theta * std::abs(spec.beta[1])) * edge_steps(m, Direction::y).cwiseProduct(e.y);
        S = S + triple_product(transpose(Dy), wy, Dy);
    }
    return symmetrized(S);
}

AfcResult solve_afc(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, const AfcParams& p)
{
    const SparseOperator K = assemble_galerkin(m, spec);
    AfcResult r;
    SolveResult s = solve(K, f);
    r.solution = s.x;
    r.report = s.report;
    r.chi = Vec::Zero(m.size());
    for (int k = 0; k < p.iterations; ++k) {
        r.chi = sharp_activation(m, r.solution, spec.beta);
        r.correction = afc_correction(m, spec, r.chi, p.theta);
        s = solve(system_matrix(K, r.correction), f);
        r.solution = s.x;
        r.report = s.report;
        ++r.passes;
    }
    if (r.correction.rows() == 0) r.correction = SparseOperator(m.size(), m.size());
    return r;
}

}  // namespace cdstab
