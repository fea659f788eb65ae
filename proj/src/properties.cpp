#include "cdstab/properties.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "cdstab/adsc.hpp"
#include "cdstab/lfa.hpp"
#include "cdstab/operators.hpp"

namespace cdstab {

namespace {

const Beta kBeta{1.0 / std::sqrt(1.36), 0.6 / std::sqrt(1.36)};

std::string fmt(const char* f, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Vec random_vec(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n);
    for (int k = 0; k < n; ++k) v[k] = g(rng);
    return v;
}

}  // namespace

double detector_variation_slope(const std::vector<int>& meshes, double delta_h)
{
    std::vector<double> lh, lv;
    for (int Ne : meshes) {
        const Mesh2D m = uniform_square(Ne);
        Vec V(m.size());
        for (int j = 0; j < m.ny(); ++j)
            for (int i = 0; i < m.nx(); ++i) {
                const double x = m.x.x(i), y = m.y.x(j);
                V[m.index(i, j)] = x * (1 - x) * y * (1 - y) * (1 + x * y);
            }
        const Vec chi = activation(theta_score(m, V, kBeta, delta_h), 0.05);
        double worst = 0.0;
        for (int j = 0; j < m.ny(); ++j)
            for (int i = 0; i < m.nx(); ++i) {
                double s = 0.0;
                if (i + 1 < m.nx()) s += std::abs(chi[m.index(i + 1, j)] - chi[m.index(i, j)]);
                if (j + 1 < m.ny()) s += std::abs(chi[m.index(i, j + 1)] - chi[m.index(i, j)]);
                worst = std::max(worst, s);
            }
        lh.push_back(std::log(1.0 / Ne));
        lv.push_back(std::log(worst));
    }
    const double n = static_cast<double>(lh.size());
    double mh = 0, mv = 0;
    for (std::size_t k = 0; k < lh.size(); ++k) {
        mh += lh[k] / n;
        mv += lv[k] / n;
    }
    double num = 0, den = 0;
    for (std::size_t k = 0; k < lh.size(); ++k) {
        num += (lh[k] - mh) * (lv[k] - mv);
        den += (lh[k] - mh) * (lh[k] - mh);
    }
    return num / den;
}

std::vector<PropertyResult> run_property_suite(unsigned seed)
{
    std::vector<PropertyResult> out;
    std::mt19937_64 rng(seed);
    const int Ne = 30;
    const Mesh2D m = uniform_square(Ne);
    ProblemSpec spec;
    spec.eps = 2e-3;
    spec.beta = kBeta;
    spec.source = gaussian_source();
    const Vec f = assemble_source(m, spec);
    const SparseOperator K = assemble_galerkin(m, spec);
    const double h = 1.0 / Ne;

    {
        const SparseOperator C = convection_part(m, spec.beta);
        const double r = (C + transpose(C)).max_abs() / C.max_abs();
        out.push_back({"convection skew-symmetry", r <= 1e-13, fmt("|C+C^T|/|C| = %.3e", r)});
    }

    // stabilization matrices
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec chi_rand(m.size()), chi_sharp(m.size());
    for (int k = 0; k < m.size(); ++k) {
        chi_rand[k] = unit(rng);
        chi_sharp[k] = unit(rng) < 0.3 ? 1.0 : 0.0;
    }
    AdscParams p;
    const std::vector<std::pair<std::string, SparseOperator>> stabs{
        {"upwind", assemble_upwind(m, spec) - K},
        {"supg", assemble_supg(m, spec, f).A - K},
        {"cip", assemble_cip(m, spec) - K},
        {"lps", assemble_lps(m, spec, f).A - K},
        {"adsc", adsc_correction(m, spec, chi_rand, p)},
        {"afc", afc_correction(m, spec, chi_sharp, 1.0)}};
    std::vector<Vec> xs;
    for (int k = 0; k < 100; ++k) xs.push_back(random_vec(rng, m.size()));
    for (const auto& [name, S] : stabs) {
        const double asym = asymmetry(S);
        double worst = 0.0;
        for (const auto& x : xs) worst = std::min(worst, x.dot(S.apply(x)) / x.squaredNorm());
        out.push_back({"symmetric PSD: " + name, asym <= 1e-13 && worst >= -1e-12,
                       fmt("asymmetry %.2e, min x^TSx/|x|^2 %.2e", asym, worst)});
    }
    for (const auto& [name, S] : stabs) {
        const SparseOperator A = K + S;
        double worst = 1e300;
        for (const auto& x : xs) {
            const double hx = discrete_h1_seminorm(m, x);
            worst = std::min(worst, h * h * x.dot(A.apply(x)) - spec.eps * hx * hx);
        }
        out.push_back({"energy coercivity: " + name, worst >= -1e-10, fmt("min h^2 x^TAx - eps|x|_1^2 = %.3e", worst)});
    }
    {
        double worst = 0.0;
        const int n8 = 8;
        std::vector<Vec> modes;
        for (int q = 1; q < n8; ++q)
            for (int pp = 1; pp < n8; ++pp) modes.push_back(sine_mode(n8, pp, q));
        for (std::size_t a = 0; a < modes.size(); ++a)
            for (std::size_t b = 0; b < modes.size(); ++b)
                worst = std::max(worst, std::abs(modes[a].dot(modes[b]) - (a == b ? 1.0 : 0.0)));
        out.push_back({"sine-mode orthonormality", worst <= 1e-12, fmt("max deviation %.3e", worst)});
    }
    {
        double worst = 0.0;
        for (int k1 = 1; k1 < 16; k1 += 3)
            for (int k2 = 1; k2 < 16; k2 += 4) worst = std::max(worst, symbol_identity_error(spec.eps, spec.beta, 16, k1, k2));
        out.push_back({"symbol identity (periodic stencil)", worst <= 1e-10, fmt("max relative deviation %.3e", worst)});
    }
    {
        const AdscResult r = solve_adsc(m, spec, f, p);
        out.push_back({"activation monotonicity", r.monotone,
                       fmt("%g coupled iterations, final variation %.3e", r.iterations, r.final_variation)});
        const Vec U0 = random_vec(rng, m.size());
        const RelaxedIterates it = relaxed_fixed_iterates(m, spec, f, r.activation.chi, p, U0, 5);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const double ratio = (it.iterates[k + 1] - it.fixed_point).norm() / (it.iterates[k] - it.fixed_point).norm();
            worst = std::max(worst, std::abs(ratio - (1.0 - p.omega)));
        }
        out.push_back({"fixed-activation relaxation ratio 1-omega", worst <= 1e-10, fmt("max |ratio-(1-omega)| = %.3e", worst)});
    }
    {
        const double slope = detector_variation_slope({20, 40, 80});
        out.push_back({"detector variation O(h)", slope >= 0.9, fmt("fitted slope %.3f", slope)});
    }
    return out;
}

}  // namespace cdstab
