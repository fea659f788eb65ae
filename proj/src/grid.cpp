#include "cdstab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdstab {

double Mesh1D::step(int k) const
{
    if (uniform) return 1.0 / Ne();
    return nodes[static_cast<std::size_t>(k) + 1] - nodes[static_cast<std::size_t>(k)];
}

double Mesh1D::max_step() const
{
    double s = 0.0;
    for (int k = 0; k < Ne(); ++k) s = std::max(s, step(k));
    return s;
}

double Mesh1D::min_step() const
{
    double s = step(0);
    for (int k = 1; k < Ne(); ++k) s = std::min(s, step(k));
    return s;
}

Mesh1D build_uniform_mesh(int Ne)
{
    if (Ne < 2) throw std::invalid_argument("build_uniform_mesh: Ne must be >= 2");
    Mesh1D m;
    m.uniform = true;
    m.nodes.resize(static_cast<std::size_t>(Ne) + 1);
    for (int k = 0; k <= Ne; ++k) m.nodes[k] = static_cast<double>(k) / Ne;
    return m;
}

double shishkin_tau(int Ne, double eps)
{
    return std::min(0.5, 2.0 * eps * std::log(static_cast<double>(Ne)));
}

Mesh1D build_shishkin_mesh(int Ne, double eps)
{
    if (Ne < 2 || Ne % 2 != 0)
        throw std::invalid_argument("build_shishkin_mesh: Ne must be even and >= 2");
    if (!(eps > 0)) throw std::invalid_argument("build_shishkin_mesh: eps must be > 0");
    const double tau = shishkin_tau(Ne, eps);
    const int half = Ne / 2;
    Mesh1D m;
    m.uniform = false;
    m.nodes.resize(static_cast<std::size_t>(Ne) + 1);
    const double hc = (1.0 - tau) / half, hf = tau / half;
    for (int k = 0; k <= half; ++k) m.nodes[k] = k * hc;
    for (int k = 1; k <= half; ++k) m.nodes[half + k] = (1.0 - tau) + k * hf;
    m.nodes[half] = 1.0 - tau;
    m.nodes[Ne] = 1.0;
    if (tau == 0.5) m.uniform = true;  // cap branch: both halves share the step
    return m;
}

double Mesh2D::max_step() const
{
    return has_y ? std::max(x.max_step(), y.max_step()) : x.max_step();
}

double Mesh2D::cell_weight(int i, int j) const
{
    const double wx = 0.5 * (x.step(i) + x.step(i + 1));
    if (!has_y) return wx;
    return wx * 0.5 * (y.step(j) + y.step(j + 1));
}

Mesh2D make_mesh(const Mesh1D& x, const Mesh1D& y) { return Mesh2D{x, y, true}; }
Mesh2D make_square_mesh(const Mesh1D& m) { return Mesh2D{m, m, true}; }
Mesh2D make_line_mesh(const Mesh1D& m) { return Mesh2D{m, Mesh1D{{0.0, 1.0}, true}, false}; }
Mesh2D uniform_square(int Ne) { return make_square_mesh(build_uniform_mesh(Ne)); }

double discrete_l2_norm(const Mesh2D& m, const Vec& V)
{
    double s = 0.0;
    for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i) {
            const double v = V[m.index(i, j)];
            s += m.cell_weight(i, j) * v * v;
        }
    return std::sqrt(s);
}

double discrete_h1_seminorm(const Mesh2D& m, const Vec& V)
{
    // ||D_x V||^2 + ||D_y V||^2 with edge differences including boundary edges
    double s = 0.0;
    for (int j = 0; j < m.ny(); ++j) {
        const double wy = m.has_y ? 0.5 * (m.y.step(j) + m.y.step(j + 1)) : 1.0;
        for (int e = 0; e <= m.nx(); ++e) {
            const double he = m.x.step(e);
            const double d = (at(m, V, e, j) - at(m, V, e - 1, j)) / he;
            s += he * wy * d * d;
        }
    }
    if (m.has_y)
        for (int i = 0; i < m.nx(); ++i) {
            const double wx = 0.5 * (m.x.step(i) + m.x.step(i + 1));
            for (int e = 0; e <= m.ny(); ++e) {
                const double he = m.y.step(e);
                const double d = (at(m, V, i, e) - at(m, V, i, e - 1)) / he;
                s += he * wx * d * d;
            }
        }
    return std::sqrt(s);
}

double total_variation(const Mesh2D& m, const Vec& U, TvConvention c)
{
    double s = 0.0;
    if (c == TvConvention::interior_pairs) {
        for (int j = 0; j < m.ny(); ++j)
            for (int i = 0; i < m.nx(); ++i) {
                if (i + 1 < m.nx()) s += std::abs(U[m.index(i + 1, j)] - U[m.index(i, j)]);
                if (m.has_y && j + 1 < m.ny()) s += std::abs(U[m.index(i, j + 1)] - U[m.index(i, j)]);
            }
        return s;
    }
    // each jump weighted by the transverse cell width
    for (int j = 0; j < m.ny(); ++j) {
        const double wy = m.has_y ? 0.5 * (m.y.step(j) + m.y.step(j + 1)) : 1.0;
        for (int e = 0; e <= m.nx(); ++e) s += wy * std::abs(at(m, U, e, j) - at(m, U, e - 1, j));
    }
    if (m.has_y)
        for (int i = 0; i < m.nx(); ++i) {
            const double wx = 0.5 * (m.x.step(i) + m.x.step(i + 1));
            for (int e = 0; e <= m.ny(); ++e) s += wx * std::abs(at(m, U, i, e) - at(m, U, i, e - 1));
        }
    return s;
}

ExtremaViolation extrema_violation(const Vec& U, const Vec& Uref)
{
    ExtremaViolation v;
    v.undershoot = std::max(0.0, Uref.minCoeff() - U.minCoeff());
    v.overshoot = std::max(0.0, U.maxCoeff() - Uref.maxCoeff());
    v.total = v.undershoot + v.overshoot;
    return v;
}

int detector_count(const Mesh2D& m, const Vec& U, const Beta& beta, double threshold)
{
    const double b1p = std::max(beta[0], 0.0), b1m = std::min(beta[0], 0.0);
    const double b2p = std::max(beta[1], 0.0), b2m = std::min(beta[1], 0.0);
    int count = 0;
    for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i) {
            const double c = U[m.index(i, j)];
            const double mx = c - at(m, U, i - 1, j), px = at(m, U, i + 1, j) - c;
            double my = 0.0, py = 0.0;
            if (m.has_y) {
                my = c - at(m, U, i, j - 1);
                py = at(m, U, i, j + 1) - c;
            }
            const double dm = b1p * mx + b1m * px + b2p * my + b2m * py;
            const double dp = b1p * px + b1m * mx + b2p * py + b2m * my;
            if (dm * dp < 0 && std::abs(dm) > threshold && std::abs(dp) > threshold) ++count;
        }
    return count;
}

namespace {

// locate t in a uniform node set: cell index k and local coordinate s in [0,1]
void locate(const Mesh1D& f, double t, int& k, double& s)
{
    const int Ne = f.Ne();
    double pos = t * Ne;
    k = std::clamp(static_cast<int>(std::floor(pos)), 0, Ne - 1);
    s = pos - k;
}

double full_value(const Mesh2D& m, const Vec& U, int a, int b)
{
    // node indices a, b run over 0..Ne including boundary nodes
    return at(m, U, a - 1, m.has_y ? b - 1 : 0);
}

}  // namespace

Vec interpolate_to_coarse(const Mesh2D& fine, const Vec& U_fine, const Mesh2D& coarse)
{
    if (!fine.uniform()) throw std::invalid_argument("interpolate_to_coarse: fine mesh must be uniform");
    Vec out(coarse.size());
    for (int j = 0; j < coarse.ny(); ++j)
        for (int i = 0; i < coarse.nx(); ++i) {
            int kx;
            double sx;
            locate(fine.x, coarse.x.x(i), kx, sx);
            if (!coarse.has_y) {
                out[coarse.index(i, j)] =
                    (1 - sx) * full_value(fine, U_fine, kx, 0) + sx * full_value(fine, U_fine, kx + 1, 0);
                continue;
            }
            int ky;
            double sy;
            locate(fine.y, coarse.y.x(j), ky, sy);
            const double v00 = full_value(fine, U_fine, kx, ky), v10 = full_value(fine, U_fine, kx + 1, ky);
            const double v01 = full_value(fine, U_fine, kx, ky + 1), v11 = full_value(fine, U_fine, kx + 1, ky + 1);
            out[coarse.index(i, j)] =
                (1 - sy) * ((1 - sx) * v00 + sx * v10) + sy * ((1 - sx) * v01 + sx * v11);
        }
    return out;
}

}  // namespace cdstab
