#pragma once
// Tensor-product meshes, grid functions and solution diagnostics.
//
// Interior unknowns are stored lexicographically with the x index fastest:
// k = j*nx + i, 0 <= i < nx, 0 <= j < ny.  A mesh without a y direction
// (has_y == false) is the one-dimensional reduction, ny == 1.

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace cdstab {

using Vec = Eigen::VectorXd;
using Beta = std::array<double, 2>;

struct Mesh1D {
    std::vector<double> nodes;  // ascending, nodes.front()==0, nodes.back()==1
    bool uniform = true;

    int Ne() const { return static_cast<int>(nodes.size()) - 1; }
    int interior() const { return Ne() - 1; }
    // width of interval k (between nodes k and k+1); exact 1/Ne on uniform meshes
    double step(int k) const;
    double max_step() const;
    double min_step() const;
    // coordinate of interior node i (0-based)
    double x(int i) const { return nodes[static_cast<std::size_t>(i) + 1]; }
};

Mesh1D build_uniform_mesh(int Ne);
double shishkin_tau(int Ne, double eps);
Mesh1D build_shishkin_mesh(int Ne, double eps);

struct Mesh2D {
    Mesh1D x;
    Mesh1D y;
    bool has_y = true;

    int nx() const { return x.interior(); }
    int ny() const { return has_y ? y.interior() : 1; }
    int size() const { return nx() * ny(); }
    int index(int i, int j) const { return j * nx() + i; }
    bool uniform() const { return x.uniform && (!has_y || y.uniform); }
    double max_step() const;
    // dual-cell weight of interior node (i,j); h^2 on a uniform 2D mesh
    double cell_weight(int i, int j) const;
};

Mesh2D make_mesh(const Mesh1D& x, const Mesh1D& y);
Mesh2D make_square_mesh(const Mesh1D& m);
Mesh2D make_line_mesh(const Mesh1D& m);
Mesh2D uniform_square(int Ne);

// grid function values with zero Dirichlet data outside the interior
inline double at(const Mesh2D& m, const Vec& U, int i, int j)
{
    if (i < 0 || i >= m.nx() || j < 0 || j >= m.ny()) return 0.0;
    return U[m.index(i, j)];
}

double discrete_l2_norm(const Mesh2D& m, const Vec& V);
double discrete_h1_seminorm(const Mesh2D& m, const Vec& V);

enum class TvConvention {
    interior_pairs,   // plain sum over interior neighbour pairs
    weighted_edges    // h * sum over all edges incl. boundary edges (zero data)
};
double total_variation(const Mesh2D& m, const Vec& U,
                       TvConvention c = TvConvention::interior_pairs);

struct ExtremaViolation {
    double undershoot = 0.0;
    double overshoot = 0.0;
    double total = 0.0;
};
ExtremaViolation extrema_violation(const Vec& U, const Vec& Uref);

// sign changes of the directional increments h*D-_beta, h*D+_beta with both
// magnitudes above threshold
constexpr double kDetectorThreshold = 1e-3;
int detector_count(const Mesh2D& m, const Vec& U, const Beta& beta,
                   double threshold = kDetectorThreshold);

// bilinear (linear in 1D) interpolation of a grid function given on a
// uniform mesh onto the interior nodes of another mesh
Vec interpolate_to_coarse(const Mesh2D& fine, const Vec& U_fine, const Mesh2D& coarse);

struct DiagnosticsRow {
    double l2_error = 0.0;
    double linf_error = 0.0;
    double tv = 0.0;
    double e_ext = 0.0;
    int detector_count = 0;
    double rho_stab_mean = 0.0;
};

}  // namespace cdstab
