#pragma once
// Problem data, source terms and the assembled discretizations.

#include <vector>

#include "cdstab/grid.hpp"
#include "cdstab/sparse.hpp"

namespace cdstab {

struct Gaussian {
    double xc = 0.5, yc = 0.5;
    double sigma = 0.07;
    double amplitude = 1.0;
};

enum class SourceKind { gaussian, manufactured_sine, nist_layer };

struct SourceSpec {
    SourceKind kind = SourceKind::gaussian;
    std::vector<Gaussian> bumps{Gaussian{}};  // one entry, or two for a double source
};

struct ProblemSpec {
    double eps = 2e-3;
    Beta beta{1.0, 0.0};
    SourceSpec source;

    bool has_exact() const { return source.kind != SourceKind::gaussian; }
    double beta_norm() const;
};

// a*exp(-|x-c|^2/sigma^2)
SourceSpec gaussian_source(double sigma = 0.07, double amplitude = 1.0);
SourceSpec double_gaussian_source();
SourceSpec narrow_gaussian_source();

// l(t) = t - (exp((t-1)/eps) - exp(-1/eps)) / (1 - exp(-1/eps)) and derivatives
double nist_layer(double t, double eps);
double nist_layer_d1(double t, double eps);
double nist_layer_d2(double t, double eps);

double exact_solution(const ProblemSpec& spec, double x, double y);
double source_value(const ProblemSpec& spec, double x, double y);
// on a line mesh the second coordinate is ignored (y-factors taken as 1)
Vec assemble_source(const Mesh2D& m, const ProblemSpec& spec);
Vec sample_exact(const Mesh2D& m, const ProblemSpec& spec);

// one-dimensional blocks on the interior nodes of a 1D mesh
SparseOperator second_difference(const Mesh1D& m);    // approximates -d2/dx2
SparseOperator first_derivative(const Mesh1D& m);     // 3-point second order
SparseOperator edge_difference_1d(const Mesh1D& m);   // Ne x (Ne-1), entries +-1/h_e
SparseOperator one_sided_difference(const Mesh1D& m, bool backward);
SparseOperator smoothing_average(int n);              // tridiag(1/4, 1/2, 1/4)

enum class Direction { x, y };

// lift a 1D block to the 2D interior ordering (x fastest)
SparseOperator lift(const Mesh2D& m, const SparseOperator& A1, Direction d);

SparseOperator assemble_diffusion(const Mesh2D& m);          // -Laplacian
SparseOperator convection_part(const Mesh2D& m, const Beta& beta);
SparseOperator assemble_galerkin(const Mesh2D& m, const ProblemSpec& spec);
// maps interior values to all edges of the given direction (Dirichlet zero);
// x-edge rows are ordered j*(nx+1)+e, y-edge rows e*nx+i
SparseOperator assemble_edge_difference(const Mesh2D& m, Direction d);
// step h_e of every edge row of assemble_edge_difference
Vec edge_steps(const Mesh2D& m, Direction d);

struct Discretization {
    SparseOperator A;
    Vec rhs;
};

SparseOperator assemble_upwind(const Mesh2D& m, const ProblemSpec& spec);
Discretization assemble_supg(const Mesh2D& m, const ProblemSpec& spec, const Vec& f);
constexpr double kGammaCip = 0.030;
SparseOperator assemble_cip(const Mesh2D& m, const ProblemSpec& spec, double gamma = kGammaCip);
constexpr double kGammaLps = 1.0;
Discretization assemble_lps(const Mesh2D& m, const ProblemSpec& spec, const Vec& f,
                            double gamma = kGammaLps);

double supg_tau(const Mesh2D& m, const ProblemSpec& spec);
double mesh_peclet(const Mesh2D& m, const ProblemSpec& spec);  // |beta| h_max / (2 eps)

}  // namespace cdstab
