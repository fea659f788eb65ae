#pragma once
// Local Fourier analysis: interior symbols, modal indicators, dominant
// sets, modal-balance rule and the rectified reference operator.

#include <complex>
#include <vector>

#include "cdstab/grid.hpp"
#include "cdstab/operators.hpp"
#include "cdstab/sparse.hpp"

namespace cdstab {

struct Symbol {
    double a = 0.0;  // diffusive part
    double b = 0.0;  // convective part
};

// a = 2 eps/h^2 (2 - cos t1 - cos t2), b = (b1 sin t1 + b2 sin t2)/h
Symbol symbol(double eps, const Beta& beta, double h, double theta1, double theta2);

enum class ModalEvaluation {
    dirichlet_rayleigh,  // finite-matrix Rayleigh quotient of the assembled operator
    interior_symbol      // translation-invariant symbol formula
};

enum class ModalProbe {
    exponential,  // exp(i(r t_p + s t_q)) truncated to the interior nodes
    sine          // orthonormal Dirichlet sine mode
};

// psi^H A psi / |psi|^2 for every mode (p,q), stored at p + q*nx
std::vector<std::complex<double>> modal_forms(const SparseOperator& A, int nx, int ny,
                                              ModalProbe probe = ModalProbe::exponential);

struct ModalSet {
    int Ne = 0;
    int nx = 0, ny = 0;  // ny == 1 for the line reduction
    double eps = 0.0, h = 0.0;
    Beta beta{};
    std::vector<double> theta_x, theta_y;  // t_p = p pi/(N+1)
    std::vector<double> a, b, rho;         // per mode, index p + q*nx
    std::vector<char> dominant_mask;       // rho > 1
    int dominant_count = 0;
    double mean_rho_gal = 0.0;
    std::vector<double> B;
    double B_mean = 0.0;
    ModalEvaluation evaluation = ModalEvaluation::dirichlet_rayleigh;

    int modes() const { return nx * ny; }
};

ModalSet modal_set(double eps, const Beta& beta, int Ne,
                   ModalEvaluation ev = ModalEvaluation::dirichlet_rayleigh);
ModalSet modal_set(const Mesh2D& m, const ProblemSpec& spec,
                   ModalEvaluation ev = ModalEvaluation::dirichlet_rayleigh);

struct Gamma0Balance {
    double raw = 0.0;
    double projected = 0.0;
};
Gamma0Balance gamma0_balance(const ModalSet& modal, double Pe_h, double rho_target,
                             double gamma_min, double gamma_max);

// 1-based p, q; phi(i,j) = 2/(N+1) sin(i p pi/(N+1)) sin(j q pi/(N+1))
Vec sine_mode(int Ne, int p, int q);

// per-mode stabilization increment delta_pq = Re(psi^H S psi)/|psi|^2
std::vector<double> modal_increments(const SparseOperator& S, const ModalSet& modal,
                                     ModalProbe probe = ModalProbe::exponential);
double rayleigh_rho_stab(const SparseOperator& S, const ModalSet& modal,
                         ModalProbe probe = ModalProbe::exponential);

// expand f in sine modes, divide by |lambda_pq|, reconstruct
Vec reference_modal_solve(const ModalSet& modal, const Vec& f);

double alpha_star(double eps, double rho);

struct FootprintPoint {
    double theta1, theta2;
    double a, b;
    double jacobian;  // d(a,b)/d(theta1,theta2)
};
constexpr int kFootprintDensity = 256;
std::vector<FootprintPoint> footprint_sample(double eps, const Beta& beta, double h,
                                             int density = kFootprintDensity);

// apply the periodic interior stencil to exp(i(r t1 + s t2)) on an n x n torus
// and return the worst relative deviation from (a + i b) * mode
double symbol_identity_error(double eps, const Beta& beta, int n, int k1, int k2);

}  // namespace cdstab
