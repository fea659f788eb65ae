#pragma once
// Adaptive directional sparse correction: detector, parameter law, edge
// weights and the monotone activation iteration.  The AFC-inspired
// comparator shares the detector and lives here as well.

#include <optional>
#include <vector>

#include "cdstab/grid.hpp"
#include "cdstab/operators.hpp"
#include "cdstab/sparse.hpp"

namespace cdstab {

enum class DetectorKind { regularized, sharp };
enum class TransferKind { averaged, max };
enum class WarmStart { galerkin, zero, upwind, coarse };

struct AdscParams {
    double gamma_min = 0.08;
    double gamma_max = 0.25;
    double kappa = 2.0;
    double omega = 0.35;
    double delta_h = 1e-12;
    double eta_det = 0.05;
    double activation_tol = 1e-8;
    int max_iterations = 500;
    std::optional<int> few_shot_cap;
    DetectorKind detector = DetectorKind::regularized;
    TransferKind transfer = TransferKind::averaged;
    WarmStart warm_start = WarmStart::galerkin;

    void validate() const;
};

struct DirectionalDifferences {
    Vec minus;
    Vec plus;
};

// upwind-weighted backward/forward differences along beta (divided)
DirectionalDifferences directional_differences(const Mesh2D& m, const Vec& U, const Beta& beta);
Vec theta_score(const Mesh2D& m, const Vec& U, const Beta& beta, double delta_h);
Vec activation(const Vec& theta, double eta_det);
Vec sharp_activation(const Mesh2D& m, const Vec& U, const Beta& beta);
// nodal activation of U for the configured detector
Vec detect(const Mesh2D& m, const Vec& U, const Beta& beta, const AdscParams& p);

struct EdgeActivation {
    Vec x;  // rows of the x edge difference
    Vec y;  // rows of the y edge difference (empty on line meshes)
};
EdgeActivation edge_transfer(const Mesh2D& m, const Vec& chi, TransferKind kind);

struct ActivationField {
    Vec chi;
    EdgeActivation edges;
};

struct GammaLaw {
    double gamma0 = 0.0;
    double gamma1 = 0.0;
    double eta_pe = 0.0;
};
GammaLaw gamma_law(double Pe, const AdscParams& p);

struct EdgeWeights {
    Vec wx;
    Vec wy;
};
// alpha = |beta_r| h_e (gamma0 + gamma1 eta_Pe chi_e) with the local edge Peclet number
EdgeWeights edge_coefficients(const Mesh2D& m, const EdgeActivation& chi, const ProblemSpec& spec,
                              const AdscParams& p);

// symmetrized D_x^T W_x D_x + D_y^T W_y D_y
SparseOperator adsc_correction(const Mesh2D& m, const ProblemSpec& spec, const Vec& chi, const AdscParams& p);

enum class AdscMode { coupled, fixed_activation, fixed_reference };

struct AdscOptions {
    AdscMode mode = AdscMode::coupled;
    Vec chi;        // fixed_activation
    Vec reference;  // fixed_reference: activation built once from this field
    Vec initial;    // coupled: explicit warm start overriding params.warm_start
};

struct AdscResult {
    Vec solution;
    ActivationField activation;
    SparseOperator correction;
    int iterations = 0;
    double final_variation = 0.0;
    double activation_mass = 0.0;
    int active_nodes = 0;  // chi > 1e-3
    bool stationary = true;
    bool monotone = true;  // chi never decreased
    std::vector<double> variation_history;
    SolveReport report;
};

AdscResult solve_adsc(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, const AdscParams& p,
                      const AdscOptions& opt = {});

Vec warm_start(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, WarmStart w);

struct RelaxedIterates {
    Vec fixed_point;
    std::vector<Vec> iterates;  // U^(0), ..., U^(steps)
};
// U <- (1-omega) U + omega A^{-1} f for a frozen activation
RelaxedIterates relaxed_fixed_iterates(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, const Vec& chi,
                                       const AdscParams& p, const Vec& U0, int steps);

struct AfcParams {
    double theta = 1.0;
    int iterations = 80;
};

struct AfcResult {
    Vec solution;
    Vec chi;
    SparseOperator correction;  // last limiting matrix
    int passes = 0;
    SolveReport report;
};

SparseOperator afc_correction(const Mesh2D& m, const ProblemSpec& spec, const Vec& chi, double theta);
AfcResult solve_afc(const Mesh2D& m, const ProblemSpec& spec, const Vec& f, const AfcParams& p = {});

}  // namespace cdstab
