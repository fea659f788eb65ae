#pragma once
// Scenario registry, reference solutions and benchmark rows.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdstab/adsc.hpp"
#include "cdstab/grid.hpp"
#include "cdstab/operators.hpp"

namespace cdstab {

enum class Method { galerkin, upwind, supg, cip, lps, afc, adsc, adsc_fixed_ref };
std::string method_name(Method m);

enum class MeshKind { uniform, shishkin, line };
enum class ReferenceKind { fine_grid, exact_formula };

struct MethodSpec {
    Method kind = Method::galerkin;
    std::string label;               // row label; defaults to method_name(kind)
    std::optional<int> cap;          // few-shot activation cap
    std::string distance_to;         // label of a row whose solution is the distance target
};

struct ScenarioCase {
    std::string label;  // empty for single-case scenarios
    ProblemSpec spec;
    MeshKind mesh = MeshKind::uniform;
    std::vector<int> levels;
    std::vector<MethodSpec> methods;
    ReferenceKind reference = ReferenceKind::fine_grid;
    int n_ref = 264;
    AdscParams adsc;
    AfcParams afc;
    double det_threshold = kDetectorThreshold;
    TvConvention tv = TvConvention::weighted_edges;
    bool modal_extras = false;  // dominant count, B-bar and gamma0 balance on Galerkin rows
};

struct Scenario {
    std::string name;
    std::string title;
    std::vector<ScenarioCase> cases;
};

struct BenchmarkRow {
    std::string scenario;
    std::string case_label;
    std::string method;
    int Ne = 0;
    double h = 0.0;
    double Pe = 0.0;
    DiagnosticsRow d;
    std::optional<double> rate;
    std::optional<int> iterations;
    std::optional<double> final_variation;
    std::map<std::string, double> extras;
    double seconds = 0.0;
    bool failed = false;
    std::string error;

    std::string key() const { return case_label.empty() ? scenario : scenario + "/" + case_label; }
};

std::vector<std::string> scenario_names();
bool has_scenario(const std::string& name);
Scenario make_scenario(const std::string& name);

// flat key=value overrides applied to every case; throws std::invalid_argument on unknown keys
void apply_overrides(Scenario& s, const std::map<std::string, std::string>& overrides);
std::vector<std::string> override_keys();

Mesh2D build_case_mesh(const ScenarioCase& c, int Ne);

// Fine-grid references are cached by problem and resolution.
class ReferenceCache {
public:
    // centered Galerkin solve on the uniform fine mesh
    const Vec& fine_solution(const ScenarioCase& c, int n_ref);
    std::size_t size() const { return store_.size(); }

private:
    std::map<std::string, Vec> store_;
};

Vec compute_reference(const ScenarioCase& c, const Mesh2D& coarse, ReferenceCache& cache);
Vec compute_reference(const ScenarioCase& c, const Mesh2D& coarse, ReferenceCache& cache, int n_ref);

std::vector<BenchmarkRow> run_scenario(const Scenario& s, ReferenceCache& cache);
void compute_rates(std::vector<BenchmarkRow>& rows);

// ADSC with each cap plus an uncapped run; rows carry the distance to the uncapped solution
std::vector<BenchmarkRow> few_shot_study(const ScenarioCase& base, const std::vector<int>& caps,
                                         ReferenceCache& cache);
// one ADSC row per parameter tuple
std::vector<BenchmarkRow> sensitivity_sweep(const ScenarioCase& base, const std::vector<AdscParams>& grid,
                                            ReferenceCache& cache);

void write_csv_header(std::ostream& os, const std::map<std::string, std::string>& overrides);
void write_csv_rows(std::ostream& os, const std::vector<BenchmarkRow>& rows);
void write_markdown(std::ostream& os, const Scenario& s, const std::vector<BenchmarkRow>& rows,
                    bool timing = false);

}  // namespace cdstab
