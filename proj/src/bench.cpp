#include "cdstab/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cdstab/lfa.hpp"

namespace cdstab {

std::string method_name(Method m)
{
    switch (m) {
    case Method::galerkin: return "galerkin";
    case Method::upwind: return "upwind";
    case Method::supg: return "supg";
    case Method::cip: return "cip";
    case Method::lps: return "lps";
    case Method::afc: return "afc";
    case Method::adsc: return "adsc";
    case Method::adsc_fixed_ref: return "adsc-fixed-ref";
    }
    return "?";
}

std::vector<std::string> override_keys()
{
    return {"gamma_min", "gamma_max",  "kappa",       "omega",     "delta_h",       "eta_det",
            "activation_tol", "max_iterations", "few_shot_cap", "detector", "transfer", "warm_start",
            "n_ref",     "det_threshold", "afc_iterations", "afc_theta"};
}

namespace {

double to_double(const std::string& k, const std::string& v)
{
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty()) throw std::invalid_argument("override " + k + ": not a number: " + v);
    return d;
}

int to_int(const std::string& k, const std::string& v)
{
    const double d = to_double(k, v);
    if (d != std::floor(d)) throw std::invalid_argument("override " + k + ": not an integer: " + v);
    return static_cast<int>(d);
}

void apply_one(ScenarioCase& c, const std::string& k, const std::string& v)
{
    AdscParams& p = c.adsc;
    if (k == "gamma_min") p.gamma_min = to_double(k, v);
    else if (k == "gamma_max") p.gamma_max = to_double(k, v);
    else if (k == "kappa") p.kappa = to_double(k, v);
    else if (k == "omega") p.omega = to_double(k, v);
    else if (k == "delta_h") p.delta_h = to_double(k, v);
    else if (k == "eta_det") p.eta_det = to_double(k, v);
    else if (k == "activation_tol") p.activation_tol = to_double(k, v);
    else if (k == "max_iterations") p.max_iterations = to_int(k, v);
    else if (k == "few_shot_cap") p.few_shot_cap = to_int(k, v);
    else if (k == "detector") {
        if (v == "regularized") p.detector = DetectorKind::regularized;
        else if (v == "sharp") p.detector = DetectorKind::sharp;
        else throw std::invalid_argument("override detector: expected regularized|sharp");
    } else if (k == "transfer") {
        if (v == "averaged") p.transfer = TransferKind::averaged;
        else if (v == "max") p.transfer = TransferKind::max;
        else throw std::invalid_argument("override transfer: expected averaged|max");
    } else if (k == "warm_start") {
        if (v == "galerkin") p.warm_start = WarmStart::galerkin;
        else if (v == "zero") p.warm_start = WarmStart::zero;
        else if (v == "upwind") p.warm_start = WarmStart::upwind;
        else if (v == "coarse") p.warm_start = WarmStart::coarse;
        else throw std::invalid_argument("override warm_start: expected galerkin|zero|upwind|coarse");
    } else if (k == "n_ref") c.n_ref = to_int(k, v);
    else if (k == "det_threshold") c.det_threshold = to_double(k, v);
    else if (k == "afc_iterations") c.afc.iterations = to_int(k, v);
    else if (k == "afc_theta") c.afc.theta = to_double(k, v);
    else throw std::invalid_argument("unknown override key: " + k);
}

std::string spec_key(const ScenarioCase& c)
{
    std::ostringstream os;
    os.precision(17);
    os << static_cast<int>(c.mesh == MeshKind::line) << '|' << c.spec.eps << '|' << c.spec.beta[0] << ','
       << c.spec.beta[1] << '|' << static_cast<int>(c.spec.source.kind);
    for (const auto& g : c.spec.source.bumps) os << '|' << g.xc << ',' << g.yc << ',' << g.sigma << ',' << g.amplitude;
    return os.str();
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

void apply_overrides(Scenario& s, const std::map<std::string, std::string>& overrides)
{
    for (auto& c : s.cases) {
        for (const auto& [k, v] : overrides) apply_one(c, k, v);
        c.adsc.validate();
    }
}

Mesh2D build_case_mesh(const ScenarioCase& c, int Ne)
{
    switch (c.mesh) {
    case MeshKind::shishkin: return make_square_mesh(build_shishkin_mesh(Ne, c.spec.eps));
    case MeshKind::line: return make_line_mesh(build_uniform_mesh(Ne));
    case MeshKind::uniform: break;
    }
    return uniform_square(Ne);
}

const Vec& ReferenceCache::fine_solution(const ScenarioCase& c, int n_ref)
{
    const std::string key = spec_key(c) + "|" + std::to_string(n_ref);
    auto it = store_.find(key);
    if (it != store_.end()) return it->second;
    const Mesh2D fine = c.mesh == MeshKind::line ? make_line_mesh(build_uniform_mesh(n_ref)) : uniform_square(n_ref);
    Vec U = solve(assemble_galerkin(fine, c.spec), assemble_source(fine, c.spec)).x;
    return store_.emplace(key, std::move(U)).first->second;
}

Vec compute_reference(const ScenarioCase& c, const Mesh2D& coarse, ReferenceCache& cache, int n_ref)
{
    if (c.reference == ReferenceKind::exact_formula) {
        if (!c.spec.has_exact()) throw std::invalid_argument("compute_reference: no exact solution for this source");
        return sample_exact(coarse, c.spec);
    }
    const Mesh2D fine = c.mesh == MeshKind::line ? make_line_mesh(build_uniform_mesh(n_ref)) : uniform_square(n_ref);
    return interpolate_to_coarse(fine, cache.fine_solution(c, n_ref), coarse);
}

Vec compute_reference(const ScenarioCase& c, const Mesh2D& coarse, ReferenceCache& cache)
{
    return compute_reference(c, coarse, cache, c.n_ref);
}

namespace {

struct MethodOutput {
    Vec U;
    SparseOperator S;  // added to the Galerkin matrix
};

void run_level(const Scenario& s, const ScenarioCase& c, int Ne, ReferenceCache& cache,
               std::vector<BenchmarkRow>& rows)
{
    const Mesh2D mesh = build_case_mesh(c, Ne);
    const Vec f = assemble_source(mesh, c.spec);
    const Vec Uref = compute_reference(c, mesh, cache);
    const SparseOperator K = assemble_galerkin(mesh, c.spec);
    const double Pe = mesh_peclet(mesh, c.spec);
    std::optional<ModalSet> modal;
    if (mesh.uniform()) modal = modal_set(mesh, c.spec);

    std::map<std::string, Vec> solutions;
    const std::size_t first = rows.size();
    for (const auto& ms : c.methods) {
        BenchmarkRow row;
        row.scenario = s.name;
        row.case_label = c.label;
        row.method = ms.label.empty() ? method_name(ms.kind) : ms.label;
        row.Ne = Ne;
        row.h = mesh.max_step();
        row.Pe = Pe;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            MethodOutput out;
            switch (ms.kind) {
            case Method::galerkin:
                out.U = solve(K, f).x;
                out.S = SparseOperator(mesh.size(), mesh.size());
                break;
            case Method::upwind: {
                const SparseOperator A = assemble_upwind(mesh, c.spec);
                out.U = solve(A, f).x;
                out.S = A - K;
                break;
            }
            case Method::supg: {
                const Discretization d = assemble_supg(mesh, c.spec, f);
                out.U = solve(d.A, d.rhs).x;
                out.S = d.A - K;
                break;
            }
            case Method::cip: {
                const SparseOperator A = assemble_cip(mesh, c.spec);
                out.U = solve(A, f).x;
                out.S = A - K;
                break;
            }
            case Method::lps: {
                const Discretization d = assemble_lps(mesh, c.spec, f);
                out.U = solve(d.A, d.rhs).x;
                out.S = d.A - K;
                break;
            }
            case Method::afc: {
                AfcResult r = solve_afc(mesh, c.spec, f, c.afc);
                out.U = r.solution;
                out.S = r.correction;
                row.iterations = r.passes;
                break;
            }
            case Method::adsc:
            case Method::adsc_fixed_ref: {
                AdscParams p = c.adsc;
                if (ms.cap) p.few_shot_cap = ms.cap;
                AdscOptions opt;
                if (ms.kind == Method::adsc_fixed_ref) {
                    opt.mode = AdscMode::fixed_reference;
                    opt.reference = Uref;
                }
                AdscResult r = solve_adsc(mesh, c.spec, f, p, opt);
                out.U = r.solution;
                out.S = r.correction;
                if (ms.kind == Method::adsc) {
                    row.iterations = r.iterations;
                    row.final_variation = r.final_variation;
                    row.extras["stationary"] = r.stationary ? 1.0 : 0.0;
                }
                row.extras["activation_mass"] = r.activation_mass;
                row.extras["active_nodes"] = r.active_nodes;
                row.extras["residual"] = r.report.residual_norm / std::max(f.norm(), 1e-300);
                row.extras["galerkin_identical"] = (out.S.nnz() == 0 || K + out.S == K) ? 1.0 : 0.0;
                break;
            }
            }
            const Vec e = out.U - Uref;
            row.d.l2_error = discrete_l2_norm(mesh, e);
            row.d.linf_error = e.lpNorm<Eigen::Infinity>();
            row.d.tv = total_variation(mesh, out.U, c.tv);
            const ExtremaViolation ev = extrema_violation(out.U, Uref);
            row.d.e_ext = ev.total;
            row.extras["undershoot"] = ev.undershoot;
            row.extras["overshoot"] = ev.overshoot;
            row.d.detector_count = detector_count(mesh, out.U, c.spec.beta, c.det_threshold);
            row.d.rho_stab_mean = modal ? rayleigh_rho_stab(out.S, *modal) : nan();
            if (ms.kind == Method::galerkin && c.modal_extras && modal) {
                row.extras["dominant_count"] = modal->dominant_count;
                row.extras["B_mean"] = modal->B_mean;
                const Gamma0Balance g = gamma0_balance(*modal, Pe, 1.0, c.adsc.gamma_min, c.adsc.gamma_max);
                row.extras["gamma0_raw"] = g.raw;
                row.extras["gamma0_projected"] = g.projected;
            }
            if (c.mesh == MeshKind::shishkin) {
                const double tau = shishkin_tau(Ne, c.spec.eps);
                const double hc = mesh.x.max_step(), hf = mesh.x.min_step(), nb = c.spec.beta_norm();
                row.extras["tau"] = tau;
                row.extras["h_c"] = hc;
                row.extras["h_f"] = hf;
                row.extras["Pe_c"] = nb * hc / (2 * c.spec.eps);
                row.extras["Pe_f"] = nb * hf / (2 * c.spec.eps);
            }
            solutions[row.method] = std::move(out.U);
        } catch (const std::exception& ex) {
            row.failed = true;
            row.error = ex.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(row));
    }
    for (std::size_t k = first; k < rows.size(); ++k) {
        const MethodSpec& ms = c.methods[k - first];
        if (ms.distance_to.empty() || rows[k].failed) continue;
        auto a = solutions.find(rows[k].method), b = solutions.find(ms.distance_to);
        if (a != solutions.end() && b != solutions.end())
            rows[k].extras["distance"] = discrete_l2_norm(mesh, a->second - b->second);
    }
}

}  // namespace

std::vector<BenchmarkRow> run_scenario(const Scenario& s, ReferenceCache& cache)
{
    std::vector<BenchmarkRow> rows;
    for (const auto& c : s.cases)
        for (int Ne : c.levels) run_level(s, c, Ne, cache, rows);
    compute_rates(rows);
    return rows;
}

void compute_rates(std::vector<BenchmarkRow>& rows)
{
    std::map<std::pair<std::string, std::string>, const BenchmarkRow*> last;
    for (auto& r : rows) {
        r.rate.reset();
        if (r.failed) continue;
        const auto key = std::make_pair(r.key(), r.method);
        auto it = last.find(key);
        if (it != last.end() && it->second->h != r.h && it->second->d.l2_error > 0 && r.d.l2_error > 0)
            r.rate = std::log(it->second->d.l2_error / r.d.l2_error) / std::log(it->second->h / r.h);
        last[key] = &r;
    }
}

std::vector<BenchmarkRow> few_shot_study(const ScenarioCase& base, const std::vector<int>& caps, ReferenceCache& cache)
{
    Scenario s;
    s.name = "few-shot";
    ScenarioCase c = base;
    c.methods.clear();
    for (int cap : caps) c.methods.push_back({Method::adsc, "adsc-cap" + std::to_string(cap), cap, "adsc"});
    c.methods.push_back({Method::adsc, "adsc", std::nullopt, "adsc"});
    s.cases = {c};
    return run_scenario(s, cache);
}

std::vector<BenchmarkRow> sensitivity_sweep(const ScenarioCase& base, const std::vector<AdscParams>& grid,
                                            ReferenceCache& cache)
{
    Scenario s;
    s.name = "sensitivity";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        ScenarioCase c = base;
        c.label = "params#" + std::to_string(k);
        c.methods = {{Method::adsc, "adsc", std::nullopt, ""}};
        c.adsc = grid[k];
        s.cases.push_back(c);
    }
    return run_scenario(s, cache);
}

namespace {

std::string num(double v)
{
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v)
{
    if (std::isnan(v)) return "-";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

void write_csv_header(std::ostream& os, const std::map<std::string, std::string>& overrides)
{
    for (const auto& [k, v] : overrides) os << "# " << k << '=' << v << '\n';
    os << "scenario,method,Ne,h,Pe,l2,linf,tv,e_ext,det,rho_stab,rate,iterations,final_variation\n";
}

void write_csv_rows(std::ostream& os, const std::vector<BenchmarkRow>& rows)
{
    for (const auto& r : rows) {
        os << r.key() << ',' << r.method << ',' << r.Ne << ',' << num(r.h) << ',' << num(r.Pe) << ',';
        if (r.failed) {
            os << ",,,,,,,,\n";
            continue;
        }
        os << num(r.d.l2_error) << ',' << num(r.d.linf_error) << ',' << num(r.d.tv) << ',' << num(r.d.e_ext) << ','
           << r.d.detector_count << ',' << num(r.d.rho_stab_mean) << ',' << (r.rate ? num(*r.rate) : "") << ','
           << (r.iterations ? std::to_string(*r.iterations) : "") << ','
           << (r.final_variation ? num(*r.final_variation) : "") << '\n';
    }
}

void write_markdown(std::ostream& os, const Scenario& s, const std::vector<BenchmarkRow>& rows, bool timing)
{
    os << "## " << s.name << "\n\n" << s.title << "\n\n";
    std::set<std::string> extra_keys;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.extras) extra_keys.insert(k);
    const bool multi = s.cases.size() > 1;
    if (multi) os << "| case ";
    os << "| method | Ne | Pe | L2 | Linf | TV | E_ext | Det | rho_stab | rate | iter |";
    for (const auto& k : extra_keys) os << ' ' << k << " |";
    if (timing) os << " seconds |";
    os << '\n';
    const std::size_t ncol = 12 + extra_keys.size() + (multi ? 1 : 0) + (timing ? 1 : 0);
    for (std::size_t k = 0; k < ncol; ++k) os << "|---";
    os << "|\n";
    for (const auto& r : rows) {
        if (multi) os << "| " << r.case_label << ' ';
        os << "| " << r.method << " | " << r.Ne << " | " << short_num(r.Pe) << " | ";
        if (r.failed) {
            os << "failed: " << r.error << " |\n";
            continue;
        }
        os << short_num(r.d.l2_error) << " | " << short_num(r.d.linf_error) << " | " << short_num(r.d.tv) << " | "
           << short_num(r.d.e_ext) << " | " << r.d.detector_count << " | " << short_num(r.d.rho_stab_mean) << " | "
           << (r.rate ? short_num(*r.rate) : "-") << " | " << (r.iterations ? std::to_string(*r.iterations) : "-")
           << " |";
        for (const auto& k : extra_keys) {
            auto it = r.extras.find(k);
            os << ' ' << (it == r.extras.end() ? "-" : short_num(it->second)) << " |";
        }
        if (timing) os << ' ' << short_num(r.seconds) << " |";
        os << '\n';
    }
    os << '\n';
}

}  // namespace cdstab
