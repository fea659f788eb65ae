// Built-in scenario registry.
#include <cmath>
#include <functional>
#include <stdexcept>

#include "cdstab/bench.hpp"

namespace cdstab {

namespace {

const Beta kMainBeta{1.0 / std::sqrt(1.36), 0.6 / std::sqrt(1.36)};
const Beta kNistBeta{0.5, std::sqrt(3.0) / 2.0};
const std::vector<int> kRefinement{30, 45, 60, 90, 120};

std::vector<MethodSpec> methods(std::initializer_list<Method> ms)
{
    std::vector<MethodSpec> out;
    for (Method m : ms) out.push_back({m, method_name(m), std::nullopt, ""});
    return out;
}

const std::initializer_list<Method> kAll{Method::galerkin, Method::upwind, Method::supg, Method::cip,
                                         Method::lps,      Method::afc,    Method::adsc};

ScenarioCase main_case()
{
    ScenarioCase c;
    c.spec.eps = 2e-3;
    c.spec.beta = kMainBeta;
    c.spec.source = gaussian_source();
    c.levels = {45};
    c.methods = methods(kAll);
    return c;
}

ScenarioCase nist_case(double eps, MeshKind mesh, std::vector<int> levels)
{
    ScenarioCase c;
    c.label = "";
    c.spec.eps = eps;
    c.spec.beta = kNistBeta;
    c.spec.source = SourceSpec{SourceKind::nist_layer, {}};
    c.mesh = mesh;
    c.levels = std::move(levels);
    c.methods = methods({Method::galerkin, Method::upwind, Method::supg, Method::adsc});
    c.reference = ReferenceKind::exact_formula;
    // the exponential-layer rows use the conservative maximum transfer
    if (mesh == MeshKind::uniform) c.adsc.transfer = TransferKind::max;
    return c;
}

ScenarioCase manufactured_case(double eps, std::vector<int> levels)
{
    ScenarioCase c;
    c.spec.eps = eps;
    c.spec.beta = kMainBeta;
    c.spec.source = SourceSpec{SourceKind::manufactured_sine, {}};
    c.levels = std::move(levels);
    c.methods = methods({Method::galerkin, Method::adsc});
    c.reference = ReferenceKind::exact_formula;
    return c;
}

std::string fmt_param(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

Scenario build(const std::string& name)
{
    Scenario s;
    s.name = name;
    if (name == "main2d") {
        s.title = "Main 2D Gaussian test, Ne=45";
        ScenarioCase c = main_case();
        c.modal_extras = true;
        s.cases = {c};
    } else if (name == "mesh") {
        s.title = "Mesh refinement, main 2D test";
        ScenarioCase c = main_case();
        c.levels = kRefinement;
        c.methods = methods({Method::galerkin, Method::upwind, Method::supg, Method::adsc});
        c.modal_extras = true;
        s.cases = {c};
    } else if (name == "inactive") {
        s.title = "Manufactured solution, inactive regime (eps=1)";
        s.cases = {manufactured_case(1.0, {20, 40, 80, 160})};
    } else if (name == "active") {
        s.title = "Manufactured solution, active regime (eps=2e-3)";
        s.cases = {manufactured_case(2e-3, kRefinement)};
    } else if (name == "nist-uniform-2") {
        s.title = "Exponential-layer problem, uniform meshes, eps=1e-2";
        s.cases = {nist_case(1e-2, MeshKind::uniform, kRefinement)};
    } else if (name == "nist-uniform-3") {
        s.title = "Exponential-layer problem, uniform meshes, eps=1e-3";
        s.cases = {nist_case(1e-3, MeshKind::uniform, kRefinement)};
    } else if (name == "nist-shishkin-2") {
        s.title = "Exponential-layer problem, Shishkin meshes, eps=1e-2";
        s.cases = {nist_case(1e-2, MeshKind::shishkin, {30, 60, 90, 120})};
    } else if (name == "eps-sweep") {
        s.title = "Fixed-grid small-diffusion sweep, Ne=64";
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
            ScenarioCase c = nist_case(eps, MeshKind::uniform, {64});
            c.label = "eps=" + fmt_param(eps);
            s.cases.push_back(c);
        }
    } else if (name == "few-shot") {
        s.title = "Few-shot activation over the refinement family";
        ScenarioCase c = main_case();
        c.levels = kRefinement;
        c.methods.clear();
        for (int cap : {5, 10}) c.methods.push_back({Method::adsc, "adsc-cap" + std::to_string(cap), cap, "adsc"});
        c.methods.push_back({Method::adsc, "adsc", std::nullopt, "adsc"});
        c.adsc.max_iterations = 1000;
        s.cases = {c};
    } else if (name == "direction") {
        s.title = "Sensitivity to the convection direction, Ne=45";
        const std::vector<std::pair<std::string, Beta>> dirs{
            {"(1,0)", {1.0, 0.0}},
            {"(1,1)/sqrt2", {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}},
            {"(2,1)/sqrt5", {2.0 / std::sqrt(5.0), 1.0 / std::sqrt(5.0)}}};
        for (const auto& [lab, b] : dirs) {
            ScenarioCase c = main_case();
            c.label = "beta=" + lab;
            c.spec.beta = b;
            s.cases.push_back(c);
        }
    } else if (name == "rhs") {
        s.title = "Sensitivity to the right-hand side, Ne=45";
        const std::vector<std::pair<std::string, SourceSpec>> srcs{
            {"centered", gaussian_source()}, {"narrow", narrow_gaussian_source()}, {"double", double_gaussian_source()}};
        for (const auto& [lab, src] : srcs) {
            ScenarioCase c = main_case();
            c.label = lab;
            c.spec.source = src;
            s.cases.push_back(c);
        }
    } else if (name == "sensitivity") {
        s.title = "ADSC parameter, relaxation, initialization and cap sensitivity, Ne=45";
        auto add = [&](const std::string& lab, const std::function<void(AdscParams&)>& set) {
            ScenarioCase c = main_case();
            c.label = lab;
            c.methods = methods({Method::adsc});
            set(c.adsc);
            s.cases.push_back(c);
        };
        for (auto [gmin, gmax, kap] : std::vector<std::array<double, 3>>{
                 {0.08, 0.25, 2.0}, {0.10, 0.30, 1.5}, {0.10, 0.30, 2.0}, {0.12, 0.35, 2.0}})
            add("gmin=" + fmt_param(gmin) + ",gmax=" + fmt_param(gmax) + ",kappa=" + fmt_param(kap),
                [=](AdscParams& p) { p.gamma_min = gmin; p.gamma_max = gmax; p.kappa = kap; });
        for (int cap : {100, 300, 500, 1000})
            add("max_iterations=" + std::to_string(cap), [=](AdscParams& p) { p.max_iterations = cap; });
        for (double om : {0.20, 0.35, 0.50, 0.75, 1.00})
            add("omega=" + fmt_param(om), [=](AdscParams& p) { p.omega = om; });
        const std::vector<std::pair<std::string, WarmStart>> starts{{"zero", WarmStart::zero},
                                                                    {"coarse", WarmStart::coarse},
                                                                    {"galerkin", WarmStart::galerkin},
                                                                    {"upwind", WarmStart::upwind}};
        for (const auto& [lab, w] : starts)
            add("start=" + lab, [w = w](AdscParams& p) { p.warm_start = w; });
    } else if (name == "fixed-ref") {
        s.title = "Fixed-reference activation, Ne=45";
        ScenarioCase c = main_case();
        c.methods = {{Method::galerkin, "galerkin", std::nullopt, ""},
                     {Method::adsc_fixed_ref, "adsc-fixed-ref", std::nullopt, "adsc"},
                     {Method::adsc, "adsc", std::nullopt, "adsc"}};
        s.cases = {c};
    } else if (name == "1d") {
        s.title = "Reduced one-dimensional benchmark, eps=1e-3, Ne=80";
        ScenarioCase c;
        c.spec.eps = 1e-3;
        c.spec.beta = {1.0, 0.0};
        c.spec.source = gaussian_source(0.03, 1.0);
        c.mesh = MeshKind::line;
        c.levels = {80};
        c.methods = methods({Method::galerkin, Method::upwind, Method::supg, Method::adsc});
        c.n_ref = 4096;
        c.det_threshold = 1e-4;
        c.modal_extras = true;
        s.cases = {c};
    } else {
        throw std::invalid_argument("unknown scenario: " + name);
    }
    return s;
}

}  // namespace

std::vector<std::string> scenario_names()
{
    return {"main2d",         "mesh",      "inactive",  "active", "nist-uniform-2", "nist-uniform-3",
            "nist-shishkin-2", "eps-sweep", "few-shot", "direction", "rhs",           "sensitivity",
            "fixed-ref",      "1d"};
}

bool has_scenario(const std::string& name)
{
    for (const auto& n : scenario_names())
        if (n == name) return true;
    return false;
}

Scenario make_scenario(const std::string& name) { return build(name); }

}  // namespace cdstab
