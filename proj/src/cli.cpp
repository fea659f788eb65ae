#include "cdstab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cdstab/bench.hpp"
#include "cdstab/lfa.hpp"
#include "cdstab/properties.hpp"

namespace cdstab {

namespace {

std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& kv)
{
    std::map<std::string, std::string> out;
    for (const auto& s : kv) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected key=value, got " + s);
        out[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return out;
}

Beta parse_beta(const std::string& s, bool normalize)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--beta", "expected b1,b2");
    Beta b{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    const double n = std::hypot(b[0], b[1]);
    if (normalize && n > 0) b = {b[0] / n, b[1] / n};
    return b;
}

int cmd_run(const std::vector<std::string>& names, const std::vector<std::string>& sets, const std::string& outdir,
            const std::string& format, bool timing, std::ostream& out, std::ostream& err)
{
    const auto overrides = parse_overrides(sets);
    std::vector<Scenario> scenarios;
    for (const auto& n : names) {
        if (!has_scenario(n)) {
            err << "unknown scenario: " << n << " (see `list`)\n";
            return 2;
        }
        Scenario s = make_scenario(n);
        try {
            apply_overrides(s, overrides);
        } catch (const std::invalid_argument& e) {
            err << e.what() << '\n';
            return 2;
        }
        scenarios.push_back(std::move(s));
    }
    const bool csv = format == "csv" || format == "both";
    const bool md = format == "markdown" || format == "both";
    if (!outdir.empty()) std::filesystem::create_directories(outdir);

    ReferenceCache cache;
    bool failed = false;
    for (const auto& s : scenarios) {
        const auto rows = run_scenario(s, cache);
        for (const auto& r : rows) {
            if (!r.failed) continue;
            failed = true;
            err << s.name << ": " << r.method << " Ne=" << r.Ne << " failed: " << r.error << '\n';
        }
        if (outdir.empty()) {
            if (csv) {
                write_csv_header(out, overrides);
                write_csv_rows(out, rows);
            }
            if (md) write_markdown(out, s, rows, timing);
            continue;
        }
        if (csv) {
            std::ofstream f(std::filesystem::path(outdir) / (s.name + ".csv"));
            write_csv_header(f, overrides);
            write_csv_rows(f, rows);
        }
        if (md) {
            std::ofstream f(std::filesystem::path(outdir) / (s.name + ".md"));
            write_markdown(f, s, rows, timing);
        }
        out << s.name << ": " << rows.size() << " rows\n";
    }
    return failed ? 1 : 0;
}

int cmd_lfa(int Ne, double eps, const std::string& beta_s, bool raw_beta, const std::string& rho_map,
            const std::string& footprint, std::ostream& out)
{
    const Beta beta = parse_beta(beta_s, !raw_beta);
    const ModalSet ms = modal_set(eps, beta, Ne);
    const double h = 1.0 / Ne;
    const double Pe = std::hypot(beta[0], beta[1]) * h / (2 * eps);
    const AdscParams p;
    const Gamma0Balance g = gamma0_balance(ms, Pe, 1.0, p.gamma_min, p.gamma_max);
    out << std::setprecision(6);
    out << "Ne " << Ne << "  h " << h << "  Pe_h " << Pe << '\n';
    out << "dominant " << ms.dominant_count << "/" << ms.modes() << '\n';
    out << "rho_gal_mean " << ms.mean_rho_gal << '\n';
    out << "B_mean " << ms.B_mean << '\n';
    out << "gamma0_balance raw " << g.raw << "  projected " << g.projected << '\n';
    out << "gamma0(Pe_h) " << gamma_law(Pe, p).gamma0 << '\n';
    if (!rho_map.empty()) {
        std::ofstream f(rho_map);
        f << std::setprecision(17) << "p,q,theta_p,theta_q,a,b,rho,dominant,B\n";
        for (int q = 0; q < ms.ny; ++q)
            for (int pp = 0; pp < ms.nx; ++pp) {
                const int k = pp + q * ms.nx;
                f << pp + 1 << ',' << q + 1 << ',' << ms.theta_x[pp] << ',' << ms.theta_y[q] << ',' << ms.a[k] << ','
                  << ms.b[k] << ',' << ms.rho[k] << ',' << int(ms.dominant_mask[k]) << ',' << ms.B[k] << '\n';
            }
    }
    if (!footprint.empty()) {
        std::ofstream f(footprint);
        f << std::setprecision(17) << "theta1,theta2,a,b,jacobian\n";
        for (const auto& pt : footprint_sample(eps, beta, h))
            f << pt.theta1 << ',' << pt.theta2 << ',' << pt.a << ',' << pt.b << ',' << pt.jacobian << '\n';
    }
    return 0;
}

int cmd_check(unsigned seed, std::ostream& out)
{
    bool ok = true;
    for (const auto& r : run_property_suite(seed)) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ")\n";
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Directional convection-diffusion stabilization benchmarks"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run benchmark scenarios");
    std::vector<std::string> names, sets;
    std::string outdir, format = "csv";
    bool timing = false;
    run->add_option("scenario", names, "scenario names")->required();
    run->add_option("--set", sets, "parameter override key=value (repeatable)");
    run->add_option("--out", outdir, "output directory (default: stdout)");
    run->add_option("--format", format, "csv, markdown or both")->check(CLI::IsMember({"csv", "markdown", "both"}));
    run->add_flag("--timing", timing, "include wall-clock seconds in markdown");

    app.add_subcommand("list", "list registered scenarios");

    auto* lfa = app.add_subcommand("lfa", "modal diagnostics of the centered operator");
    int Ne = 45;
    double eps = 2e-3;
    std::string beta_s = "1,0.6", rho_map, footprint;
    bool raw_beta = false;
    lfa->add_option("--ne", Ne, "number of intervals")->check(CLI::Range(2, 100000));
    lfa->add_option("--eps", eps, "diffusion coefficient")->check(CLI::PositiveNumber);
    lfa->add_option("--beta", beta_s, "convection direction b1,b2 (normalized unless --raw-beta)");
    lfa->add_flag("--raw-beta", raw_beta, "use beta as given");
    lfa->add_option("--rho-map", rho_map, "write the rho map CSV");
    lfa->add_option("--footprint", footprint, "write footprint samples CSV");

    auto* check = app.add_subcommand("check", "run the property suite");
    unsigned seed = 20240601u;
    check->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (app.got_subcommand("list")) {
            for (const auto& n : scenario_names()) out << n << "  " << make_scenario(n).title << '\n';
            return 0;
        }
        if (app.got_subcommand("lfa")) return cmd_lfa(Ne, eps, beta_s, raw_beta, rho_map, footprint, out);
        if (app.got_subcommand("check")) return cmd_check(seed, out);
        return cmd_run(names, sets, outdir, format, timing, out, err);
    } catch (const CLI::ValidationError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace cdstab
