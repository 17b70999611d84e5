#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "polyell/render.hpp"
#include "polyell/solver.hpp"
#include "polyell/verify.hpp"
#include "polyell/version.hpp"

namespace {

using namespace polyell;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + output);
    out << text;
}

int pick_sector(const SectorTable& table, const std::string& id) {
    if (!id.empty()) return table.sector_index_by_id(id);
    for (int si : table.true_sector_indices())
        if (table.sectors[si].width() > 0.3) return si;
    return table.true_sector_indices()[0];
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyelliptic coordinate nets, metric factors and separated solvers"};
    app.set_version_flag("--version", std::string(polyell::kToolVersion));
    app.require_subcommand(1);

    std::string config_path, output;
    std::string format, bc_name, sector_id, psi_out;
    double mu_max = -1, mu_profile = -1, k_in = std::nan(""), lambda_in = std::nan("");
    int mu_count = -1, theta_count = -1, count_in = -1, grid_n = -1, steps = -1;
    int samples = -1, psi_index = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "JSON config file")->required();
        cmd->add_option("-o,--output", output, "output file (default: stdout)");
    };

    CLI::App* net = app.add_subcommand("net", "render the coordinate net");
    add_common(net);
    net->add_option("--format", format, "svg or csv");
    net->add_option("--mu-max", mu_max, "largest mu isoline");
    net->add_option("--mu-count", mu_count, "number of mu isolines");
    net->add_option("--theta-count", theta_count, "number of theta isolines");

    CLI::App* rect = app.add_subcommand("rectplot", "rectangular log(ae_c)-theta_c diagram");
    add_common(rect);
    rect->add_option("--format", format, "svg or csv");
    rect->add_option("--mu-max", mu_max, "radial extent");
    rect->add_option("--theta-count", theta_count, "number of horizontal lines");

    CLI::App* prof = app.add_subcommand("metric-profile", "H^2 profiles at fixed mu (CSV)");
    add_common(prof);
    prof->add_option("--mu", mu_profile, "profile radius");
    prof->add_option("--samples", samples, "number of theta samples");

    CLI::App* eig = app.add_subcommand("eigen", "angular eigenvalues (CSV)");
    add_common(eig);
    eig->add_option("--k", k_in, "wavenumber");
    eig->add_option("--count", count_in, "number of eigenpairs");
    eig->add_option("--grid-n", grid_n, "angular grid resolution");
    eig->add_option("--psi-out", psi_out, "also write one eigenfunction (CSV)");
    eig->add_option("--psi-index", psi_index, "which eigenfunction for --psi-out");

    CLI::App* rad = app.add_subcommand("radial", "radial solution (CSV)");
    add_common(rad);
    rad->add_option("--k", k_in, "wavenumber");
    rad->add_option("--lambda", lambda_in, "separation constant");
    rad->add_option("--bc", bc_name, "dirichlet or unit");
    rad->add_option("--mu-max", mu_max, "integration end");
    rad->add_option("--steps", steps, "integration steps");
    rad->add_option("--sector", sector_id, "sector gauge (default: first true sector)");

    CLI::App* ver = app.add_subcommand("verify", "run the verification suite (JSON report)");
    add_common(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = parse_config_text(read_file(config_path));
        if (!format.empty()) cfg.format = format;
        if (mu_max > 0 && *rad) cfg.radial_mu_max = mu_max;
        else if (mu_max > 0) cfg.mu_max = mu_max;
        if (mu_count > 0) cfg.mu_count = mu_count;
        if (theta_count > 0) cfg.theta_count = theta_count;
        if (!std::isnan(k_in)) cfg.k = k_in;
        if (!std::isnan(lambda_in)) cfg.lambda = lambda_in;
        if (count_in > 0) cfg.eigen_count = count_in;
        if (grid_n > 0) cfg.grid_n = grid_n;
        if (mu_profile > 0) cfg.mu_profile = mu_profile;
        if (samples > 0) cfg.theta_count = samples;
        if (steps > 0) cfg.radial_steps = steps;
        if (!bc_name.empty()) cfg.bc = bc_name;
        if (!sector_id.empty()) cfg.sector = sector_id;
        if (cfg.mu_count < 2 || cfg.theta_count < 2)
            throw ConfigError("grid counts must be at least 2");
        if (cfg.bc != "dirichlet" && cfg.bc != "unit")
            throw ConfigError("bc must be dirichlet or unit");

        const PolygonSpec spec = cfg.polygon();
        const SectorTable table = SectorTable::build(spec);

        if (*net) {
            const NetCurves curves = net_curves(table, cfg);
            if (cfg.format == "csv")
                emit(net_to_csv(curves), output);
            else
                emit(net_to_svg(curves), output);
        } else if (*rect) {
            const NetCurves curves = rectplot_curves(table, cfg);
            if (cfg.format == "csv")
                emit(net_to_csv(curves), output);
            else
                emit(net_to_svg(curves), output);
        } else if (*prof) {
            emit(metric_profile_csv(table, cfg.mu_profile, cfg.theta_count), output);
        } else if (*eig) {
            const auto spectrum = angular_spectrum(table, cfg.k, cfg.eigen_count, cfg.grid_n);
            std::ostringstream os;
            os << "n,lambda,convergence_estimate\n";
            for (const auto& e : spectrum)
                os << e.n << ',' << detail::num17(e.lambda) << ','
                   << detail::num17(e.convergence) << '\n';
            emit(os.str(), output);
            if (!psi_out.empty()) {
                if (psi_index < 0 || psi_index >= static_cast<int>(spectrum.size()))
                    throw ConfigError("--psi-index out of range");
                std::ostringstream ps;
                ps << "theta_c,psi1\n";
                const auto& e = spectrum[psi_index];
                for (size_t i = 0; i < e.theta.size(); ++i)
                    ps << detail::num17(e.theta[i]) << ',' << detail::num17(e.psi[i]) << '\n';
                emit(ps.str(), psi_out);
            }
        } else if (*rad) {
            const RadialBC bc = cfg.bc == "unit" ? RadialBC::Unit : RadialBC::Dirichlet;
            const RadialSolution sol =
                radial_solution(table, cfg.k, cfg.lambda, bc, cfg.radial_mu_max,
                                cfg.radial_steps, pick_sector(table, cfg.sector));
            std::ostringstream os;
            os << "mu_c,psi2,dpsi2\n";
            for (size_t i = 0; i < sol.mu.size(); ++i)
                os << detail::num17(sol.mu[i]) << ',' << detail::num17(sol.psi[i]) << ','
                   << detail::num17(sol.dpsi[i]) << '\n';
            emit(os.str(), output);
        } else if (*ver) {
            const VerifyReport rep = run_verify(cfg);
            emit(rep.to_json(cfg.echo).dump(2) + "\n", output);
            return rep.overall_pass ? 0 : 1;
        }
        return 0;
    } catch (const ConfigError& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const Error& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
