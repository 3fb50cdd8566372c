#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "levysync/config.hpp"
#include "levysync/registry.hpp"
#include "levysync/skorohod.hpp"
#include "levysync/stationary.hpp"
#include "levysync/sync.hpp"

#ifndef LEVYSYNC_VERSION
#define LEVYSYNC_VERSION "dev"
#endif

namespace {

using namespace levysync;
namespace fs = std::filesystem;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parameter_error("cannot write '" + path.string() + "'");
    out << text;
}

CadlagPath read_path_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    try {
        return read_path_csv(in);
    } catch (const config_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string num(double v) { return detail::fmt_num(v); }

// Path stats shared by the simple experiment kinds.
struct PathStats {
    std::size_t knots = 0;
    std::size_t jumps = 0;
    double end_value = 0.0;
    double sup = 0.0;
};

PathStats path_stats(const CadlagPath& p) {
    PathStats s;
    s.knots = p.size();
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.is_jump(i)) ++s.jumps;
    s.end_value = p.right(p.size() - 1)[0];
    s.sup = p.sup_norm();
    return s;
}

std::string stats_csv(const PathStats& s) {
    std::string out = "knots,jumps,end_value,sup_norm\n";
    out += std::to_string(s.knots) + "," + std::to_string(s.jumps) + "," + num(s.end_value) + "," +
           num(s.sup) + "\n";
    return out;
}

struct RunPaths {
    fs::path root, paths;
};

RunPaths prepare_run_dir(const std::string& dir) {
    RunPaths rp;
    rp.root = fs::path(dir);
    rp.paths = rp.root / "paths";
    std::error_code ec;
    fs::create_directories(rp.paths, ec);
    if (ec) throw parameter_error("cannot create output directory '" + dir + "': " + ec.message());
    return rp;
}

void write_path_file(const fs::path& path, const CadlagPath& p) {
    std::ostringstream buf;
    write_path_csv(buf, p);
    write_text_file(path, buf.str());
}

void write_manifest(const RunPaths& rp, const ExperimentConfig& ec) {
    std::string text;
    text += "tool = levysync " LEVYSYNC_VERSION "\n";
    text += "timestamp = " + iso_timestamp() + "\n";
    for (const auto& [key, value] : ec.resolved) text += key + " = " + value + "\n";
    write_text_file(rp.root / "manifest.txt", text);
}

// Pullback horizon policy shared with the sweep planner: spend 40 units of
// the weaker contraction rate, snapped to the grid step.
std::vector<double> stationary_horizons(const VectorField& f, double t1, double dt, double* t_past) {
    const DissipativityEstimate diss = estimate_dissipativity(f, 10.0, 256, 0x0dd5ba11, 1);
    if (diss.violated || !(diss.l_hat > 0.0))
        throw parameter_error("stationary: drift failed the dissipativity probe, l_hat = " +
                              std::to_string(diss.l_hat));
    const auto snap = [dt](double v) { return std::llround(v / dt) * dt; };
    const double base = snap(std::max(40.0 / diss.l_hat, 40.0));
    *t_past = base - t1 + 1.0;
    return {snap(0.5 * base), snap(0.75 * base), base};
}

int run_experiment(const std::string& config_path, const std::string& out_override, int threads_override) {
    const ConfigDoc doc = parse_config_text(read_text_file(config_path), config_path);
    ExperimentConfig ec = load_experiment(doc);

    if (!out_override.empty()) ec.output_dir = out_override;
    if (ec.output_dir.empty())
        throw parameter_error("output directory not set; pass --out or experiment.output");
    if (threads_override > 0) ec.threads = threads_override;
    for (auto& [key, value] : ec.resolved) {
        if (key == "experiment.output") value = ec.output_dir;
        if (key == "experiment.threads") value = std::to_string(ec.threads);
    }

    const RunPaths rp = prepare_run_dir(ec.output_dir);
    const SimulationGrid grid = ec.kind == ExperimentKind::Metric
                                    ? SimulationGrid(0.0, 1.0, 0.5)
                                    : SimulationGrid(ec.t1, ec.t2, ec.dt);

    switch (ec.kind) {
    case ExperimentKind::Sample: {
        const NoiseRealization nr = sample_levy_path(ec.noise1, grid, ec.seed);
        write_path_file(rp.paths / "noise1.csv", nr.path);
        const std::string stats = stats_csv(path_stats(nr.path));
        write_text_file(rp.root / "report.csv", stats);
        write_text_file(rp.root / "summary.csv", stats);
        std::cout << "sampled " << ec.noise1_family << " path on [" << num(ec.t1) << ", " << num(ec.t2)
                  << "], end value " << num(path_stats(nr.path).end_value) << "\n";
        break;
    }
    case ExperimentKind::Integrate: {
        const NoiseRealization nr = sample_levy_path(ec.noise1, grid, ec.seed);
        const AdditiveSdeSpec spec{ec.f, ec.alpha, &nr.path, 0.0};
        const CadlagPath sol = integrate_additive(spec, grid, {ec.y0});
        write_path_file(rp.paths / "noise1.csv", nr.path);
        write_path_file(rp.paths / "solution.csv", sol);
        const std::string stats = stats_csv(path_stats(sol));
        write_text_file(rp.root / "report.csv", stats);
        write_text_file(rp.root / "summary.csv", stats);
        std::cout << "integrated " << ec.f_name << " drift, end value " << num(path_stats(sol).end_value)
                  << "\n";
        break;
    }
    case ExperimentKind::Stationary: {
        double t_past = 0.0;
        const std::vector<double> horizons = stationary_horizons(ec.f, ec.t1, ec.dt, &t_past);
        const NoiseRealization nr = build_two_sided(ec.noise1, t_past, ec.t2, ec.dt, ec.seed);
        const AdditiveSdeSpec spec{ec.f, ec.alpha, &nr.path, 0.0};
        const StationaryOrbit orbit = pullback_stationary(spec, grid, horizons);
        write_path_file(rp.paths / "stationary.csv", orbit.path);
        std::string report = "l_hat,pullback_horizon,truncation_bound,sup_norm\n";
        report += num(orbit.lambda) + "," + num(orbit.pullback_horizon) + "," +
                  num(orbit.truncation_bound) + "," + num(orbit.path.sup_norm()) + "\n";
        write_text_file(rp.root / "report.csv", report);
        write_text_file(rp.root / "summary.csv", report);
        std::cout << "stationary orbit over [" << num(ec.t1) << ", " << num(ec.t2) << "], horizon "
                  << num(orbit.pullback_horizon) << ", truncation bound " << num(orbit.truncation_bound)
                  << "\n";
        break;
    }
    case ExperimentKind::Metric: {
        const CadlagPath x = read_path_file(ec.metric_path1);
        const CadlagPath y = read_path_file(ec.metric_path2);
        const MetricResult r = skorohod_bounded(x, y, ec.metric_m, ec.metric_tol);
        std::string report = "value,certified_gap\n";
        report += num(r.value) + "," + num(r.certified_gap) + "\n";
        write_text_file(rp.root / "report.csv", report);
        write_text_file(rp.root / "summary.csv", report);
        std::cout << "skorohod distance " << num(r.value) << " (certified gap " << num(r.certified_gap)
                  << ")\n";
        break;
    }
    case ExperimentKind::Sweep: {
        const SweepConfig sc = to_sweep_config(ec);
        const SyncReport rep = run_sync_sweep(sc);

        std::ostringstream rows, summary;
        write_sync_rows_csv(rows, rep);
        write_sync_summary_csv(summary, rep);
        write_text_file(rp.root / "report.csv", rows.str());
        write_text_file(rp.root / "summary.csv", summary.str());

        const SweepSnapshot snap = sweep_snapshot(sc, sc.lambda_values.back(), sc.seeds.front());
        write_path_file(rp.paths / "coupled_x.csv", snap.x);
        write_path_file(rp.paths / "coupled_y.csv", snap.y);
        write_path_file(rp.paths / "averaged.csv", snap.z);
        ec.resolved.emplace_back("snapshot.lambda", num(snap.lambda));
        ec.resolved.emplace_back("snapshot.seed", std::to_string(snap.seed));

        std::cout << "sweep over " << rep.lambda_values.size() << " lambda values, "
                  << rep.seeds.size() << " seeds\n";
        for (std::size_t li = 0; li < rep.lambda_values.size(); ++li)
            std::cout << "  lambda " << num(rep.lambda_values[li]) << ": gap " << num(rep.gap[li])
                      << ", skorohod to averaged " << num(rep.skorohod_to_avg[li]) << "\n";
        break;
    }
    }

    write_manifest(rp, ec);
    std::cout << "wrote " << rp.root.string() << "\n";
    return 0;
}

int metric_command(const std::string& p1, const std::string& p2, double m, double tol) {
    const CadlagPath x = read_path_file(p1);
    const CadlagPath y = read_path_file(p2);
    const MetricResult r = skorohod_bounded(x, y, m, tol);
    std::cout << "value = " << num(r.value) << "\n";
    std::cout << "certified_gap = " << num(r.certified_gap) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled-SDE synchronization toolkit (version " LEVYSYNC_VERSION ")"};
    app.require_subcommand(0, 1);

    auto* run = app.add_subcommand("run", "execute a config-driven experiment");
    std::string config_path, out_dir;
    int threads = 0;
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides experiment.output)");
    run->add_option("--threads", threads, "sweep worker threads (overrides experiment.threads)");

    auto* registry = app.add_subcommand("registry", "list drift functions, presets, and noise families");

    auto* metric = app.add_subcommand("metric", "bounded skorohod distance between two path CSVs");
    std::string mpath1, mpath2;
    double mwin = 1.0, mtol = 1e-3;
    metric->add_option("path1", mpath1, "first path CSV")->required();
    metric->add_option("path2", mpath2, "second path CSV")->required();
    metric->add_option("--m", mwin, "window half-width, distance taken on [-m, m]");
    metric->add_option("--tol", mtol, "refinement tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return run_experiment(config_path, out_dir, threads);
        if (registry->parsed()) {
            std::cout << registry_text();
            return 0;
        }
        if (metric->parsed()) return metric_command(mpath1, mpath2, mwin, mtol);
        std::cout << app.help();
        return 0;
    } catch (const non_convergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const divergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const capability_error& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 4;
    } catch (const parameter_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const path_domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
