#include "fcmcfl/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcmcfl/analytic.hpp"
#include "fcmcfl/csv.hpp"
#include "fcmcfl/eigensolvers.hpp"
#include "fcmcfl/studies.hpp"

namespace fcmcfl::cli {

namespace {

using nlohmann::ordered_json;

// Output or config problems that are the caller's fault (exit code 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnalyticMapArgs {
    int dim = 1;
    double chi_min = 1e-16, chi_max = 1.0;
    int chi_count = 801;
    double alpha_min = 1e-16, alpha_max = 1.0;
    int alpha_count = 801;
    std::string out;
};

struct SweepArgs {
    int dim = 1;
    std::vector<int> degrees{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> alphas{1e-4, 1e-8, 1e-12};
    double chi_min = 1e-8;
    int chi_count = 161;
    std::string in;
    std::string out;
};

struct PlateArgs {
    int degree = 2;
    std::vector<int> depths;
    double alpha = 1e-4;
    int nx_shifts = 15;
    int ny_shifts = 50;
    int subsample = 0;
    int stride_x = 1;
    int stride_y = 1;
    double tolerance = 1e-9;
    double residual_tolerance = 1e-4;
    int max_iterations = 5000;
    std::string out;
    std::string summary;
};

struct SingleDofArgs {
    int dim = 1;
    double chi = 1.0;
    double alpha = 1.0;
};

struct CflArgs {
    int dim = 2;
    int degree = 1;
    double alpha = 1e-4;
    double h = 0.2;
    double c = 1.0;
};

std::string default_output(const std::string& explicit_path, const std::string& command) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* dir = std::getenv(output_dir_env); dir && *dir)
        return (std::filesystem::path(dir) / (command + ".csv")).string();
    return "-";
}

void emit(const csv::Table& table, const std::string& path, std::ostream& out) {
    if (path == "-") {
        csv::write(out, table);
        return;
    }
    try {
        csv::write_file(path, table);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

std::vector<double> log_range(double lo, double hi, int count, const char* what) {
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument(std::string(what) + ": need 0 < min <= max");
    return studies::log_grid(std::log10(lo), std::log10(hi), count);
}

studies::ProgressFn counter(bool enabled, std::ostream& err) {
    if (!enabled) return {};
    return [&err](std::size_t done, std::size_t total) {
        err << '\r' << done << '/' << total;
        if (done == total) err << '\n';
        err.flush();
    };
}

studies::ElementSweepOptions sweep_options(const SweepArgs& a, int jobs, studies::ProgressFn progress) {
    studies::ElementSweepOptions o;
    o.dim = a.dim;
    o.degrees = a.degrees;
    o.alphas = a.alphas;
    o.chis = log_range(a.chi_min, 1.0, a.chi_count, "chi grid");
    o.jobs = jobs;
    o.progress = std::move(progress);
    return o;
}

ordered_json plate_summary(const studies::PlateStudyOptions& opts, const studies::PlateStudyResult& result) {
    ordered_json j;
    j["degree"] = opts.degree;
    j["alpha"] = opts.alpha;
    j["h"] = opts.grid.h;
    j["dt_full_c"] = result.cfl.dt_full_c;
    j["dt_full_l"] = result.cfl.dt_full_l;
    j["cfl_factor"] = result.cfl.factor;
    j["dt_cfl_fc"] = result.cfl.dt_cfl_fc;
    j["c_cfl_consistent"] = result.cfl.c_cfl_consistent;
    j["c_cfl_lumped"] = result.cfl.c_cfl_lumped;

    std::vector<int> depths;
    for (const auto& r : result.records)
        if (depths.empty() || depths.back() != r.depth) depths.push_back(r.depth);
    ordered_json per_depth = ordered_json::array();
    for (int k : depths) {
        int configurations = 0, global_below_element = 0;
        double min_element = INFINITY, min_global = INFINITY;
        for (const auto& r : result.records) {
            if (r.depth != k) continue;
            ++configurations;
            if (r.dt_global < r.dt_element) ++global_below_element;
            min_element = std::min(min_element, r.dt_element);
            min_global = std::min(min_global, r.dt_global);
        }
        per_depth.push_back({{"depth", k},
                             {"configurations", configurations},
                             {"element_violations", result.element_violations(k)},
                             {"global_violations", result.global_violations(k)},
                             {"global_below_element", global_below_element},
                             {"min_dt_element", min_element},
                             {"min_dt_global", min_global}});
    }
    j["depths"] = per_depth;
    return j;
}

std::string summary_path(const PlateArgs& a, const std::string& csv_path) {
    if (!a.summary.empty()) return a.summary;
    if (csv_path == "-") return "-";
    return std::filesystem::path(csv_path).replace_extension(".json").string();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Critical explicit time steps of stabilised immersed discretisations", "fcmcfl"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file with one [command] section; flags override it");
    int jobs = 0;
    bool progress = false;
    app.add_option("--jobs,-j", jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--progress", progress, "Print a completion counter on stderr");

    AnalyticMapArgs am;
    auto* am_cmd = app.add_subcommand("analytic-map", "Single-DOF eigenvalue map over (chi, alpha)");
    am_cmd->add_option("--dim", am.dim)->check(CLI::Range(1, 5));
    am_cmd->add_option("--chi-min", am.chi_min)->check(CLI::PositiveNumber);
    am_cmd->add_option("--chi-max", am.chi_max)->check(CLI::Range(0.0, 1.0));
    am_cmd->add_option("--chi-count", am.chi_count)->check(CLI::PositiveNumber);
    am_cmd->add_option("--alpha-min", am.alpha_min)->check(CLI::PositiveNumber);
    am_cmd->add_option("--alpha-max", am.alpha_max)->check(CLI::Range(0.0, 1.0));
    am_cmd->add_option("--alpha-count", am.alpha_count)->check(CLI::PositiveNumber);
    am_cmd->add_option("--out,-o", am.out, "CSV path ('-' for stdout)");

    SweepArgs sw;
    auto add_sweep_options = [&sw](CLI::App* cmd) {
        cmd->add_option("--dim", sw.dim)->check(CLI::Range(1, 3));
        cmd->add_option("--degrees", sw.degrees)->delimiter(',')->check(CLI::Range(1, 20));
        cmd->add_option("--alphas", sw.alphas)->delimiter(',')->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--chi-min", sw.chi_min)->check(CLI::Range(1e-300, 1.0));
        cmd->add_option("--chi-count", sw.chi_count)->check(CLI::PositiveNumber);
        cmd->add_option("--out,-o", sw.out, "CSV path ('-' for stdout)");
    };
    auto* sw_cmd = app.add_subcommand("element-sweep", "Largest eigenvalue of corner-cut elements");
    add_sweep_options(sw_cmd);
    auto* mr_cmd = app.add_subcommand("min-ratio", "Minimum dt over chi relative to the uncut element");
    add_sweep_options(mr_cmd);
    mr_cmd->add_option("--in,-i", sw.in, "element-sweep CSV; computed from the sweep options when absent")
        ->check(CLI::ExistingFile);

    PlateArgs pl;
    auto* pl_cmd = app.add_subcommand("plate-study", "Shifted perforated plate, element and global dt");
    pl_cmd->add_option("--degree", pl.degree)->check(CLI::Range(1, 10));
    pl_cmd->add_option("--depth", pl.depths, "Space-tree depth, repeatable (default p+1 and p+2)")
        ->check(CLI::Range(0, 12));
    pl_cmd->add_option("--alpha", pl.alpha)->check(CLI::Range(1e-300, 1.0));
    pl_cmd->add_option("--nx-shifts", pl.nx_shifts)->check(CLI::PositiveNumber);
    pl_cmd->add_option("--ny-shifts", pl.ny_shifts)->check(CLI::PositiveNumber);
    pl_cmd->add_option("--subsample", pl.subsample, "Keep this many evenly spaced configurations (0 = all)")
        ->check(CLI::NonNegativeNumber);
    pl_cmd->add_option("--stride-x", pl.stride_x, "Keep every n-th x shift")->check(CLI::PositiveNumber);
    pl_cmd->add_option("--stride-y", pl.stride_y, "Keep every n-th y shift")->check(CLI::PositiveNumber);
    pl_cmd->add_option("--lanczos-tol", pl.tolerance)->check(CLI::PositiveNumber);
    pl_cmd->add_option("--lanczos-residual", pl.residual_tolerance)->check(CLI::PositiveNumber);
    pl_cmd->add_option("--lanczos-max-iter", pl.max_iterations)->check(CLI::PositiveNumber);
    pl_cmd->add_option("--out,-o", pl.out, "CSV path ('-' for stdout)");
    pl_cmd->add_option("--summary", pl.summary, "JSON summary path (default: CSV path with .json)");

    SingleDofArgs sd;
    auto* sd_cmd = app.add_subcommand("single-dof", "Closed-form single-DOF eigenvalue, printed as JSON");
    sd_cmd->add_option("--dim", sd.dim)->check(CLI::PositiveNumber);
    sd_cmd->add_option("--chi", sd.chi)->check(CLI::Range(0.0, 1.0));
    sd_cmd->add_option("--alpha", sd.alpha)->check(CLI::Range(0.0, 1.0));

    CflArgs cf;
    auto* cf_cmd = app.add_subcommand("cfl-estimate", "Uncut-element dt and the modified CFL step, printed as JSON");
    cf_cmd->add_option("--dim", cf.dim)->check(CLI::Range(1, 3));
    cf_cmd->add_option("--degree", cf.degree)->check(CLI::Range(1, 20));
    cf_cmd->add_option("--alpha", cf.alpha)->check(CLI::Range(1e-300, 1.0));
    cf_cmd->add_option("--element-size", cf.h)->check(CLI::PositiveNumber);
    cf_cmd->add_option("--wave-speed", cf.c)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? success : usage_error;
    }

    try {
        const studies::ProgressFn tick = counter(progress, err);

        if (am_cmd->parsed()) {
            const auto chis = log_range(am.chi_min, am.chi_max, am.chi_count, "chi grid");
            const auto alphas = log_range(am.alpha_min, am.alpha_max, am.alpha_count, "alpha grid");
            emit(csv::to_table(studies::analytic_map(am.dim, chis, alphas)),
                 default_output(am.out, "analytic-map"), out);
        } else if (sw_cmd->parsed()) {
            emit(csv::to_table(studies::element_sweep(sweep_options(sw, jobs, tick))),
                 default_output(sw.out, "element-sweep"), out);
        } else if (mr_cmd->parsed()) {
            std::vector<studies::SweepRecord> records;
            if (!sw.in.empty()) {
                try {
                    records = csv::sweep_records(csv::read_file(sw.in));
                } catch (const std::runtime_error& e) {
                    throw UsageError(sw.in + ": " + e.what());
                }
            } else {
                records = studies::element_sweep(sweep_options(sw, jobs, tick));
            }
            emit(csv::to_table(studies::min_dt_ratios(records)), default_output(sw.out, "min-ratio"), out);
        } else if (pl_cmd->parsed()) {
            studies::PlateStudyOptions opts;
            opts.degree = pl.degree;
            opts.depths = pl.depths;
            opts.alpha = pl.alpha;
            opts.nx_shifts = pl.nx_shifts;
            opts.ny_shifts = pl.ny_shifts;
            opts.subsample = pl.subsample;
            opts.stride_x = pl.stride_x;
            opts.stride_y = pl.stride_y;
            opts.lanczos.tolerance = pl.tolerance;
            opts.lanczos.residual_tolerance = pl.residual_tolerance;
            opts.lanczos.max_iterations = pl.max_iterations;
            opts.jobs = jobs;
            opts.progress = tick;
            const studies::PlateStudyResult result = studies::plate_study(opts);

            const std::string csv_path = default_output(pl.out, "plate-study");
            emit(csv::to_table(result.records), csv_path, out);
            const std::string json = plate_summary(opts, result).dump(2) + "\n";
            const std::string json_path = summary_path(pl, csv_path);
            if (json_path == "-") {
                err << json;
            } else {
                std::ofstream file(json_path, std::ios::binary);
                if (!(file << json)) throw UsageError("cannot write '" + json_path + "'");
            }
        } else if (sd_cmd->parsed()) {
            const auto r = analytic::single_dof(sd.chi, sd.alpha, sd.dim);
            const ordered_json j{{"d", r.dim},         {"chi", r.chi},       {"alpha", r.alpha},
                                 {"M", r.mass},        {"K", r.stiffness},   {"lambda", r.lambda},
                                 {"dt_crit", r.dt_crit}};
            out << j.dump(2) << '\n';
        } else if (cf_cmd->parsed()) {
            const auto e = studies::cfl_estimate(cf.dim, cf.degree, cf.alpha, cf.h, cf.c);
            const ordered_json j{{"d", e.dim},
                                 {"p", e.degree},
                                 {"alpha", e.alpha},
                                 {"h", e.h},
                                 {"c", e.wave_speed},
                                 {"dt_full_c", e.dt_full_c},
                                 {"dt_full_l", e.dt_full_l},
                                 {"cfl_factor", e.factor},
                                 {"dt_cfl_fc", e.dt_cfl_fc},
                                 {"c_cfl_consistent", e.c_cfl_consistent},
                                 {"c_cfl_lumped", e.c_cfl_lumped}};
            out << j.dump(2) << '\n';
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }
    return success;
}

}  // namespace fcmcfl::cli
