#include "fcmcfl/studies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

#include "fcmcfl/analytic.hpp"
#include "fcmcfl/geometry.hpp"
#include "fcmcfl/parallel.hpp"

namespace fcmcfl::studies {

std::vector<double> log_grid(double lo_exponent, double hi_exponent, int count) {
    if (count < 1) throw std::invalid_argument("log_grid: count must be positive");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) {
        const double e = (i == count - 1 && count > 1)
                             ? hi_exponent
                             : lo_exponent + (hi_exponent - lo_exponent) * i / std::max(1, count - 1);
        grid[i] = std::pow(10.0, e);
    }
    return grid;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("linear_grid: count must be positive");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = (i == count - 1 && count > 1) ? hi : lo + (hi - lo) * i / std::max(1, count - 1);
    return grid;
}

std::vector<double> periodic_grid(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("periodic_grid: count must be positive");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / count;
    return grid;
}

std::vector<AnalyticRecord> analytic_map(int dim, std::span<const double> chis, std::span<const double> alphas) {
    std::vector<AnalyticRecord> records;
    records.reserve(chis.size() * alphas.size());
    for (double chi : chis) {
        for (double alpha : alphas) {
            const analytic::SingleDofResult r = analytic::single_dof(chi, alpha, dim);
            records.push_back({dim, chi, alpha, r.mass, r.stiffness, r.lambda, r.dt_crit});
        }
    }
    return records;
}

double analytic_dt_min(double alpha, int dim, std::span<const double> chis) {
    if (chis.empty()) throw std::invalid_argument("analytic_dt_min: empty chi grid");
    double dt_min = std::numeric_limits<double>::infinity();
    for (double chi : chis) dt_min = std::min(dt_min, analytic::single_dof(chi, alpha, dim).dt_crit);
    return dt_min;
}

std::vector<SweepRecord> element_sweep(const ElementSweepOptions& options) {
    if (options.dim < 1 || options.dim > 3) throw std::invalid_argument("element_sweep: dimension must be 1, 2 or 3");
    if (options.degrees.empty() || options.alphas.empty() || options.chis.empty())
        throw std::invalid_argument("element_sweep: empty parameter list");

    struct Item {
        int degree;
        double alpha;
        double chi;
    };
    std::vector<Item> items;
    items.reserve(options.degrees.size() * options.alphas.size() * options.chis.size());
    for (int p : options.degrees)
        for (double alpha : options.alphas)
            for (double chi : options.chis) items.push_back({p, alpha, chi});

    return parallel_map<SweepRecord>(
        items.size(), options.jobs,
        [&](std::size_t i) {
            const Item& it = items[i];
            const ElementMatrices em = element_matrices_cornercut(it.degree, options.dim, it.chi, it.alpha);
            const double lambda = max_eig_dense(em.mass, em.stiffness).lambda_max;
            return SweepRecord{options.dim, it.degree, it.alpha, it.chi, lambda, critical_dt(lambda)};
        },
        options.progress);
}

MinRatio min_dt_ratio(std::span<const SweepRecord> records) {
    if (records.empty()) throw std::invalid_argument("min_dt_ratio: no records");
    const SweepRecord& first = records.front();
    MinRatio out;
    out.dim = first.dim;
    out.degree = first.degree;
    out.alpha = first.alpha;
    out.dt_min = std::numeric_limits<double>::infinity();
    std::optional<double> full;
    for (const SweepRecord& r : records) {
        if (r.dim != first.dim || r.degree != first.degree || r.alpha != first.alpha)
            throw std::invalid_argument("min_dt_ratio: records mix dimensions, degrees or alphas");
        if (r.dt_crit < out.dt_min) {
            out.dt_min = r.dt_crit;
            out.chi_at_min = r.chi;
        }
        if (std::abs(r.chi - 1.0) <= 1e-14) full = r.dt_crit;
    }
    if (!full) throw std::invalid_argument("min_dt_ratio: the chi = 1 sample is missing");
    out.dt_full_c = *full;
    out.ratio = out.dt_min / out.dt_full_c;
    return out;
}

std::vector<MinRatio> min_dt_ratios(std::span<const SweepRecord> records) {
    using Key = std::tuple<int, int, double>;
    std::vector<Key> order;
    std::map<Key, std::vector<SweepRecord>> groups;
    for (const SweepRecord& r : records) {
        const Key key{r.dim, r.degree, r.alpha};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(r);
    }
    std::vector<MinRatio> out;
    out.reserve(order.size());
    for (const Key& key : order) out.push_back(min_dt_ratio(groups.at(key)));
    return out;
}

double cfl_factor(double alpha, int dim) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("cfl_factor: alpha must lie in (0, 1]");
    if (dim < 1 || dim > 3) throw std::invalid_argument("cfl_factor: dimension must be 1, 2 or 3");
    return std::pow(alpha, 1.0 / (dim + 2.0));
}

double modified_cfl_dt(double alpha, int dim, double c_cfl, double h, double wave_speed) {
    if (!(h > 0.0) || !(wave_speed > 0.0)) throw std::invalid_argument("modified_cfl_dt: h and c must be positive");
    return cfl_factor(alpha, dim) * c_cfl * h / wave_speed;
}

CflEstimate cfl_estimate(int dim, int degree, double alpha, double h, double wave_speed) {
    if (!(h > 0.0) || !(wave_speed > 0.0)) throw std::invalid_argument("cfl_estimate: h and c must be positive");
    Box box;
    box.dim = dim;
    for (int k = 0; k < dim; ++k) box.upper[k] = h;

    const double c2 = wave_speed * wave_speed;
    auto full_dt = [&](MassIntegration mass) {
        const ElementMatrices em = element_matrices_uncut(degree, box, CellKind::physical, alpha, mass);
        return critical_dt(max_eig_dense(em.mass, c2 * em.stiffness).lambda_max);
    };

    CflEstimate est;
    est.dim = dim;
    est.degree = degree;
    est.alpha = alpha;
    est.h = h;
    est.wave_speed = wave_speed;
    est.dt_full_c = full_dt(MassIntegration::consistent);
    est.dt_full_l = full_dt(MassIntegration::lumped);
    est.factor = cfl_factor(alpha, dim);
    est.dt_cfl_fc = est.factor * est.dt_full_c;
    est.c_cfl_consistent = est.dt_full_c * wave_speed / h;
    est.c_cfl_lumped = est.dt_full_l * wave_speed / h;
    return est;
}

std::vector<PlateConfiguration> plate_configurations(int nx_shifts, int ny_shifts, int subsample, int stride_x,
                                                     int stride_y) {
    if (nx_shifts < 1 || ny_shifts < 1) throw std::invalid_argument("plate_configurations: shift counts must be positive");
    if (subsample < 0) throw std::invalid_argument("plate_configurations: subsample must be non-negative");
    if (stride_x < 1 || stride_y < 1) throw std::invalid_argument("plate_configurations: strides must be positive");

    const std::vector<double> xs = linear_grid(0.0, PerforatedPlate::max_shift_x, nx_shifts);
    const std::vector<double> ys = periodic_grid(0.0, PerforatedPlate::max_shift_y, ny_shifts);
    std::vector<PlateConfiguration> all;
    all.reserve(xs.size() * ys.size());
    for (int ix = 0; ix < nx_shifts; ix += stride_x)
        for (int iy = 0; iy < ny_shifts; iy += stride_y) all.push_back({ix * ny_shifts + iy + 1, xs[ix], ys[iy]});

    if (subsample == 0 || static_cast<std::size_t>(subsample) >= all.size()) return all;
    std::vector<PlateConfiguration> kept;
    kept.reserve(subsample);
    for (int i = 0; i < subsample; ++i) kept.push_back(all[static_cast<std::size_t>(i) * all.size() / subsample]);
    return kept;
}

PlateRecord plate_configuration_run(const PlateConfiguration& config, int degree, int depth, double alpha,
                                    const GridSpec& grid, const CflEstimate& cfl, const LanczosOptions& lanczos) {
    const PerforatedPlate plate = perforated_plate(config.shift_x, config.shift_y);
    const GlobalSystem sys = assemble_global(grid, degree, plate, alpha, depth);

    // Uncut elements of one kind share identical matrices.
    std::optional<double> uncut_lambda[2];
    double lambda_element = 0.0;
    for (const ElementMatrices& em : sys.elements) {
        double lambda = 0.0;
        if (em.kind == CellKind::cut) {
            lambda = max_eig_dense(em.mass, em.stiffness).lambda_max;
        } else {
            auto& cached = uncut_lambda[em.kind == CellKind::physical ? 0 : 1];
            if (!cached) cached = max_eig_dense(em.mass, em.stiffness).lambda_max;
            lambda = *cached;
        }
        lambda_element = std::max(lambda_element, lambda);
    }

    const SpectrumResult global = max_eig_iterative(sys, lanczos);

    PlateRecord rec;
    rec.config = config.index;
    rec.shift_x = config.shift_x;
    rec.shift_y = config.shift_y;
    rec.degree = degree;
    rec.depth = depth;
    rec.dt_element = critical_dt(lambda_element);
    rec.dt_global = critical_dt(global.lambda_max);
    rec.dt_full_c = cfl.dt_full_c;
    rec.dt_full_l = cfl.dt_full_l;
    rec.dt_cfl_fc = cfl.dt_cfl_fc;
    rec.element_ok = rec.dt_element >= rec.dt_cfl_fc;
    rec.global_ok = rec.dt_global >= rec.dt_cfl_fc;
    rec.cut_elements = sys.count(CellKind::cut);
    rec.lanczos_iterations = global.iterations;
    rec.lanczos_residual = global.residual;
    return rec;
}

int PlateStudyResult::element_violations(int depth) const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [depth](const PlateRecord& r) {
        return r.depth == depth && !r.element_ok;
    }));
}

int PlateStudyResult::global_violations(int depth) const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [depth](const PlateRecord& r) {
        return r.depth == depth && !r.global_ok;
    }));
}

PlateStudyResult plate_study(const PlateStudyOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha <= 1.0)) throw std::invalid_argument("plate_study: alpha must lie in (0, 1]");
    if (options.degree < 1) throw std::invalid_argument("plate_study: degree must be >= 1");

    std::vector<int> depths = options.depths;
    if (depths.empty()) depths = {options.degree + 1, options.degree + 2};
    for (int k : depths)
        if (k < 0) throw std::invalid_argument("plate_study: depth must be >= 0");

    const std::vector<PlateConfiguration> configs =
        plate_configurations(options.nx_shifts, options.ny_shifts, options.subsample, options.stride_x,
                             options.stride_y);

    PlateStudyResult result;
    result.cfl = cfl_estimate(2, options.degree, options.alpha, options.grid.h);

    std::vector<std::pair<int, const PlateConfiguration*>> items;
    for (int k : depths)
        for (const PlateConfiguration& c : configs) items.emplace_back(k, &c);

    result.records = parallel_map<PlateRecord>(
        items.size(), options.jobs,
        [&](std::size_t i) {
            return plate_configuration_run(*items[i].second, options.degree, items[i].first, options.alpha,
                                           options.grid, result.cfl, options.lanczos);
        },
        options.progress);
    return result;
}

}  // namespace fcmcfl::studies
