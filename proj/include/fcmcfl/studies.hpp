#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fcmcfl/assembly.hpp"
#include "fcmcfl/eigensolvers.hpp"

namespace fcmcfl::studies {

/// `count` points from 10^lo to 10^hi, endpoints exact.
[[nodiscard]] std::vector<double> log_grid(double lo_exponent, double hi_exponent, int count);
/// `count` points on [lo, hi], endpoints included.
[[nodiscard]] std::vector<double> linear_grid(double lo, double hi, int count);
/// `count` points on [lo, hi), upper end excluded.
[[nodiscard]] std::vector<double> periodic_grid(double lo, double hi, int count);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// ---------------------------------------------------------------------------
// Single-DOF maps

struct AnalyticRecord {
    int dim = 1;
    double chi = 0.0;
    double alpha = 0.0;
    double mass = 0.0;
    double stiffness = 0.0;
    double lambda = 0.0;
    double dt_crit = 0.0;
};

/// One record per (chi, alpha), chi outer.
[[nodiscard]] std::vector<AnalyticRecord> analytic_map(int dim, std::span<const double> chis,
                                                       std::span<const double> alphas);

/// Smallest single-DOF critical step over the sampled cut parameters.
[[nodiscard]] double analytic_dt_min(double alpha, int dim, std::span<const double> chis);

// ---------------------------------------------------------------------------
// Single-element sweeps

struct SweepRecord {
    int dim = 1;
    int degree = 1;
    double alpha = 0.0;
    double chi = 0.0;
    double lambda_max = 0.0;
    double dt_crit = 0.0;
};

struct ElementSweepOptions {
    int dim = 1;
    std::vector<int> degrees{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> alphas{1e-4, 1e-8, 1e-12};
    std::vector<double> chis = log_grid(-8.0, 0.0, 161);
    int jobs = 0;
    ProgressFn progress;
};

/// Neumann element pencils with exact corner-cut integration; records ordered
/// by degree, then alpha, then chi.
[[nodiscard]] std::vector<SweepRecord> element_sweep(const ElementSweepOptions& options);

struct MinRatio {
    int dim = 1;
    int degree = 1;
    double alpha = 0.0;
    double chi_at_min = 0.0;
    double dt_min = 0.0;
    double dt_full_c = 0.0;
    double ratio = 0.0;
};

/// Grid minimum of dt over records sharing (dim, degree, alpha) and its ratio
/// to the chi = 1 record. Throws when the chi = 1 sample is missing.
[[nodiscard]] MinRatio min_dt_ratio(std::span<const SweepRecord> records);

/// Groups records by (dim, degree, alpha) in order of first appearance.
[[nodiscard]] std::vector<MinRatio> min_dt_ratios(std::span<const SweepRecord> records);

// ---------------------------------------------------------------------------
// Modified CFL condition

/// alpha^{1/(d+2)}
[[nodiscard]] double cfl_factor(double alpha, int dim);
/// alpha^{1/(d+2)} C_CFL h / c
[[nodiscard]] double modified_cfl_dt(double alpha, int dim, double c_cfl, double h, double wave_speed);

struct CflEstimate {
    int dim = 2;
    int degree = 1;
    double alpha = 1.0;
    double h = 1.0;
    double wave_speed = 1.0;
    double dt_full_c = 0.0;  // uncut element, consistent Gauss-Legendre mass
    double dt_full_l = 0.0;  // uncut element, lumped GLL mass
    double factor = 1.0;
    double dt_cfl_fc = 0.0;  // factor * dt_full_c
    double c_cfl_consistent = 0.0;
    double c_cfl_lumped = 0.0;
};

[[nodiscard]] CflEstimate cfl_estimate(int dim, int degree, double alpha, double h, double wave_speed = 1.0);

// ---------------------------------------------------------------------------
// Perforated plate

struct PlateConfiguration {
    int index = 1;  // 1-based, x-shift major
    double shift_x = 0.0;
    double shift_y = 0.0;
};

/// Linear shift grid over [0, 0.2] x [0, 9/13). Strides keep every n-th
/// shift per direction (starting at 0) with indices of the full grid. With
/// `subsample` > 0 only that many of the remaining configurations, evenly
/// spaced, are kept.
[[nodiscard]] std::vector<PlateConfiguration> plate_configurations(int nx_shifts, int ny_shifts, int subsample = 0,
                                                                   int stride_x = 1, int stride_y = 1);

struct PlateRecord {
    int config = 1;
    double shift_x = 0.0;
    double shift_y = 0.0;
    int degree = 1;
    int depth = 0;
    double dt_element = 0.0;
    double dt_global = 0.0;
    double dt_full_c = 0.0;
    double dt_full_l = 0.0;
    double dt_cfl_fc = 0.0;
    bool element_ok = true;
    bool global_ok = true;
    int cut_elements = 0;
    int lanczos_iterations = 0;
    double lanczos_residual = 0.0;
};

struct PlateStudyOptions {
    int degree = 2;
    std::vector<int> depths;  // empty: p + 1 and p + 2
    double alpha = 1e-4;
    int nx_shifts = 15;
    int ny_shifts = 50;
    int subsample = 0;
    int stride_x = 1;
    int stride_y = 1;
    GridSpec grid{45, 15, 0.2, {0.0, 0.0, 0.0}};
    LanczosOptions lanczos;
    int jobs = 0;
    ProgressFn progress;
};

struct PlateStudyResult {
    CflEstimate cfl;
    std::vector<PlateRecord> records;  // depth outer, configuration inner

    [[nodiscard]] int element_violations(int depth) const;
    [[nodiscard]] int global_violations(int depth) const;
};

/// Critical steps of one shifted plate: per-element minimum and global.
[[nodiscard]] PlateRecord plate_configuration_run(const PlateConfiguration& config, int degree, int depth,
                                                  double alpha, const GridSpec& grid, const CflEstimate& cfl,
                                                  const LanczosOptions& lanczos);

[[nodiscard]] PlateStudyResult plate_study(const PlateStudyOptions& options);

}  // namespace fcmcfl::studies
