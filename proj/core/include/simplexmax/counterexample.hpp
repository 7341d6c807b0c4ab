#pragma once

#include <span>
#include <string>
#include <vector>

#include "simplexmax/enumeration.hpp"
#include "simplexmax/grid_function.hpp"

namespace simplexmax {

/// The unboundedness family: f_1 = delta_0 and, for finite p_i,
/// f_i(x) = |x|^{-d/p_i} (log|x|)^{-1/p_i - tau} for |x| >= 2 (zero below;
/// p_i = infinity gives the constant 1). Truncated radially at |x| <= R and
/// realized on the box [-R, R]^d when materialized.
struct CounterexampleFamily {
    int d = 0;
    int k = 0;
    GramMatrix t;
    std::vector<double> p; // p[0] = p_1 (finite); later entries may be infinity
    double tau = 0;
    Int truncation_radius = 16;

    // tau < 0 picks the default 1/(2 k p_1), the midpoint of the admissible
    // range tau <= 1/(k p_1).
    static CounterexampleFamily make(int d, int k, GramMatrix t, std::vector<double> p,
                                     double tau = -1.0, Int truncation_radius = 16);

    double exponent_r() const; // 1/r = sum of finite 1/p_i
    double radial_value(int i, double norm) const;
    double value_at(int i, std::span<const Int> x) const;

    /// l^{p_i} norms on the truncated support, computed exactly from the
    /// radial profile and representation tables (no grid materialization).
    std::vector<double> norms() const;

    /// Dense realization of f_i (small d only; guarded by box size).
    GridFunction realize(int i) const;
};

struct BlockReport {
    int j = 0;
    Wide shell_sum = 0;        // sum over the dyadic shell of W_{|x|}(x)
    double block_value = 0;    // B_j = 2^{-jd} * shell_sum
    double normalized = 0;     // B_j * 2^{jd/r} * j^{1/r}
    Int lambda_total = 0;      // lambda^2 values hitting the shell
    Int lambda_positive = 0;   // of those, with N_{lambda Delta} > 0
    double elapsed_ms = 0;     // volatile; serialized only to the sidecar
};

struct DivergenceReport {
    std::vector<BlockReport> blocks;
    std::vector<double> partial_sums; // running sum of 2^{jd} B_j^r
    double r = 0;
    std::string verdict; // "divergence-consistent" or "inconclusive"
};

/// Exact sum over the dyadic shell 2^j <= |x| < 2^{j+1} of
/// W_{|x|}(x) = #completions of x; equals the sum of N_{lambda Delta} over
/// the lambda^2 with lambda^2 t_11 in the shell. k <= 2 runs on the exact
/// prefix DP; larger k falls back to orbit-reduced enumeration.
Wide shell_weight_sum(int d, int k, const GramMatrix& t, int j,
                      std::vector<std::pair<Int, Wide>>* per_lambda = nullptr,
                      NodeBudget* budget = nullptr);

/// Dyadic block values and the partial sums of the divergent series.
/// Verdict is a trend statement, never a theorem claim.
DivergenceReport divergence_report(const CounterexampleFamily& fam, int j_max,
                                   NodeBudget* budget = nullptr);

/// Primary (timing-free, byte-stable) JSON serialization of the report.
std::string divergence_report_json(const CounterexampleFamily& fam,
                                   const DivergenceReport& report);

/// Sidecar JSON with the volatile per-block timings.
std::string divergence_timing_json(const DivergenceReport& report);

} // namespace simplexmax
