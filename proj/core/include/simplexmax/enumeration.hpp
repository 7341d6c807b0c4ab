#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "simplexmax/geometry.hpp"
#include "simplexmax/rep_tables.hpp"

namespace simplexmax {

std::uint64_t default_node_budget(); // SIMPLEXMAX_BUDGET env override

/// Shared node counter with a hard limit. Exhaustion is an error, never a
/// silent truncation.
class NodeBudget {
public:
    explicit NodeBudget(std::uint64_t limit = default_node_budget()) : limit_(limit) {}
    void charge(std::uint64_t n) {
        if (used_.fetch_add(n, std::memory_order_relaxed) + n > limit_)
            throw BudgetExceededError("node budget exhausted (limit " +
                                          std::to_string(limit_) + ")",
                                      used_.load());
    }
    std::uint64_t used() const { return used_.load(); }
    std::uint64_t limit() const { return limit_; }

private:
    std::atomic<std::uint64_t> used_{0};
    std::uint64_t limit_;
};

struct SphereSpec {
    int dim = 0;
    Int radius_sq = 0; // n = lambda^2 t, nonnegative
};

/// System y_i . y_j = target(i,j) over Z^dim, with optional fixed slots and
/// optional unconstrained pairs (the doubled systems leave y_k . y_k' free).
/// "Pinned" vectors are fixed before the search starts; the remaining slots
/// are enumerated in slot order.
struct GramSystem {
    int dim = 0;
    GramMatrix target; // k x k, entries already include the lambda^2 factor
    std::vector<std::optional<std::vector<Int>>> assignment; // size k; nullopt = free
    std::vector<std::pair<int, int>> unconstrained_pairs;    // (i < j) with y_i.y_j free

    int k() const { return target.order(); }
    int free_count() const;
    bool pair_constrained(int i, int j) const;

    static GramSystem simplex_copies(int dim, const GramMatrix& t, Int lambda_sq);
    GramSystem with_pinned_back(std::vector<std::vector<Int>> vs) const;  // fixes y_k, y_{k-1}, ...
    GramSystem with_pinned_front(std::vector<std::vector<Int>> vs) const; // fixes y_1, y_2, ...

    void validate() const;          // shape/invariant errors
    bool pinned_consistent() const; // pinned satisfy their own constraints
};

/// Materialized, lexicographically ordered solution list. Tuples are flat
/// (k * dim integers each, slots in order, pinned slots included).
class SolutionStream {
public:
    SolutionStream() = default;
    SolutionStream(int dim, int k, std::vector<Int> flat);

    int dim() const { return dim_; }
    int tuple_size() const { return k_; }
    std::size_t count() const { return k_ == 0 ? 0 : flat_.size() / (static_cast<std::size_t>(k_) * dim_); }
    std::span<const Int> tuple(std::size_t i) const {
        const std::size_t w = static_cast<std::size_t>(k_) * dim_;
        return {flat_.data() + i * w, w};
    }
    std::span<const Int> vec(std::size_t i, int slot) const {
        const std::size_t w = static_cast<std::size_t>(k_) * dim_;
        return {flat_.data() + i * w + static_cast<std::size_t>(slot) * dim_, static_cast<std::size_t>(dim_)};
    }

private:
    int dim_ = 0;
    int k_ = 0;
    std::vector<Int> flat_;
};

/// All y in Z^dim with |y|^2 = radius_sq, lexicographic order.
SolutionStream sphere_points(const SphereSpec& spec, NodeBudget* budget = nullptr);

/// All solutions of the system, extending any pinned slots. An internally
/// inconsistent pinned set yields an empty stream (not an error).
SolutionStream enumerate_completions(const GramSystem& sys, NodeBudget* budget = nullptr);

/// Number of solutions without materializing them. Uses sum-of-squares
/// tail tables once every remaining linear constraint is exhausted.
Wide count_completions(const GramSystem& sys, NodeBudget* budget = nullptr);

/// N_{lambda Delta}: the system must have no pinned slots.
Wide count_simplex_copies(const GramSystem& sys, NodeBudget* budget = nullptr);

/// Sum over (y_k, y_k') of W_{lambda^2 T}(y_k, y_k')^2, i.e. the number of
/// solutions of the doubled system sharing both final vertices. Exact;
/// internally reduced over signed-permutation orbits of y_k.
Wide weight_second_moment(int dim, const GramMatrix& t, Int lambda_sq,
                          NodeBudget* budget = nullptr);

/// Sum over y_k of (#completions)^2: the one-shared-vertex doubled system.
Wide one_sided_second_moment(int dim, const GramMatrix& t, Int lambda_sq,
                             NodeBudget* budget = nullptr);

struct ScalingBandRow {
    Int lambda_sq = 0;
    Wide count = 0;
    long double predicted = 0; // det(lambda^2 T)^{(d-k-1)/2}
    long double ratio = 0;
    bool flagged = false; // predicted == 0, ratio undefined
};

struct ScalingBandReport {
    std::vector<ScalingBandRow> rows;
    long double min_ratio = 0;
    long double max_ratio = 0;
    bool dimension_warning = false; // d < 2k+3
    long double band_factor() const { return min_ratio > 0 ? max_ratio / min_ratio : 0; }
};

/// Per-lambda ratios N / det(lambda^2 T)^{(d-k-1)/2}. Measured, asserts
/// nothing (the bound's constants are not explicit).
ScalingBandReport scaling_band_report(int dim, const GramMatrix& t,
                                      std::span<const Int> lambda_sqs,
                                      NodeBudget* budget = nullptr);

// --- signed-permutation orbit helpers (Z^d isometries fixing the systems) ---

/// Representatives (coordinates sorted descending, nonnegative) of the
/// orbits of the sphere |y|^2 = norm_sq under signed coordinate
/// permutations. Trailing zeros are omitted from each representative.
std::vector<std::vector<Int>> sphere_orbit_representatives(int dim, Int norm_sq);

/// Orbit size of the vector whose nonzero coordinates are rep (padded with
/// zeros to dim): d! / prod(multiplicities!) * 2^{#nonzero}.
Int signed_permutation_orbit_size(std::span<const Int> rep, int dim);

/// Exact N_{lambda Delta} for k <= 2 systems, for every lambda^2 in
/// [0, max_lambda_sq], by dynamic programming over descending first-vector
/// prefixes with sum-of-squares tail tables. counts[l] = N at lambda^2 = l.
std::vector<Wide> pair_count_profile(int dim, const GramMatrix& t, Int max_lambda_sq,
                                     NodeBudget* budget = nullptr);

Int isqrt_floor(Int n);

} // namespace simplexmax
