#include <algorithm>
#include <optional>

#include "simplexmax/enumeration.hpp"
#include "simplexmax/parallel.hpp"

namespace simplexmax {

namespace {

// Count table over (partial |y|^2, partial x.y) states while the first
// vector's nonzero prefix is grown. One row of Wide per norm value.
struct DpTable {
    Int b_max = 0;
    Int c_bound = 0;
    std::vector<Wide> cells; // (b_max+1) x (2*c_bound+1)

    void reset(Int b, Int c) {
        b_max = b;
        c_bound = c;
        cells.assign(static_cast<std::size_t>(b + 1) * static_cast<std::size_t>(2 * c + 1), 0);
    }
    Wide& at(Int h, Int cdot) {
        return cells[static_cast<std::size_t>(h) * static_cast<std::size_t>(2 * c_bound + 1) + static_cast<std::size_t>(cdot + c_bound)];
    }
    const Wide& at(Int h, Int cdot) const {
        return cells[static_cast<std::size_t>(h) * static_cast<std::size_t>(2 * c_bound + 1) + static_cast<std::size_t>(cdot + c_bound)];
    }
};

struct PairDp {
    int dim;
    Int t11, t12, t22;
    Int max_lambda_sq;
    Int a_max, b_max, c_bound;
    const SumSquaresTable* reps;
    NodeBudget* budget;
    std::uint64_t local_ops = 0;

    std::vector<DpTable> stack;  // one table per prefix depth
    std::vector<Int> prefix;     // descending positive values
    std::vector<Wide>* out;      // counts indexed by lambda^2

    void charge(std::uint64_t ops) {
        local_ops += ops;
        if (local_ops >= 65536) {
            budget->charge(local_ops / 64); // table ops are cheap relative to tree nodes
            local_ops = 0;
        }
    }

    void readout(int depth, Int a) {
        if (a == 0 || a % t11 != 0) return;
        const Int l = a / t11;
        if (l > max_lambda_sq) return;
        const Int b = l * t22;
        const Int ct = l * t12;
        if (b > b_max || ct > c_bound || ct < -c_bound) return;
        const DpTable& tb = stack[static_cast<std::size_t>(depth)];
        Wide w = 0;
        for (Int h = 0; h <= b; ++h) {
            const Wide cell = tb.at(h, ct);
            if (cell != 0) w += cell * reps->count(dim - depth, b - h);
        }
        if (w != 0)
            (*out)[static_cast<std::size_t>(l)] +=
                Wide(signed_permutation_orbit_size(prefix, dim)) * w;
    }

    void transition(const DpTable& src, DpTable& dst, Int v) {
        dst.reset(b_max, c_bound);
        std::uint64_t ops = 0;
        for (Int h = 0; h <= b_max; ++h) {
            const Int u_max = isqrt_floor(b_max - h);
            for (Int cdot = -c_bound; cdot <= c_bound; ++cdot) {
                const Wide cell = src.at(h, cdot);
                if (cell == 0) continue;
                ops += std::uint64_t(2 * u_max + 1);
                for (Int u = -u_max; u <= u_max; ++u)
                    dst.at(h + u * u, cdot + v * u) += cell;
            }
        }
        charge(ops);
    }

    void grow(int depth, Int a, Int max_val) {
        readout(depth, a);
        if (depth == dim) return;
        const Int top = std::min(max_val, isqrt_floor(a_max - a));
        for (Int v = top; v >= 1; --v) {
            transition(stack[static_cast<std::size_t>(depth)], stack[static_cast<std::size_t>(depth) + 1], v);
            prefix.push_back(v);
            grow(depth + 1, a + v * v, v);
            prefix.pop_back();
        }
    }
};

} // namespace

std::vector<Wide> pair_count_profile(int dim, const GramMatrix& t, Int max_lambda_sq,
                                     NodeBudget* budget) {
    if (dim < 1) throw InvalidInputError("pair_count_profile: dimension must be >= 1");
    if (max_lambda_sq < 0) throw InvalidInputError("pair_count_profile: negative lambda range");
    const int k = t.order();
    if (k > 2) throw InvalidInputError("pair_count_profile: only k <= 2 systems");
    for (int i = 0; i < k; ++i)
        if (t(i, i) < 0) throw InvalidInputError("pair_count_profile: negative diagonal");

    NodeBudget local;
    NodeBudget* bud = budget ? budget : &local;

    std::vector<Wide> counts(static_cast<std::size_t>(max_lambda_sq) + 1, 0);
    counts[0] = 1; // the all-zero tuple

    if (k == 1) {
        const Int t11 = t(0, 0);
        if (t11 == 0) return counts; // only lambda^2 = 0 admits solutions (the origin)
        SumSquaresTable reps(dim, t11 * max_lambda_sq);
        for (Int l = 1; l <= max_lambda_sq; ++l)
            counts[static_cast<std::size_t>(l)] = reps.count(dim, t11 * l);
        return counts;
    }

    const Int t11 = t(0, 0), t12 = t(0, 1), t22 = t(1, 1);
    if (t11 == 0) {
        // First vertex is forced to the origin; the cross constraint must vanish.
        SumSquaresTable reps(dim, t22 * max_lambda_sq);
        for (Int l = 1; l <= max_lambda_sq; ++l)
            if (l * t12 == 0) counts[static_cast<std::size_t>(l)] = reps.count(dim, t22 * l);
        return counts;
    }

    const Int a_max = t11 * max_lambda_sq;
    const Int b_max = t22 * max_lambda_sq;
    const Int c_bound = isqrt_floor(a_max * b_max) + 1;
    const std::size_t table_cells = static_cast<std::size_t>(b_max + 1) * static_cast<std::size_t>(2 * c_bound + 1);
    if (table_cells > (static_cast<std::size_t>(1) << 24))
        throw BudgetExceededError("pair_count_profile: state table too large (" +
                                      std::to_string(table_cells) + " cells)",
                                  0);

    SumSquaresTable reps(dim, b_max);

    // Independent subtrees per largest prefix value, merged by summation.
    const Int v_top = isqrt_floor(a_max);
    std::vector<std::vector<Wide>> partial(static_cast<std::size_t>(v_top),
                                           std::vector<Wide>(static_cast<std::size_t>(max_lambda_sq) + 1, 0));
    parallel_tasks(static_cast<std::size_t>(v_top), [&](std::size_t vi) {
        const Int v1 = Int(vi) + 1;
        PairDp dp;
        dp.dim = dim;
        dp.t11 = t11;
        dp.t12 = t12;
        dp.t22 = t22;
        dp.max_lambda_sq = max_lambda_sq;
        dp.a_max = a_max;
        dp.b_max = b_max;
        dp.c_bound = c_bound;
        dp.reps = &reps;
        dp.budget = bud;
        dp.out = &partial[vi];
        dp.stack.resize(static_cast<std::size_t>(dim) + 1);
        dp.stack[0].reset(b_max, c_bound);
        dp.stack[0].at(0, 0) = 1;
        dp.transition(dp.stack[0], dp.stack[1], v1);
        dp.prefix.push_back(v1);
        dp.grow(1, v1 * v1, v1);
        if (dp.local_ops) bud->charge(dp.local_ops / 64 + 1);
    });

    for (const auto& p : partial)
        for (std::size_t l = 0; l <= static_cast<std::size_t>(max_lambda_sq); ++l) counts[l] += p[l];
    return counts;
}

} // namespace simplexmax
