#include "simplexmax/discrete_ops.hpp"

#include <cmath>
#include <limits>

#include "simplexmax/parallel.hpp"

namespace simplexmax {

std::shared_ptr<const SolutionStream> SolutionCache::get(int dim, const GramMatrix& t,
                                                         Int lambda_sq, NodeBudget* budget) {
    const std::string key =
        std::to_string(dim) + "|" + t.to_string() + "|" + std::to_string(lambda_sq);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    auto stream = std::make_shared<SolutionStream>(
        enumerate_completions(GramSystem::simplex_copies(dim, t, lambda_sq), budget));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(stream));
    return it->second;
}

LambdaSet admissible_lambdas(int dim, const GramMatrix& t, Int lo, Int hi, NodeBudget* budget) {
    if (lo < 0 || hi < lo) throw InvalidInputError("admissible_lambdas: bad range");
    LambdaSet out;
    if (t.order() <= 2) {
        auto profile = pair_count_profile(dim, t, hi, budget);
        for (Int l = std::max<Int>(lo, 0); l <= hi; ++l)
            if (profile[static_cast<std::size_t>(l)] > 0) out.lambda_sqs.push_back(l);
        return out;
    }
    for (Int l = lo; l <= hi; ++l)
        if (count_simplex_copies(GramSystem::simplex_copies(dim, t, l), budget) > 0)
            out.lambda_sqs.push_back(l);
    return out;
}

namespace {

// Average with optional constant-1 slots (nullptr entries).
double average_with_ones(std::span<const GridFunction* const> fs, const SolutionStream& sols,
                         std::span<const Int> x, std::vector<Int>& scratch) {
    const int k = sols.tuple_size();
    const int dim = sols.dim();
    const std::size_t n = sols.count();
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int j = 0; j < k && prod != 0.0; ++j) {
            if (!fs[static_cast<std::size_t>(j)]) continue;
            auto y = sols.vec(i, j);
            for (int c = 0; c < dim; ++c) scratch[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(c)] + y[static_cast<std::size_t>(c)];
            prod *= fs[static_cast<std::size_t>(j)]->at(scratch);
        }
        sum += prod;
    }
    return sum / double(n);
}

void check_inputs(std::span<const GridFunction> fs, const GramMatrix& t, int dim_expected) {
    if (int(fs.size()) != t.order())
        throw InvalidInputError("number of functions must match the simplex order k");
    for (const auto& f : fs)
        if (f.dim() != dim_expected)
            throw InvalidInputError("grid function dimension mismatch");
}

void require_nonnegative(std::span<const GridFunction> fs) {
    for (const auto& f : fs)
        for (double v : f.values())
            if (v < 0.0)
                throw InvalidInputError("surrogate checks require nonnegative inputs");
}

std::vector<const GridFunction*> pointers(std::span<const GridFunction> fs) {
    std::vector<const GridFunction*> p;
    p.reserve(fs.size());
    for (const auto& f : fs) p.push_back(&f);
    return p;
}

} // namespace

double multilinear_average(std::span<const GridFunction> fs, const GramMatrix& t,
                           Int lambda_sq, std::span<const Int> x, SolutionCache& cache,
                           NodeBudget* budget) {
    const int dim = int(x.size());
    check_inputs(fs, t, dim);
    auto sols = cache.get(dim, t, lambda_sq, budget);
    if (sols->count() == 0)
        throw EmptyAverageError("empty average: N = 0 at lambda^2 = " +
                                std::to_string(lambda_sq));
    std::vector<Int> scratch(static_cast<std::size_t>(dim), 0);
    auto ptrs = pointers(fs);
    return average_with_ones(ptrs, *sols, x, scratch);
}

GridFunction maximal(std::span<const GridFunction> fs, const GramMatrix& t,
                     const LambdaSet& lambdas, const Box& eval_box, SolutionCache& cache,
                     NodeBudget* budget) {
    if (lambdas.empty()) throw InvalidInputError("maximal: empty lambda set");
    const int dim = eval_box.dim();
    check_inputs(fs, t, dim);

    std::vector<std::shared_ptr<const SolutionStream>> streams;
    streams.reserve(lambdas.lambda_sqs.size());
    for (Int l : lambdas.lambda_sqs) {
        auto s = cache.get(dim, t, l, budget);
        if (s->count() == 0)
            throw EmptyAverageError("maximal: lambda^2 = " + std::to_string(l) +
                                    " has no solutions");
        streams.push_back(std::move(s));
    }

    GridFunction out = GridFunction::zeros(eval_box);
    std::vector<std::vector<Int>> points;
    out.for_each([&](std::span<const Int> x, double) {
        points.emplace_back(x.begin(), x.end());
    });
    auto ptrs = pointers(fs);
    std::vector<double> results(points.size(), 0.0);
    parallel_tasks(points.size(), [&](std::size_t i) {
        std::vector<Int> scratch(static_cast<std::size_t>(dim), 0);
        double best = 0;
        for (const auto& s : streams)
            best = std::max(best, std::abs(average_with_ones(ptrs, *s, points[i], scratch)));
        results[i] = best;
    });
    for (std::size_t i = 0; i < points.size(); ++i) out.set(points[i], results[i]);
    return out;
}

Box default_eval_box(std::span<const GridFunction> fs, const GramMatrix& t,
                     Int max_lambda_sq) {
    if (fs.empty()) throw InvalidInputError("default_eval_box: no functions");
    Box h = fs.front().box();
    for (const auto& f : fs.subspan(1)) h = Box::hull(h, f.box());
    Int max_diag = 0;
    for (int i = 0; i < t.order(); ++i) max_diag = std::max(max_diag, t(i, i));
    return h.dilated(isqrt_floor(max_lambda_sq * max_diag));
}

namespace {

SurrogateResult surrogate_check_impl(std::span<const GridFunction> fs, const GramMatrix& t,
                                     Int lambda_sq, int m, const Box& eval_box,
                                     SolutionCache& cache, NodeBudget* budget) {
    const int dim = eval_box.dim();
    check_inputs(fs, t, dim);
    require_nonnegative(fs);
    const int k = t.order();
    const double q = double(m) / double(m - 1);

    auto sols = cache.get(dim, t, lambda_sq, budget);
    if (sols->count() == 0)
        throw EmptyAverageError("empty average: N = 0 at lambda^2 = " +
                                std::to_string(lambda_sq));

    // Left side uses the plain inputs; the right side raises the first k-1
    // (resp. the last) to the conjugate powers with 1 in the freed slot.
    std::vector<GridFunction> head_pow, tail_pow;
    head_pow.reserve(static_cast<std::size_t>(k) - 1);
    for (int j = 0; j + 1 < k; ++j) head_pow.push_back(fs[static_cast<std::size_t>(j)].abs_pow(q));
    tail_pow.push_back(fs[static_cast<std::size_t>(k) - 1].abs_pow(double(m)));

    std::vector<const GridFunction*> lhs = pointers(fs);
    std::vector<const GridFunction*> rhs_head(static_cast<std::size_t>(k), nullptr);
    std::vector<const GridFunction*> rhs_tail(static_cast<std::size_t>(k), nullptr);
    for (int j = 0; j + 1 < k; ++j) rhs_head[static_cast<std::size_t>(j)] = &head_pow[static_cast<std::size_t>(j)];
    rhs_tail[static_cast<std::size_t>(k) - 1] = &tail_pow[0];

    SurrogateResult res;
    res.max_violation = -std::numeric_limits<double>::infinity();
    std::vector<Int> scratch(static_cast<std::size_t>(dim), 0);
    GridFunction probe = GridFunction::zeros(eval_box);
    probe.for_each([&](std::span<const Int> x, double) {
        const double a = average_with_ones(lhs, *sols, x, scratch);
        const double bh = average_with_ones(rhs_head, *sols, x, scratch);
        const double bt = average_with_ones(rhs_tail, *sols, x, scratch);
        double lhs_val, rhs_val;
        if (m == 2) {
            lhs_val = a * a;       // squared Cauchy-Schwarz form
            rhs_val = bh * bt;
        } else {
            lhs_val = a;
            rhs_val = std::pow(bh, 1.0 / q) * std::pow(bt, 1.0 / double(m));
        }
        res.max_violation = std::max(res.max_violation, lhs_val - rhs_val);
        res.scale = std::max({res.scale, std::abs(lhs_val), std::abs(rhs_val)});
    });
    return res;
}

} // namespace

SurrogateResult cs_surrogate_check(std::span<const GridFunction> fs, const GramMatrix& t,
                                   Int lambda_sq, const Box& eval_box, SolutionCache& cache,
                                   NodeBudget* budget) {
    return surrogate_check_impl(fs, t, lambda_sq, 2, eval_box, cache, budget);
}

SurrogateResult holder_surrogate_check(std::span<const GridFunction> fs, const GramMatrix& t,
                                       Int lambda_sq, int m, const Box& eval_box,
                                       SolutionCache& cache, NodeBudget* budget) {
    if (m < 2) throw InvalidInputError("holder_surrogate_check: m must be >= 2");
    return surrogate_check_impl(fs, t, lambda_sq, m, eval_box, cache, budget);
}

RatioTable operator_ratio_experiment(std::span<const std::vector<GridFunction>> family,
                                     std::span<const std::string> labels, const GramMatrix& t,
                                     std::span<const double> ps, double r,
                                     const LambdaSet& lambdas, const Box& eval_box,
                                     SolutionCache& cache, bool override_exponents,
                                     NodeBudget* budget) {
    if (family.size() != labels.size())
        throw InvalidInputError("operator_ratio_experiment: labels/family size mismatch");
    if (int(ps.size()) != t.order())
        throw InvalidInputError("operator_ratio_experiment: exponent count mismatch");
    if (!override_exponents) {
        double s = 0;
        for (double p : ps) s += std::isinf(p) ? 0.0 : 1.0 / p;
        if (std::abs(s - 1.0 / r) > 1e-12)
            throw InvalidInputError("operator_ratio_experiment: 1/r != sum 1/p_j "
                                    "(pass override to explore anyway)");
    }

    RatioTable table;
    for (std::size_t fi = 0; fi < family.size(); ++fi) {
        const auto& fs = family[fi];
        RatioRow row;
        row.label = labels[fi];
        GridFunction a = maximal(fs, t, lambdas, eval_box, cache, budget);
        row.operator_norm = lp_norm(a, r);
        row.denominator = 1.0;
        for (std::size_t j = 0; j < fs.size(); ++j)
            row.denominator *= lp_norm(fs[j], ps[j]);
        if (row.denominator == 0)
            throw InvalidInputError("operator_ratio_experiment: zero input norm");
        row.ratio = row.operator_norm / row.denominator;
        table.max_ratio = std::max(table.max_ratio, row.ratio);
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace simplexmax
