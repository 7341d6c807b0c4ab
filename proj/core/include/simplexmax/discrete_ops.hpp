#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "simplexmax/enumeration.hpp"
#include "simplexmax/grid_function.hpp"

namespace simplexmax {

/// Memoized solution sets per (dim, T, lambda^2). The same geometry is
/// reused across evaluation points, functions and lambdas; entries are
/// immutable and shareable across threads.
class SolutionCache {
public:
    std::shared_ptr<const SolutionStream> get(int dim, const GramMatrix& t, Int lambda_sq,
                                              NodeBudget* budget = nullptr);

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const SolutionStream>> entries_;
};

/// Admissible lambdas: all lambda^2 in [lo, hi] with N_{lambda Delta} > 0,
/// sorted ascending.
struct LambdaSet {
    std::vector<Int> lambda_sqs;
    bool empty() const { return lambda_sqs.empty(); }
};

LambdaSet admissible_lambdas(int dim, const GramMatrix& t, Int lo, Int hi,
                             NodeBudget* budget = nullptr);

/// A_lambda(f_1..f_k)(x) with the exact N_{lambda Delta}^{-1} normalization.
/// Throws EmptyAverageError when the solution set is empty.
double multilinear_average(std::span<const GridFunction> fs, const GramMatrix& t,
                           Int lambda_sq, std::span<const Int> x, SolutionCache& cache,
                           NodeBudget* budget = nullptr);

/// A_*(f_1..f_k) = max over the lambda set of |A_lambda|, evaluated on a box.
GridFunction maximal(std::span<const GridFunction> fs, const GramMatrix& t,
                     const LambdaSet& lambdas, const Box& eval_box, SolutionCache& cache,
                     NodeBudget* budget = nullptr);

/// Support hull of the inputs dilated by the largest solution coordinate.
/// A_lambda vanishes outside it.
Box default_eval_box(std::span<const GridFunction> fs, const GramMatrix& t,
                     Int max_lambda_sq);

struct SurrogateResult {
    double max_violation = 0; // max over x of lhs - rhs
    double scale = 1;         // max magnitude entering the comparison
};

/// Cauchy-Schwarz on the normalized counting measure (constant exactly 1):
/// A(f_1..f_k)^2 <= A(f_1^2..f_{k-1}^2, 1) * A(1,..,1, f_k^2) pointwise.
/// Inputs must be nonnegative.
SurrogateResult cs_surrogate_check(std::span<const GridFunction> fs, const GramMatrix& t,
                                   Int lambda_sq, const Box& eval_box, SolutionCache& cache,
                                   NodeBudget* budget = nullptr);

/// Hoelder with conjugate exponents q = m/(m-1) and m:
/// A(f) <= A(f_1^q..f_{k-1}^q, 1)^{1/q} * A(1,..,1, f_k^m)^{1/m}.
SurrogateResult holder_surrogate_check(std::span<const GridFunction> fs, const GramMatrix& t,
                                       Int lambda_sq, int m, const Box& eval_box,
                                       SolutionCache& cache, NodeBudget* budget = nullptr);

struct RatioRow {
    std::string label;
    double operator_norm = 0; // ||A_*(f)||_r on the box
    double denominator = 0;   // prod ||f_j||_{p_j}
    double ratio = 0;
};

struct RatioTable {
    std::vector<RatioRow> rows;
    double max_ratio = 0;
};

/// ||A_*(f)||_r / prod ||f_j||_{p_j} per family member. Measured only; the
/// operator norm constants are unknown. Requires 1/r = sum 1/p_j unless
/// override_exponents is set.
RatioTable operator_ratio_experiment(std::span<const std::vector<GridFunction>> family,
                                     std::span<const std::string> labels, const GramMatrix& t,
                                     std::span<const double> ps, double r,
                                     const LambdaSet& lambdas, const Box& eval_box,
                                     SolutionCache& cache, bool override_exponents = false,
                                     NodeBudget* budget = nullptr);

} // namespace simplexmax
