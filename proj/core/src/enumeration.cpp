#include "simplexmax/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "simplexmax/parallel.hpp"

namespace simplexmax {

std::uint64_t default_node_budget() {
    static const std::uint64_t v = [] {
        if (const char* env = std::getenv("SIMPLEXMAX_BUDGET")) {
            char* end = nullptr;
            unsigned long long parsed = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && parsed > 0) return std::uint64_t(parsed);
        }
        return std::uint64_t(2'000'000'000ULL);
    }();
    return v;
}

Int isqrt_floor(Int n) {
    if (n < 0) return -1;
    Int r = Int(std::sqrt(double(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

int GramSystem::free_count() const {
    int n = 0;
    for (const auto& a : assignment)
        if (!a.has_value()) ++n;
    return n;
}

bool GramSystem::pair_constrained(int i, int j) const {
    for (auto [a, b] : unconstrained_pairs)
        if ((a == i && b == j) || (a == j && b == i)) return false;
    return true;
}

GramSystem GramSystem::simplex_copies(int dim, const GramMatrix& t, Int lambda_sq) {
    if (lambda_sq < 0) throw InvalidInputError("lambda^2 must be nonnegative");
    GramSystem sys;
    sys.dim = dim;
    sys.target = t.scaled(lambda_sq);
    sys.assignment.assign(static_cast<std::size_t>(t.order()), std::nullopt);
    sys.validate();
    return sys;
}

GramSystem GramSystem::with_pinned_back(std::vector<std::vector<Int>> vs) const {
    GramSystem sys = *this;
    if (int(vs.size()) > k()) throw InvalidInputError("more pinned vectors than slots");
    const int base = k() - int(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
        sys.assignment[static_cast<std::size_t>(base) + i] = std::move(vs[i]);
    sys.validate();
    return sys;
}

GramSystem GramSystem::with_pinned_front(std::vector<std::vector<Int>> vs) const {
    GramSystem sys = *this;
    if (int(vs.size()) > k()) throw InvalidInputError("more pinned vectors than slots");
    for (std::size_t i = 0; i < vs.size(); ++i) sys.assignment[i] = std::move(vs[i]);
    sys.validate();
    return sys;
}

void GramSystem::validate() const {
    if (dim < 1) throw InvalidInputError("system dimension must be >= 1");
    if (target.order() < 1) throw InvalidInputError("system needs k >= 1");
    if (int(assignment.size()) != target.order())
        throw InvalidInputError("assignment size does not match target order");
    for (int i = 0; i < target.order(); ++i)
        if (target(i, i) < 0)
            throw InvalidInputError("negative diagonal target");
    for (const auto& a : assignment)
        if (a && int(a->size()) != dim)
            throw InvalidInputError("pinned vector has wrong dimension");
    for (auto [i, j] : unconstrained_pairs)
        if (i < 0 || j < 0 || i >= target.order() || j >= target.order() || i == j)
            throw InvalidInputError("bad unconstrained pair");
}

bool GramSystem::pinned_consistent() const {
    const int kk = k();
    for (int i = 0; i < kk; ++i) {
        if (!assignment[static_cast<std::size_t>(i)]) continue;
        const auto& vi = *assignment[static_cast<std::size_t>(i)];
        for (int j = i; j < kk; ++j) {
            if (!assignment[static_cast<std::size_t>(j)]) continue;
            if (i != j && !pair_constrained(i, j)) continue;
            const auto& vj = *assignment[static_cast<std::size_t>(j)];
            Wide dot = 0;
            for (int c = 0; c < dim; ++c) dot += Wide(vi[static_cast<std::size_t>(c)]) * Wide(vj[static_cast<std::size_t>(c)]);
            if (dot != Wide(target(i, j))) return false;
        }
    }
    return true;
}

SolutionStream::SolutionStream(int dim, int k, std::vector<Int> flat)
    : dim_(dim), k_(k), flat_(std::move(flat)) {}

namespace {

struct Constraint {
    int other_slot; // fixed before this slot is searched
    Int target;
};

struct FreeSlot {
    int slot;
    Int norm;
    std::vector<Constraint> cons;
};

// One depth-first worker over the free slots of a system. Coordinates are
// fixed left to right; candidate values ascend, so emission is
// lexicographic. Pruning: remaining sum of squares per coordinate, plus
// Cauchy-Schwarz intervals for every linear constraint against the fixed
// tail.
struct Engine {
    int dim = 0;
    int k = 0;
    std::vector<FreeSlot> free_slots;
    std::vector<std::vector<Int>> vals;  // k x dim, pinned prefilled
    std::vector<std::vector<Int>> tails; // per slot: suffix square sums (dim+1)
    bool count_only = false;
    const SumSquaresTable* table = nullptr;
    NodeBudget* budget = nullptr;
    std::uint64_t local_nodes = 0;
    static constexpr std::uint64_t kFlushEvery = 4096;

    Wide count = 0;
    std::vector<Int>* out = nullptr;

    std::vector<Int> rem_buf; // (dim+1) * ncons rows for the active slot

    void charge_node() {
        if (++local_nodes >= kFlushEvery) flush();
    }
    void flush() {
        if (budget && local_nodes) {
            std::uint64_t n = local_nodes;
            local_nodes = 0;
            budget->charge(n);
        }
    }

    void compute_tail(int slot) {
        auto& t = tails[static_cast<std::size_t>(slot)];
        t.assign(static_cast<std::size_t>(dim) + 1, 0);
        for (int c = dim - 1; c >= 0; --c)
            t[static_cast<std::size_t>(c)] = t[static_cast<std::size_t>(c) + 1] +
                                vals[static_cast<std::size_t>(slot)][static_cast<std::size_t>(c)] * vals[static_cast<std::size_t>(slot)][static_cast<std::size_t>(c)];
    }

    void emit() {
        ++count;
        if (out)
            for (int s = 0; s < k; ++s)
                out->insert(out->end(), vals[static_cast<std::size_t>(s)].begin(), vals[static_cast<std::size_t>(s)].end());
    }

    bool tails_dead(const FreeSlot& fs, int c) const {
        for (const auto& con : fs.cons)
            if (tails[static_cast<std::size_t>(con.other_slot)][static_cast<std::size_t>(c)] != 0) return false;
        return true;
    }

    void search_slot(std::size_t fi) {
        if (fi == free_slots.size()) {
            emit();
            return;
        }
        const FreeSlot& fs = free_slots[fi];
        if (fs.norm < 0) return;
        const std::size_t ncons = fs.cons.size();
        std::vector<Int> rem((static_cast<std::size_t>(dim) + 1) * std::max<std::size_t>(ncons, 1));
        for (std::size_t ci = 0; ci < ncons; ++ci) rem[ci] = fs.cons[ci].target;
        descend(fi, 0, fs.norm, rem);
    }

    void descend(std::size_t fi, int c, Int rem_norm, std::vector<Int>& rem) {
        const FreeSlot& fs = free_slots[fi];
        const std::size_t ncons = fs.cons.size();
        Int* row = rem.data() + static_cast<std::size_t>(c) * std::max<std::size_t>(ncons, 1);

        // Once every constraining vector is zero on the remaining
        // coordinates, the rest of a final slot is a pure sphere count.
        if (count_only && table && fi + 1 == free_slots.size() &&
            rem_norm <= table->max_n() && tails_dead(fs, c)) {
            for (std::size_t ci = 0; ci < ncons; ++ci)
                if (row[ci] != 0) return;
            count += table->count(dim - c, rem_norm);
            return;
        }

        if (c == dim) {
            if (rem_norm != 0) return;
            for (std::size_t ci = 0; ci < ncons; ++ci)
                if (row[ci] != 0) return;
            compute_tail(fs.slot);
            search_slot(fi + 1);
            return;
        }

        Int* next_row = row + std::max<std::size_t>(ncons, 1);
        const Int s = isqrt_floor(rem_norm);
        for (Int v = -s; v <= s; ++v) {
            charge_node();
            const Int rn = rem_norm - v * v;
            bool ok = true;
            for (std::size_t ci = 0; ci < ncons; ++ci) {
                const Constraint& con = fs.cons[ci];
                const Int nd = row[ci] - v * vals[static_cast<std::size_t>(con.other_slot)][static_cast<std::size_t>(c)];
                const Int tail = tails[static_cast<std::size_t>(con.other_slot)][static_cast<std::size_t>(c) + 1];
                if (Wide(nd) * nd > Wide(rn) * tail) {
                    ok = false;
                    break;
                }
                next_row[ci] = nd;
            }
            if (!ok) continue;
            vals[static_cast<std::size_t>(fs.slot)][static_cast<std::size_t>(c)] = v;
            descend(fi, c + 1, rn, rem);
        }
    }
};

Engine make_engine(const GramSystem& sys, bool count_only, const SumSquaresTable* table,
                   NodeBudget* budget) {
    Engine e;
    e.dim = sys.dim;
    e.k = sys.k();
    e.count_only = count_only;
    e.table = table;
    e.budget = budget;
    e.vals.assign(static_cast<std::size_t>(e.k), std::vector<Int>(static_cast<std::size_t>(e.dim), 0));
    e.tails.assign(static_cast<std::size_t>(e.k), {});
    for (int i = 0; i < e.k; ++i)
        if (sys.assignment[static_cast<std::size_t>(i)]) {
            e.vals[static_cast<std::size_t>(i)] = *sys.assignment[static_cast<std::size_t>(i)];
            e.compute_tail(i);
        }
    for (int i = 0; i < e.k; ++i) {
        if (sys.assignment[static_cast<std::size_t>(i)]) continue;
        FreeSlot fs;
        fs.slot = i;
        fs.norm = sys.target(i, i);
        // Constrained against every pinned slot and every earlier free slot.
        for (int j = 0; j < e.k; ++j) {
            if (j == i) continue;
            const bool fixed_before = sys.assignment[static_cast<std::size_t>(j)].has_value() || j < i;
            if (!fixed_before) continue;
            if (!sys.pair_constrained(i, j)) continue;
            fs.cons.push_back({j, sys.target(i, j)});
        }
        e.free_slots.push_back(std::move(fs));
    }
    return e;
}

// Runs the system. Parallel mode splits the first free slot's first two
// coordinates into independent subtrees, merged in lexicographic task order.
Wide run_system(const GramSystem& sys, bool count_only, bool parallel,
                const SumSquaresTable* table, NodeBudget* budget, std::vector<Int>* out) {
    sys.validate();
    if (!sys.pinned_consistent()) return 0;

    Engine base = make_engine(sys, count_only, table, budget);
    if (base.free_slots.empty()) {
        base.out = out;
        base.emit();
        return base.count;
    }

    const FreeSlot& first = base.free_slots.front();
    const Int s0 = isqrt_floor(first.norm);
    const bool split2 = base.dim >= 2;

    struct Task {
        Int a = 0;
        Int b = 0;
    };
    std::vector<Task> tasks;
    if (parallel && thread_count() > 1) {
        for (Int a = -s0; a <= s0; ++a) {
            if (split2) {
                const Int s1 = isqrt_floor(first.norm - a * a);
                for (Int b = -s1; b <= s1; ++b) tasks.push_back({a, b});
            } else {
                tasks.push_back({a, 0});
            }
        }
    }

    if (tasks.size() <= 1) {
        base.out = out;
        base.search_slot(0);
        base.flush();
        return base.count;
    }

    const int pre = split2 ? 2 : 1;
    std::vector<Wide> counts(tasks.size(), 0);
    std::vector<std::vector<Int>> outs(out ? tasks.size() : 0);

    parallel_tasks(tasks.size(), [&](std::size_t ti) {
        Engine e = make_engine(sys, count_only, table, budget);
        e.out = out ? &outs[ti] : nullptr;
        const FreeSlot& fs = e.free_slots.front();
        const std::size_t ncons = fs.cons.size();
        std::vector<Int> rem((static_cast<std::size_t>(e.dim) + 1) * std::max<std::size_t>(ncons, 1));
        for (std::size_t ci = 0; ci < ncons; ++ci) rem[ci] = fs.cons[ci].target;

        // Replay the first `pre` levels with the fixed task values.
        Int rem_norm = fs.norm;
        const Int fixed[2] = {tasks[ti].a, tasks[ti].b};
        bool alive = true;
        for (int c = 0; c < pre && alive; ++c) {
            const Int v = fixed[c];
            e.charge_node();
            const Int rn = rem_norm - v * v;
            if (rn < 0) {
                alive = false;
                break;
            }
            Int* row = rem.data() + static_cast<std::size_t>(c) * std::max<std::size_t>(ncons, 1);
            Int* next_row = row + std::max<std::size_t>(ncons, 1);
            for (std::size_t ci = 0; ci < ncons; ++ci) {
                const Constraint& con = fs.cons[ci];
                const Int nd = row[ci] - v * e.vals[static_cast<std::size_t>(con.other_slot)][static_cast<std::size_t>(c)];
                const Int tail = e.tails[static_cast<std::size_t>(con.other_slot)][static_cast<std::size_t>(c) + 1];
                if (Wide(nd) * nd > Wide(rn) * tail) {
                    alive = false;
                    break;
                }
                next_row[ci] = nd;
            }
            if (!alive) break;
            e.vals[static_cast<std::size_t>(fs.slot)][static_cast<std::size_t>(c)] = v;
            rem_norm = rn;
        }
        if (alive) e.descend(0, pre, rem_norm, rem);
        e.flush();
        counts[ti] = e.count;
    });

    Wide total = 0;
    for (Wide c : counts) total += c;
    if (out)
        for (auto& o : outs) out->insert(out->end(), o.begin(), o.end());
    return total;
}

constexpr Int kMaxTailTableN = 1 << 16;

std::optional<SumSquaresTable> maybe_tail_table(const GramSystem& sys) {
    Int max_diag = 0;
    for (int i = 0; i < sys.k(); ++i)
        if (!sys.assignment[static_cast<std::size_t>(i)]) max_diag = std::max(max_diag, sys.target(i, i));
    if (max_diag > kMaxTailTableN) return std::nullopt;
    return SumSquaresTable(sys.dim, max_diag);
}

} // namespace

SolutionStream sphere_points(const SphereSpec& spec, NodeBudget* budget) {
    if (spec.dim < 1) throw InvalidInputError("sphere dimension must be >= 1");
    if (spec.radius_sq < 0) throw InvalidInputError("sphere radius^2 must be >= 0");
    GramMatrix t(1);
    t.set(0, 0, spec.radius_sq);
    GramSystem sys;
    sys.dim = spec.dim;
    sys.target = t;
    sys.assignment.assign(1, std::nullopt);
    return enumerate_completions(sys, budget);
}

SolutionStream enumerate_completions(const GramSystem& sys, NodeBudget* budget) {
    NodeBudget local;
    std::vector<Int> flat;
    run_system(sys, /*count_only=*/false, /*parallel=*/true, nullptr,
               budget ? budget : &local, &flat);
    return SolutionStream(sys.dim, sys.k(), std::move(flat));
}

Wide count_completions(const GramSystem& sys, NodeBudget* budget) {
    NodeBudget local;
    auto table = maybe_tail_table(sys);
    return run_system(sys, /*count_only=*/true, /*parallel=*/true,
                      table ? &*table : nullptr, budget ? budget : &local, nullptr);
}

Wide count_simplex_copies(const GramSystem& sys, NodeBudget* budget) {
    for (const auto& a : sys.assignment)
        if (a.has_value())
            throw InvalidInputError("count_simplex_copies: system must have no pinned slots");
    return count_completions(sys, budget);
}

std::vector<std::vector<Int>> sphere_orbit_representatives(int dim, Int norm_sq) {
    if (dim < 1 || norm_sq < 0) throw InvalidInputError("bad sphere parameters");
    std::vector<std::vector<Int>> out;
    std::vector<Int> cur;
    auto rec = [&](auto&& self, Int remaining, Int max_val, int parts_left) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (parts_left == 0) return;
        Int top = std::min(max_val, isqrt_floor(remaining));
        for (Int v = top; v >= 1; --v) {
            if (Wide(v) * v * parts_left < Wide(remaining)) break; // too small to ever fill
            cur.push_back(v);
            self(self, remaining - v * v, v, parts_left - 1);
            cur.pop_back();
        }
    };
    rec(rec, norm_sq, isqrt_floor(norm_sq), dim);
    return out;
}

Int signed_permutation_orbit_size(std::span<const Int> rep, int dim) {
    if (int(rep.size()) > dim) throw InvalidInputError("representative longer than dimension");
    if (dim > 16) throw InvalidInputError("orbit size only supported for d <= 16");
    Wide size = 1;
    for (int i = 2; i <= dim; ++i) size *= i; // d!
    int zeros = dim - int(rep.size());
    Wide div = 1;
    for (int i = 2; i <= zeros; ++i) div *= i;
    std::size_t i = 0;
    while (i < rep.size()) {
        std::size_t j = i;
        while (j < rep.size() && rep[j] == rep[i]) ++j;
        for (std::size_t m = 2; m <= j - i; ++m) div *= Wide(m);
        i = j;
    }
    Wide result = size / div;
    for (std::size_t b = 0; b < rep.size(); ++b) result *= 2;
    return Int(result);
}

namespace {

std::vector<Int> pad_rep(std::span<const Int> rep, int dim) {
    std::vector<Int> v(rep.begin(), rep.end());
    v.resize(static_cast<std::size_t>(dim), 0);
    return v;
}

// Masked system counting completions y_1..y_{k-1} against two fixed final
// vertices (the weight W of the doubled system). The pair (y_k, y_k') is
// unconstrained.
GramSystem weight_system(int dim, const GramMatrix& t, Int lambda_sq,
                         std::vector<Int> yk, std::vector<Int> ykp) {
    const int k = t.order();
    GramMatrix m(k + 1);
    for (int i = 0; i < k - 1; ++i)
        for (int j = 0; j < k - 1; ++j) m.set(i, j, lambda_sq * t(i, j));
    for (int i = 0; i < k - 1; ++i) {
        m.set(i, k - 1, lambda_sq * t(i, k - 1));
        m.set(i, k, lambda_sq * t(i, k - 1));
    }
    m.set(k - 1, k - 1, lambda_sq * t(k - 1, k - 1));
    m.set(k, k, lambda_sq * t(k - 1, k - 1));
    m.set(k - 1, k, 0); // masked below

    GramSystem sys;
    sys.dim = dim;
    sys.target = m;
    sys.assignment.assign(static_cast<std::size_t>(k) + 1, std::nullopt);
    sys.assignment[static_cast<std::size_t>(k) - 1] = std::move(yk);
    sys.assignment[static_cast<std::size_t>(k)] = std::move(ykp);
    sys.unconstrained_pairs.push_back({k - 1, k});
    return sys;
}

} // namespace

Wide weight_second_moment(int dim, const GramMatrix& t, Int lambda_sq, NodeBudget* budget) {
    if (!t.positive_definite())
        throw InvalidInputError("weight_second_moment: T must be positive definite");
    if (lambda_sq < 0) throw InvalidInputError("lambda^2 must be nonnegative");
    NodeBudget local;
    NodeBudget* bud = budget ? budget : &local;
    const int k = t.order();
    const Int nk = lambda_sq * t(k - 1, k - 1);

    if (k == 1) {
        Wide n = count_completions(GramSystem::simplex_copies(dim, t, lambda_sq), bud);
        return n * n;
    }

    Int max_inner = 0;
    for (int i = 0; i + 1 < k; ++i) max_inner = std::max(max_inner, lambda_sq * t(i, i));
    std::optional<SumSquaresTable> table;
    if (max_inner <= kMaxTailTableN) table.emplace(dim, max_inner);

    SolutionStream sphere = sphere_points({dim, nk}, bud);
    const std::size_t npoints = sphere.count();
    if (npoints == 0) return 0;

    Wide total = 0;
    for (const auto& rep : sphere_orbit_representatives(dim, nk)) {
        const Int orbit = signed_permutation_orbit_size(rep, dim);
        const std::vector<Int> yk = pad_rep(rep, dim);

        const std::size_t chunk = 64;
        const std::size_t nchunks = (npoints + chunk - 1) / chunk;
        std::vector<Wide> partial(nchunks, 0);
        parallel_tasks(nchunks, [&](std::size_t ci) {
            Wide acc = 0;
            const std::size_t lo = ci * chunk;
            const std::size_t hi = std::min(lo + chunk, npoints);
            for (std::size_t p = lo; p < hi; ++p) {
                auto v = sphere.vec(p, 0);
                GramSystem sys = weight_system(dim, t, lambda_sq, yk,
                                               std::vector<Int>(v.begin(), v.end()));
                Wide w = run_system(sys, /*count_only=*/true, /*parallel=*/false,
                                    table ? &*table : nullptr, bud, nullptr);
                acc += w * w;
            }
            partial[ci] = acc;
        });
        Wide inner = 0;
        for (Wide p : partial) inner += p;
        total += Wide(orbit) * inner;
    }
    return total;
}

Wide one_sided_second_moment(int dim, const GramMatrix& t, Int lambda_sq, NodeBudget* budget) {
    if (!t.positive_definite())
        throw InvalidInputError("one_sided_second_moment: T must be positive definite");
    if (lambda_sq < 0) throw InvalidInputError("lambda^2 must be nonnegative");
    NodeBudget local;
    NodeBudget* bud = budget ? budget : &local;
    const int k = t.order();

    if (k == 1) return count_completions(GramSystem::simplex_copies(dim, t, lambda_sq), bud);

    const Int nk = lambda_sq * t(k - 1, k - 1);
    Int max_inner = 0;
    for (int i = 0; i + 1 < k; ++i) max_inner = std::max(max_inner, lambda_sq * t(i, i));
    std::optional<SumSquaresTable> table;
    if (max_inner <= kMaxTailTableN) table.emplace(dim, max_inner);

    auto reps = sphere_orbit_representatives(dim, nk);
    std::vector<Wide> partial(reps.size(), 0);
    GramSystem base = GramSystem::simplex_copies(dim, t, lambda_sq);
    parallel_tasks(reps.size(), [&](std::size_t ri) {
        GramSystem sys = base.with_pinned_back({pad_rep(reps[ri], dim)});
        Wide cnt = run_system(sys, /*count_only=*/true, /*parallel=*/false,
                              table ? &*table : nullptr, bud, nullptr);
        partial[ri] = Wide(signed_permutation_orbit_size(reps[ri], dim)) * cnt * cnt;
    });
    Wide total = 0;
    for (Wide p : partial) total += p;
    return total;
}

ScalingBandReport scaling_band_report(int dim, const GramMatrix& t,
                                      std::span<const Int> lambda_sqs, NodeBudget* budget) {
    NodeBudget local;
    NodeBudget* bud = budget ? budget : &local;
    const int k = t.order();
    ScalingBandReport report;
    report.dimension_warning = dim < 2 * k + 3;
    report.rows.resize(lambda_sqs.size());

    parallel_tasks(lambda_sqs.size(), [&](std::size_t i) {
        ScalingBandRow row;
        row.lambda_sq = lambda_sqs[i];
        GramSystem sys = GramSystem::simplex_copies(dim, t, row.lambda_sq);
        auto table = maybe_tail_table(sys);
        row.count = run_system(sys, /*count_only=*/true, /*parallel=*/false,
                               table ? &*table : nullptr, bud, nullptr);
        const long double det_t = (long double)(double)t.determinant();
        long double det_scaled = det_t;
        for (int p = 0; p < k; ++p) det_scaled *= (long double)row.lambda_sq;
        row.predicted = det_scaled > 0
                            ? powl(det_scaled, (long double)(dim - k - 1) / 2.0L)
                            : 0.0L;
        if (row.predicted > 0) {
            row.ratio = (long double)wide_to_double(row.count) / row.predicted;
        } else {
            row.flagged = true;
        }
        report.rows[i] = row;
    });

    bool first = true;
    for (const auto& row : report.rows) {
        if (row.flagged) continue;
        if (first || row.ratio < report.min_ratio) report.min_ratio = row.ratio;
        if (first || row.ratio > report.max_ratio) report.max_ratio = row.ratio;
        first = false;
    }
    return report;
}

} // namespace simplexmax
