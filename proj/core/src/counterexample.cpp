#include "simplexmax/counterexample.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "simplexmax/rep_tables.hpp"

namespace simplexmax {

CounterexampleFamily CounterexampleFamily::make(int d, int k, GramMatrix t,
                                                std::vector<double> p, double tau,
                                                Int truncation_radius) {
    if (k < 1 || t.order() != k) throw InvalidInputError("family: gram order must equal k");
    if (int(p.size()) != k) throw InvalidInputError("family: need k exponents");
    if (!(p[0] >= 1.0) || std::isinf(p[0]))
        throw InvalidInputError("family: p_1 must be finite and >= 1");
    for (double pi : p)
        if (!(pi >= 1.0)) throw InvalidInputError("family: exponents must be >= 1 or infinity");
    if (truncation_radius < 2) throw InvalidInputError("family: truncation radius must be >= 2");
    CounterexampleFamily fam;
    fam.d = d;
    fam.k = k;
    fam.t = std::move(t);
    fam.p = std::move(p);
    fam.tau = tau < 0 ? 1.0 / (2.0 * k * fam.p[0]) : tau;
    fam.truncation_radius = truncation_radius;
    return fam;
}

double CounterexampleFamily::exponent_r() const {
    double s = 0;
    for (double pi : p) s += std::isinf(pi) ? 0.0 : 1.0 / pi;
    if (s <= 0) throw InvalidInputError("family: 1/r vanishes");
    return 1.0 / s;
}

double CounterexampleFamily::radial_value(int i, double norm) const {
    if (i < 0 || i >= k) throw InvalidInputError("family: function index out of range");
    if (i == 0) return norm == 0.0 ? 1.0 : 0.0;
    if (std::isinf(p[static_cast<std::size_t>(i)])) return 1.0;
    if (norm < 2.0 || norm > double(truncation_radius)) return 0.0;
    const double pi = p[static_cast<std::size_t>(i)];
    return std::pow(norm, -double(d) / pi) * std::pow(std::log(norm), -1.0 / pi - tau);
}

double CounterexampleFamily::value_at(int i, std::span<const Int> x) const {
    double nsq = 0;
    for (Int c : x) nsq += double(c) * double(c);
    return radial_value(i, std::sqrt(nsq));
}

std::vector<double> CounterexampleFamily::norms() const {
    const Int r2 = truncation_radius * truncation_radius;
    SumSquaresTable reps(d, r2);
    std::vector<double> out(static_cast<std::size_t>(k), 0.0);
    for (int i = 0; i < k; ++i) {
        if (i == 0 || std::isinf(p[static_cast<std::size_t>(i)])) {
            out[static_cast<std::size_t>(i)] = 1.0; // ||delta||_p = 1; ||1||_inf = 1
            continue;
        }
        double s = 0;
        for (Int n = 4; n <= r2; ++n) {
            const double v = radial_value(i, std::sqrt(double(n)));
            if (v > 0) s += wide_to_double(reps.count(d, n)) * std::pow(v, p[static_cast<std::size_t>(i)]);
        }
        out[static_cast<std::size_t>(i)] = std::pow(s, 1.0 / p[static_cast<std::size_t>(i)]);
    }
    return out;
}

GridFunction CounterexampleFamily::realize(int i) const {
    Box box = Box::cube(d, -truncation_radius, truncation_radius);
    if (box.cells() > 20'000'000)
        throw InvalidInputError("family: box too large to materialize; use the radial interface");
    GridFunction f = GridFunction::zeros(box);
    f.for_each([&](std::span<const Int> x, double) {
        const double v = value_at(i, x);
        if (v != 0.0) f.set(x, v);
    });
    return f;
}

Wide shell_weight_sum(int d, int k, const GramMatrix& t, int j,
                      std::vector<std::pair<Int, Wide>>* per_lambda, NodeBudget* budget) {
    if (j < 0) throw InvalidInputError("shell index must be >= 0");
    if (t.order() != k) throw InvalidInputError("shell_weight_sum: gram order must equal k");
    const Int t11 = t(0, 0);
    if (t11 < 1) throw InvalidInputError("shell_weight_sum: t_11 must be >= 1");

    // 4^j <= lambda^2 t_11 < 4^{j+1}
    const Int shell_lo = Int(1) << (2 * j);
    const Int shell_hi = Int(1) << (2 * j + 2);
    const Int lo = (shell_lo + t11 - 1) / t11;
    const Int hi = (shell_hi - 1) / t11;
    if (per_lambda) per_lambda->clear();
    if (hi < lo || hi < 1) return 0;

    Wide total = 0;
    if (k <= 2) {
        auto profile = pair_count_profile(d, t, hi, budget);
        for (Int l = std::max<Int>(lo, 1); l <= hi; ++l) {
            if (l * t11 < shell_lo || l * t11 >= shell_hi) continue;
            total += profile[static_cast<std::size_t>(l)];
            if (per_lambda) per_lambda->emplace_back(l, profile[static_cast<std::size_t>(l)]);
        }
        return total;
    }

    // General k: orbit reduction over the first vertex, budget-guarded.
    for (Int l = std::max<Int>(lo, 1); l <= hi; ++l) {
        if (l * t11 < shell_lo || l * t11 >= shell_hi) continue;
        Wide n = 0;
        GramSystem base = GramSystem::simplex_copies(d, t, l);
        for (const auto& rep : sphere_orbit_representatives(d, l * t11)) {
            std::vector<Int> x(rep.begin(), rep.end());
            x.resize(static_cast<std::size_t>(d), 0);
            Wide c = count_completions(base.with_pinned_front({x}), budget);
            n += Wide(signed_permutation_orbit_size(rep, d)) * c;
        }
        total += n;
        if (per_lambda) per_lambda->emplace_back(l, n);
    }
    return total;
}

DivergenceReport divergence_report(const CounterexampleFamily& fam, int j_max,
                                   NodeBudget* budget) {
    DivergenceReport report;
    report.r = fam.exponent_r();
    const double r = report.r;

    double partial = 0;
    for (int j = 1; j <= j_max; ++j) {
        const auto t0 = std::chrono::steady_clock::now();
        BlockReport block;
        block.j = j;
        std::vector<std::pair<Int, Wide>> per_lambda;
        block.shell_sum = shell_weight_sum(fam.d, fam.k, fam.t, j, &per_lambda, budget);
        block.lambda_total = Int(per_lambda.size());
        for (const auto& entry : per_lambda)
            if (entry.second > 0) ++block.lambda_positive;
        const double jd = double(j) * fam.d;
        block.block_value = std::ldexp(wide_to_double(block.shell_sum), int(-jd));
        block.normalized =
            block.block_value * std::exp2(jd / r) * std::pow(double(j), 1.0 / r);
        partial += std::exp2(jd) * std::pow(block.block_value, r);
        report.partial_sums.push_back(partial);
        block.elapsed_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        report.blocks.push_back(block);
    }

    bool consistent = !report.blocks.empty();
    for (const auto& b : report.blocks)
        if (!(b.normalized > 0)) consistent = false;
    for (std::size_t i = 1; i < report.partial_sums.size(); ++i)
        if (!(report.partial_sums[i] > report.partial_sums[i - 1])) consistent = false;
    const double critical = double(fam.d) / double(fam.d - 2);
    if (fam.p[0] > critical + 1e-12) consistent = false; // out of the claimed regime
    report.verdict = consistent ? "divergence-consistent" : "inconclusive";
    return report;
}

std::string divergence_report_json(const CounterexampleFamily& fam,
                                   const DivergenceReport& report) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta;
    meta["d"] = fam.d;
    meta["k"] = fam.k;
    meta["gram"] = fam.t.to_string();
    auto ps = nlohmann::ordered_json::array();
    for (double pi : fam.p)
        if (std::isinf(pi)) ps.push_back("inf");
        else ps.push_back(pi);
    meta["p"] = ps;
    meta["r"] = report.r;
    meta["tau"] = fam.tau;
    meta["truncation_radius"] = fam.truncation_radius;
    meta["truncation"] = "radial (|x| <= R); values on 1 < |x| < 2 are 0";
    meta["seedless"] = true;
    j["metadata"] = meta;

    auto blocks = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.blocks.size(); ++i) {
        const auto& b = report.blocks[i];
        nlohmann::ordered_json bj;
        bj["j"] = b.j;
        bj["shell_sum"] = wide_to_string(b.shell_sum);
        bj["block_value"] = b.block_value;
        bj["normalized"] = b.normalized;
        bj["lambda_total"] = b.lambda_total;
        bj["lambda_positive"] = b.lambda_positive;
        bj["partial_sum"] = report.partial_sums[i];
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    j["verdict"] = report.verdict;
    return j.dump(2) + "\n";
}

std::string divergence_timing_json(const DivergenceReport& report) {
    nlohmann::ordered_json j;
    auto blocks = nlohmann::ordered_json::array();
    for (const auto& b : report.blocks) {
        nlohmann::ordered_json bj;
        bj["j"] = b.j;
        bj["elapsed_ms"] = b.elapsed_ms;
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    return j.dump(2) + "\n";
}

} // namespace simplexmax
