#include "simplexmax/campaigns.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "simplexmax/counterexample.hpp"
#include "simplexmax/discrete_ops.hpp"
#include "simplexmax/enumeration.hpp"
#include "simplexmax/parallel.hpp"
#include "simplexmax/regions.hpp"

namespace simplexmax {

using nlohmann::ordered_json;

bool CampaignReport::any_failed() const {
    for (const auto& c : cases)
        if (c.status == "fail") return true;
    return false;
}

std::size_t CampaignReport::count(const std::string& status) const {
    std::size_t n = 0;
    for (const auto& c : cases)
        if (c.status == status) ++n;
    return n;
}

std::string CampaignReport::to_json() const {
    ordered_json j;
    j["campaign"] = campaign;
    j["seed"] = seed;
    j["config"] = ordered_json::parse(config_json);
    auto arr = ordered_json::array();
    for (const auto& c : cases) {
        ordered_json cj;
        cj["key"] = c.key;
        cj["status"] = c.status;
        cj["detail"] = c.detail;
        arr.push_back(cj);
    }
    j["cases"] = arr;
    j["summary"] = {{"pass", count("pass")},
                    {"fail", count("fail")},
                    {"skip", count("skip")},
                    {"report", count("report")}};
    j["repro"] = "simplexmax verify --config <this config>";
    return j.dump(2) + "\n";
}

std::string CampaignReport::to_text() const {
    std::ostringstream out;
    out << "campaign " << campaign << " (seed " << seed << ")\n";
    for (const auto& c : cases)
        out << "  [" << c.status << "] " << c.key << (c.detail.empty() ? "" : " | " + c.detail)
            << "\n";
    out << "pass " << count("pass") << ", fail " << count("fail") << ", skip " << count("skip")
        << ", report " << count("report") << "\n";
    return out.str();
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

GramMatrix gram_from_config(const ordered_json& j) {
    return GramMatrix::parse(j.get<std::string>());
}

std::uint64_t budget_from(const ordered_json& cfg) {
    if (cfg.contains("node_budget")) return cfg["node_budget"].get<std::uint64_t>();
    return default_node_budget();
}

// ---------------------------------------------------------------------------

CampaignReport second_moment_campaign(const ordered_json& cfg) {
    CampaignReport report;
    report.campaign = "second-moment";
    report.seed = cfg.value("seed", std::uint64_t(0));
    const double band = cfg.value("band_factor", 2.0);

    struct Case {
        int d, k;
        GramMatrix t;
        std::vector<Int> lambdas;
    };
    std::vector<Case> cases;
    for (const auto& cj : cfg.at("cases")) {
        Case c;
        c.d = cj.at("d").get<int>();
        c.k = cj.at("k").get<int>();
        c.t = gram_from_config(cj.at("gram"));
        if (c.t.order() != c.k) throw InvalidInputError("second-moment: gram order != k");
        if (!c.t.positive_definite())
            throw InvalidInputError("second-moment: degenerate T rejected at validation");
        for (const auto& l : cj.at("lambda_sqs")) c.lambdas.push_back(l.get<Int>());
        cases.push_back(std::move(c));
    }

    report.cases.resize(cases.size());
    parallel_tasks(cases.size(), [&](std::size_t i) {
        const Case& c = cases[i];
        CaseRecord rec;
        rec.key = "d=" + std::to_string(c.d) + " k=" + std::to_string(c.k) + " T=[" +
                  c.t.to_string() + "]";
        try {
            NodeBudget bud(budget_from(cfg));
            // target exponent 2dk - 2k^2 - 6k + 4
            const double expo = 2.0 * c.d * c.k - 2.0 * c.k * c.k - 6.0 * c.k + 4.0;
            std::vector<double> ratios;
            std::string values;
            for (Int l : c.lambdas) {
                const Wide sw2 = weight_second_moment(c.d, c.t, l, &bud);
                const double ratio = wide_to_double(sw2) / std::pow(std::sqrt(double(l)), expo);
                ratios.push_back(ratio);
                values += " l2=" + std::to_string(l) + ":" + wide_to_string(sw2) +
                          " ratio=" + fmt(ratio);
            }
            double lo = ratios[0], hi = ratios[0];
            bool nondecreasing = true;
            for (std::size_t r = 0; r < ratios.size(); ++r) {
                lo = std::min(lo, ratios[r]);
                hi = std::max(hi, ratios[r]);
                if (r > 0 && ratios[r] < ratios[r - 1]) nondecreasing = false;
            }
            const bool in_hypothesis = c.d >= 4 * c.k + 3;
            const bool band_violated = nondecreasing && hi > band * lo;
            rec.detail = "band=" + fmt(lo > 0 ? hi / lo : 0) + values;
            if (!in_hypothesis) rec.status = "report"; // the bound is not claimed here
            else rec.status = band_violated ? "fail" : "pass";
        } catch (const BudgetExceededError& e) {
            rec.status = "skip";
            rec.detail = e.what();
        }
        report.cases[i] = rec;
    });
    return report;
}

// ---------------------------------------------------------------------------

CampaignReport l1_bound_campaign(const ordered_json& cfg) {
    CampaignReport report;
    report.campaign = "l1-bound";
    report.seed = cfg.value("seed", std::uint64_t(1));
    const int d = cfg.at("d").get<int>();
    const int k = cfg.at("k").get<int>();
    if (d < 2 * k + 3)
        throw InvalidInputError("l1-bound: requires d >= 2k+3");
    const double trend_slack = cfg.value("trend_slack", 1.5);

    std::vector<GramMatrix> ts;
    if (cfg.contains("grams"))
        for (const auto& g : cfg["grams"]) {
            GramMatrix t = gram_from_config(g);
            if (!t.positive_definite())
                throw InvalidInputError("l1-bound: degenerate T rejected at validation");
            ts.push_back(std::move(t));
        }
    if (cfg.contains("random")) {
        const int count = cfg["random"].value("count", 4);
        const Int bound = cfg["random"].value("entry_bound", Int(3));
        std::mt19937_64 gen(report.seed);
        std::uniform_int_distribution<Int> diag(1, bound), off(-bound, bound);
        while (int(ts.size()) < count) {
            GramMatrix t(k);
            for (int i = 0; i < k; ++i) t.set(i, i, diag(gen));
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) t.set(i, j, off(gen));
            if (t.positive_definite()) ts.push_back(std::move(t));
        }
    }
    if (ts.empty()) throw InvalidInputError("l1-bound: no matrices configured");

    std::vector<Int> lambdas;
    for (const auto& l : cfg.at("lambda_sqs")) lambdas.push_back(l.get<Int>());
    if (lambdas.empty()) throw InvalidInputError("l1-bound: empty lambda list");

    struct Row {
        double first_ratio = 0, last_ratio = 0, max_ratio = 0;
        Wide det = 0;
    };
    std::vector<Row> rows(ts.size());
    std::vector<CaseRecord> recs(ts.size());
    parallel_tasks(ts.size(), [&](std::size_t i) {
        const GramMatrix& t = ts[i];
        CaseRecord rec;
        rec.key = "T=[" + t.to_string() + "]";
        try {
            NodeBudget bud(budget_from(cfg));
            Row row;
            row.det = t.determinant();
            std::string values;
            for (std::size_t li = 0; li < lambdas.size(); ++li) {
                const Int l = lambdas[li];
                const Wide n = count_simplex_copies(GramSystem::simplex_copies(d, t, l), &bud);
                const GramMatrix scaled = t.scaled(l);
                const double det_term =
                    std::pow(wide_to_double(scaled.determinant()), double(d - k - 1) / 2.0);
                const double frob_term =
                    std::pow(scaled.frobenius(), double((d - k) * (k - 1)) / 2.0);
                const double ratio = wide_to_double(n) / (det_term + frob_term);
                if (li == 0) row.first_ratio = ratio;
                row.last_ratio = ratio;
                row.max_ratio = std::max(row.max_ratio, ratio);
                values += " l2=" + std::to_string(l) + ":N=" + wide_to_string(n) +
                          " ratio=" + fmt(ratio);
            }
            rows[i] = row;
            const bool trend_ok = row.last_ratio <= row.first_ratio * trend_slack;
            rec.status = trend_ok ? "pass" : "fail";
            rec.detail = "det=" + wide_to_string(row.det) + values;
        } catch (const BudgetExceededError& e) {
            rec.status = "skip";
            rec.detail = e.what();
        }
        recs[i] = rec;
    });

    // Grid-level check: the largest ratio should occur at small det(T).
    std::size_t argmax = 0;
    Wide min_det = rows[0].det;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].max_ratio > rows[argmax].max_ratio) argmax = i;
        min_det = std::min(min_det, rows[i].det);
    }
    CaseRecord grid;
    grid.key = "grid: max ratio at det";
    const bool small_det = rows[argmax].det <= 4 * min_det;
    grid.status = small_det ? "pass" : "fail";
    grid.detail = "argmax det=" + wide_to_string(rows[argmax].det) +
                  " min det=" + wide_to_string(min_det);
    report.cases = std::move(recs);
    report.cases.push_back(grid);
    return report;
}

// ---------------------------------------------------------------------------

GridFunction random_nonneg_grid(int d, Int radius, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    GridFunction f = GridFunction::zeros(Box::cube(d, -radius, radius));
    for (double& v : f.values()) v = unif(gen);
    return f;
}

CampaignReport surrogate_campaign(const ordered_json& cfg) {
    CampaignReport report;
    report.campaign = "surrogate";
    report.seed = cfg.value("seed", std::uint64_t(7));
    const int k = cfg.value("k", 2);
    const Int support_radius = cfg.value("support_radius", Int(1));
    const Int eval_radius = cfg.value("eval_radius", Int(1));
    const int case_count = cfg.value("cases", 100);
    const double tol = cfg.value("tolerance", 1e-10);
    std::vector<int> ms = {2};
    if (cfg.contains("m_list")) {
        ms.clear();
        for (const auto& m : cfg["m_list"]) ms.push_back(m.get<int>());
    }
    std::vector<int> ds;
    for (const auto& dv : cfg.at("d_list")) ds.push_back(dv.get<int>());
    const GramMatrix t =
        cfg.contains("gram") ? gram_from_config(cfg["gram"]) : GramMatrix::identity(k);
    std::vector<Int> lambdas;
    for (const auto& l : cfg.at("lambda_sqs")) lambdas.push_back(l.get<Int>());

    struct Job {
        int d;
        Int lambda_sq;
        int m;
        int index;
    };
    std::vector<Job> jobs;
    for (int d : ds)
        for (Int l : lambdas)
            for (int m : ms)
                for (int c = 0; c < case_count; ++c) jobs.push_back({d, l, m, c});

    SolutionCache cache;
    report.cases.resize(jobs.size() + 1);
    std::vector<double> empirical(jobs.size(), 0.0);
    parallel_tasks(jobs.size(), [&](std::size_t i) {
        const Job& job = jobs[i];
        CaseRecord rec;
        rec.key = "d=" + std::to_string(job.d) + " l2=" + std::to_string(job.lambda_sq) +
                  " m=" + std::to_string(job.m) + " case=" + std::to_string(job.index);
        try {
            NodeBudget bud(budget_from(cfg));
            std::mt19937_64 gen(report.seed + 0x9e37 * i);
            std::vector<GridFunction> fs;
            for (int j = 0; j < k; ++j) fs.push_back(random_nonneg_grid(job.d, support_radius, gen));
            const Box eval_box = Box::cube(job.d, -eval_radius, eval_radius);
            const SurrogateResult res =
                job.m == 2 ? cs_surrogate_check(fs, t, job.lambda_sq, eval_box, cache, &bud)
                           : holder_surrogate_check(fs, t, job.lambda_sq, job.m, eval_box, cache,
                                                    &bud);
            const bool ok = res.max_violation <= tol * res.scale;
            rec.status = ok ? "pass" : "fail";
            rec.detail = "violation=" + fmt(res.max_violation) + " scale=" + fmt(res.scale);
            if (!ok) rec.detail += " inputs: seed=" + std::to_string(report.seed + 0x9e37 * i);

            // Measured Proposition-style constant (never asserted): the
            // pointwise quotient A_*(f)/(prod ||f_j||_inf A_*(f_k^2)^{1/2}).
            LambdaSet ls;
            ls.lambda_sqs.push_back(job.lambda_sq);
            GridFunction astar = maximal(fs, t, ls, eval_box, cache, &bud);
            std::vector<GridFunction> tail_sq;
            for (int j = 0; j < k; ++j)
                tail_sq.push_back(j + 1 == k ? fs[static_cast<std::size_t>(j)].abs_pow(2)
                                             : GridFunction::constant(fs[static_cast<std::size_t>(j)].box(), 1.0));
            GridFunction astar_tail = maximal(tail_sq, t, ls, eval_box, cache, &bud);
            double inf_prod = 1;
            for (int j = 0; j + 1 < k; ++j) inf_prod *= lp_norm(fs[static_cast<std::size_t>(j)], INFINITY);
            double best = 0;
            for (std::size_t c = 0; c < astar.values().size(); ++c) {
                const double denom = inf_prod * std::sqrt(astar_tail.values()[c]);
                if (denom > 1e-300)
                    best = std::max(best, astar.values()[c] / denom);
            }
            empirical[i] = best;
        } catch (const BudgetExceededError& e) {
            rec.status = "skip";
            rec.detail = e.what();
        }
        report.cases[i] = rec;
    });

    double c_meas = 0;
    for (double e : empirical) c_meas = std::max(c_meas, e);
    CaseRecord meas;
    meas.key = "measured sup A_*(f)/(prod ||f||_inf A_*(f_k^2)^{1/2})";
    meas.status = "report";
    meas.detail = fmt(c_meas);
    report.cases.back() = meas;
    return report;
}

// ---------------------------------------------------------------------------

CampaignReport region_crosscheck_campaign(const ordered_json& cfg) {
    CampaignReport report;
    report.campaign = "region-crosscheck";
    report.seed = cfg.value("seed", std::uint64_t(11));
    const int samples = cfg.value("samples", 10000);

    struct Case {
        int k, m, d;
    };
    std::vector<Case> cases;
    for (const auto& cj : cfg.at("cases"))
        cases.push_back({cj.at("k").get<int>(), cj.at("m").get<int>(), cj.at("d").get<int>()});

    report.cases.resize(cases.size());
    parallel_tasks(cases.size(), [&](std::size_t i) {
        const auto [k, m, d] = cases[i];
        CaseRecord rec;
        rec.key = "k=" + std::to_string(k) + " m=" + std::to_string(m) + " d=" + std::to_string(d);
        const double q = double(m) / double(m - 1);
        const Polytope region = ckq_polytope(k, m).scaled(Rat(d - 2, d));

        double geo = 0, power = 1;
        for (int j = 1; j < k; ++j) {
            power /= q;
            geo += power;
        }
        const double sum_bound = geo + power;

        std::mt19937_64 gen(report.seed + 13 * i);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        int inconsistent = 0;
        std::string first_bad;
        for (int s = 0; s < samples; ++s) {
            std::vector<double> recip(static_cast<std::size_t>(k));
            std::vector<double> p(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) {
                recip[static_cast<std::size_t>(j)] = unif(gen) * 0.999 + 5e-4; // (0,1)
                p[static_cast<std::size_t>(j)] = 1.0 / recip[static_cast<std::size_t>(j)];
            }
            double sum = 0;
            for (double rc : recip) sum += rc;
            const double r = 1.0 / sum;
            if (r < 1.0) continue; // not an admissible output exponent

            PredicateResult pred = theorem_predicate(TheoremId::T2ii, d, k, m, p, r);

            // Independent route: scalar hypotheses re-derived here plus the
            // polytope/LP classification of the scaled reciprocal tuple.
            bool scalars = d >= 2 * m * k + 3 && r > (1.0 / sum_bound) * d / (d - 2);
            for (double pj : p) scalars = scalars && pj > q * d / (d - 2);
            const Membership cls = region.classify(recip, 1e-12);
            const bool lp_in = lp_membership(region, recip);
            const bool claimed2 = scalars && cls == Membership::Interior;

            bool bad = pred.claimed != claimed2;
            if (cls == Membership::Interior && !lp_in) bad = true;
            if (cls == Membership::Exterior && lp_in) bad = true;
            if (bad && ++inconsistent == 1) {
                first_bad = " first at p=(";
                for (int j = 0; j < k; ++j)
                    first_bad += (j ? "," : "") + fmt(p[static_cast<std::size_t>(j)]);
                first_bad += ") r=" + fmt(r) + " pred=" + (pred.claimed ? "1" : "0") +
                             " alt=" + (claimed2 ? "1" : "0") + " cls=" + membership_name(cls);
            }
        }
        rec.status = inconsistent == 0 ? "pass" : "fail";
        rec.detail = "samples=" + std::to_string(samples) +
                     " inconsistent=" + std::to_string(inconsistent) + first_bad;
        report.cases[i] = rec;
    });
    return report;
}

} // namespace

CampaignReport run_campaign_json(const std::string& config_text) {
    ordered_json cfg;
    try {
        cfg = ordered_json::parse(config_text);
    } catch (const std::exception& e) {
        throw InvalidInputError(std::string("campaign config: bad JSON: ") + e.what());
    }
    if (!cfg.contains("campaign"))
        throw InvalidInputError("campaign config: missing \"campaign\" field");
    const std::string name = cfg["campaign"].get<std::string>();
    CampaignReport report;
    if (name == "second-moment") report = second_moment_campaign(cfg);
    else if (name == "l1-bound") report = l1_bound_campaign(cfg);
    else if (name == "surrogate") report = surrogate_campaign(cfg);
    else if (name == "region-crosscheck") report = region_crosscheck_campaign(cfg);
    else throw InvalidInputError("unknown campaign: " + name);
    report.config_json = cfg.dump();
    return report;
}

CampaignReport run_campaign_file(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw InvalidInputError("cannot open campaign config: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return run_campaign_json(ss.str());
}

} // namespace simplexmax
