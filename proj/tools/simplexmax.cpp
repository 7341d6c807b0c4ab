// Command-line surface: counting, operator evaluation, region export,
// verification campaigns and the divergence construction.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid usage/input,
// 3 node budget exceeded.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "simplexmax/campaigns.hpp"
#include "simplexmax/counterexample.hpp"
#include "simplexmax/discrete_ops.hpp"
#include "simplexmax/enumeration.hpp"
#include "simplexmax/parallel.hpp"
#include "simplexmax/regions.hpp"

using namespace simplexmax;
using nlohmann::ordered_json;

namespace {

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity") return INFINITY;
    const auto slash = s.find('/');
    if (slash != std::string::npos)
        return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    return std::stod(s);
}

std::vector<double> parse_exponent_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_exponent(tok));
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write: " + path);
    out << text;
}

struct CommonOpts {
    int threads = 0;
    std::uint64_t budget = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--threads", threads, "worker pool cap (default: logical cores)");
        cmd->add_option("--budget", budget,
                        "node budget override (default: SIMPLEXMAX_BUDGET or 2e9)");
    }
    void apply() const {
        if (threads > 0) set_thread_count(threads);
    }
    std::uint64_t budget_limit() const { return budget > 0 ? budget : default_node_budget(); }
};

GramMatrix load_gram(const std::string& gram_text, const std::string& simplex_path) {
    if (!gram_text.empty() && !simplex_path.empty())
        throw InvalidInputError("pass either --gram or --simplex, not both");
    if (!gram_text.empty()) return GramMatrix::parse(gram_text);
    if (!simplex_path.empty()) return LatticeSimplex::read_text(simplex_path).gram();
    throw InvalidInputError("need --gram or --simplex");
}

// ---------------------------------------------------------------------------

int cmd_count(const CommonOpts& common, int dim, Int lambda_sq, const std::string& gram_text,
              const std::string& simplex_path, const std::string& out_path) {
    common.apply();
    const GramMatrix t = load_gram(gram_text, simplex_path);
    NodeBudget budget(common.budget_limit());

    const auto t0 = std::chrono::steady_clock::now();
    const Wide n = count_simplex_copies(GramSystem::simplex_copies(dim, t, lambda_sq), &budget);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    ordered_json config;
    config["dim"] = dim;
    config["gram"] = t.to_string();
    config["lambda_sq"] = lambda_sq;
    config["budget"] = common.budget_limit();

    ordered_json result;
    result["count"] = wide_to_string(n);
    result["config"] = config;
    if (!out_path.empty()) {
        write_file(out_path, result.dump(2) + "\n");
        ordered_json timing;
        timing["elapsed_ms"] = ms;
        write_file(out_path + ".timing.json", timing.dump(2) + "\n");
    }
    result["elapsed_ms"] = ms;
    std::cout << result.dump(2) << "\n";
    return 0;
}

int cmd_maximal(const CommonOpts& common, const std::string& gram_text,
                const std::vector<std::string>& inputs, Int lambda_lo, Int lambda_hi,
                const std::string& out_path, const std::string& norms_text, Int box_radius) {
    common.apply();
    const GramMatrix t = GramMatrix::parse(gram_text);
    if (int(inputs.size()) != t.order())
        throw InvalidInputError("need exactly k = " + std::to_string(t.order()) +
                                " input functions");
    std::vector<GridFunction> fs;
    for (const auto& path : inputs) fs.push_back(GridFunction::read_text_file(path));
    const int dim = fs.front().dim();
    for (const auto& f : fs)
        if (f.dim() != dim) throw InvalidInputError("input functions have mixed dimensions");

    NodeBudget budget(common.budget_limit());
    const LambdaSet lambdas = admissible_lambdas(dim, t, lambda_lo, lambda_hi, &budget);
    if (lambdas.empty()) throw InvalidInputError("empty lambda set in [" +
                                                 std::to_string(lambda_lo) + ", " +
                                                 std::to_string(lambda_hi) + "]");

    const Box box = box_radius >= 0 ? Box::cube(dim, -box_radius, box_radius)
                                    : default_eval_box(fs, t, lambda_hi);
    SolutionCache cache;
    GridFunction a = maximal(fs, t, lambdas, box, cache, &budget);
    a.write_text_file(out_path);

    ordered_json config;
    config["gram"] = t.to_string();
    config["inputs"] = inputs;
    config["lambda_sq_range"] = {lambda_lo, lambda_hi};
    config["out"] = out_path;

    ordered_json summary;
    summary["lambda_set"] = lambdas.lambda_sqs;
    if (!norms_text.empty()) {
        ordered_json norms;
        for (double r : parse_exponent_list(norms_text))
            norms[std::isinf(r) ? "inf" : std::to_string(r)] = lp_norm(a, r);
        summary["norms"] = norms;
    }
    summary["config"] = config;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_region(const CommonOpts& common, const std::string& kind, int k, int m,
               int scale_dim, const std::string& scale_rule, const std::string& scale_text,
               const std::string& point_text, const std::string& export_format,
               const std::string& out_path) {
    common.apply();
    RegionSpec spec;
    spec.kind = RegionSpec::kind_parse(kind);
    spec.k = k;
    spec.m = m;
    if (!scale_text.empty()) {
        spec.scale = Rat::parse(scale_text);
    } else if (scale_dim > 0) {
        if (scale_rule == "discrete") spec.scale = Rat(scale_dim - 2, scale_dim);
        else if (scale_rule == "continuous") spec.scale = Rat(scale_dim - 1, scale_dim);
        else throw InvalidInputError("scale rule must be discrete or continuous");
    }

    if (!point_text.empty()) {
        std::vector<double> x;
        {
            std::stringstream ss(point_text);
            std::string tok;
            while (std::getline(ss, tok, ',')) x.push_back(std::stod(tok));
        }
        if (int(x.size()) != k)
            throw InvalidInputError("--point needs exactly k = " + std::to_string(k) +
                                    " coordinates");
        // Membership is evaluated against the (possibly scaled) region by
        // unscaling the point.
        std::vector<double> y = x;
        const double s = spec.scale.value();
        for (double& yi : y) yi /= s;
        Membership cls = Membership::Exterior;
        switch (spec.kind) {
            case RegionSpec::Kind::Ck: cls = in_Ck(y); break;
            case RegionSpec::Kind::Ckq: cls = in_Ckq(y, m); break;
            case RegionSpec::Kind::Tilde: cls = in_tilde(y, k, m); break;
            case RegionSpec::Kind::Cube: {
                cls = region_polytope(spec).classify(x);
                break;
            }
        }
        ordered_json j;
        j["kind"] = kind;
        j["k"] = k;
        j["m"] = m;
        j["scale"] = spec.scale.str();
        j["point"] = x;
        j["classification"] = membership_name(cls);
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::string payload;
    if (export_format == "csv") payload = export_region_csv(spec);
    else if (export_format == "json") payload = export_region_json(spec);
    else throw InvalidInputError("--export must be csv or json");
    if (out_path.empty()) std::cout << payload;
    else write_file(out_path, payload);
    return 0;
}

int cmd_verify(const CommonOpts& common, const std::string& config_path,
               const std::string& out_path, const std::string& text_out) {
    common.apply();
    CampaignReport report = run_campaign_file(config_path);
    if (!out_path.empty()) write_file(out_path, report.to_json());
    if (!text_out.empty()) write_file(text_out, report.to_text());
    std::cout << report.to_text();
    return report.any_failed() ? 1 : 0;
}

int cmd_counterexample(const CommonOpts& common, int dim, int k, const std::string& gram_text,
                       const std::string& p_text, double tau, Int radius, int j_max,
                       const std::string& out_path) {
    common.apply();
    GramMatrix t = gram_text.empty() ? GramMatrix::identity(k) : GramMatrix::parse(gram_text);
    std::vector<double> p = parse_exponent_list(p_text);
    if (int(p.size()) == 1)
        p.resize(static_cast<std::size_t>(k), INFINITY); // remaining functions constant 1
    CounterexampleFamily fam = CounterexampleFamily::make(dim, k, std::move(t), std::move(p),
                                                          tau, radius);
    NodeBudget budget(common.budget_limit());
    DivergenceReport report = divergence_report(fam, j_max, &budget);

    const std::string payload = divergence_report_json(fam, report);
    if (!out_path.empty()) {
        write_file(out_path, payload);
        write_file(out_path + ".timing.json", divergence_timing_json(report));
    }
    std::cout << payload;
    auto norms = fam.norms();
    ordered_json nj;
    nj["family_norms"] = norms;
    std::cerr << nj.dump() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simplexmax: lattice simplex counting, multilinear maximal operators, "
                 "exponent regions and verification campaigns"};
    app.require_subcommand(1);

    CommonOpts common;

    // count
    auto* count = app.add_subcommand("count", "count isometric lattice copies N");
    int c_dim = 0;
    Int c_lambda = 0;
    std::string c_gram, c_simplex, c_out;
    count->add_option("--dim", c_dim, "ambient dimension d")->required();
    count->add_option("--lambda-sq", c_lambda, "scaling lambda^2 (integer)")->required();
    count->add_option("--gram", c_gram, "inner product matrix, e.g. \"1 0; 0 1\"");
    count->add_option("--simplex", c_simplex, "simplex vertex file (header: d k)");
    count->add_option("--out", c_out, "write result JSON here (timing in sidecar)");
    common.add_to(count);

    // maximal
    auto* maximal_cmd = app.add_subcommand("maximal", "evaluate the discrete maximal operator");
    std::string m_gram, m_out, m_norms;
    std::vector<std::string> m_inputs;
    Int m_lo = 1, m_hi = 1, m_box = -1;
    maximal_cmd->add_option("--gram", m_gram, "inner product matrix")->required();
    maximal_cmd->add_option("--input", m_inputs, "grid function file (repeat k times)")->required();
    maximal_cmd->add_option("--lambda-sq-min", m_lo, "smallest lambda^2")->required();
    maximal_cmd->add_option("--lambda-sq-max", m_hi, "largest lambda^2")->required();
    maximal_cmd->add_option("--out", m_out, "output grid function file")->required();
    maximal_cmd->add_option("--norms", m_norms, "comma list of r for ||A_*||_r in the summary");
    maximal_cmd->add_option("--box-radius", m_box, "evaluation cube radius (default: support hull)");
    common.add_to(maximal_cmd);

    // region
    auto* region = app.add_subcommand("region", "exponent region membership and export");
    std::string r_kind, r_point, r_export = "json", r_out, r_scale, r_rule = "discrete";
    int r_k = 2, r_m = 2, r_scale_dim = 0;
    region->add_option("--kind", r_kind, "ck | ckq | tilde | cube")->required();
    region->add_option("--k", r_k, "number of coordinates")->required();
    region->add_option("--m", r_m, "q = m/(m-1)");
    region->add_option("--scale-dim", r_scale_dim, "scale by (d-2)/d or (d-1)/d");
    region->add_option("--scale-rule", r_rule, "discrete -> (d-2)/d, continuous -> (d-1)/d");
    region->add_option("--scale", r_scale, "explicit rational scale, e.g. 7/9");
    region->add_option("--point", r_point, "classify this point (comma list)");
    region->add_option("--export", r_export, "csv | json");
    region->add_option("--out", r_out, "output path (default stdout)");
    common.add_to(region);

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification campaign");
    std::string v_config, v_out, v_text;
    verify->add_option("--config", v_config, "campaign config JSON")->required();
    verify->add_option("--out", v_out, "write report JSON here");
    verify->add_option("--text-out", v_text, "write the text summary here");
    common.add_to(verify);

    // counterexample
    auto* cex = app.add_subcommand("counterexample", "dyadic divergence blocks");
    int x_dim = 7, x_k = 2, x_jmax = 2;
    std::string x_gram, x_p = "7/5", x_out;
    double x_tau = -1;
    Int x_radius = 16;
    cex->add_option("--dim", x_dim, "ambient dimension d")->required();
    cex->add_option("--k", x_k, "simplex order")->required();
    cex->add_option("--gram", x_gram, "inner product matrix (default identity)");
    cex->add_option("--p", x_p, "exponents p_1[,p_2,...]; lone p_1 pads with inf");
    cex->add_option("--tau", x_tau, "log exponent tweak (default 1/(2 k p_1))");
    cex->add_option("--radius", x_radius, "truncation radius R");
    cex->add_option("--j-max", x_jmax, "largest dyadic shell index");
    cex->add_option("--out", x_out, "write report JSON here (timing in sidecar)");
    common.add_to(cex);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (count->parsed()) return cmd_count(common, c_dim, c_lambda, c_gram, c_simplex, c_out);
        if (maximal_cmd->parsed())
            return cmd_maximal(common, m_gram, m_inputs, m_lo, m_hi, m_out, m_norms, m_box);
        if (region->parsed())
            return cmd_region(common, r_kind, r_k, r_m, r_scale_dim, r_rule, r_scale, r_point,
                              r_export, r_out);
        if (verify->parsed()) return cmd_verify(common, v_config, v_out, v_text);
        if (cex->parsed())
            return cmd_counterexample(common, x_dim, x_k, x_gram, x_p, x_tau, x_radius, x_jmax,
                                      x_out);
    } catch (const BudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EmptyAverageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
