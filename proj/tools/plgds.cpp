// plgds: generation, embedding, solving and bound tables for power-law graphs.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "plgds/bounds.hpp"
#include "plgds/embed.hpp"
#include "plgds/graph.hpp"
#include "plgds/setcover.hpp"
#include "plgds/solvers.hpp"

using namespace plgds;

namespace {

enum Exit { kOk = 0, kParse = 1, kInfeasibleEmbedding = 2, kInfeasibleScale = 3 };

std::uint64_t default_seed() {
    const char* s = std::getenv("PLGDS_SEED");
    if (!s || !*s) return 0;
    try {
        return std::stoull(s);
    } catch (...) {
        throw ParseError(std::string("PLGDS_SEED is not an unsigned integer: ") + s);
    }
}

std::optional<BetaFunction> parse_fspec(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    if (spec == "log2" || spec == "omega") return log_squared();
    if (spec == "log-over-loglog" || spec == "little-o") return log_over_loglog();
    throw ParseError("unknown f-spec '" + spec + "' (use log2 or log-over-loglog)");
}

std::string fmt(double v, int prec = 10) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::string fixed(double v, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << v;
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path);
    os << text;
}

GraphFile load_graph(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open " + path);
    return read_graph(is);
}

// ------------------------------------------------------------------ gen

struct GenArgs {
    double alpha = NAN, scale = NAN, beta = NAN;
    std::string f, out, degree_csv;
};

int cmd_gen(const GenArgs& a, std::uint64_t seed) {
    if (std::isnan(a.alpha) == std::isnan(a.scale)) throw ParseError("give exactly one of --alpha and --scale");
    double alpha = std::isnan(a.alpha) ? std::log(a.scale) : a.alpha;
    auto bf = parse_fspec(a.f);
    if (bf.has_value() == !std::isnan(a.beta)) throw ParseError("give exactly one of --beta and --f");
    PlgParams p = bf ? PlgParams::functional(alpha, *bf)
                     : (std::isnan(a.alpha) ? PlgParams::from_scale(a.scale, a.beta) : PlgParams::from_alpha(alpha, a.beta));
    EmbeddingResult r;
    try {
        r = generate_plg(p, seed);
    } catch (const ScaleError& e) {
        std::cerr << "infeasible params: scale: " << e.what() << '\n';
        return kInfeasibleEmbedding;
    }
    auto comments = r.comments();
    comments.insert(comments.begin(), "seed: " + std::to_string(seed));
    std::ostringstream gs;
    write_graph(gs, r.graph, &r.roles, comments);
    write_file(a.out, gs.str());
    std::string dpath = a.degree_csv;
    if (dpath.empty())
        dpath = a.out == "-" ? "degree.csv" : (std::filesystem::path(a.out).parent_path() / "degree.csv").string();
    std::ostringstream ds;
    auto h = r.graph.degree_histogram();
    write_degree_csv(ds, h);
    write_file(dpath, ds.str());
    return kOk;
}

// ------------------------------------------------------------------ bounds

struct BoundsArgs {
    double beta = NAN, n = 1e6, eps = 0.1, alpha = NAN;
    std::string f;
    bool table2 = false;
};

void print_upper_lines(double beta, std::ostream& os) {
    if (beta > 2) os << "shen=" << fmt(shen_ratio(beta)) << '\n';
    auto r = classify_regime(beta);
    if (r.kind == RegimeKind::CaseI) os << "case_i=" << fmt(case_i_ratio(beta)) << '\n';
    for (int k = 2; k <= 4; ++k) {
        if (beta >= beta_threshold(k))
            os << "lemma3_k" << k << '=' << fmt(lemma3_bound(beta, k)) << '\n';
        else
            os << "lemma3_k" << k << "=NA\n";
    }
}

// Lemma 2 certificate on the generated functional instance: every dominating
// set has at least `bound` vertices.
void print_functional(const BetaFunction& bf, const BoundsArgs& a, std::ostream& os) {
    auto regime = classify_regime(bf, static_cast<std::uint64_t>(a.n));
    os << "f=" << bf.name << '\n';
    os << "growth=" << (bf.growth == Growth::OmegaLogN ? "omega(log n)" : "o(log n)") << '\n';
    os << "regime=" << regime_name(regime.kind) << '\n';
    os << "beta_f(n)=" << fmt(regime.beta) << '\n';
    if (regime.kind == RegimeKind::FunctionalApx) {
        double alpha = std::isnan(a.alpha) ? std::log(a.n / zeta(2.0)) : a.alpha;
        auto p = PlgParams::functional(alpha, bf);
        auto n = functional_size(p);
        auto fixed_p = p.at_size(n);
        auto l2 = lemma2_lower_bound(fixed_p, Lemma2Variant::A);
        double c = l2.found ? static_cast<double>(l2.bound) / static_cast<double>(n) : 0.0;
        os << "class=APX\n";
        os << "certificate_alpha=" << fmt(alpha) << '\n';
        os << "certificate_n=" << n << '\n';
        os << "certificate_lower_bound=" << (l2.found ? l2.bound : 0) << '\n';
        os << "certificate_c=" << fmt(c) << '\n';
        os << "APX; lower-bound certificate c*n computed, c=" << fmt(c) << '\n';
    } else {
        auto rep = bound_report(regime, a.n, a.eps);
        os << "class=hard\n";
        os << "hardness_factor=" << fmt(*rep.hardness_factor) << '\n';
        os << "d_scale=" << rep.d_scale << '\n';
    }
}

void print_table2(const BoundsArgs& a, std::ostream& os) {
    os << "regime,beta,kind,value\n";
    for (double beta : {0.5, 1.0, 1.5, 2.0}) {
        auto rep = bound_report(classify_regime(beta), a.n, a.eps);
        os << regime_name(rep.regime.kind) << ',' << fmt(beta) << ",hardness," << fmt(*rep.hardness_factor) << '\n';
    }
    {
        auto rep = bound_report(classify_regime(2.5), a.n, a.eps);
        os << regime_name(rep.regime.kind) << ",2.5," << rep.upper_kind << ',' << fmt(*rep.upper_ratio) << '\n';
    }
    for (double beta : {3.0, 4.0}) {
        os << "CaseI," << fmt(beta) << ",case_i," << fmt(case_i_ratio(beta)) << '\n';
        os << "CaseI," << fmt(beta) << ",shen," << fmt(shen_ratio(beta)) << '\n';
    }
    for (int k = 2; k <= 4; ++k) {
        double thr = beta_threshold(k);
        os << "Lemma3,beta_" << k << ",threshold," << fmt(thr) << '\n';
    }
    auto hard = classify_regime(log_squared(), static_cast<std::uint64_t>(a.n));
    auto rep = bound_report(hard, a.n, a.eps);
    os << "FunctionalHard," << fmt(hard.beta) << ",hardness," << fmt(*rep.hardness_factor) << '\n';
    auto apx = classify_regime(log_over_loglog(), static_cast<std::uint64_t>(a.n));
    os << "FunctionalApx," << fmt(apx.beta) << ",class,APX\n";
}

int cmd_bounds(const BoundsArgs& a) {
    if (!(a.n > 1)) throw ParseError("--n must exceed 1");
    std::ostringstream os;
    auto bf = parse_fspec(a.f);
    if (bf) {
        print_functional(*bf, a, os);
    } else if (!std::isnan(a.beta)) {
        if (!(a.beta > 0)) throw ParseError("--beta must be positive");
        auto rep = bound_report(classify_regime(a.beta), a.n, a.eps);
        os << rep.to_text();
        if (a.beta > 2) print_upper_lines(a.beta, os);
    } else if (!a.table2) {
        throw ParseError("give --beta, --f or --table2");
    }
    if (a.table2) print_table2(a, os);
    std::cout << os.str();
    return kOk;
}

// ------------------------------------------------------------------ embed

struct EmbedArgs {
    std::string core, set_cover, out = "-", f;
    double beta = NAN, eps = 0.1, theta = 0.5;
    std::optional<double> a_exp, b_exp;
    bool relax = false;
};

int cmd_embed(const EmbedArgs& a, std::uint64_t seed) {
    MultiGraph core;
    if (!a.core.empty() == !a.set_cover.empty()) throw ParseError("give exactly one of --core and --set-cover");
    if (!a.core.empty()) {
        core = load_graph(a.core).graph;
    } else {
        std::ifstream is(a.set_cover, std::ios::binary);
        if (!is) throw ParseError("cannot open " + a.set_cover);
        core = gus_graph(read_set_cover(is)).graph;
    }
    auto bf = parse_fspec(a.f);
    if (bf.has_value() == !std::isnan(a.beta)) throw ParseError("give exactly one of --beta and --f");
    if (!bf && !(a.beta > 0)) throw ParseError("--beta must be positive");
    BetaRegime regime = bf ? classify_regime(*bf, core.n()) : classify_regime(a.beta);
    if (!regime.has_lower_bound()) {
        std::cerr << "regime " << regime_name(regime.kind) << " has no embedding\n";
        return kParse;
    }
    EmbedOptions opt;
    opt.relax = a.relax;
    opt.eps = a.eps;
    opt.theta = a.theta;
    opt.seed = substream(seed, "embed");
    opt.beta_fn = bf;
    if (a.a_exp || a.b_exp) {
        opt.a_exp = a.a_exp;
        opt.b_exp = a.b_exp;
    } else if (!a.relax) {
        // the window exponents of the hardness reduction
        opt.a_exp = a.eps / (a.eps + 2);
        opt.b_exp = lemma1_b(a.eps);
    }
    EmbeddingResult r;
    try {
        r = embed_instance(core, regime, opt);
    } catch (const InfeasibleScale& e) {
        std::cout << "infeasible scale: " << e.what() << '\n';
        if (e.min_n > 0) std::cout << "minimum feasible N0=" << fmt(e.min_n, 17) << '\n';
        else std::cout << "minimum feasible N0=NA\n";
        return kInfeasibleScale;
    } catch (const InfeasibleEmbedding& e) {
        std::cout << e.what() << '\n';
        return kInfeasibleEmbedding;
    } catch (const ScaleError& e) {
        std::cout << "infeasible embedding: scale: " << e.what() << '\n';
        return kInfeasibleEmbedding;
    }
    auto rep = verify_embedding(r);
    auto comments = r.comments();
    comments.insert(comments.begin(), "seed: " + std::to_string(seed));
    for (auto& l : rep.lines()) comments.push_back(l);
    std::ostringstream gs;
    write_graph(gs, r.graph, &r.roles, comments);
    if (a.out != "-") {
        write_file(a.out, gs.str());
        for (auto& c : comments) std::cout << c << '\n';
    } else {
        std::cout << gs.str();
    }
    if (!rep.all_pass()) {
        std::cerr << "verification failed\n";
        return kInfeasibleEmbedding;
    }
    return kOk;
}

// ------------------------------------------------------------------ solve

struct SolveArgs {
    std::string in, algo = "greedy";
    std::optional<std::uint64_t> budget;
    std::optional<double> beta;
};

std::optional<double> beta_from_comments(const std::vector<std::string>& comments) {
    for (auto& c : comments) {
        if (c.rfind("params:", 0) != 0) continue;
        auto pos = c.find(" beta=");
        if (pos == std::string::npos) continue;
        try {
            double b = std::stod(c.substr(pos + 6));
            if (std::isfinite(b)) return b;
        } catch (...) {
        }
    }
    return std::nullopt;
}

int cmd_solve(const SolveArgs& a) {
    auto f = load_graph(a.in);
    const auto& g = f.graph;
    auto beta = a.beta ? a.beta : beta_from_comments(f.comments);
    SolveReport r;
    if (a.algo == "exact") {
        ExactOptions eo;
        eo.node_budget = a.budget.value_or(20'000'000);
        try {
            r = exact_min_ds(g, eo);
        } catch (const BudgetExceeded& e) {
            r.algorithm = Algorithm::Exact;
            r.solution = e.incumbent;
            r.budget_exhausted = true;
            auto [cert, kind] = certified_lower_bound(g);
            if (cert > e.lower_bound) {
                r.lower_bound = cert;
                r.lb_kind = kind;
            } else {
                r.lower_bound = e.lower_bound;
                r.lb_kind = LowerBoundKind::Trivial;
            }
            std::cerr << "budget exhausted: reporting incumbent and certified lower bound\n";
        }
    } else if (a.algo == "greedy") {
        r = greedy_min_ds(g);
    } else if (a.algo == "structured") {
        r = structured_min_ds(g);
    } else {
        throw ParseError("unknown --algo '" + a.algo + "'");
    }
    std::cout << kSolveCsvHeader << '\n' << csv_row(r, g, beta) << '\n';
    return kOk;
}

// ------------------------------------------------------------------ curves

struct CurveArgs {
    double from = 2.75, to = 6.0, step = 0.01;
};

int cmd_ratio_curve(const CurveArgs& a) {
    if (!(a.step > 0) || !(a.to >= a.from)) throw ParseError("need step > 0 and beta-to >= beta-from");
    int decimals = std::max(0, static_cast<int>(std::ceil(-std::log10(a.step) - 1e-9)));
    auto steps = static_cast<long>(std::floor((a.to - a.from) / a.step + 1e-9));
    std::ostringstream os;
    os << "beta,ours,shen\n";
    for (long i = 0; i <= steps; ++i) {
        double beta = std::round((a.from + static_cast<double>(i) * a.step) * std::pow(10.0, decimals)) /
                      std::pow(10.0, decimals);
        os << fixed(beta, decimals) << ',';
        if (classify_regime(beta).kind == RegimeKind::CaseI) os << fixed(case_i_ratio(beta), 9);
        else os << "NA";
        os << ',';
        if (beta > 2) os << fixed(shen_ratio(beta), 9);
        else os << "NA";
        os << '\n';
    }
    std::cout << os.str();
    return kOk;
}

int cmd_thresholds() {
    std::ostringstream os;
    for (int k = 2; k <= 4; ++k) os << "beta_" << k << '=' << fixed(beta_threshold(k), 4) << '\n';
    os << "crossover=" << fixed(case_i_crossover(1e-9), 4) << '\n';
    std::cout << os.str();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"power-law graph dominating set toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    try {
        seed = default_seed();
    } catch (const ParseError& e) {
        std::cerr << e.what() << '\n';
        return kParse;
    }
    app.add_option("--seed", seed, "random seed (default: PLGDS_SEED or 0)");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a PLG realizing the model degree sequence");
    gen->add_option("--alpha", ga.alpha, "log of the scale e^alpha");
    gen->add_option("--scale", ga.scale, "scale e^alpha");
    gen->add_option("--beta", ga.beta, "power-law exponent")->check(CLI::PositiveNumber);
    gen->add_option("--f", ga.f, "beta function: log2 | log-over-loglog");
    gen->add_option("--out", ga.out, "graph file ('-' for stdout)")->required();
    gen->add_option("--degree-csv", ga.degree_csv, "histogram output (default: degree.csv beside --out)");

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "hardness factors and approximation ratios");
    bounds->add_option("--beta", ba.beta, "power-law exponent");
    bounds->add_option("--f", ba.f, "beta function: log2 | log-over-loglog");
    bounds->add_option("--n", ba.n, "graph size");
    bounds->add_option("--eps", ba.eps, "epsilon of the set-cover hardness");
    bounds->add_option("--alpha", ba.alpha, "alpha of the certificate instance (functional o(log n))");
    bounds->add_flag("--table2", ba.table2, "print the regime table");

    EmbedArgs ea;
    auto* embed = app.add_subcommand("embed", "embed a core graph into a PLG");
    embed->add_option("--core", ea.core, "core graph file");
    embed->add_option("--set-cover", ea.set_cover, "set-cover file (core = its domination graph)");
    embed->add_option("--beta", ea.beta, "power-law exponent");
    embed->add_option("--f", ea.f, "beta function: log2 | log-over-loglog");
    embed->add_option("--eps", ea.eps, "epsilon");
    embed->add_option("--theta", ea.theta, "constant of the X size certificate");
    embed->add_option("--a", ea.a_exp, "lower window exponent");
    embed->add_option("--b", ea.b_exp, "upper window exponent");
    embed->add_flag("--relax-window", ea.relax, "embed unscaled cores outside the degree window");
    embed->add_option("--out", ea.out, "graph file ('-' for stdout)");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "minimum dominating set");
    solve->add_option("--in", sa.in, "graph file")->required();
    solve->add_option("--algo", sa.algo, "exact | greedy | structured");
    solve->add_option("--budget", sa.budget, "search-node budget of the exact solver");
    solve->add_option("--beta", sa.beta, "beta reported in the CSV row (default: from the file)");

    CurveArgs ca;
    auto* curve = app.add_subcommand("ratio-curve", "case I and Shen ratios over a beta range");
    curve->add_option("--beta-from", ca.from);
    curve->add_option("--beta-to", ca.to);
    curve->add_option("--step", ca.step);

    auto* thr = app.add_subcommand("thresholds", "beta_k thresholds and the case I crossover");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kParse;
    }

    try {
        if (*gen) return cmd_gen(ga, seed);
        if (*bounds) return cmd_bounds(ba);
        if (*embed) return cmd_embed(ea, seed);
        if (*solve) return cmd_solve(sa);
        if (*curve) return cmd_ratio_curve(ca);
        if (*thr) return cmd_thresholds();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const InfeasibleScale& e) {
        std::cerr << e.what() << '\n';
        return kInfeasibleScale;
    } catch (const InfeasibleEmbedding& e) {
        std::cerr << e.what() << '\n';
        return kInfeasibleEmbedding;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    }
    return kParse;
}
