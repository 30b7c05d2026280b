// Command-line front end. Every command writes one JSON report.
// Exit status: 0 pass, 2 negative verdict, 1 usage or compute error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hypclt/hypclt.hpp"

#ifndef HYPCLT_VERSION
#define HYPCLT_VERSION "dev"
#endif

namespace {

using namespace hypclt;
using io::json;

struct Config {
    std::string command;
    std::string fixture, group_file, combing_file, function_file;
    std::string genset = "standard", genset2 = "S2", fn_genset;
    std::string fn = "word-length", sigma_pattern = "ab";
    int radius = -1, verify_radius = -1, depth = 3, slack = 0;
    int n = 400, m = 1000;
    std::size_t count = 10000;
    std::optional<std::uint64_t> seed;
    std::string out, histogram, bundle_out, word, a = "a";
    bool exact = false;
    unsigned threads = 0;
    double tie_tolerance = 1e-9, agreement_tolerance = 1e-8, ks_threshold = 0.02, rel_tolerance = 0.1;
};

struct UsageError : Error {
    using Error::Error;
};

json config_json(const Config& c) {
    json j = {{"command", c.command}};
    auto put = [&](const char* key, const std::string& v) {
        if (!v.empty()) j[key] = v;
    };
    put("fixture", c.fixture);
    put("group_file", c.group_file);
    put("combing_file", c.combing_file);
    put("function_file", c.function_file);
    j["genset"] = c.genset;
    j["genset2"] = c.genset2;
    put("fn_genset", c.fn_genset);
    j["fn"] = c.fn;
    j["sigma_pattern"] = c.sigma_pattern;
    j["radius"] = c.radius;
    j["verify_radius"] = c.verify_radius;
    j["depth"] = c.depth;
    j["slack"] = c.slack;
    j["n"] = c.n;
    j["m"] = c.m;
    j["count"] = c.count;
    if (c.seed) j["seed"] = *c.seed;
    put("word", c.word);
    j["a"] = c.a;
    j["exact"] = c.exact;
    return j;
}

json tolerances_json(const Config& c) {
    return {{"tie", c.tie_tolerance},
            {"agreement", c.agreement_tolerance},
            {"ks_threshold", c.ks_threshold},
            {"relative", c.rel_tolerance},
            {"variance_clamp", 1e-10}};
}

struct Outcome {
    bool pass = true;
    std::string verdict = "pass";
    json result;
};

Combing build_combing(std::shared_ptr<GroupOracle> oracle, const std::string& genset, int verify_radius) {
    if (dynamic_cast<const FreeGroup*>(&oracle->kind()) && oracle->genset(genset).name == "standard") {
        auto c = reduced_word_combing(oracle, genset);
        if (verify_radius > 0) c.verified_radius = std::min(c.verified_radius, verify_radius);
        return c;
    }
    LexFirstOptions opt;
    if (verify_radius > 0) opt.verify_radius = verify_radius;
    return lex_first_combing(oracle, genset, opt);
}

struct Context {
    const Config& cfg;
    std::optional<Fixture> fixture;
    std::optional<Combing> combing;
    std::optional<CombableFunction> loaded_function;

    explicit Context(const Config& c) : cfg(c) {
        const int sources = !c.fixture.empty() + !c.group_file.empty() + !c.combing_file.empty() + !c.function_file.empty();
        if (sources == 0) throw UsageError("one of --fixture, --group-file, --combing-file, --function-file is required");
        if (sources > 1) throw UsageError("give only one of --fixture, --group-file, --combing-file, --function-file");
        if (!c.fixture.empty()) {
            fixture = hypclt::fixture(c.fixture);
            combing = fixture->combing;
        } else if (!c.group_file.empty()) {
            auto oracle = io::group_from_json(io::read_file(c.group_file));
            combing = build_combing(oracle, c.genset, c.verify_radius);
        } else if (!c.combing_file.empty()) {
            combing = io::combing_from_json(io::read_file(c.combing_file));
        } else {
            loaded_function = io::function_from_json(io::read_file(c.function_file));
            combing = loaded_function->combing;
        }
        if (c.verify_radius > 0 && c.verify_radius < combing->verified_radius && c.group_file.empty())
            combing->verified_radius = c.verify_radius;
    }

    GroupOracle& oracle() const { return *combing->oracle; }

    GroupFunction group_function() const {
        auto o = combing->oracle;
        const std::string& fn = cfg.fn;
        if (fn == "word-length") {
            const std::string g = cfg.fn_genset.empty() ? combing->genset : cfg.fn_genset;
            return [o, g](const Element& e) -> std::int64_t { return o->word_length(e, g); };
        }
        if (fn == "counting") return counting_qm(o, Pattern::parse(*o, cfg.sigma_pattern), cfg.slack);
        if (fn == "big-counting") return big_counting_qm(o, Pattern::parse(*o, cfg.sigma_pattern));
        if (fn == "genset-qm") return genset_qm(o, cfg.fn_genset.empty() ? combing->genset : cfg.fn_genset);
        if (fn == "fixture") {
            if (!fixture || !fixture->phi) throw UsageError("--fn fixture needs a fixture that carries a function");
            return fixture->phi;
        }
        throw UsageError("unknown --fn '" + fn + "'");
    }

    int synthesis_radius() const {
        const int r = cfg.radius > 0 ? cfg.radius : std::min(combing->verified_radius, 8);
        return r;
    }

    /// A combable function: loaded, trivial word length, or synthesized.
    std::pair<CombableFunction, json> function() const {
        if (loaded_function) return {*loaded_function, json{{"source", "file"}}};
        if (cfg.fn == "word-length" && (cfg.fn_genset.empty() || cfg.fn_genset == combing->genset))
            return {word_length_function(*combing), json{{"source", "word-length"}}};
        auto outcome = synthesize_dphi(*combing, group_function(), cfg.depth, synthesis_radius());
        json j = io::to_json(outcome);
        if (!outcome) throw Error("synthesis failed: " + outcome.failure->reason);
        return {*outcome.function, j};
    }

    SpectralOptions spectral_options() const {
        SpectralOptions o;
        o.tie_tolerance = cfg.tie_tolerance;
        return o;
    }
};

std::uint64_t require_seed(const Config& c) {
    if (!c.seed) throw UsageError("--seed is required for sampling commands");
    return *c.seed;
}

Outcome verdict_of(bool pass, const std::string& negative) {
    Outcome o;
    o.pass = pass;
    o.verdict = pass ? "pass" : negative;
    return o;
}

// ------------------------------------------------------------------ commands

Outcome cmd_combing_build(const Context& ctx) {
    const int R = ctx.cfg.radius > 0 ? ctx.cfg.radius : ctx.combing->verified_radius;
    const auto v = validate_combing(*ctx.combing, R);
    auto o = verdict_of(v.passed, "invalid-combing");
    o.result = {{"combing", io::to_json(*ctx.combing)}, {"validation", io::to_json(v)}};
    if (!ctx.cfg.bundle_out.empty()) io::write_file(ctx.cfg.bundle_out, io::to_json(*ctx.combing));
    return o;
}

Outcome cmd_combing_validate(const Context& ctx) {
    const int R = ctx.cfg.radius > 0 ? ctx.cfg.radius : ctx.combing->verified_radius;
    const auto v = validate_combing(*ctx.combing, R);
    auto o = verdict_of(v.passed, "invalid-combing");
    o.result = io::to_json(v);
    return o;
}

template <class T>
json spectral_result(const Context& ctx, const LabeledDigraph& g, SemisimplicityVerdict& verdict) {
    const auto s = analyze<T>(g, ctx.spectral_options());
    verdict = s.verdict;
    return io::to_json(s);
}

Outcome cmd_spectral_analyze(const Context& ctx) {
    const auto& g = ctx.loaded_function ? ctx.loaded_function->combing.digraph : ctx.combing->digraph;
    SemisimplicityVerdict verdict;
    json spectral = ctx.cfg.exact ? spectral_result<Rational>(ctx, g, verdict) : spectral_result<double>(ctx, g, verdict);
    const auto growth = g.check_almost_semisimple(std::max(ctx.cfg.radius, 40), ctx.cfg.tie_tolerance);
    auto o = verdict_of(verdict == SemisimplicityVerdict::pass && growth.passed(), to_string(verdict == SemisimplicityVerdict::pass ? growth.verdict : verdict));
    o.result = {{"spectral", spectral}, {"growth", io::to_json(growth)}, {"criteria_agree", growth.criteria_agree()}};
    return o;
}

Outcome cmd_fn_synthesize(const Context& ctx) {
    auto outcome = synthesize_dphi(*ctx.combing, ctx.group_function(), ctx.cfg.depth, ctx.synthesis_radius());
    auto o = verdict_of(bool(outcome), "synthesis-failed");
    o.result = io::to_json(outcome);
    if (outcome && !ctx.cfg.bundle_out.empty()) io::write_file(ctx.cfg.bundle_out, io::to_json(*outcome.function));
    return o;
}

Outcome cmd_fn_check(const Context& ctx) {
    const auto [f, source] = ctx.function();
    const int R = std::min(ctx.synthesis_radius(), f.verify_radius);
    const auto lip = check_lipschitz(ctx.group_function(), ctx.oracle(), ctx.combing->genset, std::min(R, ctx.oracle().max_radius() - 1));
    const auto subdivision = check_subdivision(f, R);
    auto o = verdict_of(!lip.left_growing && !lip.right_growing, "not-bicombable");
    o.result = {{"function", source}, {"lipschitz", io::to_json(lip)}, {"subdivision_defect", subdivision}};
    return o;
}

Outcome cmd_qm_count(const Context& ctx) {
    if (ctx.cfg.word.empty()) throw UsageError("qm count needs --word");
    const auto& oracle = ctx.oracle();
    const auto p = Pattern::parse(oracle, ctx.cfg.sigma_pattern);
    const Element g = oracle.parse_base(ctx.cfg.word);
    const auto c = counting_function(oracle, p.sigma, g, ctx.cfg.slack);
    const auto ci = counting_function(oracle, p.inverse, g, ctx.cfg.slack);
    Outcome o;
    o.result = {{"word", ctx.cfg.word},
                {"reduced", oracle.format(g)},
                {"pattern", p.text},
                {"c_sigma", c},
                {"c_sigma_inverse", ci},
                {"phi_sigma", c - ci},
                {"big_phi_sigma", big_counting_qm(ctx.combing->oracle, p)(g)}};
    return o;
}

Outcome cmd_qm_defect(const Context& ctx) {
    const int R = ctx.cfg.radius > 0 ? ctx.cfg.radius : 5;
    const auto r = defect_estimate(ctx.group_function(), ctx.oracle(), ctx.combing->genset, R);
    Outcome o;
    o.result = io::to_json(r);
    return o;
}

Outcome cmd_qm_holder(const Context& ctx) {
    const int R = ctx.cfg.radius > 0 ? ctx.cfg.radius : 8;
    const Element a = ctx.oracle().parse_base(ctx.cfg.a);
    const auto r = holder_diagnostic(ctx.group_function(), ctx.oracle(), a, ctx.cfg.count, R, ctx.cfg.seed.value_or(1));
    auto o = verdict_of(r.passed(), "holder-violation");
    o.result = io::to_json(r);
    return o;
}

template <class T>
Outcome drift_with(const Context& ctx, const CombableFunction& f, json source) {
    const auto s = analyze<T>(f.combing.digraph, ctx.spectral_options());
    if (!s.ok()) {
        auto o = verdict_of(false, to_string(s.verdict));
        o.result = {{"function", source}, {"spectral", io::to_json(s)}};
        return o;
    }
    const auto r = drift_variance(s, f.dphi, ctx.cfg.agreement_tolerance);
    auto o = verdict_of(r.components_agree, "components-disagree");
    o.result = {{"function", source}, {"lambda", s.lambda_value}, {"clt", io::to_json(r)}};
    if (ctx.cfg.n > 0) o.result["moments"] = io::to_json(moment_oracle(s, f.dphi, ctx.cfg.n));
    return o;
}

Outcome cmd_clt_drift(const Context& ctx) {
    auto [f, source] = ctx.function();
    // exact arithmetic whenever the Perron root is an integer and the matrix is small
    const double lambda = perron(f.combing.digraph);
    const bool integral = std::abs(lambda - std::round(lambda)) <= 1e-9 * std::max(1.0, lambda);
    const bool exact = ctx.cfg.exact || (integral && f.combing.digraph.vertex_count() <= 64);
    auto o = exact ? drift_with<Rational>(ctx, f, source) : drift_with<double>(ctx, f, source);
    o.result["arithmetic"] = exact ? "exact" : "float";
    return o;
}

struct Prepared {
    CombableFunction f;
    json source;
    SpectralData<double> s;
    CltReport<double> clt;
};

std::optional<Prepared> prepare(const Context& ctx, Outcome& failure) {
    auto [f, source] = ctx.function();
    auto s = analyze<double>(f.combing.digraph, ctx.spectral_options());
    if (!s.ok()) {
        failure = verdict_of(false, to_string(s.verdict));
        failure.result = {{"function", source}, {"spectral", io::to_json(s)}};
        return std::nullopt;
    }
    auto clt = drift_variance(s, f.dphi, ctx.cfg.agreement_tolerance);
    return Prepared{std::move(f), std::move(source), std::move(s), std::move(clt)};
}

SampleOptions sample_options(const Config& c) {
    SampleOptions o;
    o.threads = c.threads;
    return o;
}

Outcome cmd_clt_sample(const Context& ctx) {
    const auto seed = require_seed(ctx.cfg);
    Outcome o;
    auto p = prepare(ctx, o);
    if (!p) return o;
    auto opts = sample_options(ctx.cfg);
    opts.keep_words = ctx.cfg.count <= 100;
    const auto batch = sample(p->s, ctx.cfg.n, ctx.cfg.count, seed, &p->f.dphi, opts);
    double mean = 0, var = 0;
    for (auto x : batch.phi_values) mean += double(x);
    if (batch.count) mean /= double(batch.count);
    for (auto x : batch.phi_values) var += (double(x) - mean) * (double(x) - mean);
    if (batch.count) var /= double(batch.count);
    o.result = {{"function", p->source}, {"n", batch.n}, {"count", batch.count}, {"seed", batch.seed},
                {"phi_mean", mean},      {"phi_variance", var}};
    if (opts.keep_words) {
        json words = json::array();
        for (std::size_t i = 0; i < batch.count; ++i)
            words.push_back({{"word", format_word(batch.words[i], p->f.combing.digraph.alphabet())},
                             {"phi", batch.phi_values[i]}});
        o.result["samples"] = words;
    }
    return o;
}

Outcome cmd_clt_empirical(const Context& ctx) {
    const auto seed = require_seed(ctx.cfg);
    Outcome o;
    auto p = prepare(ctx, o);
    if (!p) return o;
    const auto r = empirical_clt(p->s, p->f.dphi, p->clt, ctx.cfg.n, ctx.cfg.count, seed, sample_options(ctx.cfg));
    const bool pass = r.degenerate ? r.degenerate_max_abs == 0 : r.ks_corrected < ctx.cfg.ks_threshold;
    o = verdict_of(pass, "ks-above-threshold");
    o.result = {{"function", p->source}, {"clt", io::to_json(p->clt)}, {"empirical", io::to_json(r)}};
    if (!ctx.cfg.histogram.empty()) {
        std::ofstream csv(ctx.cfg.histogram);
        if (!csv) throw Error("cannot write '" + ctx.cfg.histogram + "'");
        csv << io::histogram_csv(r);
    }
    return o;
}

Outcome cmd_clt_typicality(const Context& ctx) {
    const auto seed = require_seed(ctx.cfg);
    Outcome o;
    auto p = prepare(ctx, o);
    if (!p) return o;
    auto opts = sample_options(ctx.cfg);
    opts.keep_words = true;
    const auto ray = sample(p->s, ctx.cfg.n + ctx.cfg.m, 1, seed, nullptr, opts);
    const auto t = typicality_profile(p->f.combing.digraph, p->f.dphi, ray.words[0], ctx.cfg.n, std::size_t(ctx.cfg.m), p->clt.E);
    bool pass;
    if (p->clt.sigma2 <= 0) {
        pass = std::all_of(t.values.begin(), t.values.end(), [](double x) { return x == 0; });
    } else {
        pass = std::abs(t.variance - p->clt.sigma2) <= ctx.cfg.rel_tolerance * p->clt.sigma2;
    }
    o = verdict_of(pass, "atypical");
    o.result = {{"function", p->source}, {"sigma2", p->clt.sigma2}, {"profile", io::to_json(t)}};
    return o;
}

Outcome cmd_compare_gensets(const Context& ctx) {
    CompareOptions opt;
    if (ctx.cfg.radius > 0) opt.radius = ctx.cfg.radius;
    opt.depth = ctx.cfg.depth;
    const auto r = compare_gensets(*ctx.combing, ctx.cfg.genset2, opt);
    auto o = verdict_of(r.inequality_strict && r.deviation_check_passed, "comparison-failed");
    o.result = io::to_json(r);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    if (const char* env = std::getenv("HYPCLT_TOLERANCE")) {
        try {
            cfg.tie_tolerance = std::stod(env);
        } catch (const std::exception&) {
            std::cerr << "HYPCLT_TOLERANCE is not a number: " << env << '\n';
            return 1;
        }
    }

    CLI::App app{"Combings, combable functions and central limit statistics on hyperbolic groups"};
    app.set_version_flag("--version", std::string(HYPCLT_VERSION));
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--fixture", cfg.fixture, "named fixture")
        ->check(CLI::IsMember(fixture_names()));
    app.add_option("--group-file", cfg.group_file, "group description document")->check(CLI::ExistingFile);
    app.add_option("--combing-file", cfg.combing_file, "combing bundle document")->check(CLI::ExistingFile);
    app.add_option("--function-file", cfg.function_file, "function bundle document")->check(CLI::ExistingFile);
    app.add_option("--genset", cfg.genset, "generating set of the combing");
    app.add_option("--genset2", cfg.genset2, "second generating set for comparisons");
    app.add_option("--fn", cfg.fn, "word-length | counting | big-counting | genset-qm | fixture");
    app.add_option("--fn-genset", cfg.fn_genset, "generating set used by --fn");
    app.add_option("--sigma-pattern", cfg.sigma_pattern, "pattern for counting functions");
    app.add_option("--slack", cfg.slack, "extra path length for realizing counts")->check(CLI::NonNegativeNumber);
    app.add_option("--radius", cfg.radius, "ball or synthesis radius");
    app.add_option("--verify-radius", cfg.verify_radius, "verification radius for built combings");
    app.add_option("--depth", cfg.depth, "refinement depth")->check(CLI::PositiveNumber);
    app.add_option("--n", cfg.n, "word length")->check(CLI::NonNegativeNumber);
    app.add_option("--m", cfg.m, "typicality window count")->check(CLI::NonNegativeNumber);
    app.add_option("--count", cfg.count, "number of samples");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--threads", cfg.threads, "sampling threads (0 = all cores)");
    app.add_option("--word", cfg.word, "word in base letters");
    app.add_option("--a", cfg.a, "left translate for the Hoelder diagnostic");
    app.add_flag("--exact", cfg.exact, "exact rational arithmetic");
    app.add_option("--tie-tolerance", cfg.tie_tolerance, "relative tolerance for Perron root ties");
    app.add_option("--agreement-tolerance", cfg.agreement_tolerance, "per-component agreement tolerance");
    app.add_option("--ks-threshold", cfg.ks_threshold, "KS distance accepted by clt empirical");
    app.add_option("--rel-tolerance", cfg.rel_tolerance, "relative variance tolerance for clt typicality");
    app.add_option("--out", cfg.out, "report path (default stdout)");
    app.add_option("--bundle-out", cfg.bundle_out, "combing or function bundle path");
    app.add_option("--histogram", cfg.histogram, "histogram CSV path");

    const auto leaf_help = [](const std::string& full) -> std::string {
        static const std::map<std::string, std::string> text{
            {"combing build", "lex-first geodesic combing from a group"},
            {"combing validate", "check injectivity, geodesity and surjectivity on a ball"},
            {"spectral analyze", "lambda, rho(1), ell(v1), mu and N"},
            {"fn synthesize", "search for a vertex weighting dphi"},
            {"fn check", "Lipschitz and subdivision checks for a function"},
            {"qm count", "counting function on one word"},
            {"qm defect", "defect lower bound on a ball"},
            {"qm holder", "Hoelder diagnostic for a quasimorphism"},
            {"clt drift", "drift E and variance sigma^2"},
            {"clt sample", "sample combing words of length n"},
            {"clt empirical", "standardized sample statistics against the normal law"},
            {"clt typicality", "window profile along one sampled ray"},
            {"compare gensets", "lambda12 and the deviation check for two generating sets"},
        };
        const auto it = text.find(full);
        return it == text.end() ? std::string() : it->second;
    };
    using Handler = Outcome (*)(const Context&);
    std::map<std::string, Handler> handlers;
    std::string selected;
    auto group = [&](const std::string& name, const std::string& help,
                     std::vector<std::pair<std::string, Handler>> leaves) {
        auto* sub = app.add_subcommand(name, help);
        sub->require_subcommand(1);
        for (auto& [leaf, handler] : leaves) {
            const std::string full = name + " " + leaf;
            handlers[full] = handler;
            sub->add_subcommand(leaf, leaf_help(full))->callback([&selected, full] { selected = full; });
        }
    };
    group("combing", "build or validate a combing", {{"build", cmd_combing_build}, {"validate", cmd_combing_validate}});
    group("spectral", "Perron-Frobenius data of a digraph", {{"analyze", cmd_spectral_analyze}});
    group("fn", "combable functions", {{"synthesize", cmd_fn_synthesize}, {"check", cmd_fn_check}});
    group("qm", "quasimorphisms", {{"count", cmd_qm_count}, {"defect", cmd_qm_defect}, {"holder", cmd_qm_holder}});
    group("clt", "drift, variance and sampling",
          {{"drift", cmd_clt_drift}, {"sample", cmd_clt_sample}, {"empirical", cmd_clt_empirical},
           {"typicality", cmd_clt_typicality}});
    group("compare", "generating set comparison", {{"gensets", cmd_compare_gensets}});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    cfg.command = selected;

    json report = {{"tool", "hypclt"}, {"version", HYPCLT_VERSION}, {"config", config_json(cfg)},
                   {"tolerances", tolerances_json(cfg)}};
    int status = 0;
    try {
        const Context ctx(cfg);
        const Outcome o = handlers.at(selected)(ctx);
        report["status"] = "ok";
        report["verdict"] = o.verdict;
        report["result"] = o.result;
        status = o.pass ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        report["status"] = "error";
        report["error"] = e.what();
        status = 1;
    }
    const std::string text = report.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.out);
        if (!out) {
            std::cerr << "cannot write '" << cfg.out << "'\n";
            return 1;
        }
        out << text;
    }
    if (report["status"] == "error") std::cerr << "error: " << report["error"].get<std::string>() << '\n';
    return status;
}
