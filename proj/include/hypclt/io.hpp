#pragma once

// JSON documents for digraphs, groups, combings, function bundles and reports.
// Vertex indices in documents are 1-based.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hypclt/clt.hpp"
#include "hypclt/combable.hpp"
#include "hypclt/quasimorphism.hpp"
#include "hypclt/spectral.hpp"

namespace hypclt::io {

using json = nlohmann::ordered_json;

class FormatError : public Error {
public:
    using Error::Error;
};

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("field '") + key + "': " + e.what());
    }
}

// ------------------------------------------------------------------ digraphs

inline json to_json(const LabeledDigraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({e.source + 1, e.target + 1, g.alphabet()[e.label]});
    return {{"alphabet", g.alphabet()}, {"vertices", g.vertex_count()}, {"initial", 1}, {"edges", edges}};
}

inline LabeledDigraph digraph_from_json(const json& j) {
    const auto alphabet = field<std::vector<std::string>>(j, "alphabet");
    const auto n = field<std::size_t>(j, "vertices");
    if (j.contains("initial") && j.at("initial").get<int>() != 1)
        throw InvalidDigraph("the initial vertex must be vertex 1");
    std::vector<EdgeSpec> edges;
    for (const auto& e : field<json>(j, "edges")) {
        if (!e.is_array() || e.size() != 3) throw FormatError("edges are [source, target, label] triples");
        const auto s = e[0].get<std::size_t>(), t = e[1].get<std::size_t>();
        if (s == 0 || t == 0) throw InvalidDigraph("vertex indices are 1-based");
        edges.push_back({s - 1, t - 1, e[2].get<std::string>()});
    }
    return LabeledDigraph::build(n, edges, alphabet);
}

// ------------------------------------------------------------------ groups

inline json to_json(const GroupKind& k) {
    if (auto f = dynamic_cast<const FreeGroup*>(&k))
        return {{"kind", "free"}, {"rank", f->rank()}, {"first_letter", std::string(1, f->first_letter())}};
    if (auto p = dynamic_cast<const FreeProductCyclic*>(&k))
        return {{"kind", "free_product_cyclic"}, {"orders", p->orders()}, {"names", p->factor_names()}};
    if (auto d = dynamic_cast<const DirectProduct*>(&k)) {
        json factors = json::array();
        for (const auto& f : d->factors()) factors.push_back(to_json(*f));
        return {{"kind", "direct_product"}, {"factors", factors}};
    }
    throw FormatError("group kind '" + k.name() + "' has no document form");
}

inline std::shared_ptr<const GroupKind> kind_from_json(const json& j) {
    const auto kind = field<std::string>(j, "kind");
    if (kind == "free") {
        const std::string first = j.value("first_letter", std::string("a"));
        return std::make_shared<FreeGroup>(field<int>(j, "rank"), first.empty() ? 'a' : first[0]);
    }
    if (kind == "free_product_cyclic")
        return std::make_shared<FreeProductCyclic>(field<std::vector<int>>(j, "orders"),
                                                   field<std::vector<std::string>>(j, "names"));
    if (kind == "direct_product") {
        std::vector<std::shared_ptr<const GroupKind>> factors;
        for (const auto& f : field<json>(j, "factors")) factors.push_back(kind_from_json(f));
        return std::make_shared<DirectProduct>(std::move(factors));
    }
    throw FormatError("unknown group kind '" + kind + "'");
}

inline json to_json(const Genset& g) {
    json inverse = json::array();
    for (const auto& i : g.inverse) inverse.push_back(i ? json(g.letters[*i]) : json(nullptr));
    return {{"name", g.name}, {"letters", g.letters}, {"inverse", inverse}, {"symmetric", g.symmetric}};
}

inline json to_json(const GroupOracle& o) {
    json gensets = json::array();
    for (const auto& name : o.genset_names()) gensets.push_back(to_json(o.genset(name)));
    return {{"group", to_json(o.kind())}, {"max_radius", o.max_radius()}, {"gensets", gensets}};
}

/// Accepts {"group": kind, "max_radius": r, "gensets": [{"name", "letters"}...]} or a bare kind.
inline std::shared_ptr<GroupOracle> group_from_json(const json& j) {
    const json& kind = j.contains("group") ? j.at("group") : j;
    auto oracle = std::make_shared<GroupOracle>(kind_from_json(kind), j.value("max_radius", GroupOracle::default_max_radius));
    if (j.contains("gensets"))
        for (const auto& g : j.at("gensets")) {
            const auto name = field<std::string>(g, "name");
            if (oracle->has_genset(name)) continue;
            oracle->add_genset(name, field<std::vector<std::string>>(g, "letters"));
        }
    return oracle;
}

// ------------------------------------------------------------------ combings and functions

inline json to_json(const Combing& c) {
    return {{"digraph", to_json(c.digraph)},
            {"group", to_json(*c.oracle)},
            {"genset", c.genset},
            {"verified_radius", c.verified_radius}};
}

inline Combing combing_from_json(const json& j) {
    Combing c;
    c.oracle = group_from_json(field<json>(j, "group"));
    c.genset = field<std::string>(j, "genset");
    c.digraph = digraph_from_json(field<json>(j, "digraph"));
    c.verified_radius = field<int>(j, "verified_radius");
    const auto& letters = c.oracle->genset(c.genset).letters;
    for (const auto& l : c.digraph.alphabet())
        if (!find_letter(letters, l)) throw UnknownLetter(l);
    return c;
}

inline json to_json(const CombableFunction& f) {
    std::vector<std::size_t> base;
    for (auto v : f.base_vertex) base.push_back(v + 1);
    return {{"combing", to_json(f.combing)}, {"dphi", f.dphi},           {"base_vertex", base},
            {"provenance", f.provenance},   {"depth", f.depth},         {"verify_radius", f.verify_radius}};
}

inline CombableFunction function_from_json(const json& j) {
    CombableFunction f;
    f.combing = combing_from_json(field<json>(j, "combing"));
    f.dphi = field<std::vector<std::int64_t>>(j, "dphi");
    if (f.dphi.size() != f.combing.digraph.vertex_count()) throw FormatError("dphi needs one value per vertex");
    for (auto v : j.value("base_vertex", std::vector<std::size_t>{})) {
        if (v == 0) throw FormatError("base_vertex indices are 1-based");
        f.base_vertex.push_back(v - 1);
    }
    f.provenance = j.value("provenance", std::string("manual"));
    f.depth = j.value("depth", 0);
    f.verify_radius = j.value("verify_radius", f.combing.verified_radius);
    return f;
}

// ------------------------------------------------------------------ reports

template <class T>
json number(const T& x) {
    return to_double(x);
}

template <class T>
json vector_json(const std::vector<T>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_double(x));
    return out;
}

template <class T>
json matrix_json(const DenseMatrix<T>& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_double(m(i, j)));
        out.push_back(row);
    }
    return out;
}

template <class T>
json exact_vector(const std::vector<T>& v) {
    json out = json::array();
    for (const auto& x : v) {
        std::ostringstream s;
        s << x;
        out.push_back(s.str());
    }
    return out;
}

inline json vertex_list(const std::vector<std::size_t>& v) {
    json out = json::array();
    for (auto x : v) out.push_back(x + 1);
    return out;
}

inline json to_json(const SemisimplicityReport& r) {
    json samples = json::array();
    for (const auto& [n, c] : r.growth_samples) samples.push_back({n, c.str()});
    json j = {{"verdict", to_string(r.verdict)},
              {"lambda_estimate", r.lambda_estimate},
              {"lambda_growth", r.lambda_growth},
              {"K_estimate", r.K_estimate},
              {"growth_fit_pass", r.growth_fit_pass},
              {"spectral_pass", r.spectral_pass},
              {"ssr_exponential", r.ssr_exponential},
              {"ssr_polynomial", r.ssr_polynomial},
              {"window", {r.window_begin, r.window_end}},
              {"growth_samples", samples}};
    if (r.connected_top_components)
        j["connected_top_components"] = {r.connected_top_components->first + 1, r.connected_top_components->second + 1};
    return j;
}

template <class T>
json to_json(const SpectralData<T>& s) {
    json comps = json::array();
    for (std::size_t c = 0; c < s.components.components.size(); ++c)
        comps.push_back({{"id", c + 1}, {"vertices", vertex_list(s.components.components[c])}, {"xi", s.components.xi[c]}});
    json lambda_comps = json::array();
    for (auto c : s.support.lambda_components) lambda_comps.push_back(c + 1);
    json j = {{"verdict", to_string(s.verdict)},
              {"lambda", s.lambda_value},
              {"components", comps},
              {"lambda_components", lambda_comps},
              {"support", vertex_list(s.support.support)}};
    if (s.support.violation)
        j["connected_lambda_components"] = {s.support.violation->first + 1, s.support.violation->second + 1};
    if (s.ok()) {
        j["rho_one"] = vector_json(s.rho_one);
        j["ell_v1"] = vector_json(s.ell_v1);
        j["mu"] = vector_json(s.mu);
        j["N"] = matrix_json(s.N);
        if constexpr (is_exact_v<T>) {
            j["exact"] = {{"rho_one", exact_vector(s.rho_one)}, {"ell_v1", exact_vector(s.ell_v1)}, {"mu", exact_vector(s.mu)}};
        }
    }
    j["tolerances"] = {{"tie", s.options.tie_tolerance}, {"kernel", s.options.kernel_tolerance}};
    return j;
}

inline json to_json(const CombingValidation& v) {
    json j = {{"passed", v.passed}, {"radius", v.radius}, {"accepted_counts", v.accepted_counts}, {"sphere_sizes", v.sphere_sizes}};
    if (!v.passed) j["failure"] = {{"kind", v.failure}, {"witness", v.witness}};
    return j;
}

inline json to_json(const SynthesisFailure& f) {
    return {{"reason", f.reason},
            {"depth", f.depth},
            {"word_a", f.word_a},
            {"word_b", f.word_b},
            {"continuation", f.continuation},
            {"increment_a", f.increment_a},
            {"increment_b", f.increment_b},
            {"max_abs_increment", f.max_abs_increment},
            {"increment_range", {f.min_increment, f.max_increment}}};
}

inline json to_json(const SynthesisOutcome& o) {
    json j = {{"succeeded", bool(o)}, {"max_abs_increment_by_depth", o.max_abs_increment}};
    if (o) {
        j["stable_level"] = o.stable_level;
        j["class_count"] = o.class_count;
        j["vertices"] = o.function->combing.digraph.vertex_count();
        j["dphi"] = o.function->dphi;
    } else {
        j["failure"] = to_json(*o.failure);
    }
    return j;
}

inline json to_json(const LipschitzReport& r) {
    return {{"radius", r.radius},
            {"left_constant", r.left_constant},
            {"right_constant", r.right_constant},
            {"left_by_shell", r.left_by_shell},
            {"right_by_shell", r.right_by_shell},
            {"left_growing", r.left_growing},
            {"right_growing", r.right_growing}};
}

inline json to_json(const DefectReport& r) {
    return {{"radius", r.radius}, {"lower_bound", r.lower_bound}, {"witness", {r.witness_a, r.witness_b}}, {"pairs", r.pairs}};
}

inline json to_json(const HolderReport& r) {
    json levels = json::array();
    for (const auto& lv : r.levels)
        levels.push_back({{"level", lv.level},
                          {"pairs", lv.pairs},
                          {"max_difference", lv.max_difference},
                          {"witness", {lv.witness_x, lv.witness_y}}});
    json viol = json::array();
    for (const auto& lv : r.violations) viol.push_back({{"level", lv.level}, {"max_difference", lv.max_difference}, {"witness", {lv.witness_x, lv.witness_y}}});
    return {{"a", r.a},       {"radius", r.radius}, {"passed", r.passed()}, {"fitted", r.fitted},
            {"C", r.C},       {"c", r.c},           {"levels", levels},     {"violations", viol}};
}

template <class T>
json to_json(const CltReport<T>& r) {
    json comps = json::array();
    for (const auto& c : r.per_component) {
        json cj = {{"component", c.component + 1},
                   {"vertices", vertex_list(c.vertices)},
                   {"E", to_double(c.E)},
                   {"sigma2", to_double(c.sigma2)},
                   {"sigma", c.sigma},
                   {"poisson_solution", vector_json(c.poisson_solution)}};
        if constexpr (is_exact_v<T>) cj["exact"] = exact_vector(std::vector<T>{c.E, c.sigma2});
        comps.push_back(cj);
    }
    return {{"E", to_double(r.E)},
            {"sigma2", to_double(r.sigma2)},
            {"sigma", r.sigma},
            {"components_agree", r.components_agree},
            {"agreement_tolerance", r.agreement_tolerance},
            {"per_component", comps},
            {"warnings", r.warnings}};
}

template <class T>
json to_json(const Moments<T>& m) {
    return {{"n", m.n}, {"mean", to_double(m.mean)}, {"variance", to_double(m.variance)}};
}

inline json to_json(const EmpiricalCltReport& r, bool with_histogram = false) {
    json j = {{"n", r.n},
              {"count", r.count},
              {"seed", r.seed},
              {"E", r.E},
              {"sigma2", r.sigma2},
              {"degenerate", r.degenerate},
              {"mean", r.mean},
              {"variance", r.variance}};
    if (r.degenerate) {
        j["max_abs_scaled"] = r.degenerate_max_abs;
    } else {
        j["skewness"] = r.skewness;
        j["excess_kurtosis"] = r.excess_kurtosis;
        j["ks_raw"] = r.ks_raw;
        j["ks_corrected"] = r.ks_corrected;
        j["lattice_span"] = r.lattice_span;
    }
    if (with_histogram) {
        json h = json::array();
        for (const auto& b : r.histogram) h.push_back({b.left, b.right, b.count});
        j["histogram"] = h;
    }
    return j;
}

inline std::string histogram_csv(const EmpiricalCltReport& r) {
    std::ostringstream out;
    out << "bin_left,bin_right,count\n" << std::setprecision(17);
    for (const auto& b : r.histogram) out << b.left << ',' << b.right << ',' << b.count << '\n';
    return out.str();
}

inline json to_json(const TypicalityProfile& t) {
    return {{"n", t.n}, {"m", t.m}, {"E", t.E}, {"mean", t.mean}, {"variance", t.variance}};
}

inline json to_json(const GensetComparison& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"words", row.words},
                        {"mean_abs_deviation", row.mean_abs_deviation},
                        {"max_middle_deviation", row.max_middle_deviation}});
    json j = {{"s1", r.s1},
              {"s2", r.s2},
              {"orientation", "lambda12 = 1/E, E the drift of |g|_S2 along S1-combing words"},
              {"E", r.E},
              {"sigma", r.sigma},
              {"lambda12", r.lambda12},
              {"lambda1_ball", r.lambda1},
              {"lambda2_ball", r.lambda2},
              {"log_ratio", r.log_ratio},
              {"inequality_strict", r.inequality_strict},
              {"refined_vertices", r.refined_vertices},
              {"fitted_K", r.fitted_K},
              {"check_n", r.check_n},
              {"check_deviation", r.check_deviation},
              {"deviation_check_passed", r.deviation_check_passed},
              {"deviations", rows}};
    if (r.lambda1_perron) j["lambda1_perron"] = *r.lambda1_perron;
    if (r.lambda2_perron) j["lambda2_perron"] = *r.lambda2_perron;
    return j;
}

}  // namespace hypclt::io
