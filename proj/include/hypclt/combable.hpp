#pragma once

/*
 * Combable functions: integer vertex weights dphi on a digraph parameterizing a
 * combing, with phi(w) = sum of dphi over the vertices of the path reading w
 * (the initial vertex included).
 *
 * synthesize_dphi builds such a weighting from a function on the group. It
 * walks the accepted words to radius R + d, labels every word with its vertex
 * and increment, and refines these labels by the labels of the continuations
 * (Moore refinement on the tree of accepted words) until the partition of the
 * words of length <= R stops changing. The quotient is the refined digraph.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypclt/combing.hpp"
#include "hypclt/fixtures.hpp"

namespace hypclt {

struct CombableFunction {
    Combing combing;                       ///< digraph may refine the original combing's digraph
    std::vector<std::int64_t> dphi;        ///< per vertex; dphi[0] = phi(id)
    std::vector<std::size_t> base_vertex;  ///< vertex of the original digraph under each vertex
    std::string provenance;                ///< "word-length", "synthesized", "manual", "combination"
    int depth = 0;
    int verify_radius = 0;

    std::int64_t evaluate(const Word& w) const {
        const auto r = combing.digraph.accept(w);
        if (!r) throw NotAccepted(combing.format(r.path.labels), r.halt_index);
        std::int64_t total = 0;
        for (auto v : r.path.vertices) total += dphi[v];
        return total;
    }

    std::int64_t evaluate(std::string_view text) const { return evaluate(combing.parse(text)); }

    /// Value at a group element, through its accepted word.
    std::int64_t evaluate(const Element& g) const { return evaluate(accepted_word(g)); }

    /// The accepted word evaluating to g: depth-first search through the
    /// digraph, keeping only prefixes that lie on a geodesic to g.
    Word accepted_word(const Element& g) const {
        const GroupOracle& oracle = *combing.oracle;
        const int target = oracle.word_length(g, combing.genset);
        if (target > verify_radius) throw OutsideVerifiedRadius(target, verify_radius);
        const auto values = combing.letter_values();
        Word w;
        std::vector<std::size_t> vertices{0};
        std::vector<Element> prefixes{oracle.identity()};
        std::vector<std::size_t> next_edge{0};
        while (!next_edge.empty()) {
            if (int(w.size()) == target) {
                if (prefixes.back() == g) return w;
            }
            const std::size_t v = vertices.back();
            const auto& out = combing.digraph.out_edges(v);
            std::size_t& pos = next_edge.back();
            if (int(w.size()) == target || pos == out.size()) {
                next_edge.pop_back();
                vertices.pop_back();
                prefixes.pop_back();
                if (!w.empty()) w.pop_back();
                continue;
            }
            const auto& e = combing.digraph.edges()[out[pos++]];
            Element h = oracle.multiply(prefixes.back(), values[e.label]);
            const int lh = int(w.size()) + 1;
            if (lh + oracle.word_length(oracle.multiply(oracle.inverse(h), g), combing.genset) != target) continue;
            w.push_back(e.label);
            vertices.push_back(e.target);
            prefixes.push_back(std::move(h));
            next_edge.push_back(0);
        }
        throw Error("no accepted word evaluates to " + oracle.format(g));
    }

    /// Values on every accepted word of length <= R, keyed by element.
    ElementMap<std::int64_t> value_table(int radius) const {
        if (radius > verify_radius) throw OutsideVerifiedRadius(radius, verify_radius);
        const auto tree = enumerate_accepted(combing, radius);
        std::vector<std::int64_t> sums(tree.nodes.size());
        ElementMap<std::int64_t> table;
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const auto& node = tree.nodes[i];
            sums[i] = dphi[node.vertex] + (i == 0 ? 0 : sums[node.parent]);
            table.emplace(node.element, sums[i]);
        }
        return table;
    }
};

inline CombableFunction word_length_function(const Combing& c) {
    CombableFunction f;
    f.combing = c;
    f.dphi.assign(c.digraph.vertex_count(), 1);
    f.dphi[0] = 0;
    for (std::size_t v = 0; v < c.digraph.vertex_count(); ++v) f.base_vertex.push_back(v);
    f.provenance = "word-length";
    f.verify_radius = c.verified_radius;
    return f;
}

/// a*f + b*g on the product of the two digraphs.
inline CombableFunction combine(const CombableFunction& f, const CombableFunction& g, std::int64_t a = 1,
                                std::int64_t b = 1) {
    const auto& df = f.combing.digraph;
    const auto& dg = g.combing.digraph;
    if (df.alphabet() != dg.alphabet()) throw MismatchedDigraph();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index{{{0, 0}, 0}};
    std::vector<std::pair<std::size_t, std::size_t>> states{{0, 0}};
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto [u, v] = states[i];
        for (std::size_t s = 0; s < df.alphabet().size(); ++s) {
            const auto tu = df.next(u, s), tv = dg.next(v, s);
            if (tu == LabeledDigraph::npos || tv == LabeledDigraph::npos) continue;
            auto [it, fresh] = index.emplace(std::pair{tu, tv}, states.size());
            if (fresh) states.emplace_back(tu, tv);
            edges.push_back({i, it->second, df.alphabet()[s]});
        }
    }
    CombableFunction h;
    h.combing = f.combing;
    h.combing.digraph = LabeledDigraph::build(states.size(), edges, df.alphabet());
    for (const auto& [u, v] : states) {
        h.dphi.push_back(a * f.dphi[u] + b * g.dphi[v]);
        h.base_vertex.push_back(f.base_vertex[u]);
    }
    h.provenance = "combination";
    h.verify_radius = std::min(f.verify_radius, g.verify_radius);
    h.combing.verified_radius = std::min(f.combing.verified_radius, g.combing.verified_radius);
    return h;
}

struct SynthesisFailure {
    std::string reason;
    int depth = 0;
    std::string word_a, word_b;  ///< same base vertex, different increments after `continuation`
    std::string continuation;
    std::int64_t increment_a = 0, increment_b = 0;
    std::vector<std::int64_t> max_abs_increment;  ///< per word length
    std::int64_t min_increment = 0, max_increment = 0;
};

struct SynthesisOutcome {
    std::optional<CombableFunction> function;
    std::optional<SynthesisFailure> failure;
    std::vector<std::int64_t> max_abs_increment;  ///< per word length, 0..R+d
    int stable_level = -1;                        ///< refinement level at which the partition stopped changing
    std::size_t class_count = 0;
    explicit operator bool() const { return function.has_value(); }
};

inline SynthesisOutcome synthesize_dphi(const Combing& c, const GroupFunction& phi, int depth, int radius) {
    if (radius > c.verified_radius) throw RadiusExceeded(radius, c.verified_radius);
    if (depth < 1) throw Error("refinement depth must be at least 1");
    const int D = radius + depth;
    const auto& graph = c.digraph;
    const auto values = c.letter_values();
    const GroupOracle& oracle = *c.oracle;

    struct Node {
        std::uint32_t parent;
        std::uint32_t vertex;
        std::uint32_t letter;
        std::int64_t delta;
    };
    std::vector<Node> nodes;
    std::vector<std::size_t> level_begin{0, 1};
    std::vector<std::int64_t> phi_level{phi(oracle.identity())};
    std::vector<Element> elements{oracle.identity()};
    nodes.push_back({0, 0, 0, phi_level[0]});
    for (int n = 0; n < D; ++n) {
        std::vector<Element> next_elements;
        std::vector<std::int64_t> next_phi;
        const std::size_t begin = level_begin[n];
        for (std::size_t i = begin; i < level_begin[n + 1]; ++i)
            for (auto ei : graph.out_edges(nodes[i].vertex)) {
                const auto& e = graph.edges()[ei];
                Element x = oracle.multiply(elements[i - begin], values[e.label]);
                const std::int64_t value = phi(x);
                nodes.push_back({std::uint32_t(i), std::uint32_t(e.target), std::uint32_t(e.label),
                                 value - phi_level[i - begin]});
                next_elements.push_back(std::move(x));
                next_phi.push_back(value);
            }
        elements = std::move(next_elements);
        phi_level = std::move(next_phi);
        level_begin.push_back(nodes.size());
    }
    elements.clear();

    SynthesisOutcome out;
    std::vector<int> node_depth(nodes.size());
    for (int n = 0; n <= D; ++n)
        for (std::size_t i = level_begin[n]; i < level_begin[n + 1]; ++i) node_depth[i] = n;
    out.max_abs_increment.assign(D + 1, 0);
    std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        auto& m = out.max_abs_increment[node_depth[i]];
        m = std::max(m, std::abs(nodes[i].delta));
        lo = std::min(lo, nodes[i].delta);
        hi = std::max(hi, nodes[i].delta);
    }

    // children of a word are contiguous in breadth-first order
    std::vector<std::size_t> child_begin(nodes.size(), 0), child_end(nodes.size(), 0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const std::size_t p = nodes[i].parent;
        if (child_end[p] == 0) child_begin[p] = i;
        child_end[p] = i + 1;
    }
    auto children_of = [&](std::size_t i) { return std::pair{child_begin[i], child_end[i]}; };

    auto fail = [&](std::string reason, int level) {
        SynthesisFailure f;
        f.reason = std::move(reason);
        f.depth = level;
        f.max_abs_increment = out.max_abs_increment;
        f.min_increment = lo;
        f.max_increment = hi;
        // Witness: two words at the same base vertex whose continuation by the
        // same letter has the widest spread of increments.
        std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> extremes;
        for (std::size_t i = level_begin[1]; i < level_begin[std::min(radius, D) + 1]; ++i) {
            if (i == 0) continue;
            const auto& node = nodes[i];
            const std::size_t p = node.parent;
            auto key = std::pair<std::size_t, std::size_t>{nodes[p].vertex, node.letter};
            auto [it, fresh] = extremes.emplace(key, std::pair{i, i});
            if (!fresh) {
                if (node.delta < nodes[it->second.first].delta) it->second.first = i;
                if (node.delta > nodes[it->second.second].delta) it->second.second = i;
            }
        }
        std::int64_t spread = -1;
        auto word_of = [&](std::size_t i) {
            Word w;
            while (i != 0) {
                w.push_back(nodes[i].letter);
                i = nodes[i].parent;
            }
            std::reverse(w.begin(), w.end());
            return c.format(w);
        };
        for (const auto& [key, ext] : extremes) {
            const std::int64_t s = nodes[ext.second].delta - nodes[ext.first].delta;
            if (s > spread) {
                spread = s;
                f.word_a = word_of(nodes[ext.first].parent);
                f.word_b = word_of(nodes[ext.second].parent);
                f.continuation = graph.alphabet()[key.second];
                f.increment_a = nodes[ext.first].delta;
                f.increment_b = nodes[ext.second].delta;
            }
        }
        out.failure = std::move(f);
        return out;
    };

    // P_0 = (vertex, increment); P_{j+1} = (P_j, [(letter, P_j(child))]),
    // defined on words of length <= D - j.
    std::vector<std::uint32_t> cls(nodes.size());
    auto count_inside = [&](const std::vector<std::uint32_t>& labels) {
        std::vector<std::uint32_t> seen(labels.begin(), labels.begin() + level_begin[radius + 1]);
        std::sort(seen.begin(), seen.end());
        return std::size_t(std::unique(seen.begin(), seen.end()) - seen.begin());
    };
    {
        std::map<std::pair<std::uint32_t, std::int64_t>, std::uint32_t> intern;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            cls[i] = intern.emplace(std::pair{nodes[i].vertex, nodes[i].delta}, std::uint32_t(intern.size()))
                         .first->second;
    }
    std::size_t count = count_inside(cls);
    int level = 0;
    for (;;) {
        if (level >= depth) return fail("refinement did not stabilize within depth " + std::to_string(depth), level);
        std::map<std::vector<std::uint32_t>, std::uint32_t> intern;
        std::vector<std::uint32_t> next(nodes.size(), 0);
        const std::size_t limit = level_begin[D - level];  // words of length <= D - level - 1
        for (std::size_t i = 0; i < limit; ++i) {
            std::vector<std::uint32_t> key{cls[i]};
            auto [b, e] = children_of(i);
            for (std::size_t ch = b; ch < e; ++ch) {
                key.push_back(nodes[ch].letter);
                key.push_back(cls[ch]);
            }
            next[i] = intern.emplace(std::move(key), std::uint32_t(intern.size())).first->second;
        }
        const std::size_t next_count = count_inside(next);
        ++level;
        cls = std::move(next);
        if (next_count == count) break;
        count = next_count;
    }
    out.stable_level = level - 1;
    out.class_count = count;

    // Quotient on words of length <= R.
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    std::map<std::uint32_t, std::uint32_t> state_of{{cls[0], 0}};
    std::vector<std::int64_t> dphi{nodes[0].delta};
    std::vector<std::size_t> base{0};
    std::vector<bool> interior{true};
    for (int n = 1; n <= radius; ++n)
        for (std::size_t i = level_begin[n]; i < level_begin[n + 1]; ++i) {
            auto [it, fresh] = state_of.emplace(cls[i], std::uint32_t(state_of.size()));
            if (fresh) {
                dphi.push_back(nodes[i].delta);
                base.push_back(nodes[i].vertex);
                interior.push_back(false);
            }
            if (n < radius) interior[it->second] = true;
        }
    for (std::size_t s = 0; s < interior.size(); ++s)
        if (!interior[s]) return fail("classes at the verification radius do not recur inside it", level);

    const std::size_t alphabet = graph.alphabet().size();
    std::vector<std::vector<std::uint32_t>> delta(state_of.size(), std::vector<std::uint32_t>(alphabet, none));
    for (std::size_t i = 0; i < level_begin[radius]; ++i) {
        auto [b, e] = children_of(i);
        for (std::size_t ch = b; ch < e; ++ch) {
            auto& slot = delta[state_of[cls[i]]][nodes[ch].letter];
            const auto target = state_of[cls[ch]];
            if (slot != none && slot != target) return fail("refined transitions are not deterministic", level);
            slot = target;
        }
    }
    std::vector<EdgeSpec> edges;
    for (std::size_t s = 0; s < delta.size(); ++s)
        for (std::size_t l = 0; l < alphabet; ++l)
            if (delta[s][l] != none) edges.push_back({s, delta[s][l], graph.alphabet()[l]});

    CombableFunction f;
    f.combing = c;
    f.combing.digraph = LabeledDigraph::build(delta.size(), edges, graph.alphabet());
    f.combing.verified_radius = std::min(c.verified_radius, radius);
    f.dphi = std::move(dphi);
    f.base_vertex = std::move(base);
    f.provenance = "synthesized";
    f.depth = depth;
    f.verify_radius = radius;

    // Exact conformance check on the refined digraph.
    const auto tree = enumerate_accepted(f.combing, radius);
    std::vector<std::int64_t> sums(tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& node = tree.nodes[i];
        sums[i] = f.dphi[node.vertex] + (i == 0 ? 0 : sums[node.parent]);
        if (sums[i] != phi(node.element)) return fail("conformance check failed", level);
    }
    if (tree.nodes.size() != level_begin[radius + 1]) return fail("refined language differs from the combing", level);
    out.function = std::move(f);
    return out;
}

struct LipschitzReport {
    int radius = 0;
    std::int64_t left_constant = 0;   ///< max |phi(g s) - phi(g)|
    std::int64_t right_constant = 0;  ///< max |phi(s g) - phi(g)|
    std::vector<std::int64_t> left_by_shell, right_by_shell;
    bool left_growing = false, right_growing = false;
};

inline LipschitzReport check_lipschitz(const GroupFunction& phi, const GroupOracle& oracle, const std::string& genset,
                                       int radius) {
    if (radius + 1 > oracle.max_radius()) throw RadiusExceeded(radius + 1, oracle.max_radius());
    const Ball ball = oracle.ball(genset, radius);
    const auto& g = oracle.genset(genset);
    LipschitzReport r;
    r.radius = radius;
    r.left_by_shell.assign(radius + 1, 0);
    r.right_by_shell.assign(radius + 1, 0);
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const auto& x = ball.elements[i];
        const std::int64_t fx = phi(x);
        for (const auto& s : g.values) {
            r.left_by_shell[ball.lengths[i]] =
                std::max(r.left_by_shell[ball.lengths[i]], std::abs(phi(oracle.multiply(x, s)) - fx));
            r.right_by_shell[ball.lengths[i]] =
                std::max(r.right_by_shell[ball.lengths[i]], std::abs(phi(oracle.multiply(s, x)) - fx));
        }
    }
    auto growing = [radius](const std::vector<std::int64_t>& shells) {
        const int half = radius / 2;
        std::int64_t lower = 0, upper = 0;
        for (int n = 0; n <= radius; ++n) (n <= half ? lower : upper) = std::max(n <= half ? lower : upper, shells[n]);
        return upper > lower;
    };
    r.left_constant = *std::max_element(r.left_by_shell.begin(), r.left_by_shell.end());
    r.right_constant = *std::max_element(r.right_by_shell.begin(), r.right_by_shell.end());
    r.left_growing = growing(r.left_by_shell);
    r.right_growing = growing(r.right_by_shell);
    return r;
}

/// max over accepted w with |w| <= R and splits w = uv of |phi(w) - phi(u) - phi(v)|.
inline std::int64_t check_subdivision(const CombableFunction& f, int radius) {
    if (radius > f.verify_radius) throw RadiusExceeded(radius, f.verify_radius);
    const auto table = f.value_table(radius);
    const auto tree = enumerate_accepted(f.combing, radius);
    const GroupOracle& oracle = *f.combing.oracle;
    std::int64_t worst = 0;
    std::vector<std::size_t> chain;
    for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
        chain.clear();
        for (std::size_t j = i; j != 0; j = tree.nodes[j].parent) chain.push_back(j);
        chain.push_back(0);
        const Element& w = tree.nodes[i].element;
        const std::int64_t fw = table.at(w);
        for (auto u : chain) {
            const Element& ue = tree.nodes[u].element;
            const Element v = oracle.multiply(oracle.inverse(ue), w);
            worst = std::max(worst, std::abs(fw - table.at(ue) - table.at(v)));
        }
    }
    return worst;
}

}  // namespace hypclt
