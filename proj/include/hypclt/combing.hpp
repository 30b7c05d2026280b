#pragma once

// Combings: prefix-closed languages of geodesics in bijection with the group,
// given by a digraph over the letters of a generating set.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <string>
#include <vector>

#include "hypclt/digraph.hpp"
#include "hypclt/group.hpp"

namespace hypclt {

struct Combing {
    LabeledDigraph digraph;
    std::shared_ptr<GroupOracle> oracle;
    std::string genset;
    int verified_radius = 0;

    /// Group value of each digraph letter.
    std::vector<Element> letter_values() const {
        const auto& g = oracle->genset(genset);
        std::vector<Element> out;
        for (const auto& letter : digraph.alphabet()) {
            auto idx = find_letter(g.letters, letter);
            if (!idx) throw UnknownLetter(letter);
            out.push_back(g.values[*idx]);
        }
        return out;
    }

    Element evaluate(const Word& w) const {
        const auto values = letter_values();
        Element e = oracle->identity();
        for (auto letter : w) e = oracle->multiply(e, values.at(letter));
        return e;
    }

    Word parse(std::string_view text) const { return parse_word(text, digraph.alphabet()); }
    std::string format(const Word& w) const { return format_word(w, digraph.alphabet()); }
};

/// One node per accepted word, stored as a tree through parent links.
struct AcceptedWordTree {
    struct Node {
        std::size_t parent;
        std::size_t letter;
        std::size_t vertex;
        int depth;
        Element element;
    };
    std::vector<Node> nodes;
    std::vector<std::size_t> level_begin;  ///< words of length n occupy [level_begin[n], level_begin[n+1])

    Word word(std::size_t node) const {
        Word w;
        while (node != 0) {
            w.push_back(nodes[node].letter);
            node = nodes[node].parent;
        }
        std::reverse(w.begin(), w.end());
        return w;
    }
};

/// All accepted words up to length R together with their values.
inline AcceptedWordTree enumerate_accepted(const Combing& c, int radius) {
    const auto values = c.letter_values();
    AcceptedWordTree t;
    t.nodes.push_back({0, 0, 0, 0, c.oracle->identity()});
    t.level_begin = {0, 1};
    for (int n = 0; n < radius; ++n) {
        const std::size_t begin = t.level_begin[n], end = t.level_begin[n + 1];
        for (std::size_t i = begin; i < end; ++i)
            for (auto ei : c.digraph.out_edges(t.nodes[i].vertex)) {
                const auto& e = c.digraph.edges()[ei];
                Element next = c.oracle->multiply(t.nodes[i].element, values[e.label]);
                t.nodes.push_back({i, e.label, e.target, n + 1, std::move(next)});
            }
        t.level_begin.push_back(t.nodes.size());
    }
    return t;
}

struct CombingValidation {
    bool passed = true;
    int radius = 0;
    std::string failure;  ///< "injectivity", "geodesity" or "surjectivity"
    std::string witness;  ///< offending accepted word, or missed element in base letters
    std::vector<std::size_t> accepted_counts;  ///< per length
    std::vector<std::size_t> sphere_sizes;
};

inline CombingValidation validate_combing(const Combing& c, int radius) {
    CombingValidation report;
    report.radius = radius;
    const Ball ball = c.oracle->ball(c.genset, radius);
    for (int n = 0; n <= radius; ++n) report.sphere_sizes.push_back(ball.sphere_size(n));

    const auto values = c.letter_values();
    struct Item {
        std::size_t parent;
        std::size_t letter;
        std::size_t vertex;
    };
    std::vector<Item> items{{0, 0, 0}};
    std::vector<Element> elements{c.oracle->identity()};
    ElementMap<std::size_t> seen;
    seen.emplace(c.oracle->identity(), 0);
    auto word_of = [&](std::size_t idx) {
        Word w;
        while (idx != 0) {
            w.push_back(items[idx].letter);
            idx = items[idx].parent;
        }
        std::reverse(w.begin(), w.end());
        return c.format(w);
    };
    report.accepted_counts.push_back(1);
    std::size_t begin = 0, end = 1;
    for (int n = 1; n <= radius; ++n) {
        for (std::size_t i = begin; i < end; ++i)
            for (auto ei : c.digraph.out_edges(items[i].vertex)) {
                const auto& e = c.digraph.edges()[ei];
                Element next = c.oracle->multiply(elements[i], values[e.label]);
                const std::size_t idx = items.size();
                items.push_back({i, e.label, e.target});
                if (seen.count(next)) {
                    report.passed = false;
                    report.failure = "injectivity";
                    report.witness = word_of(idx);
                    return report;
                }
                const auto len = ball.length_of(next);
                if (!len || *len != n) {
                    report.passed = false;
                    report.failure = "geodesity";
                    report.witness = word_of(idx);
                    return report;
                }
                seen.emplace(next, idx);
                elements.push_back(std::move(next));
            }
        report.accepted_counts.push_back(items.size() - end);
        begin = end;
        end = items.size();
    }
    if (seen.size() != ball.size()) {
        for (const auto& e : ball.elements)
            if (!seen.count(e)) {
                report.passed = false;
                report.failure = "surjectivity";
                report.witness = c.oracle->format(e);
                break;
            }
    }
    return report;
}

/// The last-letter automaton of reduced words in a free group.
inline Combing reduced_word_combing(std::shared_ptr<GroupOracle> oracle,
                                    const std::string& genset_name = "standard") {
    if (!dynamic_cast<const FreeGroup*>(&oracle->kind()))
        throw WrongKind("reduced-word combing needs a free group");
    const auto& g = oracle->genset(genset_name);
    if (g.letters != oracle->kind().base_letters())
        throw WrongKind("reduced-word combing needs the standard letters");
    std::vector<EdgeSpec> edges;
    for (std::size_t k = 0; k < g.size(); ++k) edges.push_back({0, k + 1, g.letters[k]});
    for (std::size_t k = 0; k < g.size(); ++k)
        for (std::size_t l = 0; l < g.size(); ++l)
            if (g.inverse[k] != l) edges.push_back({k + 1, l + 1, g.letters[l]});
    Combing c;
    c.digraph = LabeledDigraph::build(g.size() + 1, edges, g.letters);
    c.genset = g.name;
    c.verified_radius = oracle->max_radius();
    c.oracle = std::move(oracle);
    return c;
}

struct LexFirstOptions {
    std::vector<std::string> letter_order;  ///< empty = generating set order
    int cone_depth = 1;
    int max_cone_depth = 6;
    int verify_radius = 8;
};

namespace detail {

// One attempt at cone depth k. Returns the digraph or a failure reason.
inline std::variant<LabeledDigraph, std::string> lex_first_attempt(const GroupOracle& oracle,
                                                                   const Genset& g,
                                                                   const std::vector<std::size_t>& order,
                                                                   int k, int radius) {
    const Ball ball = oracle.ball(g.name, radius + k);
    const std::size_t n_nodes = ball.size();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(n_nodes, none), letter(n_nodes, none);
    // Lex-first tree: walk each sphere in lex order of its words and let every
    // element of the next sphere take the first (word, letter) that reaches it.
    std::vector<std::size_t> level{0};
    std::vector<std::vector<std::size_t>> levels{level};
    for (int n = 0; n < radius + k; ++n) {
        std::vector<std::size_t> next_level;
        for (auto h : level)
            for (auto s : order) {
                const auto it = ball.index.find(oracle.multiply(ball.elements[h], g.values[s]));
                if (it == ball.index.end()) continue;
                const std::size_t x = it->second;
                if (ball.lengths[x] != n + 1 || parent[x] != none) continue;
                parent[x] = h;
                letter[x] = s;
                next_level.push_back(x);
            }
        level = std::move(next_level);
        levels.push_back(level);
    }
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> children(n_nodes);
    for (std::size_t x = 1; x < n_nodes; ++x) children[parent[x]].emplace_back(letter[x], x);
    for (auto& ch : children) std::sort(ch.begin(), ch.end());

    // Depth-j cone signatures, valid for nodes of length <= radius + k - j.
    std::vector<std::size_t> sig(n_nodes, 0);
    for (int j = 1; j <= k; ++j) {
        std::map<std::vector<std::size_t>, std::size_t> intern;
        std::vector<std::size_t> next(n_nodes, 0);
        for (std::size_t x = 0; x < n_nodes; ++x) {
            if (ball.lengths[x] > radius + k - j) continue;
            std::vector<std::size_t> key;
            for (auto [s, y] : children[x]) {
                key.push_back(s);
                key.push_back(sig[y]);
            }
            next[x] = intern.emplace(std::move(key), intern.size()).first->second;
        }
        sig = std::move(next);
    }

    // State 0 is the identity; other states are signatures seen at lengths 1..R.
    std::map<std::size_t, std::size_t> state_of_sig;
    std::vector<bool> seen_inside;
    std::vector<std::size_t> state(n_nodes, none);
    state[0] = 0;
    for (int n = 1; n <= radius; ++n)
        for (auto x : levels[n]) {
            auto [it, fresh] = state_of_sig.emplace(sig[x], state_of_sig.size() + 1);
            if (fresh) seen_inside.push_back(false);
            state[x] = it->second;
            if (n < radius) seen_inside[it->second - 1] = true;
        }
    for (std::size_t s = 0; s < seen_inside.size(); ++s)
        if (!seen_inside[s]) return std::string("cone types at the verification radius are not closed");

    const std::size_t state_count = state_of_sig.size() + 1;
    std::vector<std::vector<std::size_t>> next(state_count, std::vector<std::size_t>(g.size(), none));
    for (int n = 0; n < radius; ++n)
        for (auto x : levels[n])
            for (auto [s, y] : children[x]) {
                auto& slot = next[state[x]][s];
                if (slot != none && slot != state[y])
                    return std::string("cone type does not determine the successor cone types");
                slot = state[y];
            }
    std::vector<EdgeSpec> edges;
    for (std::size_t v = 0; v < state_count; ++v)
        for (std::size_t s = 0; s < g.size(); ++s)
            if (next[v][s] != none) edges.push_back({v, next[v][s], g.letters[s]});
    return LabeledDigraph::build(state_count, edges, g.letters);
}

}  // namespace detail

/// Automaton for lexicographically first geodesics, built from finite-depth
/// cone types of the lex-first tree and validated on the verification ball.
inline Combing lex_first_combing(std::shared_ptr<GroupOracle> oracle, const std::string& genset_name,
                                 const LexFirstOptions& options = {}) {
    const Genset& g = oracle->genset(genset_name);
    std::vector<std::size_t> order;
    if (options.letter_order.empty()) {
        for (std::size_t i = 0; i < g.size(); ++i) order.push_back(i);
    } else {
        for (const auto& name : options.letter_order) {
            auto idx = find_letter(g.letters, name);
            if (!idx) throw UnknownLetter(name);
            order.push_back(*idx);
        }
        if (order.size() != g.size()) throw Error("letter order must list every letter once");
    }
    std::string reason;
    for (int k = options.cone_depth; k <= options.max_cone_depth; ++k) {
        if (options.verify_radius + k > oracle->max_radius())
            throw RadiusExceeded(options.verify_radius + k, oracle->max_radius());
        auto attempt = detail::lex_first_attempt(*oracle, g, order, k, options.verify_radius);
        if (auto* why = std::get_if<std::string>(&attempt)) {
            reason = *why;
            continue;
        }
        Combing c;
        c.digraph = std::get<LabeledDigraph>(std::move(attempt));
        c.oracle = oracle;
        c.genset = g.name;
        c.verified_radius = options.verify_radius;
        const auto check = validate_combing(c, options.verify_radius);
        if (check.passed) return c;
        reason = check.failure + " failure at " + check.witness;
    }
    throw ConeDepthExceeded(options.max_cone_depth, reason);
}

}  // namespace hypclt
