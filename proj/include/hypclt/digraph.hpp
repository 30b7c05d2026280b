#pragma once

/*
 * Deterministic edge-labelled digraphs with an initial vertex.
 *
 * Vertices are 0-based internally; vertex 0 is the initial vertex. Every
 * vertex is an accept state, so the accepted language is prefix-closed and a
 * word is accepted exactly when the path reading it exists.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypclt/errors.hpp"
#include "hypclt/linalg.hpp"
#include "hypclt/word.hpp"

namespace hypclt {

struct EdgeSpec {
    std::size_t source;
    std::size_t target;
    std::string label;
};

struct Edge {
    std::size_t source;
    std::size_t target;
    std::size_t label;
    bool operator==(const Edge&) const = default;
};

struct DirectedPath {
    std::vector<std::size_t> vertices;
    Word labels;
    std::size_t length() const { return labels.size(); }
};

struct AcceptResult {
    bool accepted = false;
    DirectedPath path;       ///< the path read so far (full path when accepted)
    std::size_t halt_index;  ///< index of the letter with no outgoing edge; word length when accepted
    explicit operator bool() const { return accepted; }
};

/// Recurrent strongly connected components and the reachability order between them.
struct ComponentDecomposition {
    std::vector<std::vector<std::size_t>> components;  ///< sorted vertex sets
    std::vector<std::ptrdiff_t> component_of;          ///< -1 for transient vertices
    /// (i, j) whenever component j is reachable from component i, i != j.
    std::vector<std::pair<std::size_t, std::size_t>> dag_edges;
    std::vector<double> xi;  ///< Perron root of each component's adjacency matrix

    bool reaches(std::size_t from, std::size_t to) const {
        return std::find(dag_edges.begin(), dag_edges.end(), std::pair{from, to}) != dag_edges.end();
    }
};

enum class SemisimplicityVerdict { pass, not_almost_semisimple, lambda_not_above_one };

inline const char* to_string(SemisimplicityVerdict v) {
    switch (v) {
        case SemisimplicityVerdict::pass: return "pass";
        case SemisimplicityVerdict::not_almost_semisimple: return "not-almost-semisimple";
        case SemisimplicityVerdict::lambda_not_above_one: return "lambda-not-above-one";
    }
    return "?";
}

struct SemisimplicityReport {
    double lambda_estimate = 0;  ///< largest component Perron root
    double lambda_growth = 0;    ///< exp of the least squares slope of log counts
    double K_estimate = 1;       ///< smallest K with K^-1 l^n <= count <= K l^n over the samples
    SemisimplicityVerdict verdict = SemisimplicityVerdict::pass;
    bool growth_fit_pass = false;
    bool spectral_pass = false;
    double ssr_exponential = 0;  ///< residual of log c_n ~ c + n log l on the window
    double ssr_polynomial = 0;   ///< residual of log c_n ~ c + n log l + log n on the window
    int window_begin = 0;
    int window_end = 0;
    std::vector<std::pair<int, BigInt>> growth_samples;
    /// Two distinct top components joined by a directed path, when present.
    std::optional<std::pair<std::size_t, std::size_t>> connected_top_components;

    bool passed() const { return verdict == SemisimplicityVerdict::pass; }
    bool criteria_agree() const { return growth_fit_pass == spectral_pass; }
};

/// Tarjan's algorithm, iterative. Components come out in reverse topological order.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adjacency) {
    const std::size_t n = adjacency.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next child position)
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < adjacency[v].size()) {
                const std::size_t w = adjacency[v][pos++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
            const std::size_t finished = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
        }
    }
    return out;
}

class LabeledDigraph {
public:
    LabeledDigraph() = default;

    /// Validates and builds a digraph. Vertex 0 is the initial vertex.
    static LabeledDigraph build(std::size_t vertex_count, const std::vector<EdgeSpec>& edges,
                                std::vector<std::string> alphabet) {
        if (vertex_count == 0) throw InvalidDigraph("a digraph needs at least the initial vertex");
        LabeledDigraph g;
        g.vertex_count_ = vertex_count;
        g.alphabet_ = std::move(alphabet);
        for (std::size_t i = 0; i < g.alphabet_.size(); ++i)
            for (std::size_t j = i + 1; j < g.alphabet_.size(); ++j)
                if (g.alphabet_[i] == g.alphabet_[j])
                    throw InvalidDigraph("duplicate letter '" + g.alphabet_[i] + "' in alphabet");
        g.next_.assign(vertex_count, std::vector<std::size_t>(g.alphabet_.size(), npos));
        g.out_.assign(vertex_count, {});
        for (const auto& e : edges) {
            if (e.source >= vertex_count || e.target >= vertex_count)
                throw InvalidDigraph("edge endpoint out of range");
            auto label = find_letter(g.alphabet_, e.label);
            if (!label) throw UnknownLetter(e.label);
            if (e.target == 0) throw IncomingEdgeToInitial();
            if (g.next_[e.source][*label] != npos) throw NondeterministicLabel(e.source, e.label);
            g.next_[e.source][*label] = e.target;
            g.out_[e.source].push_back(g.edges_.size());
            g.edges_.push_back(Edge{e.source, e.target, *label});
        }
        std::vector<bool> seen(vertex_count, false);
        std::vector<std::size_t> queue{0};
        seen[0] = true;
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (auto ei : g.out_[queue[head]]) {
                const auto t = g.edges_[ei].target;
                if (!seen[t]) {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        for (std::size_t v = 0; v < vertex_count; ++v)
            if (!seen[v]) throw UnreachableVertex(v);
        return g;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t vertex_count() const { return vertex_count_; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }

    /// Target of the edge leaving v with the given label, or npos.
    std::size_t next(std::size_t v, std::size_t label) const { return next_[v][label]; }

    std::vector<EdgeSpec> edge_specs() const {
        std::vector<EdgeSpec> out;
        out.reserve(edges_.size());
        for (const auto& e : edges_) out.push_back({e.source, e.target, alphabet_[e.label]});
        return out;
    }

    AcceptResult accept(const Word& word) const {
        AcceptResult r;
        r.path.vertices.push_back(0);
        std::size_t v = 0;
        for (std::size_t i = 0; i < word.size(); ++i) {
            const std::size_t t = word[i] < alphabet_.size() ? next_[v][word[i]] : npos;
            if (t == npos) {
                r.halt_index = i;
                return r;
            }
            v = t;
            r.path.vertices.push_back(v);
            r.path.labels.push_back(word[i]);
        }
        r.accepted = true;
        r.halt_index = word.size();
        return r;
    }

    AcceptResult accept(std::string_view text) const { return accept(parse_word(text, alphabet_)); }

    std::vector<std::vector<std::size_t>> adjacency() const {
        std::vector<std::vector<std::size_t>> adj(vertex_count_);
        for (const auto& e : edges_) adj[e.source].push_back(e.target);
        return adj;
    }

    /// Exact number of directed paths of length n from `from` to `to`
    /// (or to any vertex when `to` is empty).
    BigInt count_paths(std::size_t from, std::optional<std::size_t> to, int n) const {
        const auto counts = path_count_vector(from, n);
        if (to) return counts.at(*to);
        BigInt total = 0;
        for (const auto& c : counts) total += c;
        return total;
    }

    /// Entry j is the number of length-n paths from `from` to j.
    std::vector<BigInt> path_count_vector(std::size_t from, int n) const {
        std::vector<BigInt> cur(vertex_count_, 0), nxt(vertex_count_);
        cur.at(from) = 1;
        for (int step = 0; step < n; ++step) {
            std::fill(nxt.begin(), nxt.end(), BigInt(0));
            for (const auto& e : edges_)
                if (cur[e.source] != 0) nxt[e.target] += cur[e.source];
            cur.swap(nxt);
        }
        return cur;
    }

    ComponentDecomposition components() const {
        ComponentDecomposition d;
        const auto adj = adjacency();
        d.component_of.assign(vertex_count_, -1);
        auto sccs = strongly_connected_components(adj);
        // Reverse topological order from Tarjan; present them source-first.
        std::reverse(sccs.begin(), sccs.end());
        for (auto& comp : sccs) {
            bool recurrent = comp.size() > 1;
            if (!recurrent)
                for (auto ei : out_[comp[0]])
                    if (edges_[ei].target == comp[0]) recurrent = true;
            if (!recurrent) continue;
            const std::size_t id = d.components.size();
            for (auto v : comp) d.component_of[v] = static_cast<std::ptrdiff_t>(id);
            DenseMatrix<double> local(comp.size(), comp.size());
            for (std::size_t a = 0; a < comp.size(); ++a)
                for (auto ei : out_[comp[a]]) {
                    auto it = std::lower_bound(comp.begin(), comp.end(), edges_[ei].target);
                    if (it != comp.end() && *it == edges_[ei].target) local(a, it - comp.begin()) += 1.0;
                }
            d.xi.push_back(perron_root_irreducible(local));
            d.components.push_back(std::move(comp));
        }
        for (std::size_t c = 0; c < d.components.size(); ++c) {
            std::vector<bool> seen(vertex_count_, false);
            std::vector<std::size_t> queue(d.components[c].begin(), d.components[c].end());
            for (auto v : queue) seen[v] = true;
            for (std::size_t head = 0; head < queue.size(); ++head)
                for (auto t : adj[queue[head]])
                    if (!seen[t]) {
                        seen[t] = true;
                        queue.push_back(t);
                    }
            for (std::size_t other = 0; other < d.components.size(); ++other)
                if (other != c && seen[d.components[other].front()]) d.dag_edges.emplace_back(c, other);
        }
        return d;
    }

    /// Growth-rate test for almost semisimplicity, cross-checked against the
    /// component criterion (no directed path between two top components).
    SemisimplicityReport check_almost_semisimple(int n_max, double tie_tolerance = 1e-9) const {
        if (n_max < 16) throw Error("check_almost_semisimple needs n_max >= 16");
        SemisimplicityReport report;
        std::vector<BigInt> counts(vertex_count_, 0);
        counts[0] = 1;
        std::vector<BigInt> nxt(vertex_count_);
        for (int n = 0; n <= n_max; ++n) {
            BigInt total = 0;
            for (const auto& c : counts) total += c;
            report.growth_samples.emplace_back(n, total);
            std::fill(nxt.begin(), nxt.end(), BigInt(0));
            for (const auto& e : edges_)
                if (counts[e.source] != 0) nxt[e.target] += counts[e.source];
            counts.swap(nxt);
        }
        if (report.growth_samples.back().second == 0) throw InsufficientGrowth();

        const auto decomposition = components();
        double lambda = 0;
        for (double x : decomposition.xi) lambda = std::max(lambda, x);
        report.lambda_estimate = lambda;

        report.window_begin = n_max / 2;
        report.window_end = n_max;
        {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int m = 0;
            for (int n = report.window_begin; n <= n_max; ++n) {
                const double y = log_of(report.growth_samples[n].second);
                sx += n;
                sy += y;
                sxx += double(n) * n;
                sxy += n * y;
                ++m;
            }
            const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            report.lambda_growth = std::exp(slope);
        }

        if (lambda <= 1.0 + tie_tolerance) {
            report.verdict = SemisimplicityVerdict::lambda_not_above_one;
            return report;
        }

        std::vector<double> r, s;
        for (int n = report.window_begin; n <= n_max; ++n) {
            const double residual = log_of(report.growth_samples[n].second) - n * std::log(lambda);
            r.push_back(residual);
            s.push_back(residual - std::log(double(n)));
        }
        auto ssr = [](const std::vector<double>& v) {
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
            double acc = 0;
            for (double x : v) acc += (x - mean) * (x - mean);
            return acc;
        };
        report.ssr_exponential = ssr(r);
        report.ssr_polynomial = ssr(s);
        report.growth_fit_pass = report.ssr_exponential <= report.ssr_polynomial;

        double log_k = 0;
        for (int n = 1; n <= n_max; ++n) {
            const double dev = log_of(report.growth_samples[n].second) - n * std::log(lambda);
            log_k = std::max(log_k, std::abs(dev));
        }
        report.K_estimate = std::exp(log_k);

        std::vector<std::size_t> top;
        for (std::size_t c = 0; c < decomposition.xi.size(); ++c)
            if (std::abs(decomposition.xi[c] - lambda) <= tie_tolerance * lambda) top.push_back(c);
        report.spectral_pass = true;
        for (auto a : top)
            for (auto b : top)
                if (a != b && decomposition.reaches(a, b)) {
                    report.spectral_pass = false;
                    if (!report.connected_top_components) report.connected_top_components = {a, b};
                }

        report.verdict = (report.growth_fit_pass && report.spectral_pass)
                             ? SemisimplicityVerdict::pass
                             : SemisimplicityVerdict::not_almost_semisimple;
        return report;
    }

    bool operator==(const LabeledDigraph& other) const {
        return vertex_count_ == other.vertex_count_ && alphabet_ == other.alphabet_ &&
               edges_ == other.edges_;
    }

private:
    std::size_t vertex_count_ = 0;
    std::vector<std::string> alphabet_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> next_;
};

}  // namespace hypclt
