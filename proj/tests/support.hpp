#pragma once

// Brute-force helpers shared by the tests. None of these use the library's
// combing or spectral code.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hypclt/hypclt.hpp"

namespace testing_support {

/// All reduced words of length n over a, A, b, B as strings.
inline std::vector<std::string> reduced_words(int n) {
    const std::string letters = "aAbB";
    auto inverse = [](char c) { return char(std::islower(c) ? std::toupper(c) : std::tolower(c)); };
    std::vector<std::string> out{""};
    for (int k = 0; k < n; ++k) {
        std::vector<std::string> next;
        for (const auto& w : out)
            for (char c : letters)
                if (w.empty() || w.back() != inverse(c)) next.push_back(w + c);
        out.swap(next);
    }
    return out;
}

/// Dense adjacency with parallel edges counted.
inline std::vector<std::vector<double>> dense(const hypclt::LabeledDigraph& g) {
    std::vector<std::vector<double>> m(g.vertex_count(), std::vector<double>(g.vertex_count(), 0.0));
    for (const auto& e : g.edges()) m[e.source][e.target] += 1;
    return m;
}

/// Random digraph on at most max_vertices vertices with every vertex reachable
/// from vertex 0 and no edge into 0. Labels are letter indices rendered as strings.
inline hypclt::LabeledDigraph random_digraph(std::mt19937_64& rng, std::size_t max_vertices, std::size_t letters,
                                             double density) {
    std::uniform_int_distribution<std::size_t> size(2, max_vertices);
    const std::size_t n = size(rng);
    std::vector<std::string> alphabet;
    for (std::size_t i = 0; i < letters; ++i) alphabet.push_back(std::to_string(i));
    std::vector<std::vector<bool>> used(n, std::vector<bool>(letters, false));
    std::vector<hypclt::EdgeSpec> edges;
    std::uniform_int_distribution<std::size_t> letter(0, letters - 1);
    auto add = [&](std::size_t s, std::size_t t) {
        for (std::size_t tries = 0; tries < 4 * letters; ++tries) {
            const auto l = letter(rng);
            if (!used[s][l]) {
                used[s][l] = true;
                edges.push_back({s, t, alphabet[l]});
                return true;
            }
        }
        return false;
    };
    // spanning tree from 0
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> parent(0, v - 1);
        while (!add(parent(rng), v)) {
        }
    }
    std::bernoulli_distribution coin(density);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 1; t < n; ++t)
            if (coin(rng)) add(s, t);
    return hypclt::LabeledDigraph::build(n, edges, alphabet);
}

}  // namespace testing_support
