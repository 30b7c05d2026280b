#pragma once

// Named fixture groups with their combing automata, plus two small engineered
// digraphs used by the statistics tests.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hypclt/combing.hpp"

namespace hypclt {

using GroupFunction = std::function<std::int64_t(const Element&)>;

struct Fixture {
    std::string name;
    std::shared_ptr<GroupOracle> oracle;
    Combing combing;
    GroupFunction phi;  ///< set for fixtures that come with a function
};

inline std::vector<std::string> fixture_names() {
    return {"F2_standard", "F2_enlarged", "PSL2Z", "ZxZ2_L", "ZxZ2_Lprime", "F2xF2_concat"};
}

inline std::shared_ptr<GroupOracle> free_group_oracle(int rank = 2, int max_radius = GroupOracle::default_max_radius) {
    auto oracle = std::make_shared<GroupOracle>(std::make_shared<FreeGroup>(rank), max_radius);
    if (rank >= 2) {
        oracle->add_genset("S2", {"a", "A", "b", "B", "(ab)", "(BA)"});
        oracle->add_genset("S3", {"a", "A", "b", "B", "(ab)"});
    }
    return oracle;
}

inline std::shared_ptr<GroupOracle> psl2z_oracle(int max_radius = GroupOracle::default_max_radius) {
    return std::make_shared<GroupOracle>(
        std::make_shared<FreeProductCyclic>(std::vector<int>{2, 3}, std::vector<std::string>{"s", "t"}),
        max_radius);
}

inline std::shared_ptr<GroupOracle> zxz2_oracle(int max_radius = GroupOracle::default_max_radius) {
    std::vector<std::shared_ptr<const GroupKind>> factors{
        std::make_shared<FreeGroup>(1, 'a'),
        std::make_shared<FreeProductCyclic>(std::vector<int>{2}, std::vector<std::string>{"b"})};
    auto oracle = std::make_shared<GroupOracle>(std::make_shared<DirectProduct>(factors), max_radius);
    oracle->add_genset("Sprime", {"b", "(ab)", "(BA)"});
    return oracle;
}

inline std::shared_ptr<GroupOracle> f2xf2_oracle(int max_radius = GroupOracle::default_max_radius) {
    std::vector<std::shared_ptr<const GroupKind>> factors{std::make_shared<FreeGroup>(2, 'a'),
                                                          std::make_shared<FreeGroup>(2, 'c')};
    return std::make_shared<GroupOracle>(std::make_shared<DirectProduct>(factors), max_radius);
}

/// phi(a^n) = n, phi(b a^n) = 0 on Z x Z/2.
inline GroupFunction zxz2_function(std::shared_ptr<GroupOracle> oracle) {
    return [oracle](const Element& e) -> std::int64_t {
        const auto& dp = static_cast<const DirectProduct&>(oracle->kind());
        const auto parts = dp.split(e);
        if (!parts[1].empty()) return 0;
        std::int64_t n = 0;
        for (auto x : parts[0]) n += (x & 1) ? -1 : 1;
        return n;
    };
}

namespace detail {

inline Combing make_combing(std::shared_ptr<GroupOracle> oracle, const std::string& genset, std::size_t vertices,
                            const std::vector<EdgeSpec>& edges, int verified_radius) {
    Combing c;
    c.digraph = LabeledDigraph::build(vertices, edges, oracle->genset(genset).letters);
    c.genset = oracle->genset(genset).name;
    c.verified_radius = verified_radius;
    c.oracle = std::move(oracle);
    return c;
}

}  // namespace detail

inline Fixture fixture(const std::string& name) {
    Fixture f;
    f.name = name;
    if (name == "F2_standard") {
        f.oracle = free_group_oracle();
        f.combing = reduced_word_combing(f.oracle);
    } else if (name == "F2_enlarged") {
        f.oracle = free_group_oracle();
        LexFirstOptions opt;
        opt.verify_radius = 7;
        f.combing = lex_first_combing(f.oracle, "S2", opt);
    } else if (name == "PSL2Z") {
        f.oracle = psl2z_oracle();
        // vertices: 0 initial, 1 after s, 2 after t, 3 after T
        f.combing = detail::make_combing(f.oracle, "standard", 4,
                                         {{0, 1, "s"}, {0, 2, "t"}, {0, 3, "T"}, {1, 2, "t"}, {1, 3, "T"},
                                          {2, 1, "s"}, {3, 1, "s"}},
                                         f.oracle->max_radius());
    } else if (name == "ZxZ2_L") {
        f.oracle = zxz2_oracle();
        // a^n, A^n, b a^n, b A^n
        f.combing = detail::make_combing(f.oracle, "standard", 6,
                                         {{0, 1, "a"}, {0, 2, "A"}, {0, 3, "b"}, {1, 1, "a"}, {2, 2, "A"},
                                          {3, 4, "a"}, {3, 5, "A"}, {4, 4, "a"}, {5, 5, "A"}},
                                         f.oracle->max_radius());
        f.phi = zxz2_function(f.oracle);
    } else if (name == "ZxZ2_Lprime") {
        f.oracle = zxz2_oracle();
        // (ab)^n, (BA)^n, b (ab)^n, b (BA)^n
        f.combing = detail::make_combing(f.oracle, "Sprime", 6,
                                         {{0, 1, "(ab)"}, {0, 2, "(BA)"}, {0, 3, "b"}, {1, 1, "(ab)"},
                                          {2, 2, "(BA)"}, {3, 4, "(ab)"}, {3, 5, "(BA)"}, {4, 4, "(ab)"},
                                          {5, 5, "(BA)"}},
                                         f.oracle->max_radius());
        f.phi = zxz2_function(f.oracle);
    } else if (name == "F2xF2_concat") {
        f.oracle = f2xf2_oracle(8);
        // u v with u reduced over {a,A,b,B} and v reduced over {c,C,d,D}
        const auto& letters = f.oracle->genset("standard").letters;
        std::vector<EdgeSpec> edges;
        for (std::size_t k = 0; k < 8; ++k) edges.push_back({0, k + 1, letters[k]});
        for (std::size_t k = 0; k < 8; ++k)
            for (std::size_t l = 0; l < 8; ++l) {
                const bool same_factor = (k < 4) == (l < 4);
                if (same_factor && (k ^ 1) == l) continue;
                if (k >= 4 && l < 4) continue;
                edges.push_back({k + 1, l + 1, letters[l]});
            }
        f.combing = detail::make_combing(f.oracle, "standard", 9, edges, 6);
    } else {
        throw UnknownFixture(name);
    }
    return f;
}

/// Digraph plus vertex weights, for fixtures that have no group behind them.
struct WeightedDigraph {
    LabeledDigraph digraph;
    std::vector<std::int64_t> dphi;
};

/// Fair coin: after v1 the walk is an i.i.d. sequence of letters 0/1; dphi counts ones.
inline WeightedDigraph coin_fixture() {
    return {LabeledDigraph::build(3,
                                  {{0, 1, "0"}, {0, 2, "1"}, {1, 1, "0"}, {1, 2, "1"}, {2, 1, "0"}, {2, 2, "1"}},
                                  {"0", "1"}),
            {0, 0, 1}};
}

/// Two disjoint coin cores of growth 2 entered from v1; one counts ones, the other zeros.
inline WeightedDigraph two_core_fixture() {
    return {LabeledDigraph::build(5,
                                  {{0, 1, "0"}, {0, 3, "1"},
                                   {1, 1, "0"}, {1, 2, "1"}, {2, 1, "0"}, {2, 2, "1"},
                                   {3, 3, "0"}, {3, 4, "1"}, {4, 3, "0"}, {4, 4, "1"}},
                                  {"0", "1"}),
            {0, 0, 1, 1, 0}};
}

}  // namespace hypclt
