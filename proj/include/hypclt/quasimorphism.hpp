#pragma once

// Quasimorphisms on free groups: small and big counting functions, the
// generating-set quasimorphism, defect scans and the Hoelder diagnostic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hypclt/fixtures.hpp"

namespace hypclt {

/// Disjoint occurrences, scanning left to right and restarting after each hit.
template <class Seq>
std::size_t greedy_count(const Seq& word, const Seq& pattern) {
    const std::size_t n = std::size(word), m = std::size(pattern);
    if (m == 0) return 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + m <= n;) {
        if (std::equal(std::begin(pattern), std::end(pattern), std::begin(word) + i)) {
            ++count;
            i += m;
        } else {
            ++i;
        }
    }
    return count;
}

/// Maximal number of disjoint occurrences, by dynamic programming over prefixes.
template <class Seq>
std::size_t max_disjoint_count(const Seq& word, const Seq& pattern) {
    const std::size_t n = std::size(word), m = std::size(pattern);
    if (m == 0) return 0;
    std::vector<std::size_t> best(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        best[i] = best[i - 1];
        if (i >= m && std::equal(std::begin(pattern), std::end(pattern), std::begin(word) + (i - m)))
            best[i] = std::max(best[i], best[i - m] + 1);
    }
    return best[n];
}

/// All occurrences, overlaps allowed.
template <class Seq>
std::size_t overlapping_count(const Seq& word, const Seq& pattern) {
    const std::size_t n = std::size(word), m = std::size(pattern);
    std::size_t count = 0;
    for (std::size_t i = 0; m > 0 && i + m <= n; ++i)
        if (std::equal(std::begin(pattern), std::end(pattern), std::begin(word) + i)) ++count;
    return count;
}

/// A pattern over the standard letters of a free group, stored as reduced-word codes.
struct Pattern {
    Element sigma;
    Element inverse;
    std::string text;

    static Pattern parse(const GroupOracle& oracle, std::string_view text) {
        if (!dynamic_cast<const FreeGroup*>(&oracle.kind())) throw WrongKind("patterns need a free group");
        Pattern p;
        const auto& g = oracle.genset("standard");
        for (auto letter : parse_word(text, g.letters)) p.sigma.push_back(g.values[letter].front());
        if (p.sigma.size() < 2) throw Error("pattern must have length at least 2");
        p.inverse = oracle.inverse(p.sigma);
        p.text = std::string(text);
        return p;
    }
};

inline const FreeGroup& require_free(const GroupOracle& oracle) {
    auto f = dynamic_cast<const FreeGroup*>(&oracle.kind());
    if (!f) throw WrongKind("operation needs a free group");
    return *f;
}

/// Counting function c_sigma(g) over the standard letters. With slack 0 the
/// path is the reduced word; with slack > 0 every path of length up to |g| + slack
/// is searched and the best value |g| - (length - count) is kept.
inline std::int64_t counting_function(const GroupOracle& oracle, const Element& sigma, const Element& g, int slack = 0,
                                      std::size_t budget = 20'000'000) {
    const auto& free = require_free(oracle);
    const int len = int(g.size());
    if (slack == 0) return std::int64_t(greedy_count(g, sigma));
    const int letters = 2 * free.rank();
    std::int64_t best = std::int64_t(greedy_count(g, sigma));
    std::size_t visited = 0;
    Element path;
    for (int total = len + 1; total <= len + slack; ++total) {
        // prefix value h is tracked incrementally; |h^-1 g| must fit in the remaining budget
        std::vector<Element> prefix{Element{}};
        std::vector<int> next{0};
        path.clear();
        while (!next.empty()) {
            if (int(path.size()) == total) {
                if (prefix.back() == g)
                    best = std::max(best, std::int64_t(len - total) + std::int64_t(greedy_count(path, sigma)));
                next.pop_back();
                prefix.pop_back();
                path.pop_back();
                continue;
            }
            int& letter = next.back();
            if (letter == letters) {
                next.pop_back();
                prefix.pop_back();
                if (!path.empty()) path.pop_back();
                continue;
            }
            const std::int32_t s = letter++;
            if (++visited > budget) throw SearchBudgetExceeded(budget);
            Element h = oracle.multiply(prefix.back(), Element{s});
            const int remaining = total - int(path.size()) - 1;
            const int dist = int(oracle.multiply(oracle.inverse(h), g).size());
            if (dist > remaining || (remaining - dist) % 2 != 0) continue;
            path.push_back(s);
            prefix.push_back(std::move(h));
            next.push_back(0);
        }
    }
    return best;
}

inline GroupFunction counting_qm(std::shared_ptr<GroupOracle> oracle, const Pattern& p, int slack = 0) {
    require_free(*oracle);
    return [oracle, p, slack](const Element& g) -> std::int64_t {
        return counting_function(*oracle, p.sigma, g, slack) - counting_function(*oracle, p.inverse, g, slack);
    };
}

/// Brooks counting: overlapping occurrences in the reduced word.
inline GroupFunction big_counting_qm(std::shared_ptr<GroupOracle> oracle, const Pattern& p) {
    require_free(*oracle);
    return [p](const Element& g) -> std::int64_t {
        return std::int64_t(overlapping_count(g, p.sigma)) - std::int64_t(overlapping_count(g, p.inverse));
    };
}

/// psi_S(g) = |g|_S - |g|_{S^-1}, using |g|_{S^-1} = |g^-1|_S.
inline GroupFunction genset_qm(std::shared_ptr<GroupOracle> oracle, const std::string& genset) {
    oracle->genset(genset);
    return [oracle, genset](const Element& g) -> std::int64_t {
        return oracle->word_length(g, genset) - oracle->word_length(oracle->inverse(g), genset);
    };
}

/// Homomorphism of a free group to Z given by integer weights on the generators.
inline GroupFunction free_homomorphism(std::shared_ptr<GroupOracle> oracle, std::vector<std::int64_t> weights) {
    require_free(*oracle);
    return [weights](const Element& g) -> std::int64_t {
        std::int64_t total = 0;
        for (auto x : g) total += (x & 1) ? -weights[x / 2] : weights[x / 2];
        return total;
    };
}

struct DefectReport {
    int radius = 0;
    std::int64_t lower_bound = 0;
    std::string witness_a, witness_b;
    std::size_t pairs = 0;
};

inline DefectReport defect_estimate(const GroupFunction& phi, const GroupOracle& oracle, const std::string& genset,
                                    int radius) {
    const Ball ball = oracle.ball(genset, radius);
    std::vector<std::int64_t> values(ball.size());
    for (std::size_t i = 0; i < ball.size(); ++i) values[i] = phi(ball.elements[i]);
    DefectReport r;
    r.radius = radius;
    r.witness_a = r.witness_b = oracle.format(oracle.identity());
    for (std::size_t i = 0; i < ball.size(); ++i)
        for (std::size_t j = 0; j < ball.size(); ++j) {
            const auto d = std::abs(values[i] + values[j] - phi(oracle.multiply(ball.elements[i], ball.elements[j])));
            ++r.pairs;
            if (d > r.lower_bound) {
                r.lower_bound = d;
                r.witness_a = oracle.format(ball.elements[i]);
                r.witness_b = oracle.format(ball.elements[j]);
            }
        }
    return r;
}

inline double gromov_product(const GroupOracle& oracle, const std::string& genset, const Element& x,
                             const Element& y) {
    const int lx = oracle.word_length(x, genset);
    const int ly = oracle.word_length(y, genset);
    const int lxy = oracle.word_length(oracle.multiply(oracle.inverse(x), y), genset);
    return 0.5 * (lx + ly - lxy);
}

struct HolderLevel {
    int level = 0;  ///< floor of the Gromov product
    std::size_t pairs = 0;
    std::int64_t max_difference = 0;
    std::string witness_x, witness_y;
};

struct HolderReport {
    std::string a;
    int radius = 0;
    std::vector<HolderLevel> levels;
    bool fitted = false;
    double C = 0, c = 0;  ///< log D_k ~ log C - c k over levels with D_k > 0
    bool violation = false;
    std::vector<HolderLevel> violations;  ///< upper-half levels with positive differences
    bool passed() const { return !violation; }
};

/// Samples |Delta_a psi(x) - Delta_a psi(y)|, Delta_a psi(g) = psi(g) - psi(a g), on
/// prefix pairs of the ball plus seeded random pairs that share a prefix and then diverge.
inline HolderReport holder_diagnostic(const GroupFunction& psi, const GroupOracle& oracle, const Element& a,
                                      std::size_t pair_budget, int radius, std::uint64_t seed = 1) {
    const auto& free = require_free(oracle);
    const int letters = 2 * free.rank();
    HolderReport r;
    r.a = oracle.format(a);
    r.radius = radius;
    r.levels.resize(radius + 1);
    for (int k = 0; k <= radius; ++k) r.levels[k].level = k;
    auto delta = [&](const Element& g) { return psi(g) - psi(oracle.multiply(a, g)); };
    auto record = [&](const Element& x, const Element& y, std::int64_t dx, std::int64_t dy) {
        const double gp = gromov_product(oracle, "standard", x, y);
        const int k = std::min(radius, int(std::floor(gp)));
        auto& lv = r.levels[k];
        ++lv.pairs;
        const auto d = std::abs(dx - dy);
        if (d > lv.max_difference || lv.pairs == 1) {
            lv.max_difference = std::max(lv.max_difference, d);
            lv.witness_x = oracle.format(x);
            lv.witness_y = oracle.format(y);
        }
    };
    const Ball ball = oracle.ball("standard", radius);
    for (const auto& x : ball.elements) {
        const auto dx = delta(x);
        for (std::size_t k = 0; k < x.size(); ++k) {
            const Element y(x.begin(), x.begin() + k);
            record(x, y, dx, delta(y));
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_letter(0, letters - 1);
    std::uniform_int_distribution<int> pick_prefix(0, std::max(0, radius - 1));
    auto extend = [&](Element w, int length) {
        while (int(w.size()) < length) {
            const std::int32_t s = pick_letter(rng);
            if (!w.empty() && w.back() == (s ^ 1)) continue;
            w.push_back(s);
        }
        return w;
    };
    for (std::size_t i = 0; i < pair_budget; ++i) {
        const int k = pick_prefix(rng);
        const Element p = extend({}, k);
        Element x = p, y = p;
        std::int32_t s = 0, t = 0;
        do {
            s = pick_letter(rng);
            t = pick_letter(rng);
        } while (s == t || (!p.empty() && (p.back() == (s ^ 1) || p.back() == (t ^ 1))));
        x.push_back(s);
        y.push_back(t);
        x = extend(std::move(x), radius);
        y = extend(std::move(y), radius);
        record(x, y, delta(x), delta(y));
    }
    std::vector<double> ks, logs;
    for (const auto& lv : r.levels)
        if (lv.max_difference > 0) {
            ks.push_back(lv.level);
            logs.push_back(std::log(double(lv.max_difference)));
        }
    if (ks.size() >= 2) {
        const double n = double(ks.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            sx += ks[i];
            sy += logs[i];
            sxx += ks[i] * ks[i];
            sxy += ks[i] * logs[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        r.c = -slope;
        r.C = std::exp((sy - slope * sx) / n);
        r.fitted = true;
    } else if (ks.size() == 1) {
        r.C = std::exp(logs[0]);
        r.fitted = false;
    }
    for (const auto& lv : r.levels)
        if (lv.level > radius / 2 && lv.max_difference > 0) {
            r.violation = true;
            r.violations.push_back(lv);
        }
    return r;
}

}  // namespace hypclt
