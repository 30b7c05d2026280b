#pragma once

/*
 * Exact word arithmetic for the fixture groups: free groups, free products of
 * finite cyclic groups and direct products of those.
 *
 * Elements are stored as canonical normal forms packed into integer vectors,
 * so equality of elements is equality of vectors.
 */

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/functional/hash.hpp>

#include "hypclt/errors.hpp"
#include "hypclt/word.hpp"

namespace hypclt {

using Element = std::vector<std::int32_t>;

struct ElementHash {
    std::size_t operator()(const Element& e) const noexcept {
        return boost::hash_range(e.begin(), e.end());
    }
};

template <class V>
using ElementMap = std::unordered_map<Element, V, ElementHash>;

class GroupKind {
public:
    virtual ~GroupKind() = default;
    virtual std::string name() const = 0;
    virtual Element identity() const { return {}; }
    virtual Element multiply(const Element& a, const Element& b) const = 0;
    virtual Element inverse(const Element& a) const = 0;
    /// Letters of the reference generating set, in their default order.
    virtual std::vector<std::string> base_letters() const = 0;
    virtual Element base_value(std::size_t letter) const = 0;
    virtual std::string format(const Element& e) const = 0;
    /// Value of a single letter token, or nullopt when the token is unknown.
    virtual std::optional<Element> letter_value(std::string_view token) const {
        const auto letters = base_letters();
        if (auto idx = find_letter(letters, token)) return base_value(*idx);
        return std::nullopt;
    }
};

/// Free group; element = freely reduced word, letter i coded 2i, its inverse 2i+1.
class FreeGroup : public GroupKind {
public:
    explicit FreeGroup(int rank, char first_letter = 'a') : rank_(rank), first_(first_letter) {
        if (rank < 1 || first_letter + rank - 1 > 'z') throw Error("unsupported free group rank");
    }
    int rank() const { return rank_; }
    char first_letter() const { return first_; }

    std::string name() const override { return "free(" + std::to_string(rank_) + ")"; }

    Element multiply(const Element& a, const Element& b) const override {
        Element out = a;
        for (auto x : b) {
            if (!out.empty() && out.back() == (x ^ 1))
                out.pop_back();
            else
                out.push_back(x);
        }
        return out;
    }

    Element inverse(const Element& a) const override {
        Element out(a.rbegin(), a.rend());
        for (auto& x : out) x ^= 1;
        return out;
    }

    std::vector<std::string> base_letters() const override {
        std::vector<std::string> out;
        for (int i = 0; i < rank_; ++i) {
            out.emplace_back(1, char(first_ + i));
            out.emplace_back(1, char(std::toupper(first_ + i)));
        }
        return out;
    }

    Element base_value(std::size_t letter) const override { return {std::int32_t(letter)}; }

    std::string format(const Element& e) const override {
        std::string out;
        for (auto x : e) {
            const char c = char(first_ + x / 2);
            out += (x & 1) ? char(std::toupper(c)) : c;
        }
        return out;
    }

private:
    int rank_;
    char first_;
};

/// Free product of cyclic groups Z/m_1 * ... * Z/m_k; element = alternating
/// syllables flattened as (factor, exponent) pairs with 0 < exponent < m.
class FreeProductCyclic : public GroupKind {
public:
    FreeProductCyclic(std::vector<int> orders, std::vector<std::string> names)
        : orders_(std::move(orders)), names_(std::move(names)) {
        if (orders_.empty() || orders_.size() != names_.size())
            throw Error("free product needs one name per factor");
        for (auto m : orders_)
            if (m < 2) throw Error("cyclic factor order must be at least 2");
        for (std::size_t f = 0; f < orders_.size(); ++f) {
            letters_.push_back(names_[f]);
            letter_values_.push_back({std::int32_t(f), 1});
            if (orders_[f] > 2) {
                std::string inv = names_[f];
                for (auto& c : inv) c = char(std::toupper(c));
                letters_.push_back(inv);
                letter_values_.push_back({std::int32_t(f), orders_[f] - 1});
            }
        }
    }

    const std::vector<int>& orders() const { return orders_; }
    const std::vector<std::string>& factor_names() const { return names_; }

    std::string name() const override {
        std::string out = "free_product_cyclic(";
        for (std::size_t i = 0; i < orders_.size(); ++i) out += (i ? "," : "") + std::to_string(orders_[i]);
        return out + ")";
    }

    Element multiply(const Element& a, const Element& b) const override {
        Element out = a;
        for (std::size_t i = 0; i < b.size(); i += 2) {
            const auto f = b[i];
            const auto e = b[i + 1];
            if (!out.empty() && out[out.size() - 2] == f) {
                const auto merged = (out.back() + e) % orders_[f];
                if (merged == 0) {
                    out.resize(out.size() - 2);
                } else {
                    out.back() = merged;
                }
            } else {
                out.push_back(f);
                out.push_back(e);
            }
        }
        return out;
    }

    Element inverse(const Element& a) const override {
        Element out;
        for (std::size_t i = a.size(); i >= 2; i -= 2) {
            out.push_back(a[i - 2]);
            out.push_back(orders_[a[i - 2]] - a[i - 1]);
        }
        return out;
    }

    std::vector<std::string> base_letters() const override { return letters_; }
    Element base_value(std::size_t letter) const override { return letter_values_.at(letter); }

    std::optional<Element> letter_value(std::string_view token) const override {
        if (auto idx = find_letter(letters_, token)) return letter_values_[*idx];
        for (std::size_t f = 0; f < orders_.size(); ++f) {
            if (orders_[f] != 2) continue;
            std::string up = names_[f];
            for (auto& c : up) c = char(std::toupper(c));
            if (up == token) return Element{std::int32_t(f), 1};
        }
        return std::nullopt;
    }

    std::string format(const Element& e) const override {
        std::string out;
        for (std::size_t i = 0; i < e.size(); i += 2) {
            const int m = orders_[e[i]];
            const int k = e[i + 1];
            std::string up = names_[e[i]];
            for (auto& c : up) c = char(std::toupper(c));
            if (k <= m - k || m == 2)
                for (int j = 0; j < k; ++j) out += names_[e[i]];
            else
                for (int j = 0; j < m - k; ++j) out += up;
        }
        return out;
    }

private:
    std::vector<int> orders_;
    std::vector<std::string> names_;
    std::vector<std::string> letters_;
    std::vector<Element> letter_values_;
};

/// Direct product; element = concatenation of length-prefixed factor elements.
class DirectProduct : public GroupKind {
public:
    explicit DirectProduct(std::vector<std::shared_ptr<const GroupKind>> factors)
        : factors_(std::move(factors)) {
        for (std::size_t f = 0; f < factors_.size(); ++f) {
            const auto letters = factors_[f]->base_letters();
            for (std::size_t i = 0; i < letters.size(); ++i) {
                if (find_letter(letters_, letters[i])) throw Error("factor letters must be distinct");
                letters_.push_back(letters[i]);
                letter_origin_.emplace_back(f, i);
            }
        }
    }

    const std::vector<std::shared_ptr<const GroupKind>>& factors() const { return factors_; }
    /// (factor, letter index inside the factor) for each base letter.
    const std::vector<std::pair<std::size_t, std::size_t>>& letter_origin() const { return letter_origin_; }

    std::string name() const override {
        std::string out = "direct_product(";
        for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? "," : "") + factors_[i]->name();
        return out + ")";
    }

    std::vector<Element> split(const Element& e) const {
        std::vector<Element> parts;
        std::size_t pos = 0;
        for (std::size_t f = 0; f < factors_.size(); ++f) {
            const auto len = std::size_t(e.at(pos));
            parts.emplace_back(e.begin() + pos + 1, e.begin() + pos + 1 + len);
            pos += 1 + len;
        }
        return parts;
    }

    Element join(const std::vector<Element>& parts) const {
        Element out;
        for (const auto& p : parts) {
            out.push_back(std::int32_t(p.size()));
            out.insert(out.end(), p.begin(), p.end());
        }
        return out;
    }

    Element identity() const override { return join(std::vector<Element>(factors_.size())); }

    Element multiply(const Element& a, const Element& b) const override {
        auto pa = split(a);
        const auto pb = split(b);
        for (std::size_t f = 0; f < factors_.size(); ++f) pa[f] = factors_[f]->multiply(pa[f], pb[f]);
        return join(pa);
    }

    Element inverse(const Element& a) const override {
        auto pa = split(a);
        for (std::size_t f = 0; f < factors_.size(); ++f) pa[f] = factors_[f]->inverse(pa[f]);
        return join(pa);
    }

    std::vector<std::string> base_letters() const override { return letters_; }

    std::optional<Element> letter_value(std::string_view token) const override {
        for (std::size_t f = 0; f < factors_.size(); ++f)
            if (auto v = factors_[f]->letter_value(token)) {
                std::vector<Element> parts(factors_.size());
                parts[f] = *v;
                return join(parts);
            }
        return std::nullopt;
    }

    Element base_value(std::size_t letter) const override {
        std::vector<Element> parts(factors_.size());
        const auto [f, i] = letter_origin_.at(letter);
        parts[f] = factors_[f]->base_value(i);
        return join(parts);
    }

    std::string format(const Element& e) const override {
        std::string out;
        const auto parts = split(e);
        for (std::size_t f = 0; f < factors_.size(); ++f) out += factors_[f]->format(parts[f]);
        return out;
    }

private:
    std::vector<std::shared_ptr<const GroupKind>> factors_;
    std::vector<std::string> letters_;
    std::vector<std::pair<std::size_t, std::size_t>> letter_origin_;
};

/// A named generating set. Letters are either base letters or "(word)" tokens.
struct Genset {
    std::string name;
    std::vector<std::string> letters;
    std::vector<Element> values;
    std::vector<std::optional<std::size_t>> inverse;  ///< index of the inverse letter, if present
    bool symmetric = false;

    std::size_t size() const { return letters.size(); }
};

/// Exhaustive ball, ordered by word length (sphere by sphere).
struct Ball {
    int radius = 0;
    std::string genset;
    std::vector<Element> elements;
    std::vector<int> lengths;
    std::vector<std::size_t> sphere_begin;  ///< sphere n occupies [sphere_begin[n], sphere_begin[n+1])
    ElementMap<std::size_t> index;

    std::size_t size() const { return elements.size(); }
    std::size_t sphere_size(int n) const { return sphere_begin[n + 1] - sphere_begin[n]; }
    std::optional<int> length_of(const Element& e) const {
        auto it = index.find(e);
        if (it == index.end()) return std::nullopt;
        return lengths[it->second];
    }
};

enum class LengthStrategy { free_tiling, product, ball_search };

class GroupOracle {
public:
    static constexpr int default_max_radius = 12;

    explicit GroupOracle(std::shared_ptr<const GroupKind> kind, int max_radius = default_max_radius)
        : kind_(std::move(kind)), max_radius_(max_radius) {
        add_genset("standard", kind_->base_letters());
        alias("S1", "standard");
    }

    GroupOracle(const GroupOracle&) = delete;
    GroupOracle& operator=(const GroupOracle&) = delete;

    const GroupKind& kind() const { return *kind_; }
    std::shared_ptr<const GroupKind> kind_ptr() const { return kind_; }
    int max_radius() const { return max_radius_; }
    void set_max_radius(int r) { max_radius_ = r; }

    Element identity() const { return kind_->identity(); }
    Element multiply(const Element& a, const Element& b) const { return kind_->multiply(a, b); }
    Element inverse(const Element& a) const { return kind_->inverse(a); }
    std::string format(const Element& e) const { return kind_->format(e); }

    /// Evaluates a word written in base letters ("abAB", "ststtt").
    Element parse_base(std::string_view text) const {
        Element e = identity();
        for (const auto& token : tokenize_letters(text)) {
            auto v = kind_->letter_value(token);
            if (!v) throw UnknownLetter(token);
            e = multiply(e, *v);
        }
        return e;
    }

    /// Registers a generating set; each entry is a base letter or a "(word)" token.
    const Genset& add_genset(const std::string& name, const std::vector<std::string>& letters) {
        Genset g;
        g.name = name;
        for (const auto& token : letters) {
            std::string body = token;
            if (token.size() > 2 && token.front() == '(' && token.back() == ')')
                body = token.substr(1, token.size() - 2);
            const Element value = parse_base(body);
            if (value == identity()) throw Error("generating set letter '" + token + "' is trivial");
            if (find_letter(g.letters, token)) throw Error("duplicate letter '" + token + "'");
            g.letters.push_back(token);
            g.values.push_back(value);
        }
        finish_genset(g);
        return install(std::move(g));
    }

    /// Generating set S^-1 = {s^-1 : s in S}; letter names are derived from the values.
    const Genset& inverse_genset(const std::string& name) {
        const std::string inv_name = name + "^-1";
        if (has_genset(inv_name)) return genset(inv_name);
        const Genset& s = genset(name);
        std::vector<std::string> tokens;
        for (const auto& v : s.values) tokens.push_back(letter_name(inverse(v)));
        return add_genset(inv_name, tokens);
    }

    void alias(const std::string& alias_name, const std::string& target) {
        aliases_[alias_name] = target;
    }

    bool has_genset(const std::string& name) const {
        return gensets_.count(resolve(name)) > 0;
    }

    const Genset& genset(const std::string& name) const {
        auto it = gensets_.find(resolve(name));
        if (it == gensets_.end()) throw UnknownGenset(name);
        return it->second->genset;
    }

    std::vector<std::string> genset_names() const {
        std::vector<std::string> out;
        for (const auto& [n, _] : gensets_) out.push_back(n);
        return out;
    }

    LengthStrategy strategy(const std::string& name) const {
        auto it = gensets_.find(resolve(name));
        if (it == gensets_.end()) throw UnknownGenset(name);
        return it->second->strategy;
    }

    /// Name for the letter with a given value: a base letter when it is one, else "(word)".
    std::string letter_name(const Element& value) const {
        const auto base = kind_->base_letters();
        for (std::size_t i = 0; i < base.size(); ++i)
            if (kind_->base_value(i) == value) return base[i];
        return "(" + format(value) + ")";
    }

    Element evaluate(const Word& w, const std::string& genset_name) const {
        const auto& g = genset(genset_name);
        Element e = identity();
        for (auto letter : w) {
            if (letter >= g.size()) throw UnknownLetter(std::to_string(letter));
            e = multiply(e, g.values[letter]);
        }
        return e;
    }

    Element evaluate(std::string_view text, const std::string& genset_name) const {
        return evaluate(parse_word(text, genset(genset_name).letters), genset_name);
    }

    /// Inverse word for a symmetric generating set.
    Word inverse_word(const Word& w, const std::string& genset_name) const {
        const auto& g = genset(genset_name);
        Word out;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            if (!g.inverse[*it]) throw Error("letter '" + g.letters[*it] + "' has no inverse in " + g.name);
            out.push_back(*g.inverse[*it]);
        }
        return out;
    }

    int word_length(const Element& e, const std::string& genset_name) const {
        auto it = gensets_.find(resolve(genset_name));
        if (it == gensets_.end()) throw UnknownGenset(genset_name);
        Entry& entry = *it->second;
        switch (entry.strategy) {
            case LengthStrategy::free_tiling: return tiling_length(entry, e);
            case LengthStrategy::product: {
                const auto& dp = static_cast<const DirectProduct&>(*kind_);
                const auto parts = dp.split(e);
                int total = 0;
                for (std::size_t f = 0; f < parts.size(); ++f)
                    total += entry.factor_oracles[f]->word_length(parts[f], "sub");
                return total;
            }
            case LengthStrategy::ball_search: break;
        }
        std::lock_guard lock(entry.memo_mutex);
        Ball& memo = entry.memo;
        for (;;) {
            if (auto len = memo.length_of(e)) return *len;
            if (memo.radius >= max_radius_) throw RadiusExceeded(memo.radius + 1, max_radius_);
            extend_ball(memo, entry.genset);
        }
    }

    int word_length(std::string_view base_word, const std::string& genset_name) const {
        return word_length(parse_base(base_word), genset_name);
    }

    Ball ball(const std::string& genset_name, int radius) const {
        if (radius > max_radius_) throw RadiusExceeded(radius, max_radius_);
        const auto& g = genset(genset_name);
        Ball b;
        b.genset = g.name;
        b.elements.push_back(identity());
        b.lengths.push_back(0);
        b.index.emplace(identity(), 0);
        b.sphere_begin = {0, 1};
        b.radius = 0;
        while (b.radius < radius) extend_ball(b, g);
        return b;
    }

private:
    struct Entry {
        Genset genset;
        LengthStrategy strategy = LengthStrategy::ball_search;
        std::vector<Element> tiles;  // reduced letter values for the tiling strategy
        std::vector<std::shared_ptr<GroupOracle>> factor_oracles;
        mutable std::mutex memo_mutex;
        mutable Ball memo;
    };

    std::string resolve(const std::string& name) const {
        auto it = aliases_.find(name);
        return it == aliases_.end() ? name : it->second;
    }

    void finish_genset(Genset& g) const {
        g.inverse.assign(g.size(), std::nullopt);
        g.symmetric = true;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Element inv = inverse(g.values[i]);
            for (std::size_t j = 0; j < g.size(); ++j)
                if (g.values[j] == inv) g.inverse[i] = j;
            if (!g.inverse[i]) g.symmetric = false;
        }
    }

    const Genset& install(Genset g) {
        auto entry = std::make_unique<Entry>();
        entry->genset = std::move(g);
        choose_strategy(*entry);
        entry->memo.genset = entry->genset.name;
        entry->memo.elements.push_back(identity());
        entry->memo.lengths.push_back(0);
        entry->memo.index.emplace(identity(), 0);
        entry->memo.sphere_begin = {0, 1};
        const std::string name = entry->genset.name;
        aliases_.erase(name);
        gensets_[name] = std::move(entry);
        return gensets_[name]->genset;
    }

    // Free groups: if every letter pair that cancels at its junction multiplies to
    // an element of length <= 1, no geodesic has a cancelling junction, so
    // geodesics are exactly the tilings of the reduced word by letter values.
    void choose_strategy(Entry& entry) const {
        const Genset& g = entry.genset;
        if (dynamic_cast<const FreeGroup*>(kind_.get())) {
            bool ok = true;
            for (std::size_t i = 0; i < g.size() && ok; ++i)
                for (std::size_t j = 0; j < g.size() && ok; ++j) {
                    const auto& x = g.values[i];
                    const auto& y = g.values[j];
                    if (x.back() != (y.front() ^ 1)) continue;
                    const Element p = multiply(x, y);
                    if (p == identity()) continue;
                    if (std::find(g.values.begin(), g.values.end(), p) == g.values.end()) ok = false;
                }
            if (ok) {
                entry.strategy = LengthStrategy::free_tiling;
                entry.tiles = g.values;
            }
            return;
        }
        if (auto dp = dynamic_cast<const DirectProduct*>(kind_.get())) {
            std::vector<std::vector<std::string>> tokens(dp->factors().size());
            for (const auto& v : g.values) {
                const auto parts = dp->split(v);
                std::size_t support = 0, factor = 0;
                for (std::size_t f = 0; f < parts.size(); ++f)
                    if (!parts[f].empty()) {
                        ++support;
                        factor = f;
                    }
                if (support != 1) return;
                tokens[factor].push_back("(" + dp->factors()[factor]->format(parts[factor]) + ")");
            }
            std::vector<std::shared_ptr<GroupOracle>> subs;
            for (std::size_t f = 0; f < tokens.size(); ++f) {
                if (tokens[f].empty()) return;
                auto sub = std::make_shared<GroupOracle>(dp->factors()[f], max_radius_);
                sub->add_genset("sub", tokens[f]);
                subs.push_back(std::move(sub));
            }
            entry.strategy = LengthStrategy::product;
            entry.factor_oracles = std::move(subs);
        }
    }

    int tiling_length(const Entry& entry, const Element& e) const {
        const std::size_t n = e.size();
        constexpr int inf = 1 << 29;
        std::vector<int> best(n + 1, inf);
        best[0] = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (best[i] == inf) continue;
            for (const auto& tile : entry.tiles) {
                if (i + tile.size() > n) continue;
                if (!std::equal(tile.begin(), tile.end(), e.begin() + i)) continue;
                best[i + tile.size()] = std::min(best[i + tile.size()], best[i] + 1);
            }
        }
        if (best[n] == inf) throw Error("element is not a product of generating set letters");
        return best[n];
    }

    void extend_ball(Ball& b, const Genset& g) const {
        const std::size_t begin = b.sphere_begin[b.radius];
        const std::size_t end = b.sphere_begin[b.radius + 1];
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& v : g.values) {
                Element next = multiply(b.elements[i], v);
                if (b.index.count(next)) continue;
                b.index.emplace(next, b.elements.size());
                b.elements.push_back(std::move(next));
                b.lengths.push_back(b.radius + 1);
            }
        ++b.radius;
        b.sphere_begin.push_back(b.elements.size());
    }

    std::shared_ptr<const GroupKind> kind_;
    int max_radius_;
    std::map<std::string, std::unique_ptr<Entry>> gensets_;
    std::map<std::string, std::string> aliases_;
};

}  // namespace hypclt
