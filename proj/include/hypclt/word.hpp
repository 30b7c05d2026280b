#pragma once

// Words over named letters. A letter is either a single character ("a", "B")
// or a parenthesised token ("(ab)", "(BA)") that acts as one symbol.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypclt/errors.hpp"

namespace hypclt {

/// A word as a sequence of letter indices into some alphabet.
using Word = std::vector<std::size_t>;

inline std::vector<std::string> tokenize_letters(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '.' || c == ',') {
            ++i;
            continue;
        }
        if (c == '(') {
            const auto close = text.find(')', i);
            if (close == std::string_view::npos) throw UnknownLetter(std::string(text.substr(i)));
            out.emplace_back(text.substr(i, close - i + 1));
            i = close + 1;
        } else {
            out.emplace_back(1, c);
            ++i;
        }
    }
    return out;
}

inline std::optional<std::size_t> find_letter(const std::vector<std::string>& alphabet,
                                              std::string_view letter) {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == letter) return i;
    return std::nullopt;
}

inline Word parse_word(std::string_view text, const std::vector<std::string>& alphabet) {
    Word w;
    for (const auto& token : tokenize_letters(text)) {
        auto idx = find_letter(alphabet, token);
        if (!idx) throw UnknownLetter(token);
        w.push_back(*idx);
    }
    return w;
}

inline std::string format_word(const Word& w, const std::vector<std::string>& alphabet) {
    std::string out;
    for (auto letter : w) out += alphabet.at(letter);
    return out;
}

}  // namespace hypclt
