#include <gtest/gtest.h>

#include "support.hpp"

using namespace hypclt;

TEST(Counting, GreedyEqualsMaxDisjointOnShortWords) {
    // exhaustive over a three-letter alphabet, words up to length 8
    const std::string letters = "xyz";
    std::vector<std::string> words{""}, patterns;
    for (int n = 1; n <= 8; ++n) {
        std::vector<std::string> next;
        for (const auto& w : words)
            if (int(w.size()) == n - 1)
                for (char c : letters) next.push_back(w + c);
        for (auto& w : next) {
            if (n == 2 || n == 3) patterns.push_back(w);
            words.push_back(std::move(w));
        }
    }
    for (const auto& p : patterns)
        for (const auto& w : words) ASSERT_EQ(greedy_count(w, p), max_disjoint_count(w, p)) << w << " " << p;
}

TEST(Counting, OverlappingCount) {
    EXPECT_EQ(overlapping_count(std::string("aaaa"), std::string("aa")), 3u);
    EXPECT_EQ(greedy_count(std::string("aaaa"), std::string("aa")), 2u);
    EXPECT_EQ(greedy_count(std::string("abc"), std::string("")), 0u);
}

TEST(Counting, AlternatingFamily) {
    auto o = free_group_oracle();
    const auto p = Pattern::parse(*o, "abab");
    const auto phi = counting_qm(o, p);
    for (int n = 1; n <= 5; ++n) {
        std::string ab;
        for (int i = 0; i < 2 * n; ++i) ab += "ab";
        EXPECT_EQ(phi(o->parse_base("b" + ab)), n);
        EXPECT_EQ(phi(o->parse_base(ab + "ab")), n);
        EXPECT_EQ(phi(o->parse_base("b" + ab + "ab")), n);
        EXPECT_EQ(phi(o->parse_base(ab + "abab")), n + 1);
    }
}

TEST(Counting, SlackSearchNeverLosesAndAgreesOnFreeGroup) {
    auto o = free_group_oracle();
    const auto p = Pattern::parse(*o, "abab");
    for (const char* w : {"bababab", "abababab", "abAB", "aabab"}) {
        const auto g = o->parse_base(w);
        EXPECT_EQ(counting_function(*o, p.sigma, g, 2), counting_function(*o, p.sigma, g, 0)) << w;
    }
    EXPECT_THROW(counting_function(*o, p.sigma, o->parse_base("abababababab"), 4, 1000), SearchBudgetExceeded);
}

TEST(Counting, PatternValidation) {
    auto o = free_group_oracle();
    EXPECT_THROW(Pattern::parse(*o, "a"), Error);
    EXPECT_THROW(Pattern::parse(*psl2z_oracle(), "st"), WrongKind);
    const auto p = Pattern::parse(*o, "ab");
    EXPECT_EQ(o->format(p.inverse), "BA");
}

TEST(Defect, HomomorphismHasZeroDefect) {
    auto o = free_group_oracle();
    const auto h = free_homomorphism(o, {1, -2});
    const auto r = defect_estimate(h, *o, "standard", 3);
    EXPECT_EQ(r.lower_bound, 0);
    EXPECT_EQ(h(o->parse_base("aab")), 0);
}

TEST(Defect, CountingFunctionsHaveSmallPositiveDefect) {
    auto o = free_group_oracle();
    const auto small = counting_qm(o, Pattern::parse(*o, "ab"));
    const auto r = defect_estimate(small, *o, "standard", 3);
    EXPECT_GT(r.lower_bound, 0);
    EXPECT_LE(r.lower_bound, 3);
    const auto big = big_counting_qm(o, Pattern::parse(*o, "aa"));
    const auto rb = defect_estimate(big, *o, "standard", 3);
    EXPECT_GT(rb.lower_bound, 0);
    EXPECT_LE(rb.lower_bound, 3);
}

TEST(Genset, SymmetricGensetGivesZeroQuasimorphism) {
    auto o = free_group_oracle();
    const auto psi = genset_qm(o, "S2");
    for (const auto& e : o->ball("standard", 5).elements) EXPECT_EQ(psi(e), 0);
    const auto psi3 = genset_qm(o, "S3");
    EXPECT_EQ(psi3(o->parse_base("ab")), -1);
    EXPECT_EQ(psi3(o->parse_base("BA")), 1);
}

TEST(Holder, BigCountingIsHolder) {
    auto o = free_group_oracle();
    const auto big = big_counting_qm(o, Pattern::parse(*o, "ab"));
    const auto r = holder_diagnostic(big, *o, o->parse_base("a"), 2000, 8, 3);
    EXPECT_TRUE(r.passed());
    for (const auto& lv : r.levels)
        if (lv.level > 2) EXPECT_EQ(lv.max_difference, 0) << lv.level;
}

TEST(Holder, SmallCountingForAbabViolates) {
    auto o = free_group_oracle();
    const auto small = counting_qm(o, Pattern::parse(*o, "abab"));
    const auto r = holder_diagnostic(small, *o, o->parse_base("a"), 2000, 10, 3);
    EXPECT_FALSE(r.passed());
    ASSERT_FALSE(r.violations.empty());
    EXPECT_GT(r.violations.back().level, 5);
}

TEST(Holder, NeedsFreeGroup) {
    auto o = psl2z_oracle();
    const GroupFunction zero = [](const Element&) -> std::int64_t { return 0; };
    EXPECT_THROW(holder_diagnostic(zero, *o, o->parse_base("s"), 10, 4), WrongKind);
}
