#include <gtest/gtest.h>

#include "support.hpp"

using namespace hypclt;

namespace {

/// phi_ab computed straight from the reduced word: disjoint ab minus disjoint BA.
std::int64_t phi_ab_direct(const std::string& w) {
    std::int64_t c = 0, ci = 0;
    for (std::size_t i = 0; i + 1 < w.size();) {
        if (w.compare(i, 2, "ab") == 0) {
            ++c;
            i += 2;
        } else {
            ++i;
        }
    }
    for (std::size_t i = 0; i + 1 < w.size();) {
        if (w.compare(i, 2, "BA") == 0) {
            ++ci;
            i += 2;
        } else {
            ++i;
        }
    }
    return c - ci;
}

}  // namespace

TEST(Combable, WordLengthFunction) {
    const auto f = word_length_function(fixture("PSL2Z").combing);
    EXPECT_EQ(f.evaluate(std::string_view("stsT")), 4);
    EXPECT_EQ(f.evaluate(Word{}), 0);
    EXPECT_THROW(f.evaluate(std::string_view("ss")), NotAccepted);
}

TEST(Combable, SynthesizedCountingFunctionMatchesDirectCount) {
    const auto fx = fixture("F2_standard");
    const auto phi = counting_qm(fx.oracle, Pattern::parse(*fx.oracle, "ab"));
    const auto out = synthesize_dphi(fx.combing, phi, 2, 8);
    ASSERT_TRUE(out) << out.failure->reason;
    const auto& f = *out.function;
    for (int n = 0; n <= 8; ++n)
        for (const auto& w : testing_support::reduced_words(n)) {
            const auto fw = f.combing.digraph.accept(f.combing.parse(w));
            ASSERT_TRUE(fw.accepted) << w;
            EXPECT_EQ(f.evaluate(std::string_view(w)), phi_ab_direct(w)) << w;
        }
    // dphi is bounded by one in absolute value
    for (auto d : f.dphi) EXPECT_LE(std::abs(d), 1);
    EXPECT_EQ(check_subdivision(f, 6) <= 3, true);
}

TEST(Combable, ZxZ2SucceedsOnLAndFailsOnLprime) {
    const auto good = fixture("ZxZ2_L");
    const auto ok = synthesize_dphi(good.combing, good.phi, 2, 10);
    ASSERT_TRUE(ok);
    for (auto d : ok.function->dphi) EXPECT_LE(std::abs(d), 1);
    EXPECT_EQ(ok.function->evaluate(std::string_view("aaa")), 3);
    EXPECT_EQ(ok.function->evaluate(std::string_view("bAA")), 0);

    const auto bad = fixture("ZxZ2_Lprime");
    const auto fail = synthesize_dphi(bad.combing, bad.phi, 2, 10);
    ASSERT_FALSE(fail);
    const auto& inc = fail.max_abs_increment;
    // increments along (ab)^n grow without bound
    EXPECT_GE(inc.back(), 8);
    for (std::size_t n = 2; n < inc.size(); ++n) EXPECT_GE(inc[n], inc[n - 2]);
    EXPECT_GT(fail.failure->max_increment - fail.failure->min_increment, 10);
}

TEST(Combable, SynthesisArgumentChecks) {
    const auto fx = fixture("F2_enlarged");
    const GroupFunction zero = [](const Element&) -> std::int64_t { return 0; };
    EXPECT_THROW(synthesize_dphi(fx.combing, zero, 1, 9), RadiusExceeded);
    EXPECT_THROW(synthesize_dphi(fx.combing, zero, 0, 4), Error);
}

TEST(Combable, AcceptedWordSearch) {
    const auto fx = fixture("F2_enlarged");
    const auto f = word_length_function(fx.combing);
    const auto g = fx.oracle->parse_base("abab");
    const auto w = f.accepted_word(g);
    EXPECT_EQ(w.size(), 2u);
    EXPECT_EQ(fx.combing.evaluate(w), g);
    EXPECT_EQ(f.evaluate(g), 2);
    EXPECT_THROW(f.accepted_word(fx.oracle->parse_base("aaaaaaaa")), OutsideVerifiedRadius);
}

TEST(Combable, LinearCombinationOnProductAutomaton) {
    const auto fx = fixture("F2_standard");
    const auto len = word_length_function(fx.combing);
    const auto phi = *synthesize_dphi(fx.combing, counting_qm(fx.oracle, Pattern::parse(*fx.oracle, "ab")), 2, 8).function;
    const auto h = combine(len, phi, 2, -3);
    for (int n = 0; n <= 5; ++n)
        for (const auto& w : testing_support::reduced_words(n))
            EXPECT_EQ(h.evaluate(std::string_view(w)), 2 * std::int64_t(w.size()) - 3 * phi_ab_direct(w)) << w;
    const auto other = word_length_function(fixture("PSL2Z").combing);
    EXPECT_THROW(combine(len, other), MismatchedDigraph);
}

TEST(Combable, LipschitzOfCountingFunction) {
    auto o = free_group_oracle();
    const auto phi = counting_qm(o, Pattern::parse(*o, "ab"));
    const auto r = check_lipschitz(phi, *o, "standard", 6);
    EXPECT_LE(r.left_constant, 2);
    EXPECT_LE(r.right_constant, 2);
    EXPECT_FALSE(r.left_growing);
    EXPECT_FALSE(r.right_growing);
}

TEST(Combable, ZxZ2FunctionIsNotLipschitz) {
    const auto fx = fixture("ZxZ2_L");
    const auto r = check_lipschitz(fx.phi, *fx.oracle, "standard", 8);
    EXPECT_TRUE(r.left_growing);
    EXPECT_EQ(r.left_constant, 8);
}

TEST(Combable, ValueTableCoversBall) {
    const auto fx = fixture("PSL2Z");
    const auto f = word_length_function(fx.combing);
    const auto table = f.value_table(6);
    const auto ball = fx.oracle->ball("standard", 6);
    ASSERT_EQ(table.size(), ball.size());
    for (std::size_t i = 0; i < ball.size(); ++i) EXPECT_EQ(table.at(ball.elements[i]), ball.lengths[i]);
}
