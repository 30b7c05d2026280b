#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "support.hpp"

using namespace hypclt;

namespace {

CombableFunction phi_ab() {
    const auto fx = fixture("F2_standard");
    return *synthesize_dphi(fx.combing, counting_qm(fx.oracle, Pattern::parse(*fx.oracle, "ab")), 2, 8).function;
}

}  // namespace

TEST(Drift, CoinExact) {
    const auto coin = coin_fixture();
    const auto s = analyze<Rational>(coin.digraph);
    const auto r = drift_variance(s, coin.dphi);
    EXPECT_EQ(r.E, Rational(1, 2));
    EXPECT_EQ(r.sigma2, Rational(1, 4));
    const auto m = moment_oracle(s, coin.dphi, 10);
    EXPECT_EQ(m.mean, Rational(5));
    EXPECT_EQ(m.variance, Rational(10, 4));
}

TEST(Drift, WordLengthIsDegenerate) {
    const auto f = word_length_function(fixture("F2_standard").combing);
    const auto s = analyze<Rational>(f.combing.digraph);
    const auto r = drift_variance(s, f);
    EXPECT_EQ(r.E, Rational(1));
    EXPECT_EQ(r.sigma2, Rational(0));
    const auto m = moment_oracle(s, f.dphi, 17);
    EXPECT_EQ(m.mean, Rational(17));
    EXPECT_EQ(m.variance, Rational(0));
}

TEST(Drift, MomentsMatchUniformEnumeration) {
    // on F2 with the standard generators the chain law is uniform on each sphere
    const auto f = phi_ab();
    const auto s = analyze<Rational>(f.combing.digraph);
    for (int n = 1; n <= 7; ++n) {
        Rational sum(0), sq(0);
        const auto words = testing_support::reduced_words(n);
        for (const auto& w : words) {
            const auto v = f.evaluate(std::string_view(w));
            sum += v;
            sq += v * v;
        }
        const Rational count(words.size());
        const auto m = moment_oracle(s, f.dphi, n);
        EXPECT_EQ(m.mean, sum / count) << n;
        EXPECT_EQ(m.variance, sq / count - (sum / count) * (sum / count)) << n;
    }
}

TEST(Drift, CountingFunctionVarianceConsistency) {
    const auto f = phi_ab();
    const auto s = analyze<Rational>(f.combing.digraph);
    const auto r = drift_variance(s, f.dphi);
    EXPECT_EQ(r.E, Rational(0));
    EXPECT_GT(r.sigma2, Rational(0));
    const auto m = moment_oracle(s, f.dphi, 200);
    EXPECT_LE(std::abs(to_double(m.variance) / 200 - to_double(r.sigma2)), 5.0 / 200);
    const auto sd = analyze<double>(f.combing.digraph);
    const auto rd = drift_variance(sd, f.dphi);
    EXPECT_NEAR(rd.sigma2, to_double(r.sigma2), 1e-10);
}

TEST(Drift, ScaleEquivariance) {
    const auto f = phi_ab();
    const auto s = analyze<double>(f.combing.digraph);
    auto scaled = f.dphi;
    for (auto& x : scaled) x *= 3;
    const auto a = drift_variance(s, f.dphi), b = drift_variance(s, scaled);
    EXPECT_NEAR(b.E, 3 * a.E, 1e-12);
    EXPECT_NEAR(b.sigma, 3 * a.sigma, 1e-10);
}

TEST(Drift, IndependentOfParameterization) {
    // same language, each non-initial vertex split by the parity of the word length
    const auto f = phi_ab();
    const auto& g = f.combing.digraph;
    const auto lift = [](std::size_t v, std::size_t p) { return v == 0 ? 0 : 1 + 2 * (v - 1) + p; };
    std::vector<EdgeSpec> edges;
    for (const auto& e : g.edge_specs())
        for (std::size_t p = 0; p < 2; ++p) {
            if (e.source == 0 && p == 1) continue;
            const std::size_t q = e.source == 0 ? 1 : 1 - p;
            edges.push_back({lift(e.source, p), lift(e.target, q), e.label});
        }
    const auto h = LabeledDigraph::build(2 * g.vertex_count() - 1, edges, g.alphabet());
    std::vector<std::int64_t> dphi(h.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (std::size_t p = 0; p < 2; ++p) dphi[lift(v, p)] = f.dphi[v];
    const auto a = analyze<Rational>(g), b = analyze<Rational>(h);
    ASSERT_TRUE(b.ok());
    const auto ra = drift_variance(a, f.dphi), rb = drift_variance(b, dphi);
    EXPECT_EQ(ra.E, rb.E);
    EXPECT_EQ(ra.sigma2, rb.sigma2);
    const auto tree = enumerate_accepted(f.combing, 5);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto w = tree.word(i);
        EXPECT_EQ(cone_weight(a, w) / cone_weight(a, Word{}), cone_weight(b, w) / cone_weight(b, Word{}));
    }
}

TEST(Drift, TwoCoresAgree) {
    const auto t = two_core_fixture();
    const auto s = analyze<double>(t.digraph);
    const auto r = drift_variance(s, t.dphi);
    ASSERT_EQ(r.per_component.size(), 2u);
    EXPECT_TRUE(r.components_agree);
    EXPECT_NEAR(r.per_component[0].E, r.per_component[1].E, 1e-8);
    EXPECT_NEAR(r.per_component[0].sigma, r.per_component[1].sigma, 1e-8);
}

TEST(Drift, DisagreementIsReported) {
    const auto t = two_core_fixture();
    const auto s = analyze<double>(t.digraph);
    const auto r = drift_variance(s, std::vector<std::int64_t>{0, 0, 1, 1, 1});
    EXPECT_FALSE(r.components_agree);
}

TEST(Drift, InputChecks) {
    const auto coin = coin_fixture();
    const auto s = analyze<double>(coin.digraph);
    EXPECT_THROW(drift_variance(s, std::vector<std::int64_t>{0, 1}), MismatchedDigraph);
    const auto f = word_length_function(fixture("F2_standard").combing);
    EXPECT_THROW(drift_variance(s, f), MismatchedDigraph);
    const auto bad = analyze<double>(fixture("F2xF2_concat").combing.digraph);
    EXPECT_THROW(drift_variance(bad, std::vector<std::int64_t>(9, 1)), NotAlmostSemisimple);
}

TEST(Sampling, FirstLetterIsUniform) {
    const auto s = analyze<double>(fixture("F2_standard").combing.digraph);
    SampleOptions opt;
    opt.keep_words = true;
    const std::size_t count = 400000;
    const auto b = sample(s, 1, count, 5, nullptr, opt);
    std::map<std::size_t, std::size_t> freq;
    for (const auto& w : b.words) freq[w[0]]++;
    const double se = std::sqrt(0.25 * 0.75 / count);
    for (std::size_t l = 0; l < 4; ++l) EXPECT_NEAR(freq[l] / double(count), 0.25, 3 * se);
}

TEST(Sampling, PrefixFrequenciesFollowConeWeights) {
    const auto f = fixture("PSL2Z");
    const auto s = analyze<double>(f.combing.digraph);
    SampleOptions opt;
    opt.keep_words = true;
    const std::size_t count = 100000;
    const auto b = sample(s, 10, count, 9, nullptr, opt);
    std::map<Word, std::size_t> freq;
    for (const auto& w : b.words) freq[Word(w.begin(), w.begin() + 3)]++;
    const double total = cone_weight(s, Word{});
    for (const auto& [prefix, c] : freq) {
        const double p = cone_weight(s, prefix) / total;
        EXPECT_NEAR(c / double(count), p, 4 * std::sqrt(p * (1 - p) / count)) << f.combing.format(prefix);
    }
}

TEST(Sampling, DeterministicAcrossThreadCounts) {
    const auto f = phi_ab();
    const auto s = analyze<double>(f.combing.digraph);
    SampleOptions one, three;
    one.threads = 1;
    three.threads = 3;
    const auto a = sample(s, 30, 5000, 77, &f.dphi, one);
    const auto b = sample(s, 30, 5000, 77, &f.dphi, three);
    EXPECT_EQ(a.phi_values, b.phi_values);
    EXPECT_EQ(a.end_vertices, b.end_vertices);
    const auto c = sample(s, 30, 5000, 78, &f.dphi, one);
    EXPECT_NE(a.phi_values, c.phi_values);
}

TEST(Sampling, WordsAreAcceptedAndValuesMatch) {
    const auto f = phi_ab();
    const auto s = analyze<double>(f.combing.digraph);
    SampleOptions opt;
    opt.keep_words = true;
    const auto b = sample(s, 12, 300, 3, &f.dphi, opt);
    for (std::size_t i = 0; i < b.count; ++i) {
        ASSERT_EQ(b.words[i].size(), 12u);
        EXPECT_EQ(f.evaluate(b.words[i]), b.phi_values[i]);
    }
    EXPECT_TRUE(sample(s, 12, 0, 3).end_vertices.empty());
}

TEST(Empirical, DegenerateWordLength) {
    const auto f = word_length_function(fixture("F2_standard").combing);
    const auto s = analyze<double>(f.combing.digraph);
    const auto clt = drift_variance(analyze<Rational>(f.combing.digraph), f.dphi);
    CltReport<double> r;
    r.E = to_double(clt.E);
    r.sigma2 = to_double(clt.sigma2);
    const auto e = empirical_clt(s, f.dphi, r, 50, 2000, 1);
    EXPECT_TRUE(e.degenerate);
    EXPECT_EQ(e.degenerate_max_abs, 0.0);
}

TEST(Empirical, CoinBinomial) {
    const auto coin = coin_fixture();
    const auto s = analyze<double>(coin.digraph);
    const auto r = drift_variance(s, coin.dphi);
    const auto e = empirical_clt(s, coin.dphi, r, 400, 20000, 12);
    EXPECT_LT(e.ks_corrected, 0.02);
    EXPECT_NEAR(e.variance, 1.0, 0.05);
    EXPECT_NEAR(e.mean, 0.0, 0.05);
    std::size_t total = 0;
    for (const auto& b : e.histogram) total += b.count;
    EXPECT_EQ(total, 20000u);
}

TEST(Empirical, KolmogorovSmirnovOnKnownSample) {
    // values 0..9 once each against Normal(4.5 * 1, 1 * sigma2 = 8.25): hand-checked moments
    std::vector<std::int64_t> v(10);
    std::iota(v.begin(), v.end(), 0);
    const auto e = empirical_from_values(v, 1, 4.5, 8.25);
    EXPECT_NEAR(e.mean, 0.0, 1e-12);
    EXPECT_NEAR(e.variance, 1.0, 1e-12);
    EXPECT_NEAR(e.skewness, 0.0, 1e-12);
    EXPECT_NEAR(e.excess_kurtosis, 1.7757575757575759 - 3.0, 1e-9);
    EXPECT_EQ(e.lattice_span, 1);
}

TEST(Typicality, ProfileOnCoinRay) {
    const auto coin = coin_fixture();
    const auto s = analyze<double>(coin.digraph);
    SampleOptions opt;
    opt.keep_words = true;
    const auto ray = sample(s, 200000, 1, 4, nullptr, opt);
    const auto t = typicality_profile(coin.digraph, coin.dphi, ray.words[0], 100, 190000, 0.5);
    EXPECT_EQ(t.values.size(), 190000u);
    EXPECT_NEAR(t.mean, 0.0, 0.1);
    EXPECT_NEAR(t.variance, 0.25, 0.025);
    EXPECT_THROW(typicality_profile(coin.digraph, coin.dphi, ray.words[0], 100, 199901, 0.5), TooShort);
}

TEST(Typicality, WordLengthIsDirac) {
    const auto f = word_length_function(fixture("PSL2Z").combing);
    const auto w = f.combing.parse("ststsTstsTst");
    const auto t = typicality_profile(f.combing.digraph, f.dphi, w, 4, 8, 1.0);
    for (double x : t.values) EXPECT_EQ(x, 0.0);
}

TEST(Compare, SameGensetGivesOne) {
    const auto fx = fixture("F2_standard");
    CompareOptions opt;
    opt.radius = 6;
    opt.depth = 1;
    opt.growth_radius = 8;
    opt.fit_to = 8;
    opt.check_n = 9;
    const auto r = compare_gensets(fx.combing, "standard", opt);
    EXPECT_NEAR(r.E, 1.0, 1e-12);
    EXPECT_NEAR(r.lambda12, 1.0, 1e-12);
    for (const auto& row : r.rows) EXPECT_NEAR(row.mean_abs_deviation, 0.0, 1e-9);
}
