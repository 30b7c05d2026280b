#include <gtest/gtest.h>

#include "support.hpp"

using namespace hypclt;

TEST(Spectral, FreeGroupStandard) {
    const auto s = analyze<double>(fixture("F2_standard").combing.digraph);
    ASSERT_TRUE(s.ok());
    EXPECT_NEAR(s.lambda_value, 3.0, 1e-9);
    // rho(1) is proportional to (4/3, 1, 1, 1, 1), ell(v1) to (0, 1/3, 1/3, 1/3, 1/3)
    const std::vector<double> rho{4.0 / 3, 1, 1, 1, 1}, ell{0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(s.rho_one[i] / s.rho_one[1], rho[i], 1e-9);
        EXPECT_NEAR(s.ell_v1[i] * 3 / (s.ell_v1[1] * 3), ell[i] * 3, 1e-9);
        EXPECT_NEAR(s.mu[i], i == 0 ? 0.0 : 0.25, 1e-10);
    }
    for (std::size_t i = 0; i < 5; ++i) {
        double row = 0;
        for (std::size_t j = 0; j < 5; ++j) row += s.N(i, j);
        EXPECT_NEAR(row, 1.0, 1e-12);
    }
}

TEST(Spectral, FreeGroupExact) {
    const auto s = analyze<Rational>(fixture("F2_standard").combing.digraph);
    ASSERT_TRUE(s.ok());
    EXPECT_EQ(s.lambda, Rational(3));
    EXPECT_EQ(s.mu[0], Rational(0));
    for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(s.mu[i], Rational(1, 4));
    EXPECT_EQ(s.N(0, 1), Rational(1, 4));
    EXPECT_EQ(s.N(1, 1), Rational(1, 3));
    EXPECT_EQ(s.rho_one[0] / s.rho_one[1], Rational(4, 3));
}

TEST(Spectral, ModularGroup) {
    const auto s = analyze<double>(fixture("PSL2Z").combing.digraph);
    ASSERT_TRUE(s.ok());
    EXPECT_NEAR(s.lambda_value, std::sqrt(2.0), 1e-12);
    // stationarity and stochasticity
    for (std::size_t j = 0; j < 4; ++j) {
        double acc = 0;
        for (std::size_t i = 0; i < 4; ++i) acc += s.mu[i] * s.N(i, j);
        EXPECT_NEAR(acc, s.mu[j], 1e-12);
    }
    // s-vertex carries half the stationary mass (every other letter is s)
    EXPECT_NEAR(s.mu[1], 0.5, 1e-12);
    EXPECT_THROW(analyze<Rational>(fixture("PSL2Z").combing.digraph), IrrationalPerronRoot);
}

TEST(Spectral, VerdictsWithoutProjections) {
    const auto bad = analyze<double>(fixture("F2xF2_concat").combing.digraph);
    EXPECT_EQ(bad.verdict, SemisimplicityVerdict::not_almost_semisimple);
    EXPECT_TRUE(bad.support.violation.has_value());
    EXPECT_TRUE(bad.mu.empty());
    const auto flat = analyze<double>(fixture("ZxZ2_L").combing.digraph);
    EXPECT_EQ(flat.verdict, SemisimplicityVerdict::lambda_not_above_one);
}

TEST(Spectral, ProjectorIdentitiesOnRandomDigraphs) {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int trial = 0; checked < 40 && trial < 2000; ++trial) {
        const auto g = testing_support::random_digraph(rng, 10, 3, 0.3);
        if (perron(g) <= 1.0 + 1e-6) continue;
        const auto s = analyze<double>(g);
        if (!s.ok()) continue;
        ++checked;
        const std::size_t n = g.vertex_count();
        const auto M = testing_support::dense(g);
        // projector is idempotent
        const auto P2 = s.projector * s.projector;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(P2(i, j), s.projector(i, j), 1e-10);
        // M rho = lambda rho, M^T ell = lambda ell
        for (std::size_t i = 0; i < n; ++i) {
            double a = 0, b = 0;
            for (std::size_t j = 0; j < n; ++j) {
                a += M[i][j] * s.rho_one[j];
                b += M[j][i] * s.ell_v1[j];
            }
            EXPECT_NEAR(a, s.lambda_value * s.rho_one[i], 1e-10);
            EXPECT_NEAR(b, s.lambda_value * s.ell_v1[i], 1e-10);
        }
        // rows of N sum to one; mu is stationary
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0, col = 0;
            for (std::size_t j = 0; j < n; ++j) {
                row += s.N(i, j);
                col += s.mu[j] * s.N(j, i);
            }
            EXPECT_NEAR(row, 1.0, 1e-10);
            EXPECT_NEAR(col, s.mu[i], 1e-10);
        }
    }
    EXPECT_EQ(checked, 40);
}

TEST(Spectral, CesaroAverageApproachesProjection) {
    const auto s = analyze<double>(fixture("PSL2Z").combing.digraph);
    const auto approx = s.rho_cesaro(std::vector<double>(4, 1.0), 4000);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(approx[i], s.rho_one[i], 5e-3);
}

TEST(Spectral, ConeWeightsAreAdditive) {
    const auto f = fixture("F2_standard");
    const auto s = analyze<double>(f.combing.digraph);
    const auto tree = enumerate_accepted(f.combing, 4);
    for (std::size_t i = 0; i < tree.level_begin[4]; ++i) {
        const auto w = tree.word(i);
        double children = 0;
        for (std::size_t l = 0; l < 4; ++l) {
            auto v = w;
            v.push_back(l);
            if (f.combing.digraph.accept(v)) children += cone_weight(s, v);
        }
        EXPECT_NEAR(children, cone_weight(s, w), 1e-12);
    }
    // uniform on each sphere: 3^-n rho(1) at a support vertex
    EXPECT_NEAR(cone_weight(s, f.combing.parse("abA")) / cone_weight(s, Word{}), (1.0 / 27) * 0.75, 1e-12);
}

TEST(Spectral, PoincareSeriesTermsConverge) {
    auto o = free_group_oracle();
    const auto p = poincare_diagnostics(*o, "standard", 8);
    EXPECT_NEAR(p.lambda, 3.0, 1e-12);
    for (int n = 1; n <= 8; ++n) EXPECT_NEAR(p.terms[n], 4.0 / 3, 1e-12);
    EXPECT_NEAR(p.critical_exponent, std::log(3.0), 1e-12);
}
