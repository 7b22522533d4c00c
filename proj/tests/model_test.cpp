#include <gtest/gtest.h>

#include <random>

#include "noise_lab/model.hpp"
#include "noise_lab/projection_laws.hpp"
#include "support.hpp"

using namespace noise_lab;
using namespace noise_lab::testing;

TEST(Model, TwoFairCoins) {
    const NoiseModel m = fair_coins(2);
    EXPECT_EQ(m.size(), 4u);
    for (std::size_t w = 0; w < 4; ++w) EXPECT_EQ(m.point_mass(w), q(1, 4));
    std::vector<std::uint64_t> supports;
    for (std::size_t k = 0; k < 4; ++k) supports.push_back(m.support_bits(k));
    EXPECT_EQ(supports, (std::vector<std::uint64_t>{0b00, 0b10, 0b01, 0b11}));
}

TEST(Model, ThreeValuedCell) {
    const NoiseModel m({uniform_cell(3)});
    EXPECT_EQ(m.size(), 3u);
    EXPECT_EQ(m.support_bits(0), 0u);
    EXPECT_EQ(m.support_bits(1), 1u);
    EXPECT_EQ(m.support_bits(2), 1u);
}

TEST(Model, RejectsBadCells) {
    EXPECT_THROW(NoiseModel({Cell{{q(1, 2), q(1, 2), q(0)}}}), InputError);
    EXPECT_THROW(NoiseModel({Cell{{q(1)}}}), InputError);
    try {
        NoiseModel({Cell{{q(1, 2), q(1, 3)}}});
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("probabilities sum to 5/6 ≠ 1"), std::string::npos) << e.what();
    }
    EXPECT_THROW(NoiseModel(std::vector<Cell>(30, uniform_cell(2)), 1 << 20), ResourceError);
}

TEST(Model, InnerProducts) {
    const NoiseModel m = fair_coins(2);
    const auto one = m.constant(1);
    EXPECT_EQ(m.inner_product(one, one), 1);
    EXPECT_EQ(m.inner_product(sign(m, 0), sign(m, 0)), 1);
    EXPECT_EQ(m.inner_product(sign(m, 0), sign(m, 1)), 0);
    EXPECT_THROW(m.inner_product(one, RandomVariable(3, Rational(1))), InputError);
}

TEST(Model, SigmaFields) {
    const NoiseModel m = fair_coins(2);
    EXPECT_TRUE(m.sigma_field_of(BoolElem::zero(2)).is_trivial());
    EXPECT_TRUE(m.sigma_field_of(BoolElem::one(2)).is_discrete());
    const Partition p = m.sigma_field_of(elem(2, {0}));
    EXPECT_EQ(p.blocks(), (std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}}));
}

TEST(Model, ProjectionExamples) {
    const NoiseModel m = fair_coins(2);
    const RandomVariable r12 = sign(m, 0) * sign(m, 1);
    EXPECT_TRUE(m.project(elem(2, {0}), r12).is_zero());
    EXPECT_TRUE(m.project_oracle(elem(2, {0}), r12).is_zero());
    std::mt19937_64 rng(1);
    for (int i = 0; i < 5; ++i) {
        const RandomVariable psi = random_vector(m, rng);
        EXPECT_EQ(m.project(BoolElem::zero(2), psi), m.constant(m.expectation(psi)));
        EXPECT_EQ(m.project_oracle(BoolElem::zero(2), psi), m.constant(m.expectation(psi)));
        EXPECT_EQ(m.project(BoolElem::one(2), psi), psi);
        EXPECT_EQ(m.project_oracle(BoolElem::one(2), psi), psi);
    }
}

TEST(Model, WalshBasisProperties) {
    std::mt19937_64 rng(2);
    for (const auto& shape : shapes(3, {2, 3, 4})) {
        const NoiseModel m = random_model(rng, shape);
        const std::size_t N = m.size();
        Rational total = 0;
        for (std::size_t w = 0; w < N; ++w) total += m.point_mass(w);
        ASSERT_EQ(total, 1);
        std::vector<RandomVariable> e;
        for (std::size_t k = 0; k < N; ++k) e.push_back(m.walsh_vector(k));
        for (std::size_t a = 0; a < N; ++a) {
            ASSERT_EQ(m.inner_product(e[a], e[a]), m.walsh_norm2(a));
            ASSERT_GT(m.walsh_norm2(a), 0);
            for (std::size_t b = a + 1; b < N; ++b) ASSERT_EQ(m.inner_product(e[a], e[b]), 0);
            // Disjoint supports multiply: flat indices add because digits do not overlap.
            for (std::size_t b = 0; b < N; ++b) {
                if ((m.support_bits(a) & m.support_bits(b)) == 0) ASSERT_EQ(e[a] * e[b], e[a + b]);
            }
        }
        const RandomVariable psi = random_vector(m, rng);
        ASSERT_EQ(m.reconstruct(m.coefficients(psi)), psi);
    }
}

TEST(Model, ProjectionIsSelfAdjointIdempotentAndMatchesOracle) {
    std::mt19937_64 rng(3);
    for (const auto& shape : shapes(3, {2, 3})) {
        const NoiseModel m = random_model(rng, shape);
        const std::size_t n = m.n_cells();
        for (const auto& x : m.algebra().elements()) {
            for (std::size_t k = 0; k < m.size(); ++k) {
                RandomVariable basis = m.zero_vector();
                basis[k] = 1;
                ASSERT_EQ(m.project(x, basis), m.project_oracle(x, basis)) << x.to_string();
            }
            const RandomVariable f = random_vector(m, rng), g = random_vector(m, rng);
            const RandomVariable qf = m.project(x, f);
            ASSERT_EQ(m.project(x, qf), qf);
            ASSERT_EQ(m.inner_product(qf, g), m.inner_product(f, m.project(x, g)));
        }
        (void)n;
    }
}

TEST(ProjectionLaws, TwoCoinsExhaustive) {
    const auto rep = verify_projection_laws(fair_coins(2));
    EXPECT_TRUE(rep.passed());
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_EQ(rep.pairs_checked, 16u);
}

TEST(ProjectionLaws, StrictSuperadditivity) {
    const NoiseModel m = fair_coins(2);
    const RandomVariable psi = sign(m, 0) * sign(m, 1);
    const Rational lhs = m.norm2(m.project(elem(2, {0}), psi)) + m.norm2(m.project(elem(2, {1}), psi));
    EXPECT_EQ(lhs, 0);
    EXPECT_EQ(m.norm2(m.project(BoolElem::one(2), psi)), 1);
}

TEST(ProjectionLaws, RandomExactAndFloat) {
    std::mt19937_64 rng(4);
    for (const auto& shape : shapes(3, {2, 3})) {
        const NoiseModel m = random_model(rng, shape);
        const auto rep = verify_projection_laws(m);
        ASSERT_TRUE(rep.passed()) << rep.violations.front().law;
    }
    for (int i = 0; i < 5; ++i) {
        std::vector<Cell> cells;
        for (int c = 0; c < 6; ++c) cells.push_back(random_cell(rng, 2 + rng() % 2));
        const FloatNoiseModel fm(cells);
        const auto rep = verify_projection_laws(fm, {.exhaustive_limit = 16, .sample_pairs = 64});
        ASSERT_TRUE(rep.passed()) << rep.violations.front().law << " " << rep.violations.front().detail;
        EXPECT_FALSE(rep.exhaustive);
    }
}

TEST(ProjectionLaws, DetectsBrokenOperator) {
    // Float models with probabilities that do not sum to 1 are rejected up front.
    EXPECT_THROW(FloatNoiseModel({Cell{{q(1, 3), q(1, 3)}}}), InputError);
}
