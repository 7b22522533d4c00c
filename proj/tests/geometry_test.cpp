#include <gtest/gtest.h>

#include <random>

#include "noise_lab/geometry.hpp"
#include "support.hpp"

using namespace noise_lab;
using namespace noise_lab::testing;

namespace {

struct ThreePoints {
    NoiseModel m = fair_coins(3);
    SpectralSpace space{m};
    Embedding emb = build_embedding(m, {q(1, 5), q(1, 3), q(2, 3)});
};

RegOpen ro(std::vector<RegOpen::Piece> raw) { return make_regopen(std::move(raw)); }

/// t_i = (2i+1)/(2n+1): odd denominators, never dyadic.
Embedding odd_points(std::size_t n) {
    std::vector<Rational> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back(q(static_cast<long>(2 * i + 1), static_cast<long>(2 * n + 1)));
    return {n, t};
}

} // namespace

TEST(Embedding, Validation) {
    ThreePoints g;
    EXPECT_EQ(g.emb.n_cells(), 3u);
    EXPECT_THROW(build_embedding(g.m, {q(1, 5), q(1, 4), q(2, 3)}), InputError);
    try {
        build_embedding(g.m, {q(1, 4), q(1, 3), q(2, 3)});
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("sample point on a potential boundary"), std::string::npos);
    }
    EXPECT_THROW(build_embedding(g.m, {q(1, 3), q(1, 5), q(2, 3)}), InputError);
    EXPECT_THROW(build_embedding(g.m, {q(1, 3), q(1, 3), q(2, 3)}), InputError);
    EXPECT_THROW(build_embedding(g.m, {q(1, 5), q(1, 3)}), InputError);
    EXPECT_THROW(build_embedding(g.m, {q(1, 5), q(1, 3), q(4, 3)}), InputError);
    EXPECT_EQ(g.emb.h(ro({{q(0), q(1, 2)}})), elem(3, {0, 1}));
}

TEST(Embedding, Homomorphism) {
    ThreePoints g;
    const auto rep = verify_homomorphism(g.emb, 3, 1000, 0);
    EXPECT_TRUE(rep.passed()) << (rep.violations.empty() ? "" : rep.violations.front());
    EXPECT_EQ(rep.pairs, 256u * 256u + 1000u);
}

TEST(DyadicBase, Shape) {
    const auto base = dyadic_base(2);
    // Depth 0: [0,1]; depth 1 adds [0,1/2), (1/2,1]; depth 2 adds [0,1/4), (1/4,3/4), (1/2,1].
    std::vector<std::string> names;
    for (const auto& b : base) names.push_back(b.set.to_string());
    EXPECT_EQ(names, (std::vector<std::string>{"[0,1]", "[0,1/2)", "(1/2,1]", "[0,1/4)", "(1/4,3/4)", "(3/4,1]"}));
}

TEST(SpectralSetMap, Examples) {
    ThreePoints g;
    EXPECT_EQ(g.emb.spectral_points(0b101), (std::vector<Rational>{q(1, 5), q(2, 3)}));
    const auto empty = spectral_set_map(g.emb, 0, 4);
    EXPECT_TRUE(empty.closed_form.empty());
    EXPECT_TRUE(empty.approximant.empty());

    const auto f3 = spectral_set_map(g.emb, 0b010, 3);
    EXPECT_EQ(f3.approximant.to_string(), "[1/4,3/8]");
    EXPECT_TRUE(f3.contains_closed_form);
    EXPECT_TRUE(f3.hausdorff_ok);
    EXPECT_TRUE(f3.order_independent);
    EXPECT_EQ(f3.hausdorff, q(1, 12));
}

TEST(SpectralSetMap, ShrinksWithDepth) {
    ThreePoints g;
    for (std::uint64_t atom = 0; atom < 8; ++atom) {
        Rational prev = 2;
        for (std::size_t d = 0; d <= 10; ++d) {
            const auto f = spectral_set_map(g.emb, atom, d);
            ASSERT_TRUE(f.contains_closed_form);
            ASSERT_TRUE(f.hausdorff_ok) << atom << " " << d;
            ASSERT_TRUE(f.order_independent);
            ASSERT_LE(f.hausdorff, prev);
            prev = f.hausdorff;
        }
        const auto deep = spectral_set_map(g.emb, atom, 10);
        ASSERT_TRUE(deep.stabilization_depth.has_value() || atom == 0);
    }
}

TEST(ClosureIdentity, ExamplesAndSweep) {
    ThreePoints g;
    EXPECT_TRUE(verify_closure_identity(g.emb, g.space, ro({{q(0), q(1, 2)}})));
    EXPECT_EQ(spectral_set(g.space, g.emb.h(ro({{q(0), q(1, 2)}}))).members, (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_TRUE(verify_closure_identity(g.emb, g.space, RegOpen::one()));
    EXPECT_TRUE(verify_closure_identity(g.emb, g.space, RegOpen::zero()));
    EXPECT_THROW(verify_closure_identity(g.emb, g.space, ro({{q(0), q(1, 3)}})), InputError);

    for (std::size_t n = 1; n <= 5; ++n) {
        const SpectralSpace s(fair_coins(n));
        const Embedding e = odd_points(n);
        for (const auto& a : dyadic_family(3)) ASSERT_TRUE(verify_closure_identity(e, s, a)) << n << " " << a.to_string();
        for (const auto& b : dyadic_base(6)) {
            ASSERT_TRUE(verify_closure_identity(e, s, b.set));
            ASSERT_TRUE(verify_closure_identity(e, s, reg_complement(b.set)));
        }
    }
}

TEST(MonotoneLimit, Examples) {
    ThreePoints g;
    const auto full = monotone_limit_check(g.emb, g.space, left_exhausting_chain(6));
    EXPECT_TRUE(full.sup_is_one);
    EXPECT_TRUE(full.every_atom_covered);
    EXPECT_TRUE(full.equivalent());

    const RegOpen half = ro({{q(0), q(1, 2)}});
    const auto stuck = monotone_limit_check(g.emb, g.space, {half, half, half});
    EXPECT_EQ(stuck.supremum, elem(3, {0, 1}));
    EXPECT_FALSE(stuck.every_atom_covered);
    EXPECT_EQ(stuck.uncovered_atom, std::optional<std::uint64_t>(0b100));
    EXPECT_TRUE(stuck.equivalent());

    EXPECT_THROW(monotone_limit_check(g.emb, g.space, {}), InputError);
    EXPECT_THROW(monotone_limit_check(g.emb, g.space, {RegOpen::one(), half}), InputError);
}

TEST(InnerApprox, Examples) {
    ThreePoints g;
    const auto a = inner_approx(g.emb, ro({{q(0), q(1, 3)}}));
    EXPECT_EQ(a.value, elem(3, {0}));
    EXPECT_TRUE(a.agrees());
    EXPECT_TRUE(inner_approx(g.emb, RegOpen::one()).value.is_one());
    const RegOpen half = ro({{q(0), q(1, 2)}});
    EXPECT_EQ(inner_approx(g.emb, half).value, g.emb.h(half));

    std::mt19937_64 rng(13);
    for (int i = 0; i < 300; ++i) {
        const RegOpen r = random_regopen(rng);
        const auto x = inner_approx(g.emb, r), y = inner_approx(g.emb, reg_complement(r));
        ASSERT_TRUE(x.agrees()) << r.to_string();
        ASSERT_TRUE((x.value & y.value).empty());
    }
}

TEST(BoundaryDichotomy, Examples) {
    ThreePoints g;
    const auto hit = boundary_dichotomy(g.emb, g.space, ro({{q(0), q(1, 3)}}));
    EXPECT_EQ(hit.join, elem(3, {0, 2}));
    EXPECT_FALSE(hit.join_is_one);
    EXPECT_FALSE(hit.no_sample_on_boundary);
    EXPECT_EQ(hit.witness_atom, std::optional<std::uint64_t>(0b010));
    EXPECT_TRUE(hit.equivalence_holds());

    const auto clean = boundary_dichotomy(g.emb, g.space, ro({{q(0), q(1, 2)}}));
    EXPECT_TRUE(clean.join_is_one);
    EXPECT_TRUE(clean.no_sample_on_boundary);
    EXPECT_EQ(clean.complementarity, std::optional<bool>(true));

    const auto zero = boundary_dichotomy(g.emb, g.space, RegOpen::zero());
    EXPECT_TRUE(zero.join_is_one);
    EXPECT_TRUE(zero.equivalence_holds());
}

TEST(BoundaryDichotomy, RandomSweep) {
    ThreePoints g;
    std::mt19937_64 rng(14);
    std::size_t hitting = 0;
    for (int i = 0; i < 1000; ++i) {
        const RegOpen r = random_regopen(rng);
        const auto rep = boundary_dichotomy(g.emb, g.space, r);
        ASSERT_TRUE(rep.equivalence_holds()) << r.to_string();
        hitting += !rep.no_sample_on_boundary;
    }
    EXPECT_GT(hitting, 0u);
}

TEST(ShrinkChain, EveryDyadicElement) {
    ThreePoints g;
    for (const auto& a : dyadic_family(3)) {
        const auto rep = verify_shrink_chain(g.emb, a);
        ASSERT_TRUE(rep.passed()) << a.to_string();
    }
}
