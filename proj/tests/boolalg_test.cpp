#include <gtest/gtest.h>

#include <random>

#include "noise_lab/boolalg.hpp"
#include "support.hpp"

using namespace noise_lab;
using noise_lab::testing::elem;

TEST(PowerAlgebra, ElementCounts) {
    EXPECT_EQ(build_power_algebra(0).elements().size(), 1u);
    EXPECT_EQ(build_power_algebra(0).zero(), build_power_algebra(0).one());
    const auto two = build_power_algebra(2).elements();
    ASSERT_EQ(two.size(), 4u);
    EXPECT_EQ(two[1], elem(2, {0}));
    EXPECT_EQ(two[3], elem(2, {0, 1}));
    EXPECT_EQ(build_power_algebra(3).elements().size(), 8u);
    EXPECT_THROW(build_power_algebra(30).elements(), ResourceError);
}

TEST(PowerAlgebra, ElementOps) {
    auto ops = element_ops(elem(2, {0}), elem(2, {1}));
    EXPECT_TRUE(ops.meet.empty());
    EXPECT_TRUE(ops.join.is_one());
    EXPECT_EQ(ops.complement_of_x, elem(2, {1}));

    ops = element_ops(elem(3, {0, 1}), elem(3, {1, 2}));
    EXPECT_EQ(ops.meet, elem(3, {1}));
    EXPECT_EQ(ops.join, elem(3, {0, 1, 2}));
    EXPECT_EQ(ops.complement_of_x, elem(3, {2}));

    const BoolElem x = elem(4, {0, 3});
    EXPECT_EQ(element_ops(x, x).meet, x);
    EXPECT_EQ(element_ops(x, x).join, x);
    EXPECT_THROW(element_ops(elem(2, {0}), elem(3, {0})), InputError);
    EXPECT_EQ(elem(3, {0, 2}).to_string(), "{0,2}");
}

TEST(PowerAlgebra, LawsExhaustiveSmall) {
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto els = build_power_algebra(n).elements();
        const BoolElem zero = BoolElem::zero(n), one = BoolElem::one(n);
        for (const auto& x : els) {
            EXPECT_EQ(x & ~x, zero);
            EXPECT_EQ(x | ~x, one);
            EXPECT_EQ(~~x, x);
            for (const auto& y : els) {
                EXPECT_EQ(x & y, y & x);
                EXPECT_EQ(x | y, y | x);
                EXPECT_EQ(~(x & y), ~x | ~y);
                EXPECT_EQ(~(x | y), ~x & ~y);
                EXPECT_EQ(x & (x | y), x);
                for (const auto& z : els) {
                    EXPECT_EQ((x & y) & z, x & (y & z));
                    EXPECT_EQ(x & (y | z), (x & y) | (x & z));
                    EXPECT_EQ(x | (y & z), (x | y) & (x | z));
                }
            }
        }
    }
}

TEST(PowerAlgebra, LawsRandomLarge) {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 2000; ++it) {
        const std::size_t n = 5 + rng() % 59;
        const auto mask = BoolElem::full_mask(n);
        const BoolElem x(n, rng() & mask), y(n, rng() & mask), z(n, rng() & mask);
        ASSERT_EQ(x & (y | z), (x & y) | (x & z));
        ASSERT_EQ(~(x & y), ~x | ~y);
        ASSERT_EQ((x | y) | z, x | (y | z));
        ASSERT_TRUE((x & ~x).empty());
        ASSERT_TRUE((x | ~x).is_one());
    }
}

TEST(Subalgebra, Blocks) {
    const auto alg = build_power_algebra(4);
    const Subalgebra b = build_subalgebra(alg, {elem(4, {0, 1}), elem(4, {2, 3})});
    EXPECT_EQ(b.element_count(), 4u);
    EXPECT_TRUE(b.contains(elem(4, {0, 1})));
    EXPECT_FALSE(b.contains(elem(4, {0, 2})));
    EXPECT_EQ(enumerate_partition_atoms(b), (std::vector<BoolElem>{elem(4, {0, 1}), elem(4, {2, 3})}));

    const auto two = build_power_algebra(2);
    const Subalgebra whole = build_subalgebra(two, {elem(2, {0}), elem(2, {1})});
    for (const auto& x : two.elements()) EXPECT_TRUE(whole.contains(x));
    const Subalgebra coarse = build_subalgebra(two, {elem(2, {0, 1})});
    EXPECT_EQ(coarse.element_count(), 2u);
    EXPECT_FALSE(coarse.contains(elem(2, {0})));

    EXPECT_EQ(enumerate_partition_atoms(Subalgebra::full(build_power_algebra(3))),
              (std::vector<BoolElem>{elem(3, {0}), elem(3, {1}), elem(3, {2})}));
    EXPECT_EQ(enumerate_partition_atoms(Subalgebra::trivial(build_power_algebra(3))),
              (std::vector<BoolElem>{elem(3, {0, 1, 2})}));
}

TEST(Subalgebra, RejectsBadBlocks) {
    const auto alg = build_power_algebra(3);
    EXPECT_THROW(build_subalgebra(alg, {elem(3, {0, 1}), elem(3, {1, 2})}), InputError);
    EXPECT_THROW(build_subalgebra(alg, {elem(3, {0}), elem(3, {1})}), InputError);
    EXPECT_THROW(build_subalgebra(alg, {elem(3, {0, 1, 2}), BoolElem::zero(3)}), InputError);
}

TEST(Subalgebra, AtomsArePartitionOfUnity) {
    const auto alg = build_power_algebra(5);
    const Subalgebra b = build_subalgebra(alg, {elem(5, {0, 3}), elem(5, {1}), elem(5, {2, 4})});
    const auto atoms = enumerate_partition_atoms(b);
    EXPECT_TRUE(is_partition_of_unity(atoms, 5));
    EXPECT_FALSE(is_partition_of_unity({elem(5, {0, 3}), elem(5, {1})}, 5));
    EXPECT_EQ(b.elements().size(), 8u);
    for (const auto& x : b.elements()) {
        for (const auto& y : b.elements()) {
            EXPECT_TRUE(b.contains(x & y));
            EXPECT_TRUE(b.contains(x | y));
        }
    }
}

TEST(Filter, StoneDuality) {
    EXPECT_EQ(filter_to_closed_set(Filter(elem(2, {1}))), (std::vector<std::size_t>{1}));
    EXPECT_TRUE(filter_to_closed_set(Filter(BoolElem::zero(2))).empty());
    EXPECT_TRUE(Filter(BoolElem::zero(2)).is_improper());
    EXPECT_EQ(filter_to_closed_set(Filter(BoolElem::one(3))), (std::vector<std::size_t>{0, 1, 2}));

    for (std::size_t n = 0; n <= 4; ++n) {
        const auto els = build_power_algebra(n).elements();
        for (const auto& g : els) {
            const Filter f(g);
            const auto closed = filter_to_closed_set(f);
            for (const auto& x : els) {
                const auto open = clopen(x);
                const bool inside = std::includes(open.begin(), open.end(), closed.begin(), closed.end());
                EXPECT_EQ(inside, f.member(x));
            }
        }
    }
}
