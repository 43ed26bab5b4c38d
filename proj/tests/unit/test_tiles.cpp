#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tilebasis/tiles.hpp"

using namespace tilebasis;

namespace
{

MultiTile tile1(std::initializer_list<std::pair<Rational, Rational>> intervals)
{
    std::vector<Box> boxes;
    for (const auto& [lo, hi] : intervals)
        boxes.push_back(Box::interval(lo, hi));
    return MultiTile(std::move(boxes));
}

}  // namespace

TEST_SUITE("tiles")
{
    TEST_CASE("normalize")
    {
        auto t = normalize(Lattice::identity(1), {Box::interval(0, 2)});
        CHECK(t.boxes() == std::vector<Box>{Box::interval(0, 2)});

        auto s = normalize(Lattice({{Rational(2)}}), {Box::interval(0, 2)});
        CHECK(s.boxes() == std::vector<Box>{Box::interval(0, 1)});
        CHECK(s.measure() == 1);

        Lattice m({{Rational(1), Rational(0)}, {Rational(0), Rational(3)}});
        auto u = normalize(m, {Box({0, 0}, {1, 3})});
        CHECK(u.boxes() == std::vector<Box>{Box({0, 0}, {1, 1})});

        CHECK_THROWS(Lattice({{Rational(0)}}));
        Lattice shear({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
        CHECK_THROWS(normalize(shear, {Box({0, 0}, {1, 1})}));
    }

    TEST_CASE("dual lattice")
    {
        Lattice m({{Rational(2), Rational(0)}, {Rational(0), Rational(3)}});
        auto dual = m.dual_basis();
        CHECK(dual[0][0] == ratio(1, 2));
        CHECK(dual[1][1] == ratio(1, 3));
        CHECK(m.det_abs() == 6);
    }

    TEST_CASE("verify_k_tile")
    {
        CHECK(verify_k_tile(tile1({{0, 1}})) == 1);
        CHECK(verify_k_tile(tile1({{0, 1}, {ratio(3, 2), ratio(5, 2)}})) == 2);
        try {
            verify_k_tile(tile1({{0, ratio(3, 2)}}));
            FAIL("expected NotAMultiTile");
        } catch (const NotAMultiTile& e) {
            CHECK(e.first().cell == Box::interval(0, ratio(1, 2)));
            CHECK(e.first().multiplicity == 2);
            CHECK(e.second().cell == Box::interval(ratio(1, 2), 1));
            CHECK(e.second().multiplicity == 1);
        }
    }

    TEST_CASE("overlapping boxes rejected")
    {
        CHECK_THROWS(tile1({{0, 2}, {1, 3}}));
        CHECK_THROWS(tile1({{1, 1}}));
        CHECK_THROWS(MultiTile({Box::interval(0, 1), Box({0, 0}, {1, 1})}));
    }

    TEST_CASE("pattern_cells on the fixtures")
    {
        auto ps = pattern_cells(tile1({{0, 2}}));
        REQUIRE(ps.size() == 1);
        CHECK(ps.entries()[0].pattern == Pattern::of({0, 1}));
        CHECK(ps.entries()[0].measure == 1);

        auto split = pattern_cells(tile1({{0, 1}, {ratio(3, 2), ratio(5, 2)}}));
        REQUIRE(split.size() == 2);
        CHECK(split.order() == 2);
        // omega in [0,1/2) sees 0 and 2; [1/2,1) sees 0 and 1
        auto low = split.locate({ratio(1, 4)});
        auto high = split.locate({ratio(3, 4)});
        REQUIRE(low);
        REQUIRE(high);
        CHECK(split.entries()[*low].pattern == Pattern::of({0, 2}));
        CHECK(split.entries()[*low].measure == ratio(1, 2));
        CHECK(split.entries()[*high].pattern == Pattern::of({0, 1}));
        CHECK(split.entries()[*high].measure == ratio(1, 2));
    }

    TEST_CASE("difference sets")
    {
        auto Y1 = difference_set(PatternSet::uniform({Pattern::of({0, 1})}));
        CHECK(Y1.elements() == std::vector<LatticePoint>{{-1}, {1}});
        auto Y2 = difference_set(PatternSet::uniform({Pattern::of({0, 1}), Pattern::of({0, 2})}));
        CHECK(Y2.elements() == std::vector<LatticePoint>{{-2}, {-1}, {1}, {2}});
        CHECK(Y2.contains({-2}));
        CHECK_FALSE(Y2.contains({0}));
        CHECK_THROWS(DifferenceSet(std::vector<LatticePoint>{{0}}));
    }

    TEST_CASE("pattern validation")
    {
        CHECK_THROWS(Pattern({{1}, {0}}));
        CHECK(Pattern::from_unsorted({{3}, {0}}) == Pattern::of({0, 3}));
        CHECK_THROWS(PatternSet::uniform({Pattern::of({0, 1}), Pattern::of({0, 1, 2})}));
        CHECK_THROWS(PatternSet::uniform({Pattern::of({0, 1}), Pattern::of({0, 1})}));
    }

    TEST_CASE("translation leaves the pattern set invariant up to shift")
    {
        auto t = tile1({{0, 1}, {ratio(3, 2), ratio(5, 2)}});
        auto moved = t.translated({4});
        CHECK(verify_k_tile(moved) == 2);
        auto ps = pattern_cells(moved);
        CHECK(ps.patterns() == std::vector<Pattern>{Pattern::of({4, 5}), Pattern::of({4, 6})});
    }

    TEST_CASE("random tiles agree with the brute-force fiber")
    {
        std::mt19937_64 rng(20240611);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t d = 1 + trial % 2;
            const int k = 1 + static_cast<int>(rng() % 3);
            auto tile = oracle::random_multitile(rng, d, k);
            CHECK(verify_k_tile(tile) == static_cast<std::size_t>(k));
            auto ps = pattern_cells(tile);
            Rational total = 0;
            for (const auto& e : ps.entries())
                total += e.measure;
            CHECK(total == 1);
            for (int i = 0; i < 100; ++i) {
                auto w = oracle::random_point(rng, d);
                auto where = ps.locate(w);
                REQUIRE(where);
                CHECK(ps.entries()[*where].pattern.points() == oracle::fiber_at(tile, w));
            }
        }
    }

    TEST_CASE("canonical text and hash are order independent")
    {
        auto a = tile1({{0, 1}, {ratio(3, 2), ratio(5, 2)}});
        auto b = tile1({{ratio(3, 2), ratio(5, 2)}, {0, 1}});
        CHECK(a.canonical_text() == b.canonical_text());
        CHECK(a.hash() == b.hash());
    }
}
