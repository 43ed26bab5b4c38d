#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tilebasis/gallery.hpp"
#include "tilebasis/search.hpp"

using namespace tilebasis;

namespace
{

// Best min_t rho_1 over a uniform grid of (a_1, a_2), 2x2 closed form.
double grid_oracle(const std::vector<std::int64_t>& ys, int n)
{
    double best = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double worst = 1e9;
            for (auto y : ys)
                worst = std::min(worst, oracle::gram_eigen_2x2(oracle::fiber({0, y}, {double(i) / n, double(j) / n})).first);
            best = std::max(best, worst);
        }
    return best;
}

}  // namespace

TEST_SUITE("search")
{
    TEST_CASE("vandermonde objective")
    {
        DifferenceSet one(std::vector<LatticePoint>{{1}});
        DifferenceSet two(std::vector<LatticePoint>{{1}, {2}});
        CHECK(vandermonde_objective(one, {ratio(1, 2)}) == 2.0);
        CHECK(vandermonde_objective(two, {ratio(1, 2)}) == 0.0);
        CHECK(vandermonde_objective(two, {ratio(1, 3)}) == doctest::Approx(std::sqrt(3.0)));
        CHECK(vandermonde_objective(DifferenceSet{}, {ratio(1, 7)}) == 2.0);
        // agrees with floating evaluation away from exact zeros
        for (int p = 1; p < 50; ++p) {
            Rational x = ratio(p, 53);
            CHECK(vandermonde_objective(two, {x}) == doctest::Approx(oracle::gap_scan({1, 2}, x.get_d())));
        }
    }

    TEST_CASE("vandermonde search")
    {
        auto r = vandermonde_search(pattern_cells(gallery::interval_ktile(2)));
        CHECK(r.diagnostics.step->at(0) == ratio(1, 2));
        CHECK(r.a.to_string() == "1/2;0");
        CHECK(r.objective == doctest::Approx(2));

        for (int k = 2; k <= 8; ++k) {
            auto rk = vandermonde_search(pattern_cells(gallery::interval_ktile(k)));
            CHECK(rk.objective == doctest::Approx(k).epsilon(1e-9));
        }

        auto split = vandermonde_search(pattern_cells(gallery::split_two_tile()));
        REQUIRE(split.diagnostics.gap);
        CHECK(*split.diagnostics.gap == doctest::Approx(std::sqrt(3.0)));
        CHECK(split.diagnostics.step->at(0) == ratio(1, 3));
        // certified chain: |det| >= gap^{k(k-1)/2}
        CHECK(det_gap(pattern_cells(gallery::split_two_tile()), split.a) >= *split.diagnostics.det_lower_bound - 1e-9);
    }

    TEST_CASE("vandermonde search on the factorial-odd truncations decays")
    {
        double prev = 3;
        for (int J : {2, 12, 60, 200}) {
            auto r = vandermonde_search(gallery::closed_form_pattern_set({"factorial_odd", {}}, J), 1024);
            CHECK(*r.diagnostics.gap <= prev + 1e-12);
            prev = *r.diagnostics.gap;
        }
        CHECK(prev < 0.5);
    }

    TEST_CASE("vandermonde search in two dimensions")
    {
        std::vector<Box> boxes{Box({0, 0}, {1, 1}), Box({1, 0}, {2, 1})};
        auto ps = pattern_cells(MultiTile(boxes));
        auto r = vandermonde_search(ps, 16);
        CHECK(r.objective == doctest::Approx(2));
    }

    TEST_CASE("admissibility")
    {
        for (int k = 2; k <= 5; ++k) {
            auto ps = pattern_cells(gallery::interval_ktile(k));
            auto pats = ps.patterns();
            auto pair = admissibility_search(pats, 64, default_v_candidates(1));
            REQUIRE(pair);
            CHECK(pair->n == k);
            CHECK(pair->v == RationalVector{1});
        }
        auto split = pattern_cells(gallery::split_two_tile()).patterns();
        CHECK_FALSE(is_admissible(split, {1}, 2));
        CHECK(is_admissible(split, {1}, 3));
        auto pair = admissibility_search(split, 64, default_v_candidates(1));
        REQUIRE(pair);
        CHECK(pair->n == 3);
        // non-integral v never qualifies
        CHECK_FALSE(is_admissible(split, {ratio(1, 2)}, 3));

        auto lac = gallery::closed_form_pattern_set({"lacunary", {{"k", 2}, {"q", 3}, {"divisible", 1}}}, 6).patterns();
        CHECK_FALSE(admissibility_search(lac, 6, default_v_candidates(1)));

        auto cands = default_v_candidates(2);
        CHECK(cands[0] == RationalVector{1, 0});
        CHECK(cands[1] == RationalVector{0, 1});
        CHECK(std::find(cands.begin(), cands.end(), RationalVector{-1, 1}) == cands.end());
        CHECK(std::find(cands.begin(), cands.end(), RationalVector{1, -1}) != cands.end());
    }

    TEST_CASE("optimizer")
    {
        auto one = PatternSet::uniform({Pattern::of({0, 1})});
        auto r1 = optimize_shifts(one, {2, 400, 3});
        CHECK(r1.objective >= grid_oracle({1}, 1000) - 1e-9);
        CHECK(r1.objective == doctest::Approx(2).epsilon(1e-6));

        auto two = PatternSet::uniform({Pattern::of({0, 1}), Pattern::of({0, 2})});
        auto r2 = optimize_shifts(two, {4, 1000, 5});
        CHECK(r2.objective >= grid_oracle({1, 2}, 300) - 1e-9);

        auto k1 = optimize_shifts(PatternSet::uniform({Pattern::of({0})}));
        CHECK(k1.a.to_string() == "0");
        CHECK(k1.objective == doctest::Approx(1));
    }

    TEST_CASE("optimizer is deterministic per seed")
    {
        auto ps = pattern_cells(gallery::interval_ktile(4));
        auto a = optimize_shifts(ps, {3, 500, 11});
        auto b = optimize_shifts(ps, {3, 500, 11});
        CHECK(a.a == b.a);
        CHECK(a.objective == b.objective);
        CHECK(a.diagnostics.trace == b.diagnostics.trace);
    }

    TEST_CASE("method names")
    {
        CHECK(parse_search_method("optimizer") == SearchMethod::optimizer);
        CHECK(to_string(SearchMethod::admissible) == "admissible");
        CHECK_THROWS(parse_search_method("simplex"));
    }
}
