#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tilebasis/gallery.hpp"
#include "tilebasis/search.hpp"
#include "tilebasis/synthesis.hpp"

using namespace tilebasis;

namespace
{

// f(omega + lambda) where lambda is the i-th fiber point at grid point p.
RationalVector sample_point(const PatternSet& ps, const SampledFunction& f, std::size_t p, std::size_t i)
{
    const auto& lam = ps.entries()[f.pattern_index[p]].pattern[i];
    RationalVector t(f.dimension);
    std::size_t rest = p;
    for (std::size_t c = f.dimension; c-- > 0;) {
        const int idx = static_cast<int>(rest % static_cast<std::size_t>(f.grid_n));
        rest /= static_cast<std::size_t>(f.grid_n);
        t[c] = grid_coordinate(idx, f.grid_n) + lam[c];
    }
    return t;
}

}  // namespace

TEST_SUITE("synthesis")
{
    TEST_CASE("constant function on the unit interval")
    {
        auto ps = pattern_cells(gallery::interval_ktile(1));
        auto a = ShiftVector::of({0});
        CoefficientArray c(1, 1, 2);
        c.at(0, c.index_of({0})) = 1.0;
        auto f = synthesize(ps, a, c, 16);
        for (auto v : f.samples)
            CHECK(std::abs(v - Complex(1, 0)) < 1e-14);
        auto back = analyze(ps, a, f, 2);
        for (std::size_t g = 0; g < back.gamma_count(); ++g)
            CHECK(std::abs(back.at(0, g) - (g == back.index_of({0}) ? Complex(1) : Complex(0))) < 1e-10);
    }

    TEST_CASE("single exponential matches pointwise evaluation")
    {
        auto ps = pattern_cells(gallery::interval_ktile(1));
        auto a = ShiftVector::of({ratio(1, 5)});
        CoefficientArray c(1, 1, 3);
        c.at(0, c.index_of({2})) = 1.0;
        auto f = synthesize(ps, a, c, 32);
        for (std::size_t p = 0; p < f.points(); ++p) {
            auto t = sample_point(ps, f, p, 0);
            const double expect_phase = Rational(ratio(1, 5) - 2).get_d() * t[0].get_d();
            CHECK(std::abs(f.sample(p, 0) - oracle::expi(expect_phase)) < 1e-12);
        }
    }

    TEST_CASE("random coefficients match direct summation")
    {
        auto ps = pattern_cells(gallery::interval_ktile(2));
        auto a = ShiftVector::of({0, ratio(1, 2)});
        std::mt19937_64 rng(5);
        auto c = random_coefficients(2, 1, 8, rng);
        CHECK(c.norm_squared() == doctest::Approx(1));
        auto f = synthesize(ps, a, c, 64);
        for (std::size_t p = 0; p < f.points(); ++p)
            for (std::size_t i = 0; i < 2; ++i) {
                auto t = sample_point(ps, f, p, i);
                // plain double sum as the oracle
                Complex s = 0;
                for (std::size_t j = 0; j < 2; ++j)
                    for (std::size_t g = 0; g < c.gamma_count(); ++g)
                        s += c.at(j, g) * oracle::expi((a[j][0].get_d() - c.gamma(g)[0]) * t[0].get_d());
                CHECK(std::abs(f.sample(p, i) - s) < 1e-10);
                CHECK(std::abs(evaluate_direct(a, c, t) - s) < 1e-10);
            }
    }

    TEST_CASE("round trip and singular refusal")
    {
        auto ps = pattern_cells(gallery::interval_ktile(2));
        auto rep = round_trip(ps, ShiftVector::of({0, ratio(1, 2)}), 8, 256, 10, 1);
        CHECK(rep.max_relative_error <= 1e-8);
        CHECK(rep.max_parseval_error <= 1e-8);
        CHECK(rep.ratios.r_min == doctest::Approx(2).epsilon(1e-9));
        CHECK(rep.ratios.r_max == doctest::Approx(2).epsilon(1e-9));
        CHECK_THROWS_AS(round_trip(ps, ShiftVector::of({0, 0}), 8, 256, 2, 1), SingularFiber);
        CHECK_THROWS(round_trip(ps, ShiftVector::of({0, ratio(1, 2)}), 8, 16, 2, 1));
    }

    TEST_CASE("frame ratios for k = 1 are 1")
    {
        auto ps = pattern_cells(gallery::interval_ktile(1));
        auto r = empirical_frame_ratio(ps, ShiftVector::of({ratio(1, 7)}), 5, 4, 32, 9);
        CHECK(r.r_min == doctest::Approx(1).epsilon(1e-9));
        CHECK(r.r_max == doctest::Approx(1).epsilon(1e-9));
    }

    TEST_CASE("split tile ratios sit inside the Riesz bounds")
    {
        auto ps = pattern_cells(gallery::split_two_tile());
        auto found = vandermonde_search(ps);
        auto b = riesz_bounds(ps, found.a);
        auto r = empirical_frame_ratio(ps, found.a, 20, 8, 256, 2);
        CHECK(r.r_min >= b.A - 0.01);
        CHECK(r.r_max <= b.B + 0.01);
    }

    TEST_CASE("two-dimensional round trip")
    {
        std::vector<Box> boxes{Box({0, 0}, {1, 1}), Box({0, 1}, {ratio(1, 2), 2}), Box({ratio(1, 2), 2}, {1, 3})};
        auto ps = pattern_cells(MultiTile(boxes));
        auto found = vandermonde_search(ps, 32);
        REQUIRE(found.objective > 1e-3);
        auto rep = round_trip(ps, found.a, 3, 32, 3, 4);
        CHECK(rep.max_relative_error <= 1e-8);
        CHECK(rep.ratios.r_min >= rep.bounds.A - 1e-9);
        CHECK(rep.ratios.r_max <= rep.bounds.B + 1e-9);
    }

    TEST_CASE("seeded coefficients are reproducible")
    {
        std::mt19937_64 r1(42), r2(42);
        auto a = random_coefficients(3, 1, 4, r1);
        auto b = random_coefficients(3, 1, 4, r2);
        CHECK(a.values() == b.values());
    }
}
