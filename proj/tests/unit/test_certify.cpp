#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tilebasis/certify.hpp"
#include "tilebasis/gallery.hpp"

using namespace tilebasis;

namespace
{

std::vector<Pattern> pairs_with_zero(std::initializer_list<std::int64_t> ys)
{
    std::vector<Pattern> out;
    for (auto y : ys)
        out.push_back(Pattern::of({0, y}));
    return out;
}

}  // namespace

TEST_SUITE("certify")
{
    TEST_CASE("target matrices")
    {
        auto m1 = target_matrix(1);
        CHECK(m1.entries == std::vector<std::vector<int>>{{1}});
        CHECK(m1.delta == 1);
        auto m2 = target_matrix(2);
        CHECK(m2.entries == std::vector<std::vector<int>>{{1, 1}, {1, -1}});
        CHECK(m2.delta == 2);
        auto m3 = target_matrix(3);
        CHECK(m3.entries == std::vector<std::vector<int>>{{1, 1, 1}, {1, 1, -1}, {1, -1, -1}});
        // cofactor expansion by hand: 1(-1-1) - 1(-1+1) + 1(-1-1) = -4
        CHECK(m3.delta == 4);
        for (int k = 1; k <= 8; ++k)
            CHECK(target_matrix(k).delta == Integer(1) << (k - 1));
        CHECK(integer_determinant({{2, 0}, {0, 3}}) == 6);
        CHECK(integer_determinant({{1, 2}, {2, 4}}) == 0);
        CHECK(integer_determinant({{0, 1}, {1, 0}}) == 1);
    }

    TEST_CASE("epsilon(k)")
    {
        CHECK(epsilon_for_k(1) == doctest::Approx(0.4999));
        CHECK(epsilon_for_k(2) == doctest::Approx(0.2247));
        CHECK(epsilon_for_k(2) < std::sqrt(1.5) - 1);
        CHECK(epsilon_for_k(2) + 1e-4 > std::sqrt(1.5) - 1);
        for (int k = 1; k < 8; ++k)
            CHECK(epsilon_for_k(k + 1) < epsilon_for_k(k));

        // perturbations inside epsilon keep |det| above delta/2
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1, 1);
        const double e = epsilon_for_k(2);
        for (int i = 0; i < 2000; ++i) {
            std::vector<std::vector<std::complex<double>>> m{{1, 1}, {1, -1}};
            for (auto& row : m)
                for (auto& z : row) {
                    std::complex<double> d(u(rng), u(rng));
                    if (std::abs(d) > 1)
                        d /= std::abs(d);
                    z += e * d;
                }
            CHECK(std::abs(oracle::determinant(m)) >= 1.0);
        }
    }

    TEST_CASE("kronecker search fixtures")
    {
        auto s1 = kronecker_shift_search(pairs_with_zero({1}), epsilon_for_k(2));
        CHECK(s1.success);
        CHECK(s1.g == std::vector<Rational>{0, ratio(1, 2)});
        CHECK(s1.epsilon_achieved == 0.0);

        auto s3 = kronecker_shift_search(pairs_with_zero({1, 3, 9, 27, 81, 243, 729}), epsilon_for_k(2));
        CHECK(s3.success);
        // fine-grid oracle for the best g
        double best = 1e9;
        for (int i = 0; i <= 1000000; ++i) {
            double g = i / 1e6, worst = 0;
            for (std::int64_t y : {1, 3, 9, 27, 81, 243, 729})
                worst = std::max(worst, std::abs(oracle::expi(std::fmod(g * y, 1.0)) + 1.0));
            best = std::min(best, worst);
        }
        CHECK(s3.epsilon_achieved <= best + 1e-9);

        auto fail = kronecker_shift_search(std::vector<Pattern>{Pattern::of({0, 1, 2})}, 0.01);
        CHECK_FALSE(fail.success);
        CHECK(fail.epsilon_achieved > 0.01);
        CHECK_FALSE(fail.message.empty());

        CHECK_THROWS_AS(kronecker_shift_search(std::vector<Pattern>{Pattern::of({0, 1}), Pattern::of({0, 1, 2})}, 0.1), HypothesisError);
        CHECK_THROWS_AS(kronecker_shift_search(std::vector<Pattern>{Pattern::of({0, 1, 2}), Pattern::of({0, 2, 5})}, 0.1),
                        HypothesisError);
        CHECK_THROWS_AS(kronecker_shift_search(std::vector<Pattern>{Pattern::of({1, 2})}, 0.1), HypothesisError);
    }

    TEST_CASE("kronecker certificates")
    {
        auto trivial = kronecker_certificate(gallery::interval_ktile(1), 0);
        REQUIRE(trivial.certificate);
        CHECK(trivial.certificate->bound_A == 1.0);

        auto fo = kronecker_certificate(gallery::factorial_odd(0), 8);
        CHECK_FALSE(fo.certificate);
        REQUIRE(fo.kronecker);
        CHECK(fo.kronecker->epsilon_achieved > fo.kronecker->epsilon_target);
    }

    TEST_CASE("finite exact certificate round trip")
    {
        auto tile = gallery::split_two_tile();
        auto out = finite_exact_certificate(tile, ShiftVector::of({ratio(1, 3), ratio(2, 3)}));
        REQUIRE(out.certificate);
        const auto& c = *out.certificate;
        CHECK(c.bound_A == doctest::Approx(1));
        CHECK(c.all_levels);
        auto text = c.to_text();
        auto back = Certificate::parse(text);
        CHECK(back.to_text() == text);
        auto v = verify_certificate(back);
        CHECK(v.valid);
        CHECK(v.recomputed_A == doctest::Approx(1));

        Certificate tampered = back;
        tampered.bound_A = 1.5;
        CHECK_FALSE(verify_certificate(tampered).valid);
        tampered = back;
        tampered.scope_hash ^= 1;
        CHECK_FALSE(verify_certificate(tampered).valid);
        CHECK_THROWS(Certificate::parse("certificate tilebasis\nkind nonsense\n"));

        auto singular = finite_exact_certificate(tile, ShiftVector::of({0, ratio(1, 2)}));
        CHECK_FALSE(singular.certificate);
    }

    TEST_CASE("admissible and vandermonde certificates")
    {
        auto adm = admissible_certificate(gallery::split_two_tile(), 0);
        REQUIRE(adm.certificate);
        CHECK(verify_certificate(*adm.certificate).valid);
        auto van = vandermonde_certificate(gallery::interval_ktile(3), 0);
        REQUIRE(van.certificate);
        CHECK(verify_certificate(*van.certificate).valid);
        CHECK(van.certificate->bound_A <= 3 + 1e-9);
    }

    TEST_CASE("annihilator gaps")
    {
        CHECK(annihilator_gap(DifferenceSet(std::vector<LatticePoint>{{1}}), {ratio(1, 2)}) == 2.0);
        auto n = gallery::factorial_odd_sequence(60);
        // x = a/b with b <= 5 is killed once 5! is present
        for (int b = 2; b <= 5; ++b)
            for (int a = 1; a < b; ++a)
                CHECK(annihilator_gap(std::span<const std::int64_t>(n), ratio(a, b)) == 0.0);

        std::vector<std::int64_t> odd;
        for (std::int64_t y = 1; y <= 100000; y += 2)
            odd.push_back(y);
        const Rational x = from_double(std::sqrt(2.0) - 1);
        const double g = annihilator_gap(std::span<const std::int64_t>(odd), x);
        CHECK(g < 0.01);
        CHECK(g == doctest::Approx(oracle::gap_scan(odd, x.get_d())).epsilon(1e-6));
    }

    TEST_CASE("prefix gaps")
    {
        std::vector<std::int64_t> Y{3, 5, 7, 9, 11};
        std::vector<std::size_t> lens{1, 3, 5};
        auto g = prefix_gaps(Y, ratio(1, 3), lens);
        REQUIRE(g.size() == 3);
        CHECK(g[0] == 0.0);
        CHECK(g[2] == 0.0);
        auto h = prefix_gaps(Y, ratio(1, 4), lens);
        for (std::size_t i = 0; i < lens.size(); ++i) {
            std::vector<std::int64_t> pre(Y.begin(), Y.begin() + static_cast<long>(lens[i]));
            CHECK(h[i] == doctest::Approx(oracle::gap_scan(pre, 0.25)));
        }
    }

    TEST_CASE("two-tile test on finite fixtures")
    {
        auto split = two_tile_test(gallery::split_two_tile(), 64, {0, 1, 2});
        CHECK(split.verdict == TwoTileVerdict::certified_candidate);
        REQUIRE(split.witness);
        CHECK(*split.witness == ratio(1, 3));

        auto interval = two_tile_test(gallery::interval_ktile(2), 16, {0});
        CHECK(interval.verdict == TwoTileVerdict::certified_candidate);
        CHECK(*interval.witness == ratio(1, 2));

        CHECK_THROWS(two_tile_test(gallery::interval_ktile(3), 16, {0}));
    }

    TEST_CASE("two-tile test on a short factorial-odd schedule")
    {
        auto r = two_tile_test(gallery::factorial_odd(0), 256, {10, 100, 1000});
        CHECK(r.verdict != TwoTileVerdict::certified_candidate);
        CHECK(r.decayed + r.structural + r.survivors == r.trajectories.size());
        for (const auto& t : r.trajectories)
            CHECK(t.gaps.size() == 3);
    }
}
