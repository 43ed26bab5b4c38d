#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tilebasis/fibers.hpp"

using namespace tilebasis;

namespace
{

bool near(std::complex<double> a, std::complex<double> b, double tol = 1e-14)
{
    return std::abs(a - b) <= tol;
}

}  // namespace

TEST_SUITE("fibers")
{
    TEST_CASE("fiber matrix entries")
    {
        auto E = fiber_matrix(Pattern::of({0, 1}), ShiftVector::of({0, ratio(1, 2)})).entries;
        CHECK(E(0, 0) == std::complex<double>(1, 0));
        CHECK(E(0, 1) == std::complex<double>(1, 0));
        CHECK(E(1, 0) == std::complex<double>(1, 0));
        CHECK(E(1, 1) == std::complex<double>(-1, 0));

        for (int k = 2; k <= 6; ++k) {
            std::vector<std::int64_t> pts;
            std::vector<Rational> a;
            for (int j = 0; j < k; ++j) {
                pts.push_back(j);
                a.push_back(ratio(j, k));
            }
            std::vector<LatticePoint> lp;
            for (auto p : pts)
                lp.push_back({p});
            std::vector<RationalVector> rows;
            for (const auto& x : a)
                rows.push_back({x});
            auto D = fiber_matrix(Pattern(lp), ShiftVector(rows)).entries;
            for (int r = 0; r < k; ++r)
                for (int s = 0; s < k; ++s)
                    CHECK(near(D(r, s), oracle::expi(double(r * s % k) / k), 1e-13));
        }

        auto G = fiber_matrix(Pattern::of({0, 1}), ShiftVector::of({ratio(1, 3), ratio(2, 3)})).entries;
        CHECK(near(G(1, 0), oracle::expi(1.0 / 3)));
        CHECK(near(G(1, 1), oracle::expi(2.0 / 3)));
        CHECK(abs_determinant({G, Pattern::of({0, 1})}) == doctest::Approx(std::sqrt(3.0)));
        CHECK_THROWS(fiber_matrix(Pattern::of({0, 1, 2}), ShiftVector::of({0, ratio(1, 2)})));
    }

    TEST_CASE("singular spectra")
    {
        auto s = singular_spectrum(fiber_matrix(Pattern::of({0, 1}), ShiftVector::of({0, ratio(1, 2)})));
        CHECK(s.smallest() == doctest::Approx(2));
        CHECK(s.largest() == doctest::Approx(2));

        auto dft = singular_spectrum(
            fiber_matrix(Pattern::of({0, 1, 2, 3, 4}), ShiftVector::arithmetic({ratio(1, 5)}, 5)));
        for (double r : dft.rho)
            CHECK(r == doctest::Approx(5).epsilon(1e-12));

        auto flat = singular_spectrum(fiber_matrix(Pattern::of({0, 1}), ShiftVector::of({0, 0})));
        CHECK(std::abs(flat.smallest()) < 1e-12);
        CHECK(flat.largest() == doctest::Approx(4));
    }

    TEST_CASE("riesz bounds and determinant gaps")
    {
        auto one = PatternSet::uniform({Pattern::of({0, 1})});
        auto two = PatternSet::uniform({Pattern::of({0, 1}), Pattern::of({0, 2})});
        auto half = ShiftVector::of({0, ratio(1, 2)});
        auto third = ShiftVector::of({ratio(1, 3), ratio(2, 3)});

        auto b1 = riesz_bounds(one, half);
        CHECK(b1.A == doctest::Approx(2));
        CHECK(b1.B == doctest::Approx(2));
        CHECK_FALSE(b1.singular());

        auto b2 = riesz_bounds(two, half);
        CHECK(b2.A < 1e-12);
        CHECK(b2.singular());
        CHECK(b2.lower_attained_at == Pattern::of({0, 2}));

        // both 2x2 fibers checked against the closed-form Hermitian eigenvalues
        auto b3 = riesz_bounds(two, third);
        double lo = 1e9, hi = 0;
        for (std::int64_t y : {1, 2}) {
            auto [l, h] = oracle::gram_eigen_2x2(oracle::fiber({0, y}, {1.0 / 3, 2.0 / 3}));
            lo = std::min(lo, l);
            hi = std::max(hi, h);
        }
        CHECK(b3.A == doctest::Approx(lo).epsilon(1e-12));
        CHECK(b3.B == doctest::Approx(hi).epsilon(1e-12));
        CHECK(b3.A == doctest::Approx(1));
        CHECK(b3.B == doctest::Approx(3));

        CHECK(det_gap(one, half) == doctest::Approx(2));
        CHECK(det_gap(two, ShiftVector::of({ratio(1, 5), ratio(1, 5)})) < 1e-12);
        CHECK(det_gap(one, third) == doctest::Approx(std::sqrt(3.0)));
    }

    TEST_CASE("lower bound from the determinant")
    {
        CHECK(lower_bound_from_det(2, 2, 2) == doctest::Approx(2));
        CHECK(lower_bound_from_det(0, 5, 3) == 0);
        CHECK(lower_bound_from_det(std::sqrt(3.0), 3, 2) == doctest::Approx(1));
    }

    TEST_CASE("sandwich property on random draws")
    {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 100; ++trial) {
            const int k = 2 + static_cast<int>(rng() % 4);
            std::vector<Pattern> pats;
            const int count = 1 + static_cast<int>(rng() % 3);
            while (static_cast<int>(pats.size()) < count) {
                std::set<std::int64_t> pts{0};
                while (static_cast<int>(pts.size()) < k)
                    pts.insert(static_cast<std::int64_t>(rng() % 40));
                std::vector<LatticePoint> lp;
                for (auto p : pts)
                    lp.push_back({p});
                Pattern p(lp);
                if (std::find(pats.begin(), pats.end(), p) == pats.end())
                    pats.push_back(p);
            }
            std::vector<RationalVector> a;
            for (int j = 0; j < k; ++j)
                a.push_back({ratio(static_cast<std::int64_t>(rng() % 1000), 1000)});
            ShiftVector sv(a);
            auto b = riesz_bounds(pats, sv);
            const double eps = det_gap(pats, sv);
            CHECK(lower_bound_from_det(eps, b.B, k) <= b.A * (1 + 1e-9) + 1e-12);
            for (const auto& p : pats) {
                auto s = singular_spectrum(fiber_matrix(p, sv));
                double prod = 1;
                for (double r : s.rho)
                    prod *= r;
                std::vector<std::int64_t> lam;
                for (const auto& q : p.points())
                    lam.push_back(q[0]);
                std::vector<double> ad;
                for (const auto& x : a)
                    ad.push_back(x[0].get_d());
                const double det2 = std::norm(oracle::determinant(oracle::fiber(lam, ad)));
                // eigenvalue errors are absolute, on the scale of B^k
                CHECK(std::abs(prod - det2) <= 1e-9 * std::max(det2, std::pow(double(k), k)));
            }
        }
    }

    TEST_CASE("shift vector text")
    {
        auto a = ShiftVector::of({ratio(4, 3), ratio(-1, 3)});
        CHECK(a.to_string() == "1/3;2/3");
        CHECK(ShiftVector::parse("1/3;2/3") == a);
        CHECK(ShiftVector::parse("0,1/2;1/4,0").dimension() == 2);
        CHECK(ShiftVector::arithmetic({ratio(1, 2)}, 2).to_string() == "1/2;0");
        CHECK_THROWS(ShiftVector::parse("1/3;;"));
        CHECK_THROWS(ShiftVector::parse("0,1;1"));
        CHECK(ShiftVector::from_doubles({{0.5}, {0.25}}).to_string() == "1/2;1/4");
    }
}
