#pragma once

// Independent reference computations shared by the unit and acceptance
// tests.  Nothing here calls into the arrangement, SVD or search code.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "tilebasis/tiles.hpp"

namespace oracle
{

using tilebasis::Box;
using tilebasis::LatticePoint;
using tilebasis::MultiTile;
using tilebasis::Rational;
using tilebasis::RationalVector;

/// Lattice points lambda with omega + lambda in some box, by scanning each
/// box's integer range coordinate by coordinate.
inline std::vector<LatticePoint> fiber_at(const MultiTile& tile, const RationalVector& omega)
{
    std::set<LatticePoint> found;
    const std::size_t d = omega.size();
    for (const auto& box : tile.boxes()) {
        // lambda_i in [lo_i - omega_i, hi_i - omega_i), integer
        std::vector<std::int64_t> lo(d), hi(d);
        bool empty = false;
        for (std::size_t i = 0; i < d; ++i) {
            Rational a = box.lo[i] - omega[i];
            Rational b = box.hi[i] - omega[i];
            mpz_class c;
            mpz_cdiv_q(c.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
            mpz_class f;
            mpz_cdiv_q(f.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
            lo[i] = c.get_si();
            hi[i] = f.get_si();  // exclusive
            if (lo[i] >= hi[i])
                empty = true;
        }
        if (empty)
            continue;
        LatticePoint p(lo);
        while (true) {
            found.insert(p);
            std::size_t i = 0;
            while (i < d && ++p[i] == hi[i]) {
                p[i] = lo[i];
                ++i;
            }
            if (i == d)
                break;
        }
    }
    return {found.begin(), found.end()};
}

/// Random k-tile: P is cut into a grid of cells by random rational
/// breakpoints, and each cell is placed at k distinct integer translates.
inline MultiTile random_multitile(std::mt19937_64& rng, std::size_t d, int k)
{
    std::vector<std::vector<Rational>> cuts(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::set<Rational> s{Rational(0), Rational(1)};
        const int extra = static_cast<int>(rng() % 4);
        for (int e = 0; e < extra; ++e) {
            const long den = 2 + static_cast<long>(rng() % 11);
            const long num = 1 + static_cast<long>(rng() % (den - 1));
            Rational r(num, den);
            r.canonicalize();
            s.insert(r);
        }
        cuts[i].assign(s.begin(), s.end());
    }
    const std::int64_t span = d == 1 ? 6 : 3;
    std::vector<Box> boxes;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        std::set<LatticePoint> shifts;
        while (static_cast<int>(shifts.size()) < k) {
            LatticePoint p(d);
            for (auto& c : p)
                c = static_cast<std::int64_t>(rng() % (2 * span + 1)) - span;
            shifts.insert(p);
        }
        for (const auto& s : shifts) {
            RationalVector lo(d), hi(d);
            for (std::size_t i = 0; i < d; ++i) {
                lo[i] = cuts[i][idx[i]] + s[i];
                hi[i] = cuts[i][idx[i] + 1] + s[i];
            }
            boxes.emplace_back(lo, hi);
        }
        std::size_t i = 0;
        while (i < d && ++idx[i] == cuts[i].size() - 1) {
            idx[i] = 0;
            ++i;
        }
        if (i == d)
            break;
    }
    std::shuffle(boxes.begin(), boxes.end(), rng);
    return MultiTile(std::move(boxes));
}

inline RationalVector random_point(std::mt19937_64& rng, std::size_t d)
{
    RationalVector p(d);
    for (auto& x : p) {
        const long den = 1 + static_cast<long>(rng() % 997);
        x = Rational(static_cast<long>(rng() % den), den);
        x.canonicalize();
    }
    return p;
}

inline std::complex<double> expi(double turns)
{
    return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

/// Determinant by Gaussian elimination with partial pivoting.
inline std::complex<double> determinant(std::vector<std::vector<std::complex<double>>> m)
{
    const std::size_t n = m.size();
    std::complex<double> det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c]))
                piv = r;
        if (std::abs(m[piv][c]) == 0.0)
            return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            auto f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j)
                m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

/// Fiber matrix in plain doubles: exp(2 pi i lambda_r . a_s).
inline std::vector<std::vector<std::complex<double>>> fiber(const std::vector<std::int64_t>& lambda,
                                                             const std::vector<double>& a)
{
    std::vector<std::vector<std::complex<double>>> e(lambda.size(), std::vector<std::complex<double>>(a.size()));
    for (std::size_t r = 0; r < lambda.size(); ++r)
        for (std::size_t s = 0; s < a.size(); ++s)
            e[r][s] = expi(std::fmod(static_cast<double>(lambda[r]) * a[s], 1.0));
    return e;
}

/// Eigenvalues of the 2x2 Hermitian E^* E, ascending.
inline std::pair<double, double> gram_eigen_2x2(const std::vector<std::vector<std::complex<double>>>& e)
{
    const double p = std::norm(e[0][0]) + std::norm(e[1][0]);
    const double q = std::norm(e[0][1]) + std::norm(e[1][1]);
    const std::complex<double> off = std::conj(e[0][0]) * e[0][1] + std::conj(e[1][0]) * e[1][1];
    const double mid = 0.5 * (p + q);
    const double rad = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(off));
    return {mid - rad, mid + rad};
}

/// min over y of |1 - e(x y)| by direct floating evaluation.
inline double gap_scan(const std::vector<std::int64_t>& Y, double x)
{
    double best = 2.0;
    for (auto y : Y) {
        const double t = std::fmod(x * static_cast<double>(y), 1.0);
        best = std::min(best, 2.0 * std::abs(std::sin(std::numbers::pi * t)));
    }
    return best;
}

}  // namespace oracle
