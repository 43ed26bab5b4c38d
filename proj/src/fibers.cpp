#include "tilebasis/fibers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>
#include <Eigen/LU>

namespace tilebasis
{

//------------------------------------------------------------------------------
// ShiftVector
//------------------------------------------------------------------------------

ShiftVector::ShiftVector(std::vector<RationalVector> shifts) : shifts_(std::move(shifts))
{
    for (auto& a : shifts_) {
        if (a.empty() || a.size() != shifts_.front().size())
            throw std::invalid_argument("shift vector: entries of mixed dimension");
        for (auto& c : a)
            c = fractional_part(c);
    }
}

ShiftVector ShiftVector::of(std::initializer_list<Rational> values)
{
    std::vector<RationalVector> shifts;
    for (const auto& v : values)
        shifts.push_back({v});
    return ShiftVector(std::move(shifts));
}

ShiftVector ShiftVector::from_doubles(const std::vector<std::vector<double>>& shifts)
{
    std::vector<RationalVector> exact;
    for (const auto& a : shifts) {
        RationalVector v;
        for (double c : a)
            v.push_back(from_double(c));
        exact.push_back(std::move(v));
    }
    return ShiftVector(std::move(exact));
}

ShiftVector ShiftVector::arithmetic(const RationalVector& x, std::size_t k)
{
    std::vector<RationalVector> shifts;
    for (std::size_t j = 1; j <= k; ++j) {
        RationalVector a = x;
        for (auto& c : a)
            c *= static_cast<unsigned long>(j);
        shifts.push_back(std::move(a));
    }
    return ShiftVector(std::move(shifts));
}

std::string ShiftVector::to_string() const
{
    std::string out;
    for (std::size_t j = 0; j < shifts_.size(); ++j) {
        if (j)
            out += ';';
        out += tilebasis::to_string(shifts_[j], ',');
    }
    return out;
}

ShiftVector ShiftVector::parse(std::string_view text)
{
    std::vector<RationalVector> shifts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto entry = text.substr(start, end - start);
        RationalVector a;
        std::size_t s = 0;
        while (s <= entry.size()) {
            std::size_t e = entry.find(',', s);
            if (e == std::string_view::npos)
                e = entry.size();
            auto word = entry.substr(s, e - s);
            while (!word.empty() && word.front() == ' ')
                word.remove_prefix(1);
            while (!word.empty() && word.back() == ' ')
                word.remove_suffix(1);
            a.push_back(parse_rational(word));
            s = e + 1;
        }
        shifts.push_back(std::move(a));
        start = end + 1;
    }
    return ShiftVector(std::move(shifts));
}

//------------------------------------------------------------------------------
// Fiber matrices
//------------------------------------------------------------------------------

FiberMatrix fiber_matrix(const Pattern& pattern, const ShiftVector& shifts)
{
    const std::size_t k = pattern.size();
    if (k == 0 || k != shifts.order())
        throw std::invalid_argument("fiber_matrix: pattern has " + std::to_string(k) + " points but " +
                                    std::to_string(shifts.order()) + " shifts were given");
    if (pattern.dimension() != shifts.dimension())
        throw std::invalid_argument("fiber_matrix: pattern and shift dimensions differ");

    FiberMatrix out{ComplexMatrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)), pattern};
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t s = 0; s < k; ++s)
            out.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
                unit_exp(dot(pattern[r], shifts[s]));
    return out;
}

SingularSpectrum singular_spectrum(const FiberMatrix& matrix)
{
    // Squared singular values of E rather than eigenvalues of E^* E: forming
    // the Gram matrix squares the condition number and wrecks small rho_1.
    Eigen::JacobiSVD<ComplexMatrix> svd(matrix.entries);
    SingularSpectrum out;
    const auto& sv = svd.singularValues();
    out.rho.reserve(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        out.rho.push_back(sv(i) * sv(i));
    std::sort(out.rho.begin(), out.rho.end());
    return out;
}

double abs_determinant(const FiberMatrix& matrix)
{
    if (matrix.entries.rows() == 1)
        return std::abs(matrix.entries(0, 0));
    return std::abs(matrix.entries.fullPivLu().determinant());
}

RieszBounds riesz_bounds(std::span<const Pattern> patterns, const ShiftVector& shifts)
{
    if (patterns.empty())
        throw std::invalid_argument("riesz_bounds: empty pattern set");
    RieszBounds out;
    bool first = true;
    for (const auto& t : patterns) {
        auto spec = singular_spectrum(fiber_matrix(t, shifts));
        // Ties keep the earliest pattern so the extremal witnesses are stable.
        if (first || spec.smallest() < out.A) {
            out.A = spec.smallest();
            out.lower_attained_at = t;
        }
        if (first || spec.largest() > out.B) {
            out.B = spec.largest();
            out.upper_attained_at = t;
        }
        first = false;
    }
    return out;
}

RieszBounds riesz_bounds(const PatternSet& patterns, const ShiftVector& shifts)
{
    auto list = patterns.patterns();
    return riesz_bounds(std::span<const Pattern>(list), shifts);
}

double det_gap(std::span<const Pattern> patterns, const ShiftVector& shifts)
{
    if (patterns.empty())
        throw std::invalid_argument("det_gap: empty pattern set");
    double eps = INFINITY;
    for (const auto& t : patterns)
        eps = std::min(eps, abs_determinant(fiber_matrix(t, shifts)));
    return eps;
}

double det_gap(const PatternSet& patterns, const ShiftVector& shifts)
{
    auto list = patterns.patterns();
    return det_gap(std::span<const Pattern>(list), shifts);
}

double lower_bound_from_det(double eps, double B, std::size_t k)
{
    if (eps < 0 || !(B > 0) || k == 0)
        throw std::invalid_argument("lower_bound_from_det: need eps >= 0, B > 0, k >= 1");
    return eps * eps / std::pow(B, static_cast<double>(k - 1));
}

std::vector<FiberRow> fiber_rows(std::span<const Pattern> patterns, const ShiftVector& shifts)
{
    std::vector<FiberRow> rows;
    rows.reserve(patterns.size());
    for (const auto& t : patterns) {
        auto E = fiber_matrix(t, shifts);
        auto spec = singular_spectrum(E);
        rows.push_back({t, abs_determinant(E), spec.smallest(), spec.largest()});
    }
    return rows;
}

}  // namespace tilebasis
