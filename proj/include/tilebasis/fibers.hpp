#pragma once

/// \file fibers.hpp
/// Fiber matrices E_t^a and the Riesz bounds they induce.
///
/// For a pattern t = (lambda_1, ..., lambda_k) and shifts a = (a_1, ..., a_k)
/// the fiber matrix has entries (E_t^a)_{rs} = exp(2 pi i lambda_r . a_s).
/// The exponentials {e_{a_j - gamma}} form a Riesz basis of L^2(Omega)
/// exactly when the squared singular values of E_t^a are bounded away from
/// zero and infinity uniformly over the pattern set; for a finite pattern set
/// that is the statement A = min_t rho_1(t) > 0.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tilebasis/tiles.hpp"

namespace tilebasis
{

/// A lower Riesz bound at or below this value is reported as singular.
inline constexpr double kSingularTolerance = 1e-12;

using ComplexMatrix = Eigen::MatrixXcd;

/// a = (a_1, ..., a_k), each a_j in [0,1)^d.  Stored exactly; reduced mod 1
/// on construction (fiber matrices only see a_j modulo Z^d).
class ShiftVector
{
public:
    ShiftVector() = default;
    explicit ShiftVector(std::vector<RationalVector> shifts);
    /// One-dimensional convenience: ShiftVector::of({0, Rational(1,2)}).
    static ShiftVector of(std::initializer_list<Rational> values);
    /// Exact conversion of double coordinates.
    static ShiftVector from_doubles(const std::vector<std::vector<double>>& shifts);
    /// a = (x, 2x, ..., kx) mod 1.
    static ShiftVector arithmetic(const RationalVector& x, std::size_t k);

    std::size_t order() const noexcept { return shifts_.size(); }
    std::size_t dimension() const noexcept { return shifts_.empty() ? 0 : shifts_.front().size(); }
    const RationalVector& operator[](std::size_t j) const { return shifts_[j]; }
    const std::vector<RationalVector>& shifts() const noexcept { return shifts_; }

    /// "a_1;a_2;..." with coordinates joined by ',' (rationals exact).
    std::string to_string() const;
    /// Parses the format written by to_string.
    static ShiftVector parse(std::string_view text);

    friend bool operator==(const ShiftVector&, const ShiftVector&) = default;

private:
    std::vector<RationalVector> shifts_;
};

struct FiberMatrix
{
    ComplexMatrix entries;
    Pattern source;
};

/// Eigenvalues of E^* E in ascending order.
struct SingularSpectrum
{
    std::vector<double> rho;

    double smallest() const { return rho.front(); }
    double largest() const { return rho.back(); }
};

struct RieszBounds
{
    double A = 0.0;  ///< min over patterns of rho_1
    double B = 0.0;  ///< max over patterns of rho_k
    Pattern lower_attained_at;
    Pattern upper_attained_at;

    bool singular() const noexcept { return A <= kSingularTolerance; }
};

/// One report row per pattern.
struct FiberRow
{
    Pattern pattern;
    double abs_det = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
};

FiberMatrix fiber_matrix(const Pattern& pattern, const ShiftVector& shifts);
SingularSpectrum singular_spectrum(const FiberMatrix& matrix);
double abs_determinant(const FiberMatrix& matrix);

RieszBounds riesz_bounds(std::span<const Pattern> patterns, const ShiftVector& shifts);
RieszBounds riesz_bounds(const PatternSet& patterns, const ShiftVector& shifts);

/// min over patterns of |det E_t^a|.
double det_gap(std::span<const Pattern> patterns, const ShiftVector& shifts);
double det_gap(const PatternSet& patterns, const ShiftVector& shifts);

/// eps^2 / B^{k-1}: the lower Riesz bound implied by |det| >= eps and
/// rho_k <= B, since |det|^2 = rho_1 ... rho_k <= rho_1 B^{k-1}.
double lower_bound_from_det(double eps, double B, std::size_t k);

std::vector<FiberRow> fiber_rows(std::span<const Pattern> patterns, const ShiftVector& shifts);

}  // namespace tilebasis
