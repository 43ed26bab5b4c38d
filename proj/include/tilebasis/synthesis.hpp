#pragma once

/// \file synthesis.hpp
/// Fiberwise synthesis and analysis for f = sum_{j, gamma} c_{j gamma} e_{a_j - gamma}
/// on a multi-tile in normalised coordinates (lattice Z^d, fundamental
/// domain P = [0,1)^d).
///
/// For omega in P and lambda in Lambda_omega, e(gamma . lambda) = 1, so
///   f(omega + lambda_i) = sum_j E_{ij} e(a_j . omega) m_j(omega),
///   m_j(omega) = sum_gamma c_{j gamma} e(-gamma . omega).
/// Samples use the midpoint grid omega = (2i+1)/(2n) per coordinate.  The
/// periodic trapezoidal rule recovers c exactly when n > 2N (|gamma| <= N).

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "tilebasis/fibers.hpp"

namespace tilebasis
{

using Complex = std::complex<double>;

/// c_{j gamma} for j < k and gamma in [-N, N]^d, gamma flattened row-major.
class CoefficientArray
{
public:
    CoefficientArray() = default;
    CoefficientArray(std::size_t k, std::size_t dimension, int N);

    std::size_t order() const noexcept { return k_; }
    std::size_t dimension() const noexcept { return d_; }
    int range() const noexcept { return N_; }
    std::size_t gamma_count() const noexcept { return gammas_; }

    Complex& at(std::size_t j, std::size_t gamma_index) { return values_[j * gammas_ + gamma_index]; }
    Complex at(std::size_t j, std::size_t gamma_index) const { return values_[j * gammas_ + gamma_index]; }
    /// Coordinates of the flattened index.
    std::vector<int> gamma(std::size_t gamma_index) const;
    std::size_t index_of(const std::vector<int>& gamma) const;

    const std::vector<Complex>& values() const noexcept { return values_; }
    std::vector<Complex>& values() noexcept { return values_; }
    double norm_squared() const;

private:
    std::size_t k_ = 0, d_ = 0;
    int N_ = 0;
    std::size_t gammas_ = 0;
    std::vector<Complex> values_;
};

struct SampledFunction
{
    int grid_n = 0;
    std::size_t dimension = 0;
    std::size_t order = 0;
    /// For grid point p (row-major over n^d): the pattern index and the k
    /// samples f(omega_p + lambda_i), i in pattern order.
    std::vector<std::size_t> pattern_index;
    std::vector<Complex> samples;

    std::size_t points() const { return pattern_index.size(); }
    Complex sample(std::size_t point, std::size_t i) const { return samples[point * order + i]; }
};

class SingularFiber : public std::runtime_error
{
public:
    SingularFiber(const Pattern& pattern, double rho_min);
    const Pattern& pattern() const noexcept { return pattern_; }

private:
    Pattern pattern_;
};

/// Refuses fibers with rho_1 at or below this value.
inline constexpr double kAnalysisTolerance = 1e-6;

SampledFunction synthesize(const PatternSet& patterns, const ShiftVector& a, const CoefficientArray& c, int grid_n);

CoefficientArray analyze(const PatternSet& patterns, const ShiftVector& a, const SampledFunction& f, int N);

/// Direct pointwise value of sum c_{j gamma} e((a_j - gamma) . t).
Complex evaluate_direct(const ShiftVector& a, const CoefficientArray& c, const RationalVector& t);

/// Midpoint grid coordinate (2i+1)/(2n).
Rational grid_coordinate(int i, int n);

/// int_Omega |f|^2 by the fiberwise midpoint rule.
double l2_norm_squared(const SampledFunction& f);

/// Complex Gaussian coefficients (Box-Muller on raw mt19937_64 output, so
/// streams are identical across standard libraries), scaled to unit norm.
CoefficientArray random_coefficients(std::size_t k, std::size_t dimension, int N, std::mt19937_64& rng);

struct FrameRatios
{
    double r_min = 0.0;
    double r_max = 0.0;
};

FrameRatios empirical_frame_ratio(const PatternSet& patterns, const ShiftVector& a, int trials, int N, int grid_n,
                                  std::uint64_t seed);

struct RoundTripReport
{
    int N = 0;
    int grid_n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double max_relative_error = 0.0;
    double max_parseval_error = 0.0;  ///< | ||c||^2 - quadrature of sum |m_j|^2 | / ||c||^2
    FrameRatios ratios;
    RieszBounds bounds;
};

/// trials random coefficient arrays: synthesise, analyse, compare, and
/// record the frame ratios.  Throws SingularFiber when A is too small.
RoundTripReport round_trip(const PatternSet& patterns, const ShiftVector& a, int N, int grid_n, int trials,
                           std::uint64_t seed);

}  // namespace tilebasis
