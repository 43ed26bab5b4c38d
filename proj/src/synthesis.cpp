#include "tilebasis/synthesis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

#include "tilebasis/report.hpp"

namespace tilebasis
{

CoefficientArray::CoefficientArray(std::size_t k, std::size_t dimension, int N) : k_(k), d_(dimension), N_(N)
{
    if (k == 0 || dimension == 0 || N < 0)
        throw std::invalid_argument("CoefficientArray: need k >= 1, d >= 1, N >= 0");
    gammas_ = 1;
    for (std::size_t c = 0; c < d_; ++c)
        gammas_ *= static_cast<std::size_t>(2 * N + 1);
    values_.assign(k_ * gammas_, Complex(0.0, 0.0));
}

std::vector<int> CoefficientArray::gamma(std::size_t gamma_index) const
{
    std::vector<int> out(d_);
    const auto side = static_cast<std::size_t>(2 * N_ + 1);
    for (std::size_t c = d_; c-- > 0;) {
        out[c] = static_cast<int>(gamma_index % side) - N_;
        gamma_index /= side;
    }
    return out;
}

std::size_t CoefficientArray::index_of(const std::vector<int>& gamma) const
{
    if (gamma.size() != d_)
        throw std::invalid_argument("CoefficientArray: gamma has the wrong dimension");
    std::size_t index = 0;
    for (int g : gamma) {
        if (g < -N_ || g > N_)
            throw std::out_of_range("CoefficientArray: gamma outside [-N, N]^d");
        index = index * static_cast<std::size_t>(2 * N_ + 1) + static_cast<std::size_t>(g + N_);
    }
    return index;
}

double CoefficientArray::norm_squared() const
{
    double s = 0.0;
    for (const auto& v : values_)
        s += std::norm(v);
    return s;
}

SingularFiber::SingularFiber(const Pattern& pattern, double rho_min)
    : std::runtime_error("singular fiber at pattern " + pattern.to_string() + " (rho_1 = " + format_real(rho_min) +
                         ")"),
      pattern_(pattern)
{
}

Rational grid_coordinate(int i, int n)
{
    return ratio(2 * static_cast<std::int64_t>(i) + 1, 2 * static_cast<std::int64_t>(n));
}

namespace
{

// Shared tables for one (pattern set, a, grid, N) configuration.
class Grid
{
public:
    Grid(const PatternSet& ps, const ShiftVector& a, int grid_n, int N)
        : n_(grid_n), N_(N), d_(ps.dimension()), k_(ps.order())
    {
        if (grid_n < 1)
            throw std::invalid_argument("grid_n must be positive");
        if (a.order() != k_ || a.dimension() != d_)
            throw std::invalid_argument("shift vector does not match the pattern set");
        double total = std::pow(static_cast<double>(grid_n), static_cast<double>(d_));
        if (total > 1e7)
            throw std::out_of_range("grid of " + format_real(total) + " points is too large");
        points_ = static_cast<std::size_t>(total);

        const auto two_n = 2 * static_cast<std::int64_t>(grid_n);
        roots_.resize(static_cast<std::size_t>(two_n));
        for (std::int64_t r = 0; r < two_n; ++r)
            roots_[static_cast<std::size_t>(r)] = unit_exp(ratio(r, two_n));

        // e(a_j,c * omega_c) per (j, c, i).
        shift_phase_.resize(k_ * d_ * static_cast<std::size_t>(n_));
        for (std::size_t j = 0; j < k_; ++j)
            for (std::size_t c = 0; c < d_; ++c)
                for (int i = 0; i < n_; ++i)
                    shift_phase_[(j * d_ + c) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)] =
                        unit_exp(a[j][c] * grid_coordinate(i, n_));

        const auto patterns = ps.patterns();
        for (const auto& t : patterns) {
            auto E = fiber_matrix(t, a);
            matrices_.push_back(E.entries);
        }

        pattern_index_.resize(points_);
        std::vector<int> idx(d_);
        for (std::size_t p = 0; p < points_; ++p) {
            coordinates(p, idx);
            RationalVector omega(d_);
            for (std::size_t c = 0; c < d_; ++c)
                omega[c] = grid_coordinate(idx[c], n_);
            auto where = ps.locate(omega);
            if (!where)
                throw std::invalid_argument("grid point " + to_string(omega) + " lies in no pattern cell");
            pattern_index_[p] = *where;
        }
    }

    std::size_t points() const { return points_; }
    const std::vector<std::size_t>& pattern_index() const { return pattern_index_; }
    const ComplexMatrix& matrix(std::size_t t) const { return matrices_[t]; }

    void coordinates(std::size_t p, std::vector<int>& idx) const
    {
        for (std::size_t c = d_; c-- > 0;) {
            idx[c] = static_cast<int>(p % static_cast<std::size_t>(n_));
            p /= static_cast<std::size_t>(n_);
        }
    }

    /// e(-gamma . omega) at grid index idx.
    Complex character(const std::vector<int>& gamma, const std::vector<int>& idx) const
    {
        const auto two_n = 2 * static_cast<std::int64_t>(n_);
        Complex out(1.0, 0.0);
        for (std::size_t c = 0; c < d_; ++c) {
            std::int64_t r = (-static_cast<std::int64_t>(gamma[c]) * (2 * static_cast<std::int64_t>(idx[c]) + 1)) % two_n;
            if (r < 0)
                r += two_n;
            out *= roots_[static_cast<std::size_t>(r)];
        }
        return out;
    }

    Complex shift_phase(std::size_t j, const std::vector<int>& idx) const
    {
        Complex out(1.0, 0.0);
        for (std::size_t c = 0; c < d_; ++c)
            out *= shift_phase_[(j * d_ + c) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[c])];
        return out;
    }

    /// m_j(omega_p) for all j at point p.
    void multipliers(const CoefficientArray& coeff, const std::vector<std::vector<int>>& gammas,
                     const std::vector<int>& idx, std::vector<Complex>& m) const
    {
        m.assign(k_, Complex(0.0, 0.0));
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            const Complex chi = character(gammas[g], idx);
            for (std::size_t j = 0; j < k_; ++j)
                m[j] += coeff.at(j, g) * chi;
        }
    }

private:
    int n_, N_;
    std::size_t d_, k_;
    std::size_t points_ = 0;
    std::vector<Complex> roots_;
    std::vector<Complex> shift_phase_;
    std::vector<ComplexMatrix> matrices_;
    std::vector<std::size_t> pattern_index_;
};

std::vector<std::vector<int>> all_gammas(const CoefficientArray& c)
{
    std::vector<std::vector<int>> out;
    out.reserve(c.gamma_count());
    for (std::size_t g = 0; g < c.gamma_count(); ++g)
        out.push_back(c.gamma(g));
    return out;
}

void require_nonsingular(const PatternSet& ps, const ShiftVector& a)
{
    auto rb = riesz_bounds(ps, a);
    if (rb.A <= kAnalysisTolerance)
        throw SingularFiber(rb.lower_attained_at, rb.A);
}

SampledFunction synthesize_on(const Grid& grid, const CoefficientArray& c, int grid_n, double* fiber_energy)
{
    const std::size_t k = c.order();
    SampledFunction f;
    f.grid_n = grid_n;
    f.dimension = c.dimension();
    f.order = k;
    f.pattern_index = grid.pattern_index();
    f.samples.assign(grid.points() * k, Complex(0.0, 0.0));

    const auto gammas = all_gammas(c);
    std::vector<int> idx(c.dimension());
    std::vector<Complex> m;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(k));
    double energy = 0.0;
    for (std::size_t p = 0; p < grid.points(); ++p) {
        grid.coordinates(p, idx);
        grid.multipliers(c, gammas, idx, m);
        for (std::size_t j = 0; j < k; ++j) {
            energy += std::norm(m[j]);
            v(static_cast<Eigen::Index>(j)) = grid.shift_phase(j, idx) * m[j];
        }
        Eigen::VectorXcd out = grid.matrix(f.pattern_index[p]) * v;
        for (std::size_t i = 0; i < k; ++i)
            f.samples[p * k + i] = out(static_cast<Eigen::Index>(i));
    }
    if (fiber_energy)
        *fiber_energy = energy / static_cast<double>(grid.points());
    return f;
}

CoefficientArray analyze_on(const Grid& grid, const PatternSet& ps, const SampledFunction& f, int N)
{
    const std::size_t k = ps.order();
    const std::size_t d = ps.dimension();
    CoefficientArray c(k, d, N);
    const auto gammas = all_gammas(c);

    std::vector<Eigen::FullPivLU<ComplexMatrix>> solvers;
    for (std::size_t t = 0; t < ps.size(); ++t)
        solvers.emplace_back(grid.matrix(t));

    const double weight = 1.0 / static_cast<double>(grid.points());
    std::vector<int> idx(d);
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(k));
    std::vector<Complex> m(k);
    for (std::size_t p = 0; p < grid.points(); ++p) {
        grid.coordinates(p, idx);
        for (std::size_t i = 0; i < k; ++i)
            rhs(static_cast<Eigen::Index>(i)) = f.sample(p, i);
        Eigen::VectorXcd v = solvers[f.pattern_index[p]].solve(rhs);
        for (std::size_t j = 0; j < k; ++j)
            m[j] = v(static_cast<Eigen::Index>(j)) * std::conj(grid.shift_phase(j, idx));
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            const Complex chi_conj = std::conj(grid.character(gammas[g], idx));
            for (std::size_t j = 0; j < k; ++j)
                c.at(j, g) += weight * m[j] * chi_conj;
        }
    }
    return c;
}

}  // namespace

SampledFunction synthesize(const PatternSet& patterns, const ShiftVector& a, const CoefficientArray& c, int grid_n)
{
    if (c.order() != patterns.order() || c.dimension() != patterns.dimension())
        throw std::invalid_argument("synthesize: coefficient array does not match the pattern set");
    Grid grid(patterns, a, grid_n, c.range());
    return synthesize_on(grid, c, grid_n, nullptr);
}

CoefficientArray analyze(const PatternSet& patterns, const ShiftVector& a, const SampledFunction& f, int N)
{
    if (f.order != patterns.order() || f.dimension != patterns.dimension())
        throw std::invalid_argument("analyze: sampled function does not match the pattern set");
    if (f.grid_n <= 2 * N)
        throw std::invalid_argument("analyze: grid_n must exceed 2N, otherwise frequencies alias");
    require_nonsingular(patterns, a);
    Grid grid(patterns, a, f.grid_n, N);
    if (grid.pattern_index() != f.pattern_index)
        throw std::invalid_argument("analyze: sample layout does not match the pattern set");
    return analyze_on(grid, patterns, f, N);
}

Complex evaluate_direct(const ShiftVector& a, const CoefficientArray& c, const RationalVector& t)
{
    if (t.size() != c.dimension() || a.order() != c.order())
        throw std::invalid_argument("evaluate_direct: dimension mismatch");
    Complex sum(0.0, 0.0);
    for (std::size_t g = 0; g < c.gamma_count(); ++g) {
        const auto gamma = c.gamma(g);
        for (std::size_t j = 0; j < c.order(); ++j) {
            Rational phase = 0;
            for (std::size_t q = 0; q < t.size(); ++q)
                phase += (a[j][q] - gamma[q]) * t[q];
            sum += c.at(j, g) * unit_exp(phase);
        }
    }
    return sum;
}

double l2_norm_squared(const SampledFunction& f)
{
    double s = 0.0;
    for (const auto& v : f.samples)
        s += std::norm(v);
    return f.points() ? s / static_cast<double>(f.points()) : 0.0;
}

CoefficientArray random_coefficients(std::size_t k, std::size_t dimension, int N, std::mt19937_64& rng)
{
    CoefficientArray c(k, dimension, N);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (auto& v : c.values()) {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        v = Complex(r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2));
    }
    const double norm = std::sqrt(c.norm_squared());
    if (norm > 0)
        for (auto& v : c.values())
            v /= norm;
    return c;
}

FrameRatios empirical_frame_ratio(const PatternSet& patterns, const ShiftVector& a, int trials, int N, int grid_n,
                                  std::uint64_t seed)
{
    if (trials < 1)
        throw std::invalid_argument("empirical_frame_ratio: trials must be >= 1");
    Grid grid(patterns, a, grid_n, N);
    std::mt19937_64 rng(seed);
    FrameRatios out{INFINITY, -INFINITY};
    for (int t = 0; t < trials; ++t) {
        auto c = random_coefficients(patterns.order(), patterns.dimension(), N, rng);
        auto f = synthesize_on(grid, c, grid_n, nullptr);
        const double ratio_value = l2_norm_squared(f) / c.norm_squared();
        out.r_min = std::min(out.r_min, ratio_value);
        out.r_max = std::max(out.r_max, ratio_value);
    }
    return out;
}

RoundTripReport round_trip(const PatternSet& patterns, const ShiftVector& a, int N, int grid_n, int trials,
                           std::uint64_t seed)
{
    if (trials < 1)
        throw std::invalid_argument("round_trip: trials must be >= 1");
    if (grid_n <= 2 * N)
        throw std::invalid_argument("round_trip: grid_n must exceed 2N, otherwise frequencies alias");
    RoundTripReport out;
    out.N = N;
    out.grid_n = grid_n;
    out.trials = trials;
    out.seed = seed;
    out.bounds = riesz_bounds(patterns, a);
    require_nonsingular(patterns, a);

    Grid grid(patterns, a, grid_n, N);
    std::mt19937_64 rng(seed);
    out.ratios = {INFINITY, -INFINITY};
    for (int t = 0; t < trials; ++t) {
        auto c = random_coefficients(patterns.order(), patterns.dimension(), N, rng);
        double energy = 0.0;
        auto f = synthesize_on(grid, c, grid_n, &energy);
        auto back = analyze_on(grid, patterns, f, N);
        double diff = 0.0;
        for (std::size_t i = 0; i < c.values().size(); ++i)
            diff += std::norm(c.values()[i] - back.values()[i]);
        const double cn = c.norm_squared();
        out.max_relative_error = std::max(out.max_relative_error, std::sqrt(diff / cn));
        out.max_parseval_error = std::max(out.max_parseval_error, std::abs(energy - cn) / cn);
        const double ratio_value = l2_norm_squared(f) / cn;
        out.ratios.r_min = std::min(out.ratios.r_min, ratio_value);
        out.ratios.r_max = std::max(out.ratios.r_max, ratio_value);
    }
    return out;
}

}  // namespace tilebasis
