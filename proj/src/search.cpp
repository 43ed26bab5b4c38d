#include "tilebasis/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace tilebasis
{

std::string to_string(SearchMethod method)
{
    switch (method) {
    case SearchMethod::vandermonde:
        return "vandermonde";
    case SearchMethod::admissible:
        return "admissible";
    case SearchMethod::optimizer:
        return "optimizer";
    }
    return "?";
}

SearchMethod parse_search_method(std::string_view text)
{
    if (text == "vandermonde")
        return SearchMethod::vandermonde;
    if (text == "admissible")
        return SearchMethod::admissible;
    if (text == "optimizer")
        return SearchMethod::optimizer;
    throw std::invalid_argument("unknown search method '" + std::string(text) + "'");
}

namespace
{

__extension__ typedef __int128 int128;

// x = p / q coordinatewise with one denominator q < 2^62.
struct CommonForm
{
    std::int64_t q = 1;
    std::vector<std::int64_t> p;
};

std::optional<CommonForm> common_form(const RationalVector& x)
{
    Integer q = 1;
    for (const auto& c : x)
        mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), c.get_den_mpz_t());
    if (mpz_sizeinbase(q.get_mpz_t(), 2) > 62)
        return std::nullopt;
    CommonForm out;
    out.q = q.get_si();
    for (const auto& c : x) {
        Integer p = c.get_num() * (q / c.get_den());
        mpz_fdiv_r(p.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        out.p.push_back(p.get_si());
    }
    return out;
}

std::int64_t residue(std::int64_t y, std::int64_t q)
{
    std::int64_t r = y % q;
    return r < 0 ? r + q : r;
}

double gap_exact(const std::vector<LatticePoint>& Y, const RationalVector& x)
{
    if (Y.empty())
        return 2.0;
    if (auto form = common_form(x)) {
        const std::int64_t q = form->q;
        std::int64_t best = q;  // min over y of dist(x.y, Z) * q
        for (const auto& y : Y) {
            int128 r = 0;
            for (std::size_t c = 0; c < y.size(); ++c)
                r = (r + static_cast<int128>(form->p[c]) * residue(y[c], q)) % q;
            auto ri = static_cast<std::int64_t>(r);
            best = std::min(best, std::min(ri, q - ri));
            if (best == 0)
                break;
        }
        return unit_gap(ratio(best, q));
    }
    Rational best(1);
    for (const auto& y : Y) {
        Rational d = distance_to_integer(dot(y, x));
        if (d < best)
            best = d;
        if (best == 0)
            break;
    }
    return unit_gap(best);
}

// Convergents of an exact rational, denominators ascending.
std::vector<Rational> convergents(const Rational& value, const Integer& max_den)
{
    std::vector<Rational> out;
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Rational rest = value;
    for (int iter = 0; iter < 64; ++iter) {
        Integer a = floor_of(rest);
        Integer h2 = a * h1 + h0;
        Integer k2 = a * k1 + k0;
        if (k2 > max_den)
            break;
        out.emplace_back(h2, k2);
        out.back().canonicalize();
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        Rational frac = rest - Rational(a);
        if (frac == 0)
            break;
        rest = 1 / frac;
    }
    return out;
}

}  // namespace

double vandermonde_objective(const DifferenceSet& Y, const RationalVector& x)
{
    for (const auto& y : Y.elements())
        if (y.size() != x.size())
            throw std::invalid_argument("vandermonde_objective: dimension mismatch");
    return gap_exact(Y.elements(), x);
}

ShiftVector progression_shift(const RationalVector& x, std::size_t k)
{
    return ShiftVector::arithmetic(x, k);
}

GapMaximum maximize_gap(const DifferenceSet& Y, std::size_t dimension, int grid_n)
{
    if (dimension == 0)
        throw std::invalid_argument("maximize_gap: dimension must be positive");
    if (grid_n < 2)
        throw std::invalid_argument("maximize_gap: grid_n must be >= 2");
    double cells = std::pow(static_cast<double>(grid_n), static_cast<double>(dimension));
    if (cells > 5e7)
        throw std::out_of_range("maximize_gap: grid of " + std::to_string(static_cast<long long>(cells)) +
                                " points is too large");

    GapMaximum out;
    out.x.assign(dimension, Rational(0));
    if (Y.empty()) {
        out.gap = 2.0;
        return out;
    }
    const auto& elems = Y.elements();
    auto evaluate = [&](const RationalVector& x) {
        ++out.evaluations;
        return gap_exact(elems, x);
    };

    // Grid scan in lexicographic order; strict '>' keeps the smallest x.
    std::vector<std::int64_t> idx(dimension, 0);
    double best = -1.0;
    std::vector<std::int64_t> best_idx = idx;
    const auto total = static_cast<std::int64_t>(cells);
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t rem = flat;
        for (std::size_t c = dimension; c-- > 0;) {
            idx[c] = rem % grid_n;
            rem /= grid_n;
        }
        RationalVector x(dimension);
        for (std::size_t c = 0; c < dimension; ++c)
            x[c] = ratio(idx[c], grid_n);
        double g = evaluate(x);
        if (g > best) {
            best = g;
            best_idx = idx;
        }
    }
    RationalVector x(dimension);
    for (std::size_t c = 0; c < dimension; ++c)
        x[c] = ratio(best_idx[c], grid_n);
    double gx = best;

    // Local refinement within one grid step.
    const double h = 1.0 / grid_n;
    if (dimension == 1) {
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = x[0].get_d() - h, hi = x[0].get_d() + h;
        auto at = [&](double t) {
            RationalVector v{fractional_part(from_double(t))};
            return std::pair{evaluate(v), v};
        };
        double t1 = hi - phi * (hi - lo), t2 = lo + phi * (hi - lo);
        auto f1 = at(t1), f2 = at(t2);
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            for (const auto* f : {&f1, &f2})
                if (f->first > gx) {
                    gx = f->first;
                    x = f->second;
                }
            if (f1.first >= f2.first) {
                hi = t2;
                t2 = t1;
                f2 = f1;
                t1 = hi - phi * (hi - lo);
                f1 = at(t1);
            } else {
                lo = t1;
                t1 = t2;
                f1 = f2;
                t2 = lo + phi * (hi - lo);
                f2 = at(t2);
            }
        }
        for (const auto* f : {&f1, &f2})
            if (f->first > gx) {
                gx = f->first;
                x = f->second;
            }
    } else {
        for (double step = h; step > 1e-12; step /= 2) {
            bool moved = true;
            while (moved) {
                moved = false;
                for (std::size_t c = 0; c < dimension; ++c)
                    for (double sgn : {1.0, -1.0}) {
                        RationalVector y = x;
                        y[c] = fractional_part(y[c] + from_double(sgn * step));
                        double gy = evaluate(y);
                        if (gy > gx) {
                            gx = gy;
                            x = std::move(y);
                            moved = true;
                        }
                    }
            }
        }
    }

    // Snap coordinates to simpler rationals that lose at most 1e-12.
    for (std::size_t c = 0; c < dimension; ++c) {
        for (const auto& r : convergents(x[c], Integer("1000000000000"))) {
            if (r.get_den() >= x[c].get_den())
                break;
            RationalVector y = x;
            y[c] = fractional_part(r);
            double gy = evaluate(y);
            if (gy >= gx - 1e-12) {
                x = std::move(y);
                gx = std::max(gx, gy);
                break;
            }
        }
    }
    out.x = x;
    out.gap = gap_exact(elems, x);
    return out;
}

SearchResult vandermonde_search(const PatternSet& patterns, int grid_n)
{
    const std::size_t k = patterns.order();
    auto Y = difference_set(patterns);
    auto best = maximize_gap(Y, patterns.dimension(), grid_n);

    SearchResult out;
    out.method = SearchMethod::vandermonde;
    out.a = progression_shift(best.x, k);
    out.objective = riesz_bounds(patterns, out.a).A;
    auto& diag = out.diagnostics;
    diag.evaluations = best.evaluations;
    diag.step = best.x;
    diag.gap = best.gap;
    diag.det_lower_bound = std::pow(best.gap, static_cast<double>(k * (k - 1) / 2));
    diag.trace = {best.gap};
    diag.budget = "grid_n=" + std::to_string(grid_n) + " dimension=" + std::to_string(patterns.dimension());
    return out;
}

//------------------------------------------------------------------------------
// Admissibility
//------------------------------------------------------------------------------

std::vector<RationalVector> default_v_candidates(std::size_t dimension)
{
    if (dimension == 0)
        throw std::invalid_argument("default_v_candidates: dimension must be positive");
    std::vector<std::vector<int>> rest;
    std::vector<int> v(dimension, -3);
    for (;;) {
        int first = 0;
        int unit_like = 0;
        for (int c : v) {
            if (first == 0)
                first = c;
            unit_like += c != 0;
        }
        bool is_unit = unit_like == 1 && first == 1;
        if (first > 0 && !is_unit)
            rest.push_back(v);
        std::size_t c = dimension;
        while (c-- > 0) {
            if (v[c] < 3) {
                ++v[c];
                break;
            }
            v[c] = -3;
        }
        if (c == static_cast<std::size_t>(-1))
            break;
    }
    auto norm = [](const std::vector<int>& u) {
        int m = 0;
        for (int c : u)
            m = std::max(m, std::abs(c));
        return m;
    };
    std::stable_sort(rest.begin(), rest.end(),
                     [&](const auto& a, const auto& b) { return norm(a) < norm(b); });

    std::vector<RationalVector> out;
    for (std::size_t i = 0; i < dimension; ++i) {
        RationalVector e(dimension, Rational(0));
        e[i] = 1;
        out.push_back(std::move(e));
    }
    for (const auto& u : rest) {
        RationalVector r;
        for (int c : u)
            r.emplace_back(c);
        out.push_back(std::move(r));
    }
    return out;
}

bool is_admissible(std::span<const Pattern> patterns, const RationalVector& v, std::int64_t n)
{
    if (n < 1)
        return false;
    const Integer modulus(to_integer(n));
    std::vector<Integer> residues;
    for (const auto& t : patterns) {
        if (t.dimension() != v.size())
            throw std::invalid_argument("is_admissible: dimension mismatch");
        residues.clear();
        for (const auto& lambda : t.points()) {
            Rational value = dot(lambda, v);
            if (value.get_den() != 1)
                return false;
            Integer r;
            mpz_fdiv_r(r.get_mpz_t(), value.get_num_mpz_t(), modulus.get_mpz_t());
            residues.push_back(r);
        }
        std::sort(residues.begin(), residues.end());
        if (std::adjacent_find(residues.begin(), residues.end()) != residues.end())
            return false;
    }
    return true;
}

std::optional<AdmissiblePair> admissibility_search(std::span<const Pattern> patterns, std::int64_t n_max,
                                                   const std::vector<RationalVector>& v_candidates)
{
    if (patterns.empty())
        throw std::invalid_argument("admissibility_search: empty pattern set");
    const auto k = static_cast<std::int64_t>(patterns.front().size());
    for (std::int64_t n = std::max<std::int64_t>(k, 1); n <= n_max; ++n)
        for (const auto& v : v_candidates)
            if (is_admissible(patterns, v, n))
                return AdmissiblePair{v, n};
    return std::nullopt;
}

SearchResult admissible_result(const PatternSet& patterns, const AdmissiblePair& pair)
{
    const std::size_t k = patterns.order();
    RationalVector x = pair.v;
    for (auto& c : x)
        c /= to_integer(pair.n);
    SearchResult out;
    out.method = SearchMethod::admissible;
    out.a = progression_shift(x, k);
    out.objective = riesz_bounds(patterns, out.a).A;
    auto& diag = out.diagnostics;
    diag.step = x;
    diag.admissible_v = pair.v;
    diag.admissible_n = pair.n;
    // Distinct residues mod n put every nonzero difference at least 1/n away
    // from the integers.
    diag.gap = unit_gap(ratio(1, pair.n));
    diag.det_lower_bound = std::pow(*diag.gap, static_cast<double>(k * (k - 1) / 2));
    diag.evaluations = 1;
    return out;
}

//------------------------------------------------------------------------------
// Optimiser
//------------------------------------------------------------------------------

namespace
{

// Double-precision objective for patterns with small coordinates; phases
// lambda.a stay accurate to ~1e-10 when |lambda| < 2^24.
class FastObjective
{
public:
    FastObjective(const PatternSet& ps) : k_(ps.order()), d_(ps.dimension())
    {
        for (const auto& t : ps.patterns()) {
            std::vector<double> pts;
            for (const auto& lambda : t.points())
                for (auto c : lambda) {
                    if (std::abs(c) >= (std::int64_t{1} << 24))
                        exact_ = true;
                    pts.push_back(static_cast<double>(c));
                }
            points_.push_back(std::move(pts));
        }
        for (const auto& t : ps.patterns())
            patterns_.push_back(t);
    }

    std::size_t free_dimension() const { return (k_ - 1) * d_; }

    ShiftVector shift(const std::vector<double>& free) const
    {
        std::vector<std::vector<double>> a(k_, std::vector<double>(d_, 0.0));
        for (std::size_t j = 1; j < k_; ++j)
            for (std::size_t c = 0; c < d_; ++c)
                a[j][c] = free[(j - 1) * d_ + c];
        return ShiftVector::from_doubles(a);
    }

    /// mode 0: min_t log|det|, mode 1: min_t rho_1.
    double operator()(const std::vector<double>& free, int mode)
    {
        ++evaluations;
        if (exact_) {
            auto a = shift(free);
            if (mode == 1)
                return riesz_bounds(std::span<const Pattern>(patterns_), a).A;
            double worst = INFINITY;
            for (const auto& t : patterns_)
                worst = std::min(worst, safe_log(abs_determinant(fiber_matrix(t, a))));
            return worst;
        }
        double worst = INFINITY;
        ComplexMatrix E(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(k_));
        for (const auto& pts : points_) {
            for (std::size_t r = 0; r < k_; ++r)
                for (std::size_t s = 0; s < k_; ++s) {
                    double theta = 0.0;
                    if (s > 0)
                        for (std::size_t c = 0; c < d_; ++c)
                            theta += pts[r * d_ + c] * free[(s - 1) * d_ + c];
                    theta -= std::floor(theta);
                    E(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
                        std::polar(1.0, 2.0 * std::numbers::pi * theta);
                }
            double value;
            if (mode == 0) {
                value = safe_log(std::abs(E.partialPivLu().determinant()));
            } else {
                ComplexMatrix gram = E.adjoint() * E;
                Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram, Eigen::EigenvaluesOnly);
                value = std::max(0.0, solver.eigenvalues()(0));
            }
            worst = std::min(worst, value);
        }
        return worst;
    }

    std::size_t evaluations = 0;

private:
    static double safe_log(double v) { return v > 0 ? std::log(v) : -1e300; }

    std::size_t k_, d_;
    bool exact_ = false;
    std::vector<std::vector<double>> points_;
    std::vector<Pattern> patterns_;
};

double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double wrap(double v)
{
    return v - std::floor(v);
}

// Opportunistic coordinate pattern search; step halves when no poll move
// improves, ending below min_step or after max_steps polls.
double pattern_search(std::vector<double>& x, FastObjective& f, int mode, double step, double min_step, int max_steps)
{
    double fx = f(x, mode);
    int polls = 0;
    while (step >= min_step && polls < max_steps) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size() && polls < max_steps; ++i)
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> y = x;
                y[i] = wrap(y[i] + sgn * step);
                double fy = f(y, mode);
                ++polls;
                if (fy > fx) {
                    x = std::move(y);
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        if (!improved)
            step /= 2;
    }
    return fx;
}

}  // namespace

SearchResult optimize_shifts(const PatternSet& patterns, const OptimizerOptions& options)
{
    if (options.restarts < 1 || options.iters < 1)
        throw std::invalid_argument("optimize_shifts: restarts and iters must be positive");
    const std::size_t k = patterns.order();
    const std::size_t d = patterns.dimension();

    SearchResult out;
    out.method = SearchMethod::optimizer;
    out.diagnostics.budget = "restarts=" + std::to_string(options.restarts) + " iters=" +
                             std::to_string(options.iters) + " seed=" + std::to_string(options.seed);
    if (k == 1) {
        out.a = ShiftVector(std::vector<RationalVector>{RationalVector(d, Rational(0))});
        out.objective = riesz_bounds(patterns, out.a).A;
        out.diagnostics.trace = {out.objective};
        return out;
    }

    FastObjective f(patterns);
    std::mt19937_64 rng(options.seed);
    std::vector<double> best;
    double best_value = -1.0;
    for (int r = 0; r < options.restarts; ++r) {
        std::vector<double> x(f.free_dimension());
        for (auto& c : x)
            c = unit_draw(rng);
        pattern_search(x, f, 0, options.initial_step, options.min_step, options.iters);
        double value = pattern_search(x, f, 1, options.initial_step / 64, options.min_step, options.iters);
        if (value > best_value || (value == best_value && x < best)) {
            best_value = value;
            best = x;
        }
        out.diagnostics.trace.push_back(best_value);
    }

    ShiftVector a = f.shift(best);
    double objective = riesz_bounds(patterns, a).A;
    for (std::size_t q = 1; q <= 4 * k; ++q) {
        std::vector<RationalVector> snapped(k, RationalVector(d, Rational(0)));
        for (std::size_t j = 1; j < k; ++j)
            for (std::size_t c = 0; c < d; ++c)
                snapped[j][c] = ratio(std::llround(best[(j - 1) * d + c] * static_cast<double>(q)),
                                      static_cast<std::int64_t>(q));
        ShiftVector candidate(std::move(snapped));
        double value = riesz_bounds(patterns, candidate).A;
        if (value >= objective - 1e-9) {
            a = candidate;
            objective = value;
            break;
        }
    }
    out.a = a;
    out.objective = objective;
    out.diagnostics.evaluations = f.evaluations;
    return out;
}

}  // namespace tilebasis
