#pragma once

/// \file search.hpp
/// Searches for shift vectors a with det E_t^a bounded away from zero:
/// arithmetic-progression shifts from a Vandermonde gap, admissible (v, n)
/// pairs, and a derivative-free optimiser for the general case.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilebasis/fibers.hpp"

namespace tilebasis
{

enum class SearchMethod
{
    vandermonde,
    admissible,
    optimizer,
};

std::string to_string(SearchMethod method);
SearchMethod parse_search_method(std::string_view text);

struct SearchDiagnostics
{
    std::size_t evaluations = 0;
    /// Best objective after each restart (optimizer) or refinement stage.
    std::vector<double> trace;
    /// Vandermonde / admissible: the progression step x and its gap
    /// min_y |1 - e(x.y)|, with the implied bound |det| >= gap^{k(k-1)/2}.
    std::optional<RationalVector> step;
    std::optional<double> gap;
    std::optional<double> det_lower_bound;
    /// Admissible: the pair (v, n) with x = v / n.
    std::optional<RationalVector> admissible_v;
    std::optional<std::int64_t> admissible_n;
    std::string budget;  ///< human-readable budget echo
};

struct SearchResult
{
    ShiftVector a;
    double objective = 0.0;  ///< riesz_bounds(ps, a).A
    SearchMethod method = SearchMethod::optimizer;
    SearchDiagnostics diagnostics;
};

//------------------------------------------------------------------------------
// Gaps
//------------------------------------------------------------------------------

/// min_{y in Y} |1 - e(x.y)|, decided exactly in rationals; 2 for empty Y
/// (the empty minimum is taken at the largest possible value).
double vandermonde_objective(const DifferenceSet& Y, const RationalVector& x);

/// a = (x, 2x, ..., kx).
ShiftVector progression_shift(const RationalVector& x, std::size_t k);

struct GapMaximum
{
    RationalVector x;
    double gap = 0.0;
    std::size_t evaluations = 0;
};

/// Grid scan of [0,1)^d at side grid_n (ascending, first maximum wins),
/// local refinement, then snapping to a nearby simple rational when that
/// loses at most 1e-12.
GapMaximum maximize_gap(const DifferenceSet& Y, std::size_t dimension, int grid_n);

inline constexpr int kDefaultGridN = 4096;
inline constexpr int kDefaultGridNMultiDim = 64;

SearchResult vandermonde_search(const PatternSet& patterns, int grid_n = kDefaultGridN);

//------------------------------------------------------------------------------
// Admissibility
//------------------------------------------------------------------------------

struct AdmissiblePair
{
    RationalVector v;
    std::int64_t n = 0;
};

/// Unit vectors first, then the remaining integer vectors with entries in
/// [-3, 3] ordered by max-norm then lexicographically.  Of v and -v only the
/// one whose first nonzero entry is positive is kept (same residue classes).
std::vector<RationalVector> default_v_candidates(std::size_t dimension);

/// First (v, n), n ascending from k to n_max and v in candidate order, such
/// that v.lambda is an integer for every pattern point and the values
/// v.lambda mod n are pairwise distinct within each pattern.
std::optional<AdmissiblePair> admissibility_search(std::span<const Pattern> patterns, std::int64_t n_max,
                                                   const std::vector<RationalVector>& v_candidates);

/// Residues distinct mod n within every pattern (exact).
bool is_admissible(std::span<const Pattern> patterns, const RationalVector& v, std::int64_t n);

/// The shift built from an admissible pair: a = (x, 2x, ..., kx), x = v/n.
SearchResult admissible_result(const PatternSet& patterns, const AdmissiblePair& pair);

//------------------------------------------------------------------------------
// Optimiser
//------------------------------------------------------------------------------

struct OptimizerOptions
{
    int restarts = 8;
    int iters = 4000;  ///< accepted-or-rejected steps per local search phase
    std::uint64_t seed = 1;
    double initial_step = 0.125;
    double min_step = 1e-6;
};

/// Maximises min_t rho_1(E_t^a) over the torus.  a_1 is pinned to 0: a
/// common translate of all a_j multiplies E by a unitary diagonal on the
/// left and leaves every spectrum unchanged.  Each restart climbs min_t
/// log|det E_t| first (smooth away from crossings), then polishes the true
/// objective; the final point is snapped to denominators <= 4k when that
/// loses at most 1e-9.
SearchResult optimize_shifts(const PatternSet& patterns, const OptimizerOptions& options = {});

}  // namespace tilebasis
