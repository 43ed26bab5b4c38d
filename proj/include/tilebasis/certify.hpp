#pragma once

/// \file certify.hpp
/// Lower Riesz bounds that hold uniformly over truncations, and numerical
/// evidence of obstruction.
///
/// Kronecker certificates: for patterns {0, lambda_2, ..., lambda_k} that
/// pairwise meet only in 0, choose shifts g_j with e(g_j lambda_i) close to
/// a fixed +-1 matrix M.  If every entry is within eps of M then
/// |det E| >= |det M| / 2, whence A >= (|det M|/2)^2 / (k^2)^{k-1}.
///
/// Two-tile test: for k = 2 the fiber determinant at a = (x, 2x) is
/// |1 - e(x.y)| for the single difference y of each pattern, so the best
/// progression shift is governed by the annihilator gap min_y |1 - e(x.y)|.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilebasis/fibers.hpp"
#include "tilebasis/search.hpp"
#include "tilebasis/tile_file.hpp"

namespace tilebasis
{

//------------------------------------------------------------------------------
// Target matrix and epsilon(k)
//------------------------------------------------------------------------------

struct TargetMatrix
{
    std::vector<std::vector<int>> entries;  ///< row i: k+1-i ones, then i-1 minus ones
    Integer delta;                          ///< |det|
};

TargetMatrix target_matrix(int k);

/// |det| of an integer matrix by fraction-free (Bareiss) elimination.
Integer integer_determinant(std::vector<std::vector<Integer>> m);

/// Largest multiple of 1e-4 with k! ((1+eps)^k - 1) < delta/2.
///
/// For |Delta_ij| <= eps and |M_ij| = 1, each of the k! permutation terms of
/// det(M + Delta) differs from the matching term of det M by at most
/// (1+eps)^k - 1, so |det(M + Delta)| > delta - delta/2.
double epsilon_for_k(int k);

//------------------------------------------------------------------------------
// Kronecker search
//------------------------------------------------------------------------------

struct KroneckerOptions
{
    /// Interval-refinement nodes explored per feasibility probe.
    std::size_t node_budget = 2'000'000;
    /// Bisection steps on the per-entry tolerance.
    int tolerance_steps = 48;
};

struct KroneckerReport
{
    std::vector<std::int64_t> S;  ///< union of pattern points minus 0, ascending
    int k = 0;
    TargetMatrix target;
    std::vector<Rational> g;            ///< g_1 = 0
    std::vector<double> column_epsilon;  ///< achieved max deviation per column
    double epsilon_achieved = 0.0;
    double epsilon_target = 0.0;
    bool success = false;
    std::size_t nodes = 0;
    std::string message;
};

class HypothesisError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Checks: one-dimensional patterns of a common size, each starting at 0
/// with the rest positive, and distinct patterns meeting only in 0.
void check_kronecker_hypotheses(std::span<const Pattern> patterns);

/// Per column j > 1, the g_j in [0,1) minimising max_lambda |e(g_j lambda) - M|
/// (target M_{row(lambda), j}) up to the bisection resolution.  Always
/// returns a report; success iff the achieved epsilon <= eps_target.
/// Throws HypothesisError when the pattern shape is wrong.
KroneckerReport kronecker_shift_search(std::span<const Pattern> patterns, double eps_target,
                                       const KroneckerOptions& options = {});

/// The shift vector a = (g_1, ..., g_k) from a report.
ShiftVector kronecker_shift(const KroneckerReport& report);

//------------------------------------------------------------------------------
// Certificates
//------------------------------------------------------------------------------

enum class CertificateKind
{
    kronecker,
    admissible,
    vandermonde_gap,
    finite_exact,
};

std::string to_string(CertificateKind kind);
CertificateKind parse_certificate_kind(std::string_view text);

struct Certificate
{
    CertificateKind kind = CertificateKind::finite_exact;
    double bound_A = 0.0;
    ShiftVector witness;
    /// kind-specific witness data as key/value lines (g, (v,n), x and gap,
    /// pattern count), echoed verbatim in the text block.
    std::vector<std::pair<std::string, std::string>> evidence;
    /// Scope: the tile section the bound refers to.  Generator-backed tiles
    /// are stored by generator line, finite tiles by their boxes.
    std::string scope_section;
    std::uint64_t scope_hash = 0;
    int probed_level = 0;
    /// True when the bound is asserted for all truncation levels on
    /// structural grounds; false means proved at probed_level only.
    bool all_levels = false;
    std::string validity_note;

    std::string to_text() const;
    static Certificate parse(std::string_view text);
};

struct CertifyOptions
{
    /// Lacunary generators with q at or above this ratio get their
    /// Kronecker certificate asserted for every level (declared input, not
    /// derived).
    int lacunary_ratio_threshold = 27;
    KroneckerOptions kronecker;
    std::int64_t admissible_n_max = 64;
    int grid_n = kDefaultGridN;
};

struct CertifyOutcome
{
    std::optional<Certificate> certificate;
    std::string message;
    /// Kronecker failures: achieved epsilon and the target it missed.
    std::optional<KroneckerReport> kronecker;
};

/// Pattern set of a tile description: closed form for generators, exact
/// arrangement for box unions.
PatternSet pattern_set_of(const TileDescription& description);
PatternSet pattern_set_at(const MultiTile& tile, int level);

CertifyOutcome kronecker_certificate(const MultiTile& tile, int probe_level, const CertifyOptions& options = {});
CertifyOutcome admissible_certificate(const MultiTile& tile, int probe_level, const CertifyOptions& options = {});
CertifyOutcome vandermonde_certificate(const MultiTile& tile, int probe_level, const CertifyOptions& options = {});
/// Exhaustive bound for a tile whose pattern set does not depend on the
/// truncation level: A itself at the given witness.
CertifyOutcome finite_exact_certificate(const MultiTile& tile, const ShiftVector& witness);

struct VerifyOutcome
{
    bool valid = false;
    double recomputed_A = 0.0;
    std::string message;
};

/// Re-materialises the scope at the probed level, checks the scope hash, and
/// recomputes riesz_bounds at the witness.
VerifyOutcome verify_certificate(const Certificate& certificate);

//------------------------------------------------------------------------------
// Annihilator gaps and the two-tile test
//------------------------------------------------------------------------------

/// min_{y in Y} |1 - e(x.y)|; exactly 0 iff some y has x.y in Z; 2 for empty Y.
double annihilator_gap(const DifferenceSet& Y, const RationalVector& x);
double annihilator_gap(std::span<const std::int64_t> Y, const Rational& x);

/// Gap after each prefix of Y at the given prefix lengths (ascending), in
/// one pass.  Used for truncation schedules where Y_J is a prefix.
std::vector<double> prefix_gaps(std::span<const std::int64_t> Y, const Rational& x,
                                std::span<const std::size_t> prefix_lengths);

enum class TwoTileVerdict
{
    certified_candidate,
    obstructed,
    inconclusive,
};

std::string to_string(TwoTileVerdict verdict);

struct TwoTileOptions
{
    int max_denominator = 32;
    double decay_threshold = 0.05;
    /// Smallest final gap that counts as "bounded below" for a survivor.
    double survive_threshold = 0.5;
};

struct GapTrajectory
{
    Rational x;
    std::vector<double> gaps;  ///< one per schedule level
    bool decayed = false;      ///< final gap < decay threshold
    /// An element of the full (untruncated) difference set annihilating x,
    /// when the generator knows one.
    std::optional<Integer> structural_element;
    std::optional<Integer> structural_block;
};

struct TwoTileReport
{
    std::vector<int> schedule;
    std::vector<GapTrajectory> trajectories;  ///< ascending x
    TwoTileVerdict verdict = TwoTileVerdict::inconclusive;
    std::optional<Rational> witness;  ///< best survivor
    std::size_t decayed = 0;
    std::size_t structural = 0;
    std::size_t survivors = 0;
};

/// x runs over {i / x_grid} together with all p/q, q <= max_denominator, in
/// [0,1).  Verdict: obstructed if every x decays or is structurally
/// annihilated; certified candidate if some x keeps a final gap of at least
/// survive_threshold; inconclusive otherwise.
TwoTileReport two_tile_test(const MultiTile& tile, int x_grid, const std::vector<int>& schedule,
                            const TwoTileOptions& options = {});

}  // namespace tilebasis
