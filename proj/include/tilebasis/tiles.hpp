#pragma once

/// \file tiles.hpp
/// Lattices, box-union multi-tiles and their fiber (pattern) structure.
///
/// All coordinates handed to MultiTile are in the lattice-normalised frame,
/// where the lattice is Z^d and the fundamental domain is P = [0,1)^d.
/// Boxes are half-open, so every point of R^d lies in a well-defined set of
/// boxes and all partition/measure statements below are exact.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tilebasis/rational.hpp"

namespace tilebasis
{

//------------------------------------------------------------------------------
// Lattice
//------------------------------------------------------------------------------

/// Full lattice M Z^d.  `matrix()` returns M row by row; the columns of M
/// are the basis vectors.
class Lattice
{
public:
    explicit Lattice(std::vector<RationalVector> rows);
    static Lattice identity(std::size_t dimension);

    std::size_t dimension() const noexcept { return rows_.size(); }
    const std::vector<RationalVector>& matrix() const noexcept { return rows_; }
    const std::vector<RationalVector>& inverse() const noexcept { return inverse_; }
    const Rational& det_abs() const noexcept { return det_abs_; }

    /// M^{-T}, whose columns generate the dual lattice.
    std::vector<RationalVector> dual_basis() const;

private:
    std::vector<RationalVector> rows_;
    std::vector<RationalVector> inverse_;
    Rational det_abs_;
};

//------------------------------------------------------------------------------
// Box
//------------------------------------------------------------------------------

/// Half-open axis-aligned box [lo, hi).
struct Box
{
    RationalVector lo;
    RationalVector hi;

    Box() = default;
    Box(RationalVector lo_, RationalVector hi_);

    /// One-dimensional convenience constructor.
    static Box interval(const Rational& lo, const Rational& hi);

    std::size_t dimension() const noexcept { return lo.size(); }
    Rational volume() const;
    bool contains(const RationalVector& point) const;
    /// True when the intersection has positive measure.
    bool overlaps(const Box& other) const;
    std::string to_string() const;

    friend bool operator==(const Box& a, const Box& b) { return a.lo == b.lo && a.hi == b.hi; }
};

//------------------------------------------------------------------------------
// Generators
//------------------------------------------------------------------------------

/// A named deterministic family of blocks (see gallery.hpp).
struct GeneratorSpec
{
    std::string name;
    std::map<std::string, std::int64_t> params;

    std::int64_t param(std::string_view key) const;
    std::int64_t param_or(std::string_view key, std::int64_t fallback) const;
    /// "name key=value ..." with keys in sorted order.
    std::string describe() const;

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

//------------------------------------------------------------------------------
// MultiTile
//------------------------------------------------------------------------------

class MultiTile
{
public:
    /// Validates dimensions, nonemptiness and pairwise disjointness.
    explicit MultiTile(std::vector<Box> boxes);
    MultiTile(std::vector<Box> boxes, GeneratorSpec generator, int truncation_level);

    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<Box>& boxes() const noexcept { return boxes_; }
    const std::optional<GeneratorSpec>& generator() const noexcept { return generator_; }
    int truncation_level() const noexcept { return truncation_level_; }

    Rational measure() const;
    /// Canonical text of the normalised boxes (plus generator), used for hashing.
    std::string canonical_text() const;
    std::uint64_t hash() const;

    MultiTile translated(const LatticePoint& shift) const;

private:
    std::vector<Box> boxes_;
    std::optional<GeneratorSpec> generator_;
    int truncation_level_ = 0;
    std::size_t dimension_ = 0;
};

//------------------------------------------------------------------------------
// Patterns
//------------------------------------------------------------------------------

/// A fiber: k lattice points in strictly increasing lexicographic order.
class Pattern
{
public:
    Pattern() = default;
    /// Throws std::invalid_argument unless strictly increasing and same dimension.
    explicit Pattern(std::vector<LatticePoint> points);
    static Pattern from_unsorted(std::vector<LatticePoint> points);
    /// One-dimensional convenience: Pattern::of({0, 1, 3}).
    static Pattern of(std::initializer_list<std::int64_t> values);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t dimension() const noexcept { return points_.empty() ? 0 : points_.front().size(); }
    const std::vector<LatticePoint>& points() const noexcept { return points_; }
    const LatticePoint& operator[](std::size_t i) const { return points_[i]; }

    Pattern translated(const LatticePoint& shift) const;
    std::string to_string() const;

    friend auto operator<=>(const Pattern&, const Pattern&) = default;
    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    std::vector<LatticePoint> points_;
};

struct PatternCell
{
    Pattern pattern;
    Rational measure;
    std::vector<Box> cells;  ///< boxes inside P = [0,1)^d where this pattern occurs
};

/// The set D of positive-measure fibers with their cells P_t.
class PatternSet
{
public:
    /// Validates: nonempty, common order k and dimension, positive
    /// measures summing to exactly 1, distinct patterns.
    explicit PatternSet(std::vector<PatternCell> entries);

    /// Equal measures 1/n; cells left empty.  Intended for fixtures that only
    /// need the patterns.
    static PatternSet uniform(std::vector<Pattern> patterns);

    std::size_t order() const noexcept { return order_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<PatternCell>& entries() const noexcept { return entries_; }
    std::vector<Pattern> patterns() const;

    /// Index of the entry whose cells contain omega, if any.
    std::optional<std::size_t> locate(const RationalVector& omega) const;

private:
    std::vector<PatternCell> entries_;
    std::size_t order_ = 0;
    std::size_t dimension_ = 0;
};

/// Y = { lambda_i - lambda_j : i != j } over a pattern set; never contains 0
/// and is closed under negation.  Elements are kept sorted.
class DifferenceSet
{
public:
    DifferenceSet() = default;
    /// Symmetrises the input; throws if it contains the zero vector.
    explicit DifferenceSet(std::vector<LatticePoint> elements);

    const std::vector<LatticePoint>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    bool contains(const LatticePoint& y) const;

private:
    std::vector<LatticePoint> elements_;
};

//------------------------------------------------------------------------------
// Errors
//------------------------------------------------------------------------------

/// Covering multiplicity is not constant on P.  Carries two cells of
/// positive measure with different multiplicities.
class NotAMultiTile : public std::runtime_error
{
public:
    struct Witness
    {
        Box cell;
        std::size_t multiplicity;
    };

    NotAMultiTile(Witness first, Witness second);

    const Witness& first() const noexcept { return first_; }
    const Witness& second() const noexcept { return second_; }

private:
    Witness first_;
    Witness second_;
};

//------------------------------------------------------------------------------
// Operations
//------------------------------------------------------------------------------

/// Maps ambient boxes through M^{-1}.  M^{-1} must be monomial (one nonzero
/// per row and column), otherwise images of boxes are not boxes.
MultiTile normalize(const Lattice& lattice, const std::vector<Box>& raw_boxes);

/// Returns the constant covering multiplicity k, or throws NotAMultiTile.
std::size_t verify_k_tile(const MultiTile& tile);

/// Exact arrangement of P into cells of constant fiber.
PatternSet pattern_cells(const MultiTile& tile);

DifferenceSet difference_set(const PatternSet& patterns);
DifferenceSet difference_set(std::span<const Pattern> patterns);

/// Re-materialises a generator-backed tile at a deeper truncation level.
/// Defined alongside the generators in gallery.cpp.
MultiTile extend_truncation(const MultiTile& tile, int level);

}  // namespace tilebasis
