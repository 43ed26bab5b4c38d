#pragma once

/// \file gallery.hpp
/// Deterministic constructors for the standard example tiles.
///
/// Generator-backed tiles are truncated at a level J: blocks 0..J are
/// materialised exactly, and the part of P not yet reached by later blocks,
/// [1 - 2^{-J}, 1), is covered by a "cap" that repeats the fiber of block J.
/// The cap boxes are listed after the block boxes and are the only boxes
/// that change when the truncation is extended.  This keeps every
/// truncation an honest multi-tile whose pattern set is exactly the set of
/// block fibers realised so far.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilebasis/tiles.hpp"

namespace tilebasis::gallery
{

inline constexpr int kDefaultBitBudget = 62;

/// [0, k) as a k-tile of Z.
MultiTile interval_ktile(int k);

/// [0,1) u [3/2, 5/2): the smallest two-pattern 2-tile.
MultiTile split_two_tile();

/// Lacunary blocks: n_1 = 1, n_{j+1} the smallest integer exceeding
/// q^k (n_j + 1) (a multiple of j+1 when `divisible`), and
/// Omega_j = U_{i<k} [q^i n_j + 1 - 2^{-(j-1)}, q^i n_j + 1 - 2^{-j}).
/// Fibers are {0, n_j, q n_j, ..., q^{k-1} n_j}, i.e. k+1 points.
/// Throws std::out_of_range when q^{k-1} n_J + 1 needs more than
/// `bit_budget` bits.
MultiTile lacunary(int k, int q, int level, bool divisible, int bit_budget = kDefaultBitBudget);

/// Blocks Omega_j = [n_j + 1 - 2^{-(j-1)}, n_j + 1 - 2^{-j}) where n_j runs
/// through {3,5,7,...} u {m! : m >= 2} in increasing order.
MultiTile factorial_odd(int level);

/// Dispatch by generator name.  Unknown names, unknown parameters and
/// out-of-range values throw std::invalid_argument / std::out_of_range.
MultiTile materialize(const GeneratorSpec& spec, int level);

/// Throws if `spec` names an unknown generator or carries bad parameters.
void validate(const GeneratorSpec& spec);

std::vector<Integer> lacunary_sequence(int k, int q, int count, bool divisible);
std::vector<std::int64_t> factorial_odd_sequence(std::size_t count);

/// Fibers of blocks 1..J in block order (or the single fiber {0} at J = 0),
/// computed in closed form without materialising boxes.  For the finite
/// fixtures this is the pattern list of the tile itself.
std::vector<Pattern> block_patterns(const GeneratorSpec& spec, int level);

/// Closed-form pattern set at truncation J, with cells and measures.
PatternSet closed_form_pattern_set(const GeneratorSpec& spec, int level);

/// An element y of the generator's full (untruncated) difference set with
/// x*y an integer, located by closed-form reasoning.  `block_index` is the
/// truncation level at which y first appears.
struct StructuralAnnihilator
{
    Integer element;
    Integer block_index;
    std::string reason;
};

std::optional<StructuralAnnihilator> structural_annihilator(const GeneratorSpec& spec, const Rational& x);

}  // namespace tilebasis::gallery
