#pragma once

// Tile description files.
//
// Line-oriented, UTF-8, '#' starts a comment.  One section per tile:
//
//   tile <name>
//     dim <d>                          optional; inferred otherwise
//     lattice <m_11> ... <m_1d>        one line per row of M (Lambda = M Z^d);
//                                      optional, identity when absent
//     box <lo_1> <hi_1> ... <lo_d> <hi_d>   ambient coordinates, half-open
//     generator <name> [key=value ...] J=<level>
//   end
//
// Numbers are rationals "p/q", integers or plain decimals.  A section holds
// either boxes or exactly one generator line.  Unknown keys are rejected.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilebasis/tiles.hpp"

namespace tilebasis
{

struct TileDescription
{
    std::string name;
    std::size_t dimension = 0;
    std::vector<RationalVector> lattice_rows;  ///< empty means identity
    std::vector<Box> boxes;                    ///< ambient frame
    std::optional<GeneratorSpec> generator;
    int level = 0;
};

class TileFileError : public std::runtime_error
{
public:
    TileFileError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

std::vector<TileDescription> parse_tile_file(std::string_view text);
std::vector<TileDescription> read_tile_file(const std::string& path);

/// Normalises boxes through the lattice, or materialises the generator.
MultiTile to_multitile(const TileDescription& description);

/// Section text for a normalised tile (generator line when available).
std::string write_tile_section(const std::string& name, const MultiTile& tile, bool materialize_boxes = false);

}  // namespace tilebasis
