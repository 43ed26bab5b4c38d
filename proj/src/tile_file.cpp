#include "tilebasis/tile_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tilebasis/gallery.hpp"

namespace tilebasis
{

namespace
{

std::vector<std::string> split_words(std::string_view line)
{
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            words.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

Rational number(const std::string& word, std::size_t line)
{
    try {
        return parse_rational(word);
    } catch (const std::invalid_argument& e) {
        throw TileFileError(line, e.what());
    }
}

std::int64_t integer(std::string_view word, std::size_t line)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size())
        throw TileFileError(line, "expected an integer, got '" + std::string(word) + "'");
    return v;
}

void set_dimension(TileDescription& t, std::size_t d, std::size_t line)
{
    if (d == 0)
        throw TileFileError(line, "dimension must be positive");
    if (t.dimension != 0 && t.dimension != d)
        throw TileFileError(line, "dimension mismatch: section has d=" + std::to_string(t.dimension) +
                                      ", line implies d=" + std::to_string(d));
    t.dimension = d;
}

}  // namespace

std::vector<TileDescription> parse_tile_file(std::string_view text)
{
    std::vector<TileDescription> out;
    std::optional<TileDescription> current;
    std::size_t line_no = 0;
    std::size_t section_start = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        auto words = split_words(raw);
        if (words.empty())
            continue;
        const std::string& key = words[0];

        if (key == "tile") {
            if (current)
                throw TileFileError(line_no, "'tile' inside an open section (missing 'end')");
            if (words.size() != 2)
                throw TileFileError(line_no, "expected 'tile <name>'");
            current = TileDescription{};
            current->name = words[1];
            section_start = line_no;
            continue;
        }
        if (!current)
            throw TileFileError(line_no, "'" + key + "' outside a tile section");

        if (key == "end") {
            if (words.size() != 1)
                throw TileFileError(line_no, "unexpected text after 'end'");
            if (current->boxes.empty() && !current->generator)
                throw TileFileError(line_no, "section '" + current->name + "' has neither boxes nor a generator");
            if (!current->lattice_rows.empty() && current->lattice_rows.size() != current->dimension)
                throw TileFileError(line_no, "lattice has " + std::to_string(current->lattice_rows.size()) +
                                                 " rows for dimension " + std::to_string(current->dimension));
            out.push_back(std::move(*current));
            current.reset();
        } else if (key == "dim") {
            if (words.size() != 2)
                throw TileFileError(line_no, "expected 'dim <d>'");
            auto d = integer(words[1], line_no);
            if (d <= 0)
                throw TileFileError(line_no, "dimension must be positive");
            set_dimension(*current, static_cast<std::size_t>(d), line_no);
        } else if (key == "lattice") {
            if (words.size() < 2)
                throw TileFileError(line_no, "empty lattice row");
            set_dimension(*current, words.size() - 1, line_no);
            RationalVector row;
            for (std::size_t i = 1; i < words.size(); ++i)
                row.push_back(number(words[i], line_no));
            current->lattice_rows.push_back(std::move(row));
        } else if (key == "box") {
            if (current->generator)
                throw TileFileError(line_no, "a section cannot mix boxes and a generator");
            if (words.size() < 3 || (words.size() - 1) % 2 != 0)
                throw TileFileError(line_no, "expected 'box lo_1 hi_1 ... lo_d hi_d'");
            set_dimension(*current, (words.size() - 1) / 2, line_no);
            RationalVector lo, hi;
            for (std::size_t i = 1; i < words.size(); i += 2) {
                lo.push_back(number(words[i], line_no));
                hi.push_back(number(words[i + 1], line_no));
            }
            try {
                current->boxes.emplace_back(std::move(lo), std::move(hi));
            } catch (const std::invalid_argument& e) {
                throw TileFileError(line_no, e.what());
            }
        } else if (key == "generator") {
            if (current->generator || !current->boxes.empty())
                throw TileFileError(line_no, "a section holds boxes or exactly one generator");
            if (words.size() < 2)
                throw TileFileError(line_no, "expected 'generator <name> ... J=<level>'");
            GeneratorSpec spec{words[1], {}};
            bool have_level = false;
            for (std::size_t i = 2; i < words.size(); ++i) {
                auto eq = words[i].find('=');
                if (eq == std::string::npos || eq == 0)
                    throw TileFileError(line_no, "expected key=value, got '" + words[i] + "'");
                std::string k = words[i].substr(0, eq);
                std::int64_t v = integer(std::string_view(words[i]).substr(eq + 1), line_no);
                if (k == "J") {
                    if (v < 0 || v > 1'000'000)
                        throw TileFileError(line_no, "J out of range");
                    current->level = static_cast<int>(v);
                    have_level = true;
                } else {
                    spec.params[k] = v;
                }
            }
            if (!have_level)
                throw TileFileError(line_no, "generator line needs J=<level>");
            try {
                gallery::validate(spec);
            } catch (const std::exception& e) {
                throw TileFileError(line_no, e.what());
            }
            set_dimension(*current, 1, line_no);
            current->generator = std::move(spec);
        } else {
            throw TileFileError(line_no, "unknown key '" + key + "'");
        }
    }
    if (current)
        throw TileFileError(section_start, "section '" + current->name + "' is missing 'end'");
    return out;
}

std::vector<TileDescription> read_tile_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open tile file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tile_file(buf.str());
}

MultiTile to_multitile(const TileDescription& description)
{
    if (description.generator) {
        if (!description.lattice_rows.empty() &&
            description.lattice_rows != Lattice::identity(description.dimension).matrix())
            throw std::invalid_argument("generators are defined for the integer lattice only");
        return gallery::materialize(*description.generator, description.level);
    }
    Lattice lattice = description.lattice_rows.empty() ? Lattice::identity(description.dimension)
                                                       : Lattice(description.lattice_rows);
    return normalize(lattice, description.boxes);
}

std::string write_tile_section(const std::string& name, const MultiTile& tile, bool materialize_boxes)
{
    std::string out = "tile " + name + "\n";
    out += "  dim " + std::to_string(tile.dimension()) + "\n";
    if (tile.generator() && !materialize_boxes) {
        out += "  generator " + tile.generator()->describe() + " J=" + std::to_string(tile.truncation_level()) + "\n";
    } else {
        for (const auto& b : tile.boxes()) {
            out += "  box";
            for (std::size_t i = 0; i < b.dimension(); ++i)
                out += " " + to_string(b.lo[i]) + " " + to_string(b.hi[i]);
            out += "\n";
        }
    }
    out += "end\n";
    return out;
}

}  // namespace tilebasis
