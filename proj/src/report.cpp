#include "tilebasis/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#ifndef TILEBASIS_VERSION
#define TILEBASIS_VERSION "0.0.0"
#endif

namespace tilebasis
{

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string format_real(double value, int digits)
{
    if (value == 0.0)
        value = 0.0;  // drop the sign of -0
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

std::string tsv_row(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out += '\t';
        out += fields[i];
    }
    return out;
}

std::string ReportHeader::render() const
{
    std::string out = "# tilebasis " TILEBASIS_VERSION "\n";
    out += "# command: " + command + "\n";
    for (const auto& [key, value] : config)
        out += "# config." + key + ": " + value + "\n";
    if (!input_hash.empty())
        out += "# input_hash: fnv1a64:" + input_hash + "\n";
    return out;
}

std::string Report::render(bool human) const
{
    std::string out = header.render();
    if (!human) {
        out += "## summary\n";
        for (const auto& [key, value] : summary)
            out += key + "\t" + value + "\n";
        for (const auto& block : blocks) {
            out += "## " + block.name + "\n";
            out += tsv_row(block.columns) + "\n";
            for (const auto& row : block.rows)
                out += tsv_row(row) + "\n";
        }
        return out;
    }
    std::size_t key_width = 0;
    for (const auto& [key, value] : summary)
        key_width = std::max(key_width, key.size());
    for (const auto& [key, value] : summary)
        out += key + ":" + std::string(key_width - key.size() + 1, ' ') + value + "\n";
    for (const auto& block : blocks) {
        std::vector<std::size_t> width(block.columns.size());
        for (std::size_t c = 0; c < block.columns.size(); ++c)
            width[c] = block.columns[c].size();
        for (const auto& row : block.rows)
            for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
                width[c] = std::max(width[c], row[c].size());
        auto line = [&](const std::vector<std::string>& fields) {
            std::string text;
            for (std::size_t c = 0; c < fields.size(); ++c) {
                text += fields[c];
                if (c + 1 < fields.size() && c < width.size())
                    text += std::string(width[c] - fields[c].size() + 2, ' ');
            }
            return text + "\n";
        };
        out += "\n" + block.name + "\n" + line(block.columns);
        for (const auto& row : block.rows)
            out += line(row);
    }
    return out;
}

}  // namespace tilebasis
