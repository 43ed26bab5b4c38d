#pragma once

// Shared formatting helpers for the text/TSV reports.  Reports must be
// byte-identical across identical runs, so every double goes through
// format_real and every hash through fnv1a64.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tilebasis
{

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// "%.12g"-style rendering, with -0 normalised to 0.
std::string format_real(double value, int digits = 12);

/// Join fields with tabs.
std::string tsv_row(const std::vector<std::string>& fields);

struct ReportHeader
{
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::string input_hash;

    std::string render() const;
};

/// A named table: one TSV header line, then rows.
struct ReportBlock
{
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Header, "## summary" key/value lines, then blocks.  The tsv layout is
/// the machine-readable one; human pads columns for reading.
struct Report
{
    ReportHeader header;
    std::vector<std::pair<std::string, std::string>> summary;
    std::vector<ReportBlock> blocks;

    void add(std::string key, std::string value) { summary.emplace_back(std::move(key), std::move(value)); }
    std::string render(bool human = false) const;
};

}  // namespace tilebasis
