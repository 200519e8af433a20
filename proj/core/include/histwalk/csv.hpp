#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace histwalk {

// Rectangular numeric table with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

// Writes header + rows, one comma-separated line each, '\n' endings.
// Throws config_error on a ragged table and io_error on filesystem failure.
void emit_csv(const Table& table, const std::filesystem::path& path);

}  // namespace histwalk
