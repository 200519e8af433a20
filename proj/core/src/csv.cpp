#include "histwalk/csv.hpp"

#include "histwalk/errors.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

namespace histwalk {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
    for (const auto& row : table.rows)
        if (row.size() != table.header.size())
            throw config_error("emit_csv: ragged table for " + path.string());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("emit_csv: cannot open " + path.string());

    std::string line;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) line += ',';
        line += table.header[i];
    }
    line += '\n';
    out << line;

    for (const auto& row : table.rows) {
        line.clear();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += ',';
            line += format_double(row[i]);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw io_error("emit_csv: write failed for " + path.string());
}

}  // namespace histwalk
