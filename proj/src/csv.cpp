#include "spiralsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace spiralsim {

std::string format_number(double value) {
    // std::to_chars is locale-independent and deterministic; 15 significant
    // digits keeps data files byte-stable while exceeding the 12-digit floor
    // the downstream tolerances assume.
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 15);
    if (result.ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buffer, result.ptr);
}

std::string format_number(std::size_t value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (result.ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buffer, result.ptr);
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << row[i];
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace spiralsim
