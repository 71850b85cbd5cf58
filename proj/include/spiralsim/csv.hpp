#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace spiralsim {

/**
 * Locale-independent decimal formatting with 15 significant digits —
 * enough to round-trip doubles for the tight acceptance tolerances, and
 * byte-stable across runs and platforms for deterministic data files.
 */
std::string format_number(double value);

/// Format a nonnegative integer column (round/cycle/step indices).
std::string format_number(std::size_t value);

/**
 * Write rows as CSV with a trailing newline, LF line endings, no quoting
 * (all cells are numeric or simple tokens). Throws std::runtime_error when
 * the file cannot be opened.
 */
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace spiralsim
