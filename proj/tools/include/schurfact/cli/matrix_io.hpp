#pragma once

// Matrix files: JSON {"rows", "cols", "entries": [[re, im], ...]} in row-major
// order, or CSV with one matrix row per line and cells "a", "a+bi", "a-bi", "i".

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "schurfact/matrix.hpp"

namespace schurfact::cli {

enum class MatrixFormat { Json, Csv };

/// ".json" or ".csv" (case-insensitive); anything else is unknown.
std::optional<MatrixFormat> format_from_path(const std::filesystem::path& path);

// All parsers throw Error(ParseError) with a line/entry locator.
ComplexMatrix parse_json_matrix(std::string_view text);
ComplexMatrix parse_csv_matrix(std::string_view text);
Complex parse_complex_cell(std::string_view cell);

/// `forced`, else the extension, else JSON when the first non-blank byte is '{'.
MatrixFormat detect_format(const std::filesystem::path& path, std::string_view text,
                           std::optional<MatrixFormat> forced = std::nullopt);
ComplexMatrix parse_matrix(std::string_view text, MatrixFormat format);

/// Reads the file with the format chosen by detect_format.
ComplexMatrix read_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format = std::nullopt);
std::string read_file(const std::filesystem::path& path);

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& x);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

std::string write_json_matrix(const ComplexMatrix& x);
std::string write_csv_matrix(const ComplexMatrix& x);
void write_matrix(const std::filesystem::path& path, const ComplexMatrix& x, MatrixFormat format);

/// Decimal text with 17 significant digits; reads back exactly.
std::string format_real(double value);
std::string format_complex_cell(Complex value);

}  // namespace schurfact::cli
