#include "schurfact/cli/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "schurfact/error.hpp"

namespace schurfact::cli {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// `where` prefixes error messages, e.g. "line 3: ".
double parse_decimal(std::string_view text, std::string_view cell, const std::string& where) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    fail(where + "bad number in cell '" + std::string(cell) + "'");
  }
  return value;
}

// Coefficient of an imaginary part written without the trailing 'i': "", "+", "-" or a decimal.
double parse_imaginary(std::string_view text, std::string_view cell, const std::string& where) {
  if (text.empty() || text == "+") return 1.0;
  if (text == "-") return -1.0;
  return parse_decimal(text, cell, where);
}

Complex parse_cell(std::string_view raw, const std::string& where) {
  const std::string_view cell = trim(raw);
  if (cell.empty()) fail(where + "empty cell");
  if (cell.back() != 'i') return {parse_decimal(cell, cell, where), 0.0};

  const std::string_view body = cell.substr(0, cell.size() - 1);
  // The real/imaginary split is the last sign that is neither leading nor part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_imaginary(body, cell, where)};
  return {parse_decimal(body.substr(0, split), cell, where), parse_imaginary(body.substr(split), cell, where)};
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::size_t stop = end == std::string_view::npos ? text.size() : end;
    lines.push_back(text.substr(start, stop - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::optional<MatrixFormat> format_from_path(const std::filesystem::path& path) {
  const std::string ext = lowercase(path.extension().string());
  if (ext == ".json") return MatrixFormat::Json;
  if (ext == ".csv") return MatrixFormat::Csv;
  return std::nullopt;
}

Complex parse_complex_cell(std::string_view cell) { return parse_cell(cell, ""); }

ComplexMatrix parse_csv_matrix(std::string_view text) {
  std::vector<std::vector<Complex>> rows;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    std::vector<Complex> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      row.push_back(parse_cell(cell, "line " + std::to_string(line_no) + ": "));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail("line " + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) + " cells, found " +
           std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail("no matrix rows in CSV input");
  ComplexMatrix x(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) x(i, j) = rows[i][j];
  }
  return x;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("JSON matrix must be an object");
  for (const char* key : {"rows", "cols", "entries"}) {
    if (!j.contains(key)) fail(std::string("JSON matrix lacks \"") + key + "\"");
  }
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned()) {
    fail("\"rows\" and \"cols\" must be positive integers");
  }
  const auto rows = j["rows"].get<std::uint64_t>();
  const auto cols = j["cols"].get<std::uint64_t>();
  if (rows == 0 || cols == 0) fail("\"rows\" and \"cols\" must be positive integers");
  const nlohmann::json& entries = j["entries"];
  if (!entries.is_array() || entries.size() != rows * cols) {
    fail("\"entries\" must hold rows*cols = " + std::to_string(rows * cols) + " pairs");
  }
  ComplexMatrix x(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const nlohmann::json& e = entries[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      fail("entry " + std::to_string(k) + " is not a [re, im] pair");
    }
    const Complex z(e[0].get<double>(), e[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail("entry " + std::to_string(k) + " is not finite");
    x(static_cast<Index>(k / cols), static_cast<Index>(k % cols)) = z;
  }
  return x;
}

ComplexMatrix parse_json_matrix(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

MatrixFormat detect_format(const std::filesystem::path& path, std::string_view text,
                           std::optional<MatrixFormat> forced) {
  if (forced) return *forced;
  if (const auto by_name = format_from_path(path)) return *by_name;
  const std::string_view body = trim(text);
  return !body.empty() && body.front() == '{' ? MatrixFormat::Json : MatrixFormat::Csv;
}

ComplexMatrix parse_matrix(std::string_view text, MatrixFormat format) {
  return format == MatrixFormat::Json ? parse_json_matrix(text) : parse_csv_matrix(text);
}

ComplexMatrix read_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format) {
  const std::string text = read_file(path);
  return parse_matrix(text, detect_format(path, text, format));
}

std::string format_real(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  if (ec != std::errc()) fail("cannot format number");
  return std::string(buffer, end);
}

std::string format_complex_cell(Complex value) {
  if (value.imag() == 0.0 && !std::signbit(value.imag())) return format_real(value.real());
  std::string text = format_real(value.real());
  const std::string imag = format_real(value.imag());
  if (imag.front() != '-') text.push_back('+');
  return text + imag + "i";
}

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& x) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) entries.push_back({x(i, j).real(), x(i, j).imag()});
  }
  return {{"rows", x.rows()}, {"cols", x.cols()}, {"entries", std::move(entries)}};
}

std::string write_json_matrix(const ComplexMatrix& x) { return matrix_to_json(x).dump() + "\n"; }

std::string write_csv_matrix(const ComplexMatrix& x) {
  std::string out;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j > 0) out.push_back(',');
      out += format_complex_cell(x(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void write_matrix(const std::filesystem::path& path, const ComplexMatrix& x, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write '" + path.string() + "'");
  out << (format == MatrixFormat::Json ? write_json_matrix(x) : write_csv_matrix(x));
}

}  // namespace schurfact::cli
