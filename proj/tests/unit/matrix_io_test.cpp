#include <doctest.h>

#include <filesystem>

#include "schurfact/cli/matrix_io.hpp"
#include "schurfact/error.hpp"
#include "support.hpp"

using namespace schurfact;
using namespace schurfact::cli;
using namespace testing_support;

namespace {

ErrorCode error_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidMatrix;
}

}  // namespace

TEST_CASE("CSV cell grammar") {
  CHECK(parse_complex_cell("1.5") == Complex(1.5, 0));
  CHECK(parse_complex_cell("-2") == Complex(-2, 0));
  CHECK(parse_complex_cell("1+2i") == Complex(1, 2));
  CHECK(parse_complex_cell("1-2i") == Complex(1, -2));
  CHECK(parse_complex_cell("i") == Complex(0, 1));
  CHECK(parse_complex_cell("-i") == Complex(0, -1));
  CHECK(parse_complex_cell("3+i") == Complex(3, 1));
  CHECK(parse_complex_cell("0.25i") == Complex(0, 0.25));
  CHECK(parse_complex_cell(" 1e-3-2.5E+2i ") == Complex(1e-3, -250));
  CHECK(parse_complex_cell("-1e5") == Complex(-1e5, 0));
  for (const char* bad : {"", "abc", "1+", "1+2j", "i1", "1..2", "nan", "inf", "1+2ii"}) {
    CAPTURE(bad);
    CHECK(error_code_of([&] { parse_complex_cell(bad); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("CSV matrices") {
  const ComplexMatrix x = parse_csv_matrix("1,0\n0,0.25i\n");
  CHECK(x.rows() == 2);
  CHECK(x.cols() == 2);
  CHECK(x(1, 1) == Complex(0, 0.25));
  CHECK(parse_csv_matrix("1,2\r\n3,4\r\n\n")(1, 0) == Complex(3, 0));
  CHECK(error_code_of([] { parse_csv_matrix("1,2\n3\n"); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { parse_csv_matrix("\n\n"); }) == ErrorCode::ParseError);
  try {
    parse_csv_matrix("1,2\n3,x\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("JSON matrices") {
  const ComplexMatrix x = parse_json_matrix(R"({"rows":1,"cols":2,"entries":[[1,0],[0,-1]]})");
  CHECK(x(0, 1) == Complex(0, -1));
  for (const char* bad : {R"({"rows":1,"cols":2,"entries":[[1,0]]})", R"({"rows":0,"cols":2,"entries":[]})",
                          R"({"rows":1,"cols":1,"entries":[[1]]})", R"({"rows":1,"cols":1})", R"([1,2])",
                          R"({"rows":-1,"cols":1,"entries":[[1,0]]})", "{not json"}) {
    CAPTURE(bad);
    CHECK(error_code_of([&] { parse_json_matrix(bad); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("format detection") {
  CHECK(format_from_path("a.JSON") == MatrixFormat::Json);
  CHECK(format_from_path("a.csv") == MatrixFormat::Csv);
  CHECK_FALSE(format_from_path("a.txt").has_value());
  CHECK(detect_format("a.txt", "  {\"rows\":1}", std::nullopt) == MatrixFormat::Json);
  CHECK(detect_format("a.txt", "1,2", std::nullopt) == MatrixFormat::Csv);
  CHECK(detect_format("a.json", "1,2", MatrixFormat::Csv) == MatrixFormat::Csv);
}

TEST_CASE("writing then reading reproduces entries exactly") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> wide(-1e6, 1e6);
  const auto dir = std::filesystem::temp_directory_path() / "schurfact_io_test";
  std::filesystem::create_directories(dir);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix x = random_complex(1 + trial % 4, 1 + trial % 3, rng);
    x(0, 0) *= wide(rng);
    if (trial % 5 == 0) x(0, 0) = Complex(1e-300, -0.0);
    if (trial % 7 == 0) x(0, 0) = Complex(-3, 0);
    CHECK(parse_csv_matrix(write_csv_matrix(x)) == x);
    CHECK(parse_json_matrix(write_json_matrix(x)) == x);
    write_matrix(dir / "m.csv", x, MatrixFormat::Csv);
    CHECK(read_matrix(dir / "m.csv") == x);
    write_matrix(dir / "m.json", x, MatrixFormat::Json);
    CHECK(read_matrix(dir / "m.json") == x);
  }
  std::filesystem::remove_all(dir);
  CHECK(error_code_of([] { read_matrix("/nonexistent/m.csv"); }) == ErrorCode::ParseError);
}

TEST_CASE("complex cell formatting") {
  CHECK(format_complex_cell(Complex(1, 0)) == "1");
  CHECK(format_complex_cell(Complex(1, 2)) == "1+2i");
  CHECK(format_complex_cell(Complex(1, -2)) == "1-2i");
  CHECK(parse_complex_cell(format_complex_cell(Complex(0.1, 1.0 / 3.0))) == Complex(0.1, 1.0 / 3.0));
}
