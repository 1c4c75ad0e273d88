#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <vector>

#include "schurfact/cli/commands.hpp"
#include "schurfact/cli/matrix_io.hpp"
#include "support.hpp"

using namespace schurfact;
using namespace schurfact::cli;
using namespace testing_support;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "schurfact");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Workspace {
 public:
  Workspace() : dir_(std::filesystem::temp_directory_path() / ("schurfact_cli_" + std::to_string(counter_++))) {
    std::filesystem::create_directories(dir_);
  }
  ~Workspace() { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string write(const std::string& name, const ComplexMatrix& x) const {
    write_matrix(dir_ / name, x, format_from_path(name).value_or(MatrixFormat::Csv));
    return (dir_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path dir_;
};

json without_wall_time(json j) {
  if (j.is_array()) {
    for (json& e : j) e.erase("wall_time_ms");
  } else {
    j.erase("wall_time_ms");
  }
  return j;
}

}  // namespace

TEST_CASE("norm subcommand golden values") {
  Workspace ws;
  const Outcome identity = invoke({"norm", "--kind", "S", ws.write("i.csv", "1,0\n0,1\n")});
  CHECK(identity.code == kExitOk);
  const json r = identity.report();
  CHECK(r["schema"] == kReportSchema);
  CHECK(r["command"] == "norm");
  CHECK(r["status"] == "ok");
  CHECK(r["results"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r["input"]["rows"] == 2);
  CHECK(r["input"]["digest"] == "fnv1a64:" + input_digest("1,0\n0,1\n"));
  CHECK(r["parameters"]["tolerances"]["tol_feas"].get<double>() == 1e-8);
  CHECK(r["parameters"]["tolerances"]["tol_bisect"].get<double>() == 1e-7);
  CHECK(r.contains("wall_time_ms"));

  const Outcome dft = invoke({"norm", "--kind", "cbB", ws.write("u.json", dft_matrix(3))});
  CHECK(dft.code == kExitOk);
  CHECK(dft.report()["results"]["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-7));

  const std::string zero = ws.write("z.csv", "0,0,0\n0,0,0\n");
  for (const char* kind : {"F", "cbF", "B", "cbB", "S", "T"}) {
    const Outcome o = invoke({"norm", "--kind", kind, zero});
    CHECK(o.code == kExitOk);
    CHECK(o.report()["results"]["value"].get<double>() == 0.0);
  }
}

TEST_CASE("factorize subcommand") {
  Workspace ws;
  const Outcome unitary = invoke({"factorize", "--kind", "schur", ws.write("u.json", dft_matrix(2))});
  REQUIRE(unitary.code == kExitOk);
  const json factors = unitary.report()["results"]["factors"];
  const ComplexMatrix f = matrix_from_json(factors["f"]);
  CHECK(max_abs(f - ComplexMatrix::Identity(2, 2)) < 1e-5);
  CHECK(max_abs(matrix_from_json(factors["w"]) - dft_matrix(2)) < 1e-5);

  std::mt19937_64 rng(81);
  const ComplexMatrix p = random_positive(3, rng);
  const Outcome positive = invoke({"factorize", "--kind", "cb-bilinear", ws.write("p.json", p)});
  REQUIRE(positive.code == kExitOk);
  const json pf = positive.report()["results"]["factors"];
  const ComplexMatrix b = matrix_from_json(pf["b"]);
  CHECK(max_abs(b - b.adjoint()) < 1e-5);

  const ComplexMatrix iso = random_isometry(3, 2, rng);
  const Outcome bilinear = invoke({"factorize", "--kind", "bilinear-schur", ws.write("iso.json", iso)});
  REQUIRE(bilinear.code == kExitOk);
  const ComplexMatrix t = matrix_from_json(bilinear.report()["results"]["factors"]["t"]);
  CHECK(max_abs(t - iso * iso.adjoint()) < 1e-4);

  for (const char* kind : {"cb-op", "elementary-schur", "selfadjoint-schur", "fcg"}) {
    CAPTURE(kind);
    const Outcome o = invoke({"factorize", "--kind", kind, "--normalize", ws.write("h.csv", "2,1-i\n1+i,3\n")});
    CHECK(o.code == kExitOk);
  }
}

TEST_CASE("verify subcommand") {
  Workspace ws;
  std::mt19937_64 rng(42);
  const std::string random3 = ws.write("r.json", random_complex(3, 3, rng));
  const Outcome unique = invoke({"verify", "--kind", "uniqueness", "--target", "cbB", "--restarts", "5", random3});
  CHECK(unique.code == kExitOk);

  const Outcome schur = invoke({"verify", "--kind", "uniqueness", "--target", "schur",
                                ws.write("d.csv", "1,0\n0,0.25i\n")});
  CHECK(schur.code == kExitOk);
  CHECK(schur.out.find("precondition-fails, non-uniqueness allowed") != std::string::npos);

  const Outcome identities = invoke({"verify", "--kind", "identities", ws.write("r2.json", random_complex(2, 2, rng))});
  CHECK(identities.code == kExitOk);
  CHECK(identities.report()["results"]["passed"] == true);

  const Outcome duality = invoke({"verify", "--kind", "duality", ws.write("u.json", dft_matrix(3))});
  CHECK(duality.code == kExitOk);
}

TEST_CASE("witness subcommand") {
  Workspace ws;
  const Outcome o = invoke({"witness", "--duality", "cbB_vs_S", ws.write("u.json", dft_matrix(3))});
  REQUIRE(o.code == kExitOk);
  const json r = o.report()["results"];
  CHECK(r["certified_gap"].get<double>() <= 1e-6);
  CHECK(r["target_norm"].get<double>() == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(invoke({"witness", "--duality", "bogus", ws.write("i.csv", "1")}).code == kExitFlags);
}

TEST_CASE("exit codes") {
  Workspace ws;
  const std::string ok = ws.write("ok.csv", "1,2\n3,4\n");
  CHECK(invoke({"norm", "--kind", "S", ws.write("bad.csv", "1,2\n3\n")}).code == kExitParse);
  CHECK(invoke({"norm", "--kind", "S", ws.write("bad.json", "{\"rows\":2}")}).code == kExitParse);
  CHECK(invoke({"norm", "--kind", "S", "/nonexistent/file.csv"}).code == kExitParse);
  CHECK(invoke({"norm", "--kind", "Q", ok}).code == kExitFlags);
  CHECK(invoke({"norm", ok}).code == kExitFlags);
  CHECK(invoke({"norm", "--kind", "S", "--tol", "-1", ok}).code == kExitFlags);
  CHECK(invoke({"frobnicate"}).code == kExitFlags);
  CHECK(invoke({"--help"}).code == kExitOk);

  std::mt19937_64 rng(82);
  const std::string big = ws.write("big.json", random_complex(6, 8, rng));
  CHECK(invoke({"norm", "--kind", "B", big}).code == kExitFlags);
  CHECK(invoke({"norm", "--kind", "B", "--heuristic", big}).code == kExitOk);

  CHECK(invoke({"factorize", "--kind", "selfadjoint-schur", ok}).code == kExitPrecondition);
  CHECK(invoke({"factorize", "--kind", "fcg", ok}).code == kExitPrecondition);
  CHECK(invoke({"witness", "--duality", "cbB_vs_S", ws.write("z.csv", "0,0\n0,0\n")}).code == kExitPrecondition);

  const Outcome failing = invoke({"selftest", "--sizes", "2", "--tolerance-scale", "-1"});
  CHECK(failing.code == kExitVerification);
  CHECK(failing.out.find("FAIL") != std::string::npos);
}

TEST_CASE("error code mapping") {
  CHECK(exit_code_for(ErrorCode::ParseError) == kExitParse);
  CHECK(exit_code_for(ErrorCode::IterationCap) == kExitSolver);
  CHECK(exit_code_for(ErrorCode::LpInfeasible) == kExitSolver);
  CHECK(exit_code_for(ErrorCode::LpUnbounded) == kExitSolver);
  CHECK(exit_code_for(ErrorCode::BracketInvalid) == kExitSolver);
  CHECK(exit_code_for(ErrorCode::GridTooLarge) == kExitFlags);
  CHECK(exit_code_for(ErrorCode::NotSelfAdjoint) == kExitPrecondition);
  CHECK(exit_code_for(ErrorCode::NotPsd) == kExitPrecondition);
  CHECK(exit_code_for(ErrorCode::ZeroMatrix) == kExitPrecondition);
}

TEST_CASE("error reports carry the exit code") {
  Workspace ws;
  const Outcome o = invoke({"norm", "--kind", "S", ws.write("bad.csv", "1,x\n")});
  const json r = o.report();
  CHECK(r["status"] == "error");
  CHECK(r["exit_code"] == kExitParse);
  CHECK(r["error"].dump().find("line 1") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from wall time") {
  Workspace ws;
  std::mt19937_64 rng(83);
  const std::string file = ws.write("x.json", random_complex(3, 3, rng));
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"norm", "--kind", "cbF", "--seed", "9", file},
        std::vector<std::string>{"factorize", "--kind", "schur", file},
        std::vector<std::string>{"witness", "--duality", "cbF_vs_T", "--seed", "3", file},
        std::vector<std::string>{"verify", "--kind", "uniqueness", "--target", "cbF", "--seed", "4", file}}) {
    const Outcome a = invoke(args);
    const Outcome b = invoke(args);
    CHECK(a.code == kExitOk);
    CHECK(without_wall_time(a.report()).dump() == without_wall_time(b.report()).dump());
  }
}

TEST_CASE("seed resolution") {
  Workspace ws;
  const std::string file = ws.write("i.csv", "1,0\n0,1\n");
  ::setenv("SCHURFACT_SEED", "1234", 1);
  CHECK(invoke({"norm", "--kind", "S", file}).report()["parameters"]["seed"] == 1234);
  CHECK(invoke({"norm", "--kind", "S", "--seed", "7", file}).report()["parameters"]["seed"] == 7);
  ::setenv("SCHURFACT_SEED", "not-a-number", 1);
  CHECK(invoke({"norm", "--kind", "S", file}).code == kExitFlags);
  ::unsetenv("SCHURFACT_SEED");
  CHECK(invoke({"norm", "--kind", "S", file}).report()["parameters"]["seed"] == 0);
}

TEST_CASE("batch mode") {
  Workspace ws;
  const std::string good = ws.write("a.csv", "1,0\n0,1\n");
  const std::string bad = ws.write("b.csv", "1,\n");
  const Outcome both = invoke({"norm", "--kind", "S", good, good});
  CHECK(both.code == kExitOk);
  CHECK(both.report().is_array());
  CHECK(both.report().size() == 2);
  const Outcome mixed = invoke({"norm", "--kind", "S", good, bad});
  CHECK(mixed.code == kExitParse);
  CHECK(mixed.report()[0]["status"] == "ok");
  CHECK(mixed.report()[1]["status"] == "error");
}

TEST_CASE("text output and input format override") {
  Workspace ws;
  const std::string file = ws.write("m.txt", "2,0\n0,1\n");
  const Outcome o = invoke({"norm", "--kind", "S", "--format", "text", "--input-format", "csv", file});
  CHECK(o.code == kExitOk);
  CHECK(o.out.find("value: ") != std::string::npos);
  CHECK(o.out.find('{') == std::string::npos);
}

TEST_CASE("selftest subset") {
  const Outcome o = invoke({"selftest", "--sizes", "2"});
  CHECK(o.code == kExitOk);
  for (int id = 1; id <= 10; ++id) CHECK(o.out.find("PASS [" + std::to_string(id) + "]") != std::string::npos);
}

TEST_CASE("input digest") {
  CHECK(input_digest("") == "cbf29ce484222325");
  CHECK(input_digest("a") == "af63dc4c8601ec8c");
  CHECK(input_digest("1,0\n0,1\n").size() == 16);
}
