#include "schurfact/cli/commands.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "schurfact/cb_norms.hpp"
#include "schurfact/cli/matrix_io.hpp"
#include "schurfact/cli/selftest.hpp"
#include "schurfact/duality.hpp"
#include "schurfact/factorizations.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact::cli {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double kIdentityTol = 1e-6;
constexpr double kInequalitySlack = 1e-6;

struct Settings {
  std::vector<std::string> files;
  std::string format = "json";
  std::string input_format = "auto";
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t seed = 0;
  double tol = 1e-5;
  double tol_feas = 1e-8;
  double tol_bisect = 1e-7;
  std::string method = "auto";
  bool heuristic = false;
};

struct Outcome {
  Json results;
  int code = kExitOk;
};

using Body = std::function<Outcome(const ComplexMatrix&)>;

const std::map<std::string, SolverMethod> kMethods = {{"auto", SolverMethod::Automatic},
                                                      {"splitting", SolverMethod::Splitting},
                                                      {"cutting-plane", SolverMethod::CuttingPlane},
                                                      {"bisection", SolverMethod::Bisection}};

NormOptions norm_options(const Settings& s) {
  NormOptions o;
  o.method = kMethods.at(s.method);
  o.tol_feas = s.tol_feas;
  o.tol_bisect = s.tol_bisect;
  o.torus.seed = s.seed;
  o.torus.mode = s.heuristic ? SearchMode::Heuristic : SearchMode::Certified;
  return o;
}

Json parameters(const Settings& s) {
  const NormOptions o = norm_options(s);
  return {{"method", s.method},
          {"seed", s.seed},
          {"heuristic", s.heuristic},
          {"tolerances",
           {{"tol", s.tol},
            {"tol_feas", s.tol_feas},
            {"tol_bisect", s.tol_bisect},
            {"splitting_tol", o.splitting_tol},
            {"lp_tol", o.lp_tol}}}};
}

Json vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json diagnostics_json(const Diagnostics& d) {
  Json out = Json::object();
  for (const auto& [name, value] : d) out[name] = value;
  return out;
}

Json invariants_json(const InvariantReport& report) {
  Json out = Json::array();
  for (const InvariantCheck& c : report) {
    out.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
  }
  return out;
}

Json norm_report_json(const NormReport& r) {
  Json out = {{"kind", to_string(r.kind)}, {"value", r.value}, {"method", r.method}};
  if (r.kind == NormKind::F || r.kind == NormKind::B) out["certified"] = r.method == "torus-grid";
  out["residuals"] = diagnostics_json(r.residuals);
  return out;
}

std::optional<MatrixFormat> input_format(const Settings& s) {
  if (s.input_format == "json") return MatrixFormat::Json;
  if (s.input_format == "csv") return MatrixFormat::Csv;
  return std::nullopt;
}

Json run_file(const std::string& command, const std::string& path, const Settings& s, Json params, const Body& body,
              int& code) {
  const auto start = Clock::now();
  Json report = {{"schema", kReportSchema}, {"command", command}};
  Json input = {{"path", path}};
  int file_code = kExitOk;
  Json results;
  std::string error;
  try {
    const std::string text = read_file(path);
    input["digest"] = "fnv1a64:" + input_digest(text);
    const MatrixFormat format = detect_format(path, text, input_format(s));
    input["format"] = format == MatrixFormat::Json ? "json" : "csv";
    const ComplexMatrix x = parse_matrix(text, format);
    input["rows"] = x.rows();
    input["cols"] = x.cols();
    Outcome outcome = body(x);
    results = std::move(outcome.results);
    file_code = outcome.code;
  } catch (const Error& e) {
    file_code = exit_code_for(e.code());
    error = e.what();
  } catch (const std::exception& e) {
    file_code = kExitSolver;
    error = e.what();
  }
  report["input"] = std::move(input);
  report["parameters"] = std::move(params);
  report["status"] = !error.empty() ? "error" : file_code == kExitOk ? "ok" : "failed";
  report["exit_code"] = file_code;
  if (!error.empty()) {
    report["error"] = error;
  } else {
    report["results"] = std::move(results);
  }
  report["wall_time_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  code = std::max(code, file_code);
  return report;
}

bool is_matrix(const Json& j) {
  return j.is_object() && j.size() == 3 && j.contains("rows") && j.contains("cols") && j.contains("entries");
}

// Shortest round-trip text for numbers.
std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

std::string cell_text(const Json& pair) {
  const double im = pair[1].get<double>();
  if (im == 0.0) return scalar_text(pair[0]);
  std::string text = scalar_text(pair[0]);
  const std::string imag = scalar_text(pair[1]);
  return text + (imag.front() == '-' ? "" : "+") + imag + "i";
}

void render_text(const Json& j, const std::string& indent, std::ostream& out) {
  for (const auto& [key, value] : j.items()) {
    if (is_matrix(value)) {
      out << indent << key << ":\n";
      const auto cols = value["cols"].get<std::size_t>();
      const Json& entries = value["entries"];
      for (std::size_t k = 0; k < entries.size(); ++k) {
        out << (k % cols == 0 ? indent + "  " : ", ") << cell_text(entries[k]);
        if (k % cols == cols - 1) out << '\n';
      }
    } else if (value.is_object()) {
      out << indent << key << ":\n";
      render_text(value, indent + "  ", out);
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      out << indent << key << ":\n";
      for (const Json& item : value) {
        out << indent << "  -\n";
        render_text(item, indent + "    ", out);
      }
    } else if (value.is_array()) {
      out << indent << key << ": [";
      for (std::size_t k = 0; k < value.size(); ++k) out << (k > 0 ? ", " : "") << scalar_text(value[k]);
      out << "]\n";
    } else {
      out << indent << key << ": " << scalar_text(value) << '\n';
    }
  }
}

void emit(const std::vector<Json>& reports, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << (reports.size() == 1 ? Json(reports.front()) : Json(reports)).dump(2) << '\n';
    return;
  }
  for (const Json& r : reports) {
    render_text(r, "", out);
    out << '\n';
  }
}

int run_batch(const std::string& command, const Settings& s, const Json& params, const Body& body,
              std::ostream& out) {
  int code = kExitOk;
  std::vector<Json> reports;
  for (const std::string& path : s.files) reports.push_back(run_file(command, path, s, params, body, code));
  emit(reports, s.format, out);
  return code;
}

// ---- norm ----

Outcome norm_body(const ComplexMatrix& x, NormKind kind, const Settings& s) {
  return {norm_report_json(compute_norm(kind, x, norm_options(s))), kExitOk};
}

// ---- factorize ----

Outcome factor_outcome(const std::string& kind, Json factors, double norm, double achieved,
                       const InvariantReport& invariants) {
  Outcome o;
  o.results = {{"kind", kind}, {"norm", norm}, {"achieved_norm", achieved}, {"factors", std::move(factors)}};
  o.results["invariants"] = invariants_json(invariants);
  o.results["passed"] = all_passed(invariants);
  o.code = all_passed(invariants) ? kExitOk : kExitVerification;
  return o;
}

Outcome factorize_body(const ComplexMatrix& input, const std::string& kind, bool normalize, const Settings& s) {
  const NormOptions o = norm_options(s);
  if (kind == "cb-op") {
    const CbOperatorFactorization f = cb_operator_factorization(input, o);
    const double norm = cbf_norm(input, o).value;
    return factor_outcome(
        kind, {{"a", matrix_to_json(f.a)}, {"xi", vector_json(f.xi.entries())}}, norm, achieved_norm(f),
        check_invariants(input, f, norm, s.tol));
  }
  if (kind == "cb-bilinear") {
    const CbBilinearFactorization f = cb_bilinear_factorization(input, o);
    const double norm = cbb_norm(input, o).value;
    return factor_outcome(
        kind,
        {{"eta", vector_json(f.eta.entries())}, {"b", matrix_to_json(f.b)}, {"xi", vector_json(f.xi.entries())}},
        norm, achieved_norm(f), check_invariants(input, f, norm, s.tol));
  }
  if (kind == "elementary-schur") {
    const ElementarySchurFactorization f = elementary_schur(input, o);
    const double norm = schur_norm(input, o).value;
    return factor_outcome(
        kind, {{"l", matrix_to_json(f.l)}, {"r", matrix_to_json(f.r)}}, norm, achieved_norm(f),
        check_invariants(input, f, norm, s.tol));
  }
  if (kind == "schur") {
    const SchurFactorization f = schur_factorization(input, o);
    const double norm = schur_norm(input, o).value;
    return factor_outcome(
        kind, {{"s", f.s}, {"f", matrix_to_json(f.f)}, {"w", matrix_to_json(f.w)}, {"g", matrix_to_json(f.g)}}, norm,
        achieved_norm(f), check_invariants(input, f, norm, s.tol));
  }
  if (kind == "selfadjoint-schur") {
    const SelfAdjointSchurFactorization f = selfadjoint_schur(input, o);
    const double norm = schur_norm(input, o).value;
    return factor_outcome(
        kind, {{"s", f.s}, {"g", matrix_to_json(f.g)}, {"sign", matrix_to_json(f.sign)}}, norm, achieved_norm(f),
        check_invariants(input, f, norm, s.tol));
  }
  if (kind == "bilinear-schur") {
    const BilinearSchurFactorization f = bilinear_schur_factorization(input, o);
    const double norm = t_norm(input, o).value;
    return factor_outcome(
        kind, {{"t", matrix_to_json(f.t)}, {"w", matrix_to_json(f.w)}, {"g", matrix_to_json(f.g)}}, norm,
        achieved_norm(f), check_invariants(input, f, norm, s.tol));
  }
  // fcg
  ComplexMatrix x = input;
  double scale = 1.0;
  if (normalize) {
    scale = schur_norm(input, o).value;
    if (scale > 0.0) x /= scale;
  }
  const NormalizedFcgFactorization f = normalized_fcg(x, o);
  Outcome out = factor_outcome(
      kind, {{"f", matrix_to_json(f.f)}, {"c", matrix_to_json(f.c)}, {"g", matrix_to_json(f.g)}}, 1.0,
      operator_norm(f.c), check_invariants(x, f, s.tol));
  out.results["input_scale"] = scale;
  return out;
}

// ---- verify ----

Json uniqueness_check(const ComplexMatrix& x, UniquenessKind kind, int restarts, const Settings& s, bool& ok) {
  const UniquenessVerdict v = verify_uniqueness(x, kind, restarts, s.seed, norm_options(s), s.tol);
  const bool precondition_fails = v.deletion && !v.deletion->holds();
  const bool passed = v.consistent || precondition_fails;
  ok = ok && passed;
  Json out = {{"name", std::string("uniqueness ") + to_string(kind)},
              {"verdict", v.summary()},
              {"consistent", v.consistent},
              {"max_discrepancy", v.max_discrepancy},
              {"tolerance", s.tol},
              {"restarts", v.restarts}};
  if (v.deletion) {
    Json cols = Json::array();
    Json rows = Json::array();
    for (double d : v.deletion->column_deleted_norms) cols.push_back(d);
    for (double d : v.deletion->row_deleted_norms) rows.push_back(d);
    out["deletion"] = {{"schur_norm", v.deletion->schur_norm},
                       {"column_deleted_norms", cols},
                       {"row_deleted_norms", rows},
                       {"columns_hold", v.deletion->columns_hold},
                       {"rows_hold", v.deletion->rows_hold}};
  }
  out["passed"] = passed;
  return out;
}

Json witness_json(const WitnessCertificate& c) {
  return {{"target_norm", c.target_norm},       {"pairing", c.pairing},
          {"dual_norm", c.dual_norm_bound},     {"lower_bound", c.lower_bound()},
          {"certified_gap", c.certified_gap},   {"witness", matrix_to_json(c.y)}};
}

Json duality_check(const ComplexMatrix& x, Duality d, const Settings& s, bool& ok) {
  WitnessOptions wo;
  wo.seed = s.seed;
  wo.norm = norm_options(s);
  const WitnessCertificate c = find_witness(x, d, wo);
  const double scale = std::max(1.0, c.target_norm);
  const bool bounded = c.lower_bound() <= c.target_norm + kInequalitySlack;
  const bool tight = c.certified_gap <= s.tol * scale;
  ok = ok && bounded && tight;
  Json out = {{"name", std::string("duality ") + to_string(d)}};
  const Json fields = witness_json(c);
  for (const auto& [key, value] : fields.items()) {
    if (key != "witness") out[key] = value;
  }
  out["tolerance"] = s.tol * scale;
  out["inequality_holds"] = bounded;
  out["passed"] = bounded && tight;
  return out;
}

Json identities_checks(const ComplexMatrix& x, const Settings& s, bool& ok) {
  const NormOptions o = norm_options(s);
  Json checks = Json::array();
  const double cbf = cbf_norm(x, o).value;
  const double cbb_gram = cbb_norm(x.adjoint() * x, o).value;
  const double scale = std::max(cbb_gram, 1e-300);
  const double residual = std::abs(cbf * cbf - cbb_gram) / scale;
  checks.push_back({{"name", "cbF(X)^2 = cbB(X*X)"},
                    {"lhs", cbf * cbf},
                    {"rhs", cbb_gram},
                    {"relative_residual", residual},
                    {"tolerance", kIdentityTol},
                    {"passed", residual <= kIdentityTol}});
  ok = ok && residual <= kIdentityTol;
  const bool square = x.rows() == x.cols();
  if (square && (x - x.adjoint()).norm() <= kTolSym * x.norm() &&
      hermitian_eigen(hermitian_part(x)).eigenvalues.minCoeff() >= -kTolPsd * std::max(operator_norm(x), 1e-300)) {
    NormOptions splitting = o;
    splitting.method = SolverMethod::Splitting;
    const double lp = cbb_norm_positive_lp(hermitian_part(x), o).value;
    const double block = cbb_norm(x, splitting).value;
    const double r = std::abs(lp - block) / std::max(block, 1e-300);
    checks.push_back({{"name", "positive cbB: LP = block program"},
                      {"lhs", lp},
                      {"rhs", block},
                      {"relative_residual", r},
                      {"tolerance", kIdentityTol},
                      {"passed", r <= kIdentityTol}});
    ok = ok && r <= kIdentityTol;
  }
  return checks;
}

// --seed, then SCHURFACT_SEED, then the fallback.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  const char* env = std::getenv("SCHURFACT_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t value = 0;
  const std::string_view text(env);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw CLI::ValidationError("SCHURFACT_SEED", "must be an unsigned integer, got '" + std::string(text) + "'");
  }
  return value;
}

void add_common(CLI::App* cmd, Settings& s, bool with_files) {
  if (with_files) cmd->add_option("files", s.files, "Matrix files (.json or .csv)")->required();
  cmd->add_option("--format", s.format, "Report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cmd->add_option("--input-format", s.input_format, "Input format; auto uses the file extension")
      ->check(CLI::IsMember({"auto", "json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--seed", s.seed_flag, "Seed (falls back to SCHURFACT_SEED, then 0)");
  cmd->add_option("--tol", s.tol, "Factor and verification tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--tol-feas", s.tol_feas, "Feasibility tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--tol-bisect", s.tol_bisect, "Bisection tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--method", s.method, "Solver route")
      ->check(CLI::IsMember({"auto", "splitting", "cutting-plane", "bisection"}))
      ->capture_default_str();
  cmd->add_flag("--heuristic", s.heuristic, "Allow the heuristic torus search for F and B");
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
      return kExitParse;
    case ErrorCode::GridTooLarge:
      return kExitFlags;
    case ErrorCode::InvalidMatrix:
    case ErrorCode::NotSquare:
    case ErrorCode::NotHermitian:
    case ErrorCode::NotPsd:
    case ErrorCode::NotSelfAdjoint:
    case ErrorCode::ZeroMatrix:
      return kExitPrecondition;
    case ErrorCode::ShapeMismatch:
    case ErrorCode::IterationCap:
    case ErrorCode::BracketInvalid:
    case ErrorCode::LpInfeasible:
    case ErrorCode::LpUnbounded:
      return kExitSolver;
  }
  return kExitSolver;
}

std::string input_digest(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static const char* const kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = kHex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schur multiplier, completely bounded norms and their optimal factorizations", "schurfact"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "schurfact 0.1.0");

  Settings s;
  std::string norm_kind;
  CLI::App* norm = app.add_subcommand("norm", "Compute one of the norms F, cbF, B, cbB, S, T");
  add_common(norm, s, true);
  norm->add_option("--kind", norm_kind, "Norm: F, cbF, B, cbB, S or T")->required();

  std::string factor_kind;
  bool normalize = false;
  CLI::App* factorize = app.add_subcommand("factorize", "Compute a norm-optimal factorization");
  add_common(factorize, s, true);
  factorize
      ->add_option("--kind", factor_kind, "Factorization")
      ->required()
      ->check(CLI::IsMember({"cb-op", "cb-bilinear", "elementary-schur", "schur", "selfadjoint-schur",
                             "bilinear-schur", "fcg"}));
  factorize->add_flag("--normalize", normalize, "fcg: divide the input by its Schur norm first");

  std::string verify_kind;
  std::vector<std::string> targets;
  int restarts = 5;
  CLI::App* verify = app.add_subcommand("verify", "Check uniqueness, duality or norm identities");
  add_common(verify, s, true);
  verify->add_option("--kind", verify_kind, "Check family")
      ->required()
      ->check(CLI::IsMember({"uniqueness", "duality", "identities"}));
  verify->add_option("--target", targets,
                     "uniqueness: cbF, cbB, bilinearSchur, schur; duality: cbB_vs_S, cbF_vs_T, T_vs_cbF, S_vs_cbB");
  verify->add_option("--restarts", restarts, "Uniqueness restarts")->check(CLI::Range(2, 1000))->capture_default_str();

  std::string duality_name;
  int ascent_iters = 20;
  CLI::App* witness = app.add_subcommand("witness", "Find a dual witness certifying a norm");
  add_common(witness, s, true);
  witness->add_option("--duality", duality_name, "cbB_vs_S, cbF_vs_T, T_vs_cbF or S_vs_cbB")->required();
  witness->add_option("--ascent-iters", ascent_iters, "Ascent steps after the dual seed")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  SelftestOptions st;
  std::string selftest_format = "text";
  std::optional<std::uint64_t> selftest_seed;
  CLI::App* selftest = app.add_subcommand("selftest", "Run the acceptance suite on golden fixtures");
  selftest->add_option("--seed", selftest_seed, "Seed (falls back to SCHURFACT_SEED, then 42)");
  selftest->add_option("--sizes", st.sizes, "Restrict fixture dimensions, e.g. 2,3")->delimiter(',');
  selftest->add_option("--format", selftest_format, "Report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  selftest->add_option("--tolerance-scale", st.tolerance_scale, "Scale every tolerance (test hook)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFlags;
  }

  try {
    if (selftest->parsed()) {
      st.seed = resolve_seed(selftest_seed, st.seed);
    } else {
      s.seed = resolve_seed(s.seed_flag, 0);
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return kExitFlags;
  }

  if (norm->parsed()) {
    const std::optional<NormKind> kind = parse_norm_kind(norm_kind);
    if (!kind) {
      err << "--kind: unknown norm '" << norm_kind << "'\n";
      return kExitFlags;
    }
    Json params = parameters(s);
    params["kind"] = to_string(*kind);
    return run_batch("norm", s, params, [&](const ComplexMatrix& x) { return norm_body(x, *kind, s); }, out);
  }

  if (factorize->parsed()) {
    Json params = parameters(s);
    params["kind"] = factor_kind;
    if (factor_kind == "fcg") params["normalize"] = normalize;
    return run_batch("factorize", s, params,
                     [&](const ComplexMatrix& x) { return factorize_body(x, factor_kind, normalize, s); }, out);
  }

  if (verify->parsed()) {
    std::vector<UniquenessKind> uniqueness;
    std::vector<Duality> dualities;
    for (const std::string& t : targets) {
      if (verify_kind == "uniqueness") {
        if (auto k = parse_uniqueness_kind(t)) {
          uniqueness.push_back(*k);
          continue;
        }
      } else if (verify_kind == "duality") {
        if (auto d = parse_duality(t)) {
          dualities.push_back(*d);
          continue;
        }
      }
      err << "--target: '" << t << "' does not apply to --kind " << verify_kind << '\n';
      return kExitFlags;
    }
    if (uniqueness.empty()) {
      uniqueness = {UniquenessKind::CbF, UniquenessKind::CbB, UniquenessKind::BilinearSchur, UniquenessKind::Schur};
    }
    if (dualities.empty()) dualities = {Duality::CbBvsS, Duality::CbFvsT, Duality::TvsCbF, Duality::SvsCbB};
    Json params = parameters(s);
    params["kind"] = verify_kind;
    if (verify_kind == "uniqueness") {
      Json names = Json::array();
      for (UniquenessKind k : uniqueness) names.push_back(to_string(k));
      params["targets"] = names;
      params["restarts"] = restarts;
    } else if (verify_kind == "duality") {
      Json names = Json::array();
      for (Duality d : dualities) names.push_back(to_string(d));
      params["targets"] = names;
    }
    const Body body = [&](const ComplexMatrix& x) {
      bool ok = true;
      Json checks = Json::array();
      if (verify_kind == "uniqueness") {
        for (UniquenessKind k : uniqueness) checks.push_back(uniqueness_check(x, k, restarts, s, ok));
      } else if (verify_kind == "duality") {
        for (Duality d : dualities) checks.push_back(duality_check(x, d, s, ok));
      } else {
        checks = identities_checks(x, s, ok);
      }
      return Outcome{{{"checks", checks}, {"passed", ok}}, ok ? kExitOk : kExitVerification};
    };
    return run_batch("verify", s, params, body, out);
  }

  if (witness->parsed()) {
    const std::optional<Duality> duality = parse_duality(duality_name);
    if (!duality) {
      err << "--duality: unknown pairing '" << duality_name << "'\n";
      return kExitFlags;
    }
    Json params = parameters(s);
    params["duality"] = to_string(*duality);
    params["ascent_iters"] = ascent_iters;
    const Body body = [&](const ComplexMatrix& x) {
      WitnessOptions wo;
      wo.seed = s.seed;
      wo.max_iters = ascent_iters;
      wo.norm = norm_options(s);
      Json results = {{"duality", to_string(*duality)}, {"target", to_string(target_kind(*duality))},
                      {"ball", to_string(witness_ball(*duality))}};
      results.update(witness_json(find_witness(x, *duality, wo)));
      return Outcome{results, kExitOk};
    };
    return run_batch("witness", s, params, body, out);
  }

  // selftest
  const auto start = Clock::now();
  const bool text = selftest_format == "text";
  const std::vector<CriterionResult> results = run_selftest(st, [&](const CriterionResult& r) {
    if (text) out << format_result_line(r) << std::endl;
  });
  bool passed = true;
  Json criteria = Json::array();
  for (const CriterionResult& r : results) {
    passed = passed && r.passed;
    criteria.push_back({{"id", r.id},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"worst", r.worst},
                        {"tolerance", r.tolerance},
                        {"cases", r.cases},
                        {"seconds", r.seconds},
                        {"detail", r.detail}});
  }
  if (text) {
    out << (passed ? "all criteria passed" : "some criteria FAILED") << '\n';
  } else {
    Json sizes = Json::array();
    for (int v : st.sizes) sizes.push_back(v);
    const Json report = {
        {"schema", kReportSchema},
        {"command", "selftest"},
        {"parameters", {{"seed", st.seed}, {"sizes", sizes}, {"tolerance_scale", st.tolerance_scale}}},
        {"status", passed ? "ok" : "failed"},
        {"exit_code", passed ? kExitOk : kExitVerification},
        {"results", {{"criteria", criteria}, {"passed", passed}}},
        {"wall_time_ms", std::chrono::duration<double, std::milli>(Clock::now() - start).count()}};
    out << report.dump(2) << '\n';
  }
  return passed ? kExitOk : kExitVerification;
}

}  // namespace schurfact::cli
