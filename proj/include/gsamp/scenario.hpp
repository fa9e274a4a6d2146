#pragma once

// Scenario configs and the analyze / roundtrip / verify runners behind the
// command-line tool. Every residual in a report carries its tolerance and a
// verdict; reports are deterministic for a given config and seed.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>

#include "gsamp/json_io.hpp"
#include "gsamp/random.hpp"

namespace gsamp {

enum ExitCode : int { kExitPass = 0, kExitFailure = 1, kExitUsage = 2 };

struct Tolerances {
  std::optional<double> frame;  // absolute tolerance on delta_A; default is relative to beta_A
  double left_inverse = kLeftInverseTolerance;
  double coefficients = 1e-9;
  double function = kReconstructionTolerance;
  double foundations = 1e-10;
};

struct FiniteIndexConfig {
  std::vector<int> r_strides;
  std::vector<GroupSequence> probes;  // empty: reuse the scenario's probes
  std::optional<SequenceMatrix> system;
};

struct ScenarioConfig {
  std::string name;
  ModelSpec model;
  std::vector<GroupSequence> probes;
  std::optional<SequenceMatrix> system;
  std::optional<FiniteIndexConfig> finite_index;
  DualKind dual = DualKind::moore_penrose;
  std::optional<TransferMatrix> family;
  std::uint64_t seed = 0;
  std::size_t trials = 5;
  Tolerances tol;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> frame_tol;
  std::optional<DualKind> dual;
  bool inject_fault = false;
  bool timings = false;
};

struct RunReport {
  json report;
  int exit_code = kExitPass;
};

// --- loading ----------------------------------------------------------------

namespace detail {

inline std::vector<GroupSequence> probes_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": non-empty array required");
  std::vector<GroupSequence> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(sequence_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline void check_system(const SequenceMatrix& A, const GroupSpec& h, std::size_t cols, const std::string& where) {
  if (!(A.group() == h)) throw SchemaError(where + ": must live on " + h.describe());
  if (A.cols() != cols) throw SchemaError(where + ": needs " + std::to_string(cols) + " columns");
}

inline void check_probes(const std::vector<GroupSequence>& probes, const GroupSpec& g, const std::string& where) {
  for (const auto& p : probes)
    if (!(p.group() == g)) throw SchemaError(where + ": probes must live on " + g.describe());
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const json& j) {
  io::expect_object(j, "scenario", {"name", "model"},
                    {"description", "probes", "A", "finite_index", "left_inverse", "seed", "trials", "tolerances"});
  ScenarioConfig c;
  c.name = io::get<std::string>(j["name"], "scenario.name");
  const std::string where = "scenario '" + c.name + "'";
  c.model = model_from_json(j["model"], where + ".model");
  const TranslationModel& m = c.model.sampling_model();
  const GroupSpec& probe_group = c.model.semidirect ? c.model.semidirect->torus() : m.ambient();

  if (j.contains("probes") == j.contains("A")) throw SchemaError(where + ": give exactly one of 'probes' or 'A'");
  if (j.contains("probes")) {
    c.probes = detail::probes_from_json(j["probes"], where + ".probes");
    detail::check_probes(c.probes, probe_group, where + ".probes");
  } else {
    c.system = matrix_from_json(j["A"], where + ".A");
    detail::check_system(*c.system, m.coefficient_group(), m.generator_count(), where + ".A");
  }

  if (j.contains("finite_index")) {
    const json& f = j["finite_index"];
    const std::string fw = where + ".finite_index";
    io::expect_object(f, fw, {"R_strides"}, {"probes", "A"});
    if (c.model.semidirect) throw SchemaError(fw + ": not supported for semidirect models");
    if (f.contains("probes") && f.contains("A")) throw SchemaError(fw + ": give at most one of 'probes' or 'A'");
    FiniteIndexConfig fi;
    fi.r_strides = io::get<std::vector<int>>(f["R_strides"], fw + ".R_strides");
    const ProductSubgroup r(m.coefficient_group(), fi.r_strides);
    if (f.contains("probes")) {
      fi.probes = detail::probes_from_json(f["probes"], fw + ".probes");
      detail::check_probes(fi.probes, m.ambient(), fw + ".probes");
    } else if (f.contains("A")) {
      fi.system = matrix_from_json(f["A"], fw + ".A");
      detail::check_system(*fi.system, r.abstract(), m.generator_count() * r.index(), fw + ".A");
    } else if (c.probes.empty()) {
      throw SchemaError(fw + ": needs 'probes' or 'A' when the scenario gives an explicit A");
    }
    c.finite_index = std::move(fi);
  }

  if (j.contains("left_inverse")) {
    const json& l = j["left_inverse"];
    io::expect_object(l, where + ".left_inverse", {"kind"}, {"C"});
    c.dual = parse_dual_kind(io::get<std::string>(l["kind"], where + ".left_inverse.kind"));
    if (l.contains("C")) {
      if (c.dual != DualKind::family) throw SchemaError(where + ".left_inverse.C: only valid with kind 'family'");
      c.family = transfer_from_json(l["C"], where + ".left_inverse.C");
    }
  }
  if (j.contains("seed")) c.seed = io::get<std::uint64_t>(j["seed"], where + ".seed");
  if (j.contains("trials")) {
    c.trials = io::get<std::size_t>(j["trials"], where + ".trials");
    if (c.trials < 1) throw SchemaError(where + ".trials: must be >= 1");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    const std::string tw = where + ".tolerances";
    io::expect_object(t, tw, {}, {"frame", "left_inverse", "coefficients", "function", "foundations"});
    auto read = [&](const char* key, double& out) {
      if (!t.contains(key)) return;
      out = io::get<double>(t[key], tw + "." + key);
      if (!(out >= 0.0)) throw SchemaError(tw + "." + key + ": must be >= 0");
    };
    if (t.contains("frame")) {
      double f = 0.0;
      read("frame", f);
      c.tol.frame = f;
    }
    read("left_inverse", c.tol.left_inverse);
    read("coefficients", c.tol.coefficients);
    read("function", c.tol.function);
    read("foundations", c.tol.foundations);
  }
  return c;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

/// One scenario, or a {"scenarios": [...]} list whose items are scenario
/// objects or paths relative to the list file.
inline std::vector<ScenarioConfig> load_scenarios(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  std::vector<ScenarioConfig> out;
  if (j.is_object() && j.contains("scenarios")) {
    io::expect_object(j, path.string(), {"scenarios"});
    if (!j["scenarios"].is_array() || j["scenarios"].empty())
      throw SchemaError(path.string() + ": empty scenario list");
    for (const auto& item : j["scenarios"]) {
      if (item.is_string()) {
        for (auto& c : load_scenarios(path.parent_path() / item.get<std::string>())) out.push_back(std::move(c));
      } else {
        out.push_back(scenario_from_json(item));
      }
    }
    return out;
  }
  out.push_back(scenario_from_json(j));
  return out;
}

/// Every *.json file in a directory, in name order.
inline std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw SchemaError("scenario directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw SchemaError("empty scenario list: no configs in " + dir.string());
  return files;
}

// --- checks -----------------------------------------------------------------

class CheckList {
 public:
  /// Passes when value < tolerance.
  void residual(const std::string& name, double value, double tolerance) {
    const bool ok = value < tolerance;
    items_.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", ok}});
    pass_ = pass_ && ok;
  }

  void flag(const std::string& name, bool ok, const std::string& detail = {}) {
    json item = {{"name", name}, {"pass", ok}};
    if (!detail.empty()) item["detail"] = detail;
    items_.push_back(std::move(item));
    pass_ = pass_ && ok;
  }

  bool pass() const noexcept { return pass_; }
  const json& items() const noexcept { return items_; }

 private:
  json items_ = json::array();
  bool pass_ = true;
};

// --- runners ----------------------------------------------------------------

namespace detail {

inline double scale_of(const VectorSequence& x) {
  double s = 0.0;
  for (const auto& c : x.components())
    for (const auto& v : c.values()) s = std::max(s, std::abs(v));
  return s;
}

inline SequenceMatrix scenario_system(const ScenarioConfig& c) {
  return c.system ? *c.system : sample_matrix(c.model.sampling_model(), c.probes);
}

inline std::optional<double> frame_tolerance(const ScenarioConfig& c, const RunOptions& o) {
  return o.frame_tol ? o.frame_tol : c.tol.frame;
}

inline SamplingProcedure scenario_procedure(const ScenarioConfig& c, const RunOptions& o, const SequenceMatrix& A,
                                            Rng& rng) {
  const DualKind kind = o.dual.value_or(c.dual);
  std::optional<TransferMatrix> C = c.family;
  if (kind == DualKind::family && !C) C = rng.transfer(A.group(), A.cols(), A.rows());
  return SamplingProcedure::build(c.model.sampling_model(), A, kind, C ? &*C : nullptr, frame_tolerance(c, o));
}

/// B with every transfer entry shifted by 1e-3: no longer a left inverse.
inline LeftInverse perturb(const LeftInverse& B) {
  TransferMatrix t = B.transfer;
  for (std::size_t xi = 0; xi < t.characters(); ++xi) t.at(xi).array() += cplx(1e-3, 0.0);
  return make_left_inverse(std::move(t));
}

inline json model_summary(const ScenarioConfig& c) {
  const TranslationModel& m = c.model.sampling_model();
  json j = {{"type", c.model.semidirect ? "semidirect" : "translation"},
            {"ambient", m.ambient().moduli()},
            {"sampling_strides", m.sampling_subgroup().strides()},
            {"coefficient_group", m.coefficient_group().moduli()},
            {"generators", m.generator_count()},
            {"window_is_frame", m.window_check().is_frame},
            {"riesz_lower", m.riesz_bounds().lower},
            {"riesz_upper", m.riesz_bounds().upper},
            {"is_riesz", m.riesz_bounds().is_riesz}};
  if (c.model.semidirect) j["Gamma"] = to_string(c.model.semidirect->rotation_group());
  return j;
}

inline json header(const std::string& command, const ScenarioConfig& c, std::uint64_t seed) {
  return {{"command", command}, {"scenario", c.name}, {"seed", seed}, {"model", model_summary(c)}};
}

inline json character_list(const GroupSpec& g, const std::vector<std::size_t>& xis) {
  json out = json::array();
  for (auto xi : xis) out.push_back(g.coords_of(xi));
  return out;
}

/// Round trips through the procedure; shared by roundtrip and verify.
inline void pipeline_checks(const ScenarioConfig& c, const SamplingProcedure& proc, Rng& rng, CheckList& checks,
                            bool inject_fault) {
  const TranslationModel& m = proc.model();
  const double li = inject_fault ? verify_left_inverse(proc.system(), perturb(proc.dual())) : proc.left_inverse_residual();
  checks.residual("left_inverse", li, c.tol.left_inverse);

  double coef = 0.0, two_path = 0.0, truth = 0.0;
  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    const VectorSequence x = rng.vector(m.coefficient_group(), m.generator_count());
    const SampleSet s = take_samples(proc, x);
    coef = std::max(coef, relative_residual(reconstruct_coefficients(proc, s), x));
    const FunctionOnG direct = reconstruct_function(proc, s);
    const FunctionOnG via = analysis_transform(m, synthesize(m, reconstruct_coefficients(proc, s)));
    two_path = std::max(two_path, relative_residual(direct, via));
    truth = std::max(truth, relative_residual(direct, analysis_transform(m, synthesize(m, x))));
  }
  checks.residual("coefficient_roundtrip", coef, c.tol.coefficients);
  checks.residual("function_two_path", two_path, c.tol.coefficients);
  checks.residual("function_reconstruction", truth, c.tol.function);
}

inline void finite_index_checks(const ScenarioConfig& c, const RunOptions& o, Rng& rng, CheckList& checks) {
  const TranslationModel& m = c.model.sampling_model();
  const FiniteIndexConfig& fc = *c.finite_index;
  const ProductSubgroup r(m.coefficient_group(), fc.r_strides);
  const std::vector<GroupSequence>& probes = fc.probes.empty() ? c.probes : fc.probes;
  const DualKind kind = o.dual.value_or(c.dual);
  std::optional<TransferMatrix> C;
  const std::size_t nl = m.generator_count() * r.index();
  const std::size_t rows = fc.system ? fc.system->rows() : probes.size();
  if (kind == DualKind::family) C = rng.transfer(r.abstract(), nl, rows);
  const FiniteIndexProcedure fi =
      fc.system ? finite_index_procedure(m, r, *fc.system, kind, C ? &*C : nullptr, frame_tolerance(c, o))
                : finite_index_procedure(m, r, probes, kind, C ? &*C : nullptr, frame_tolerance(c, o));

  double coherence = 0.0, regroup = 0.0, coef = 0.0, recon = 0.0;
  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    const VectorSequence x = rng.vector(m.coefficient_group(), m.generator_count());
    const VectorSequence y = fi.regroup(x);
    regroup = std::max(regroup, max_abs_diff(fi.ungroup(y), x));
    const SampleSet at_r = take_samples(fi.procedure(), y);
    if (!fc.system) {
      const SampleSet at_h = direct_samples(m, probes, synthesize(m, x));
      coherence = std::max(coherence, relative_residual(fi.restrict(at_h), at_r));
    }
    coef = std::max(coef, relative_residual(fi.ungroup(reconstruct_coefficients(fi.procedure(), at_r)), x));
    recon = std::max(recon, relative_residual(reconstruct_function(fi.procedure(), at_r),
                                              analysis_transform(m, synthesize(m, x))));
  }
  checks.flag("finite_index_regroup_bijection", regroup == 0.0);
  if (!fc.system) checks.residual("finite_index_coherence", coherence, 1e-12);
  checks.residual("finite_index_left_inverse", fi.procedure().left_inverse_residual(), c.tol.left_inverse);
  checks.residual("finite_index_coefficients", coef, c.tol.coefficients);
  checks.residual("finite_index_reconstruction", recon, c.tol.coefficients);
}

/// Composition law and exact unitarity of the quasi-regular representation,
/// over every pair of group elements.
inline void semidirect_group_checks(const SemidirectModel& sm, Rng& rng, CheckList& checks) {
  const GroupSpec& t = sm.torus();
  const GroupSequence f = rng.sequence(t);
  bool composition = true, unitary = true;
  std::vector<GroupSequence> images;
  for (std::size_t o = 0; o < sm.orientation_count(); ++o)
    for (std::size_t s = 0; s < t.order(); ++s) images.push_back(quasi_regular_apply(sm, {s, o}, f));
  auto key = [](cplx a, cplx b) { return std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag()); };
  auto sorted_f = f.values();
  std::sort(sorted_f.begin(), sorted_f.end(), key);
  for (const auto& img : images) {
    auto v = img.values();
    std::sort(v.begin(), v.end(), key);
    unitary = unitary && v == sorted_f;
  }
  for (std::size_t o1 = 0; o1 < sm.orientation_count() && composition; ++o1)
    for (std::size_t s1 = 0; s1 < t.order() && composition; ++s1)
      for (std::size_t o2 = 0; o2 < sm.orientation_count(); ++o2)
        for (std::size_t s2 = 0; s2 < t.order(); ++s2) {
          const SemidirectElement a{s1, o1}, b{s2, o2};
          const GroupSequence& ub = images[o2 * t.order() + s2];
          const SemidirectElement ab = sm.compose(a, b);
          if (!(quasi_regular_apply(sm, a, ub) == images[ab.rotation * t.order() + ab.shift])) {
            composition = false;
            break;
          }
        }
  checks.flag("semidirect_composition_law", composition);
  checks.flag("semidirect_unitarity", unitary);
}

inline void semidirect_pipeline_checks(const ScenarioConfig& c, const SamplingProcedure& proc, Rng& rng,
                                       CheckList& checks) {
  const SemidirectModel& sm = *c.model.semidirect;
  double worst = 0.0;
  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    const VectorSequence x = rng.vector(proc.model().coefficient_group(), proc.model().generator_count());
    worst = std::max(worst, semidirect_sample_and_reconstruct(sm, proc, x).residual);
  }
  checks.residual("semidirect_reconstruction", worst, c.tol.function);
}

inline void foundation_checks(const ScenarioConfig& c, const SequenceMatrix& A, Rng& rng, CheckList& checks) {
  const GroupSpec& h = A.group();
  const double tol = c.tol.foundations;
  double rt = 0.0, planch = 0.0, conv = 0.0, inner_err = 0.0;
  bool involutive = true, conj_transpose = true;
  const TransferMatrix ah = transfer(A);
  const SequenceMatrix As = adjoint_system(A);
  const TransferMatrix ash = transfer(As);
  for (std::size_t xi = 0; xi < ah.characters(); ++xi) {
    const Eigen::MatrixXcd ct = ah.at(xi).adjoint();
    conj_transpose = conj_transpose && ash.at(xi) == ct;
  }
  involutive = adjoint_system(As) == A;
  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    const GroupSequence x = rng.sequence(h);
    const GroupSequence xh = dft(x);
    rt = std::max(rt, max_abs_diff(idft(xh), x) / std::sqrt(norm_squared(x)));
    const double n = norm_squared(x);
    planch = std::max(planch, std::abs(n - norm_squared(xh) / static_cast<double>(h.order())) / n);

    const VectorSequence v = rng.vector(h, A.cols());
    const auto lhs = transfer(apply(A, v));
    const auto vh = transfer(v);
    for (std::size_t xi = 0; xi < h.order(); ++xi) {
      const Eigen::VectorXcd rhs = ah.at(xi) * vh[xi];
      conv = std::max(conv, (lhs[xi] - rhs).norm() / std::max(1.0, rhs.norm()));
    }
    const VectorSequence w = rng.vector(h, A.rows());
    const cplx a = inner(apply(A, v), w), b = inner(v, apply(As, w));
    inner_err = std::max(inner_err, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  checks.residual("dft_roundtrip", rt, tol);
  checks.residual("plancherel", planch, tol);
  checks.residual("convolution_theorem", conv, tol);
  checks.flag("adjoint_involutive", involutive);
  checks.flag("adjoint_transfer_conjugate_transpose", conj_transpose);
  checks.residual("adjoint_inner_product", inner_err, tol);
}

inline void kernel_checks(const ScenarioConfig& c, Rng& rng, CheckList& checks) {
  const TranslationModel& m = c.model.sampling_model();
  if (!m.window_check().is_frame || m.ambient().order() > kKernelCap) return;
  const ReproducingKernel k = reproducing_kernel(m);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    const FunctionOnG F = analysis_transform(m, rng.sequence(m.ambient()));
    worst = std::max(worst, relative_residual(k.reproduce(F), F));
  }
  checks.residual("reproducing_kernel", worst, c.tol.function);
}

template <class Body>
RunReport guarded(const std::string& command, const ScenarioConfig* c, Body&& body) {
  try {
    return body();
  } catch (const ArgumentError& e) {
    return {{{"command", command}, {"scenario", c ? c->name : ""}, {"error", e.what()}, {"pass", false}}, kExitUsage};
  } catch (const std::domain_error& e) {
    return {{{"command", command}, {"scenario", c ? c->name : ""}, {"error", e.what()}, {"pass", false}}, kExitFailure};
  } catch (const std::runtime_error& e) {
    return {{{"command", command}, {"scenario", c ? c->name : ""}, {"error", e.what()}, {"pass", false}}, kExitFailure};
  }
}

inline void finish(RunReport& r, const CheckList& checks, std::chrono::steady_clock::time_point start,
                   const RunOptions& o) {
  r.report["checks"] = checks.items();
  r.report["pass"] = checks.pass();
  if (o.timings)
    r.report["timings"] = {
        {"total_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()}};
  if (!checks.pass() && r.exit_code == kExitPass) r.exit_code = kExitFailure;
}

}  // namespace detail

/// Frame diagnostics of the scenario's system; passes iff it is a frame.
inline RunReport cmd_analyze(const ScenarioConfig& c, const RunOptions& o = {}) {
  return detail::guarded("analyze", &c, [&]() -> RunReport {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = o.seed.value_or(c.seed);
    RunReport r{detail::header("analyze", c, seed), kExitPass};
    const SequenceMatrix A = detail::scenario_system(c);
    const FrameDiagnostics d = diagnostics(A, detail::frame_tolerance(c, o));
    r.report["system"] = {{"rows", A.rows()}, {"cols", A.cols()}, {"moduli", A.group().moduli()}};
    r.report["diagnostics"] = to_json(d, A.group());
    r.report["degenerate_characters"] = detail::character_list(A.group(), d.degenerate_characters);
    CheckList checks;
    checks.flag("is_frame", d.is_frame);
    checks.flag("determinant_bounds", check_determinant_bounds(d));
    if (A.group().order() * std::max(A.rows(), A.cols()) <= kDefaultOracleCap) {
      const FrameBounds b = oracle_frame_bounds(A);
      const double scale = std::max(d.beta, 1e-300);
      checks.residual("oracle_bounds",
                      std::max(std::abs(b.lower - d.alpha * kGramNormalization), std::abs(b.upper - d.beta * kGramNormalization)) / scale,
                      1e-8);
    }
    detail::finish(r, checks, start, o);
    return r;
  });
}

/// Sample, reconstruct coefficients and functions for random coefficient draws.
inline RunReport cmd_roundtrip(const ScenarioConfig& c, const RunOptions& o = {}) {
  return detail::guarded("roundtrip", &c, [&]() -> RunReport {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = o.seed.value_or(c.seed);
    Rng rng(seed);
    RunReport r{detail::header("roundtrip", c, seed), kExitPass};
    r.report["trials"] = c.trials;
    const SequenceMatrix A = detail::scenario_system(c);
    const SamplingProcedure proc = detail::scenario_procedure(c, o, A, rng);
    r.report["left_inverse"] = to_string(o.dual.value_or(c.dual));
    r.report["diagnostics"] = to_json(proc.frame(), A.group());
    CheckList checks;
    detail::pipeline_checks(c, proc, rng, checks, o.inject_fault);
    if (c.finite_index) detail::finite_index_checks(c, o, rng, checks);
    if (c.model.semidirect) detail::semidirect_pipeline_checks(c, proc, rng, checks);
    detail::finish(r, checks, start, o);
    return r;
  });
}

/// The full invariant suite for one scenario.
inline RunReport cmd_verify(const ScenarioConfig& c, const RunOptions& o = {}) {
  return detail::guarded("verify", &c, [&]() -> RunReport {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = o.seed.value_or(c.seed);
    Rng rng(seed);
    RunReport r{detail::header("verify", c, seed), kExitPass};
    const SequenceMatrix A = detail::scenario_system(c);
    const FrameDiagnostics d = diagnostics(A, detail::frame_tolerance(c, o));
    r.report["diagnostics"] = to_json(d, A.group());
    CheckList checks;
    detail::foundation_checks(c, A, rng, checks);
    checks.flag("determinant_bounds", check_determinant_bounds(d));
    if (A.group().order() * std::max(A.rows(), A.cols()) <= kDefaultOracleCap) {
      const FrameBounds b = oracle_frame_bounds(A);
      const double scale = std::max(d.beta, 1e-300);
      checks.residual("oracle_bounds",
                      std::max(std::abs(b.lower - d.alpha * kGramNormalization), std::abs(b.upper - d.beta * kGramNormalization)) / scale,
                      1e-8);
    }
    detail::kernel_checks(c, rng, checks);
    if (c.model.semidirect) detail::semidirect_group_checks(*c.model.semidirect, rng, checks);

    if (d.is_frame) {
      const SamplingProcedure proc = detail::scenario_procedure(c, o, A, rng);
      detail::pipeline_checks(c, proc, rng, checks, o.inject_fault);
      const TranslationModel& m = proc.model();
      // Stability: alpha ||x||^2 <= ||A x||^2 <= beta ||x||^2.
      bool sandwich = true;
      for (std::size_t trial = 0; trial < c.trials; ++trial) {
        const VectorSequence x = rng.vector(m.coefficient_group(), m.generator_count());
        const double e = norm_squared(take_samples(proc, x)), n = norm_squared(x);
        sandwich = sandwich && d.alpha * n <= e * (1 + 1e-10) && e <= d.beta * n * (1 + 1e-10);
      }
      checks.flag("stability_bounds", sandwich);
      if (A.rows() == A.cols()) checks.residual("interpolation", interpolation_check(proc), c.tol.function);
      if (A.rows() > A.cols()) {
        // Two members of the family give the same F from the same samples.
        const TransferMatrix C = rng.transfer(A.group(), A.cols(), A.rows());
        const SamplingProcedure other = SamplingProcedure::build(m, A, DualKind::family, &C, detail::frame_tolerance(c, o));
        double worst = 0.0;
        for (std::size_t trial = 0; trial < c.trials; ++trial) {
          const SampleSet s = take_samples(proc, rng.vector(m.coefficient_group(), m.generator_count()));
          worst = std::max(worst, relative_residual(reconstruct_function(other, s), reconstruct_function(proc, s)));
        }
        checks.residual("family_left_inverse", other.left_inverse_residual(), c.tol.left_inverse);
        checks.residual("family_same_function", worst, c.tol.coefficients);
      }
      if (c.finite_index) detail::finite_index_checks(c, o, rng, checks);
      if (c.model.semidirect) detail::semidirect_pipeline_checks(c, proc, rng, checks);
    } else {
      // Not a frame: construction must be refused and some x must be invisible to A.
      bool refused = false;
      try {
        (void)detail::scenario_procedure(c, o, A, rng);
      } catch (const PreconditionError&) {
        refused = true;
      }
      checks.flag("non_frame_rejected", refused);
      const VectorSequence w = kernel_witness(A);
      const double ratio = std::sqrt(norm_squared(apply(A, w)) / norm_squared(w));
      r.report["witness_ratio"] = ratio;
      checks.residual("necessity_witness", ratio, std::sqrt(std::max(d.tolerance, 1e-300)) + 1e-12);
      r.report["degenerate_characters"] = detail::character_list(A.group(), d.degenerate_characters);
    }
    detail::finish(r, checks, start, o);
    return r;
  });
}

}  // namespace gsamp
