// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance <path-to-gsample>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "gsamp/random.hpp"
#include "gsamp/sampling.hpp"
#include "oracles.hpp"

using namespace gsamp;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int pick(Rng& rng, int lo, int hi) { return rng.integer(lo, hi); }

/// Ambient group of order <= 64 with a product subgroup H of index >= min_index.
std::pair<GroupSpec, std::vector<int>> random_shape(Rng& rng, std::size_t min_index) {
  for (;;) {
    const int rank = pick(rng, 1, 2);
    std::vector<int> h(rank), s(rank), g(rank);
    long order = 1, index = 1;
    for (int j = 0; j < rank; ++j) {
      h[j] = rank == 1 ? pick(rng, 2, 8) : pick(rng, 2, 4);
      s[j] = rank == 1 ? pick(rng, 1, 8) : pick(rng, 1, 3);
      g[j] = h[j] * s[j];
      order *= g[j];
      index *= s[j];
    }
    if (order <= 64 && index >= static_cast<long>(min_index)) return {GroupSpec(g), s};
  }
}

TranslationModel random_model(Rng& rng, const GroupSpec& g, const std::vector<int>& strides, std::size_t N) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<GroupSequence> gens;
    for (std::size_t n = 0; n < N; ++n) gens.push_back(rng.sequence(g));
    TranslationModel m(rng.sequence(g), ProductSubgroup(g, strides), std::move(gens));
    if (m.riesz_bounds().lower > 1e-3 * m.riesz_bounds().upper) return m;
  }
  throw std::runtime_error("no well-conditioned model found");
}

SequenceMatrix random_frame(Rng& rng, const GroupSpec& h, std::size_t M, std::size_t N, bool real) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    SequenceMatrix A = rng.matrix(h, M, N, real);
    const auto d = diagnostics(A);
    if (d.delta / std::pow(d.beta, static_cast<double>(N)) > 1e-6) return A;
  }
  throw std::runtime_error("no well-conditioned system found");
}

struct Scenario {
  TranslationModel model;
  SequenceMatrix A;
};

Scenario random_scenario(Rng& rng) {
  const std::size_t N = static_cast<std::size_t>(pick(rng, 1, 3));
  const std::size_t M = static_cast<std::size_t>(pick(rng, static_cast<int>(N), 5));
  const auto [g, strides] = random_shape(rng, N);
  TranslationModel m = random_model(rng, g, strides, N);
  SequenceMatrix A = random_frame(rng, m.coefficient_group(), M, N, true);
  return {std::move(m), std::move(A)};
}

std::vector<FrameDiagnostics> g_generated;  // every system diagnosed along the way, for criterion 3

Outcome exact_recovery() {
  Outcome o;
  Rng rng(1001);
  const auto start = Clock::now();
  double coef = 0.0, func = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Scenario s = random_scenario(rng);
    const auto proc = SamplingProcedure::build(s.model, s.A);
    g_generated.push_back(proc.frame());
    const VectorSequence x = rng.vector(s.model.coefficient_group(), s.model.generator_count());
    const SampleSet samples = take_samples(proc, x);
    coef = std::max(coef, relative_residual(reconstruct_coefficients(proc, samples), x));
    func = std::max(func, relative_residual(reconstruct_function(proc, samples),
                                            analysis_transform(s.model, synthesize(s.model, x))));
  }
  const double t = seconds_since(start);
  o.detail << "100 scenarios, coefficient residual " << coef << ", function residual " << func << ", " << t << " s";
  o.require(coef < 1e-9, "coefficient residual");
  o.require(func < 1e-9, "function residual");
  o.require(t < 30.0, "runtime");
  return o;
}

Outcome oracle_bounds() {
  Outcome o;
  Rng rng(1002);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int rank = pick(rng, 1, 2);
    std::vector<int> moduli(rank);
    for (auto& v : moduli) v = rank == 1 ? pick(rng, 2, 12) : pick(rng, 2, 4);
    const GroupSpec h(moduli);
    const SequenceMatrix A = rng.matrix(h, static_cast<std::size_t>(pick(rng, 1, 4)), static_cast<std::size_t>(pick(rng, 1, 3)));
    const FrameDiagnostics d = diagnostics(A);
    g_generated.push_back(d);
    const auto [lo, hi] = oracle::translate_frame_bounds(A);
    const double err = std::max(std::abs(d.alpha * kGramNormalization - lo), std::abs(d.beta * kGramNormalization - hi)) / hi;
    worst = std::max(worst, err);
  }
  o.detail << "50 systems, worst relative gap " << worst;
  o.require(worst < 1e-8, "transfer bounds vs brute-force Gram");
  return o;
}

Outcome determinant_bounds() {
  Outcome o;
  Rng rng(1003);
  for (int k = 0; k < 50; ++k) {
    const GroupSpec h({pick(rng, 2, 10)});
    g_generated.push_back(diagnostics(rng.matrix(h, static_cast<std::size_t>(pick(rng, 1, 5)), 1)));
  }
  std::size_t single = 0, violations = 0, n1_mismatch = 0;
  for (const auto& d : g_generated) {
    if (!check_determinant_bounds(d)) ++violations;
    if (d.cols == 1) {
      ++single;
      if (d.alpha != d.delta) ++n1_mismatch;
    }
  }
  o.detail << g_generated.size() << " systems (" << single << " with N = 1), " << violations
           << " bound violations, " << n1_mismatch << " N = 1 systems with alpha != delta";
  o.require(violations == 0, "alpha^N <= delta <= alpha beta^(N-1)");
  o.require(single > 0 && n1_mismatch == 0, "alpha == delta for N = 1");
  return o;
}

Outcome dual_frames() {
  Outcome o;
  Rng rng(1004);
  double residual = 0.0, spread = 0.0;
  int systems = 0;
  while (systems < 10) {
    const Scenario s = random_scenario(rng);
    if (s.A.rows() == s.A.cols()) continue;
    ++systems;
    const auto base = SamplingProcedure::build(s.model, s.A);
    const SampleSet samples = take_samples(base, rng.vector(s.model.coefficient_group(), s.model.generator_count()));
    const FunctionOnG F = reconstruct_function(base, samples);
    for (int draw = 0; draw < 20; ++draw) {
      const TransferMatrix C = rng.transfer(s.A.group(), s.A.cols(), s.A.rows());
      const LeftInverse B = left_inverse_family(s.A, C);
      residual = std::max(residual, verify_left_inverse(s.A, B));
      const auto member = SamplingProcedure::build(s.model, s.A, DualKind::family, &C);
      spread = std::max(spread, max_abs_diff(reconstruct_function(member, samples), F));
    }
  }
  o.detail << systems << " tall systems x 20 draws, max |B^A^ - I| " << residual << ", max pointwise F spread " << spread;
  o.require(residual < 1e-9, "left-inverse residual");
  o.require(spread <= 1e-9, "identical F across the family");
  return o;
}

GroupSequence seq(std::vector<int> moduli, std::vector<cplx> v) { return {GroupSpec(std::move(moduli)), std::move(v)}; }

Outcome shannon() {
  Outcome o;
  Rng rng(1005);
  double worst = 0.0, pointwise = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto [g, strides] = random_shape(rng, 1);
    const TranslationModel m = random_model(rng, g, strides, 1);
    const auto proc = shannon_procedure(m);
    const VectorSequence x = rng.vector(m.coefficient_group(), 1);
    const FunctionOnG F = analysis_transform(m, synthesize(m, x));
    const SampleSet s = take_samples(proc, x);
    // The samples are the values of F on the lattice and nothing else.
    for (std::size_t h = 0; h < m.coefficient_group().order(); ++h)
      pointwise = std::max(pointwise, std::abs(s[0][h] - F(m.sampling_subgroup().embed(h))));
    worst = std::max(worst, relative_residual(reconstruct_function(proc, s), F));
  }
  o.require(pointwise < 1e-12, "samples equal F on the lattice");
  o.require(worst < 1e-9, "recovery from pointwise samples");

  // a(h) = phi(iota h) for a delta generator, so zeros of a^ are known in closed form.
  // The windows themselves are frames for l2(G), so F determines f.
  struct Bad {
    TranslationModel model;
    std::vector<std::vector<int>> zeros;
  };
  const std::vector<Bad> bad = {
      {TranslationModel(seq({4}, {1, 0.5, 1, 0}), ProductSubgroup(GroupSpec({4}), {2}), {GroupSequence::delta(GroupSpec({4}))}),
       {{1}}},
      {TranslationModel(seq({8}, {1, 0.5, 0, 0.25, 1, 0, 0, 0}), ProductSubgroup(GroupSpec({8}), {2}),
                        {GroupSequence::delta(GroupSpec({8}))}),
       {{1}, {3}}},
  };
  std::size_t rejected = 0, witnessed = 0;
  for (const auto& b : bad) {
    try {
      (void)shannon_procedure(b.model);
    } catch (const SingularCharacterError& e) {
      if (e.characters() == b.zeros) ++rejected;
    }
    const SequenceMatrix A = sample_matrix(b.model, {b.model.window()});
    const VectorSequence w = kernel_witness(A);
    const double invisible = std::sqrt(norm_squared(apply(A, w)) / norm_squared(w));
    const double seen = max_abs(analysis_transform(b.model, synthesize(b.model, w)));
    // w and 0 produce the same samples but different functions F.
    if (invisible < 1e-12 && seen > 0.1) ++witnessed;
  }
  o.detail << "20 invertible models, sample-vs-F gap " << pointwise << ", residual " << worst << "; " << rejected << "/"
           << bad.size() << " singular models rejected at the right characters, " << witnessed << "/" << bad.size()
           << " kernel witnesses";
  o.require(rejected == bad.size(), "rejection with correct characters");
  o.require(witnessed == bad.size(), "non-recovery witness");
  return o;
}

Outcome interpolation() {
  Outcome o;
  Rng rng(1006);
  double worst = 0.0;
  int systems = 0;
  while (systems < 20) {
    const std::size_t N = static_cast<std::size_t>(pick(rng, 1, 3));
    const auto [g, strides] = random_shape(rng, N);
    const TranslationModel m = random_model(rng, g, strides, N);
    const auto proc = SamplingProcedure::build(m, random_frame(rng, m.coefficient_group(), N, N, false));
    worst = std::max(worst, interpolation_check(proc));
    ++systems;
  }
  o.detail << systems << " square Riesz systems, max biorthogonality error " << worst;
  o.require(worst < 1e-8, "interpolation property");
  return o;
}

Outcome finite_index() {
  Outcome o;
  const GroupSpec g({8});
  // Dyadic data: every partial sum is exact, so the two sample computations agree bitwise.
  const TranslationModel dyadic(seq({8}, {1, 0.5, 0.25, 0, 0, 0, 0, 0.5}), ProductSubgroup(g, {2}),
                                {seq({8}, {1, 0.25, 0, 0, 0, 0, 0, -0.5})});
  const ProductSubgroup r_in_h(dyadic.coefficient_group(), {2});
  const std::vector<GroupSequence> probes = {dyadic.window(), seq({8}, {0.25, 0.25, 0.25, 0.25, 0, 0, 0, 0})};
  const auto fi = finite_index_procedure(dyadic, r_in_h, probes);
  const VectorSequence xd({seq({4}, {1, -2, 0.5, 3})});
  const bool bitwise =
      fi.restrict(direct_samples(dyadic, probes, synthesize(dyadic, xd))) == take_samples(fi.procedure(), fi.regroup(xd));
  o.require(fi.index() == 2, "index L = 2");
  o.require(bitwise, "bitwise agreement on dyadic data");

  Rng rng(1007);
  double coherence = 0.0, recon = 0.0;
  for (int k = 0; k < 20; ++k) {
    const TranslationModel m = random_model(rng, g, {2}, 1);
    const std::vector<GroupSequence> p = {m.window(), probes[1]};
    const auto f = finite_index_procedure(m, r_in_h, p);
    const VectorSequence x = rng.vector(m.coefficient_group(), 1);
    const SampleSet at_r = take_samples(f.procedure(), f.regroup(x));
    coherence = std::max(coherence, relative_residual(f.restrict(direct_samples(m, p, synthesize(m, x))), at_r));
    recon = std::max(recon, relative_residual(reconstruct_function(f.procedure(), at_r), analysis_transform(m, synthesize(m, x))));
    recon = std::max(recon, relative_residual(f.ungroup(reconstruct_coefficients(f.procedure(), at_r)), x));
  }
  o.detail << "Z8, L = 2: dyadic samples " << (bitwise ? "bitwise equal" : "differ") << ", random-data coherence "
           << coherence << ", reconstruction residual " << recon;
  o.require(coherence < 1e-12, "coherence on random data");
  o.require(recon < 1e-9, "reconstruction residual");
  return o;
}

/// Composition law and unitarity over every group element, then reconstruction from lattice samples.
void semidirect_run(Outcome& o, int L, RotationGroup kind, int stride, std::size_t probe_count, std::uint64_t seed) {
  Rng rng(seed);
  const GroupSpec torus({L, L});
  for (int attempt = 0; attempt < 20; ++attempt) {
    const SemidirectModel sm(torus, kind, {stride, stride}, rng.sequence(torus), rng.sequence(torus));
    const auto reduced = semidirect_reduce(sm);
    if (reduced.model.riesz_bounds().lower < 1e-3 * reduced.model.riesz_bounds().upper) continue;
    std::vector<GroupSequence> probes;
    for (std::size_t k = 0; k < probe_count; ++k) probes.push_back(rng.sequence(torus));
    const SequenceMatrix A = sample_matrix(reduced.model, probes);
    const auto d = diagnostics(A);
    if (d.delta / std::pow(d.beta, static_cast<double>(A.cols())) < 1e-6) continue;

    const GroupSequence f = rng.sequence(torus);
    bool composition = true, unitary = true;
    auto key = [](cplx a, cplx b) { return std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag()); };
    auto sorted = f.values();
    std::sort(sorted.begin(), sorted.end(), key);
    const std::size_t n_t = torus.order(), n_r = sm.orientation_count();
    for (std::size_t s1 = 0; s1 < n_t; ++s1)
      for (std::size_t r1 = 0; r1 < n_r; ++r1) {
        const SemidirectElement a{s1, r1};
        const GroupSequence ua = quasi_regular_apply(sm, a, f);
        auto v = ua.values();
        std::sort(v.begin(), v.end(), key);
        unitary = unitary && v == sorted;
        for (std::size_t s2 = 0; s2 < n_t; ++s2)
          for (std::size_t r2 = 0; r2 < n_r; ++r2) {
            const SemidirectElement b{s2, r2};
            composition = composition && quasi_regular_apply(sm, b, ua) == quasi_regular_apply(sm, sm.compose(b, a), f);
          }
      }
    const auto proc = SamplingProcedure::build(reduced.model, A);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial)
      worst = std::max(worst, semidirect_sample_and_reconstruct(
                                  sm, proc, rng.vector(reduced.model.coefficient_group(), n_r)).residual);
    o.detail << "; (Z" << L << ")^2 x| " << to_string(kind) << " stride " << stride << ": composition "
             << (composition ? "exact" : "BROKEN") << ", unitarity " << (unitary ? "exact" : "BROKEN") << ", residual "
             << worst;
    o.require(composition, "composition law");
    o.require(unitary, "unitarity");
    o.require(worst < 1e-8, "reconstruction residual");
    return;
  }
  o.require(false, "no admissible semidirect model found");
}

Outcome semidirect() {
  Outcome o;
  o.detail << "lattice samples to F(s, g) on all of torus x Gamma";
  semidirect_run(o, 4, RotationGroup::C2, 4, 4, 1008);
  semidirect_run(o, 6, RotationGroup::C2, 3, 4, 1009);
  semidirect_run(o, 6, RotationGroup::C4, 3, 6, 1010);
  // Stride 2 on (Z4)^2 never yields a Riesz pair: the quotient is Z2 x Z2, where t = -t.
  Rng rng(1011);
  const GroupSpec torus({4, 4});
  bool never = true;
  for (int k = 0; k < 10; ++k) {
    const SemidirectModel sm(torus, RotationGroup::C2, {2, 2}, rng.sequence(torus), rng.sequence(torus));
    never = never && !semidirect_reduce(sm).model.riesz_bounds().is_riesz;
  }
  o.detail << "; (Z4)^2 stride 2: " << (never ? "never Riesz, as expected" : "unexpectedly Riesz");
  o.require(never, "stride-2 obstruction");
  return o;
}

Outcome foundations(const std::string& gsample) {
  Outcome o;
  Rng rng(1012);
  double rt = 0.0, planch = 0.0, conv = 0.0, oracle_dft = 0.0, adj = 0.0, kernel = 0.0;
  bool involution = true, conj_transpose = true;
  for (int k = 0; k < 100; ++k) {
    const int rank = pick(rng, 1, 3);
    std::vector<int> moduli(rank);
    for (auto& v : moduli) v = rank == 1 ? pick(rng, 1, 32) : pick(rng, 1, 5);
    const GroupSpec h(moduli);
    const GroupSequence x = rng.sequence(h);
    const GroupSequence xh = dft(x);
    const double n = norm_squared(x);
    rt = std::max(rt, max_abs_diff(idft(xh), x) / std::sqrt(n));
    planch = std::max(planch, std::abs(n - norm_squared(xh) / static_cast<double>(h.order())) / n);
    const auto ref = oracle::dft(moduli, x.values());
    for (std::size_t i = 0; i < ref.size(); ++i) oracle_dft = std::max(oracle_dft, std::abs(ref[i] - xh[i]) / std::sqrt(n * h.order()));

    const std::size_t M = static_cast<std::size_t>(pick(rng, 1, 3)), N = static_cast<std::size_t>(pick(rng, 1, 3));
    const SequenceMatrix A = rng.matrix(h, M, N);
    const VectorSequence v = rng.vector(h, N), w = rng.vector(h, M);
    const VectorSequence av = apply(A, v);
    // Convolution theorem against a brute-force convolution and the transfer product.
    const auto ah = transfer(A);
    const auto avh = transfer(av);
    const auto vh = transfer(v);
    for (std::size_t m = 0; m < M; ++m) {
      std::vector<cplx> direct(h.order());
      for (std::size_t c = 0; c < N; ++c) {
        const auto part = oracle::convolve(moduli, A(m, c).values(), v[c].values());
        for (std::size_t i = 0; i < part.size(); ++i) direct[i] += part[i];
      }
      for (std::size_t i = 0; i < direct.size(); ++i) conv = std::max(conv, std::abs(direct[i] - av[m][i]) / std::max(1.0, std::abs(direct[i])));
    }
    for (std::size_t xi = 0; xi < h.order(); ++xi) {
      const Eigen::VectorXcd rhs = ah.at(xi) * vh[xi];
      conv = std::max(conv, (avh[xi] - rhs).norm() / std::max(1.0, rhs.norm()));
    }
    const SequenceMatrix As = adjoint_system(A);
    involution = involution && adjoint_system(As) == A;
    const auto ash = transfer(As);
    for (std::size_t xi = 0; xi < h.order(); ++xi) {
      const Eigen::MatrixXcd ct = ah.at(xi).adjoint();
      conj_transpose = conj_transpose && ash.at(xi) == ct;
    }
    const cplx l = inner(av, w), r = inner(v, apply(As, w));
    adj = std::max(adj, std::abs(l - r) / std::max(1.0, std::abs(l)));
  }
  // Reproducing kernel on window frames of l2(G).
  int windows = 0;
  while (windows < 100) {
    const auto [g, strides] = random_shape(rng, 1);
    const TranslationModel m(rng.sequence(g), ProductSubgroup(g, strides), {rng.sequence(g)});
    if (m.window_check().min_power < 1e-3 * m.window_check().max_power) continue;
    ++windows;
    const ReproducingKernel k = reproducing_kernel(m);
    const FunctionOnG F = analysis_transform(m, rng.sequence(g));
    kernel = std::max(kernel, relative_residual(k.reproduce(F), F));
  }
  o.detail << "100 inputs each: DFT round trip " << rt << ", vs direct sum " << oracle_dft << ", Plancherel " << planch
           << ", convolution theorem " << conv << ", adjoint pairing " << adj << ", involution "
           << (involution ? "exact" : "BROKEN") << ", transfer of adjoint " << (conj_transpose ? "exact" : "BROKEN")
           << ", reproducing kernel " << kernel;
  for (auto [value, what] : {std::pair{rt, "DFT round trip"}, {oracle_dft, "DFT vs direct sum"}, {planch, "Plancherel"},
                             {conv, "convolution theorem"}, {adj, "adjoint pairing"}, {kernel, "reproducing kernel"}})
    o.require(value < 1e-10, what);
  o.require(involution, "involution");
  o.require(conj_transpose, "adjoint transfer");

  const auto start = Clock::now();
  const std::string cmd = "\"" + gsample + "\" verify --all > /dev/null";
  const int status = std::system(cmd.c_str());
  const double t = seconds_since(start);
  o.detail << "; verify --all exit " << status << " in " << t << " s";
  o.require(status == 0, "verify --all");
  o.require(t < 60.0, "verify --all runtime");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-gsample>\n";
    return 2;
  }
  const std::string gsample = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact recovery on random scenarios", exact_recovery},
      {"transfer-domain frame bounds match brute-force Gram", oracle_bounds},
      {"determinant inequality", determinant_bounds},
      {"left-inverse family", dual_frames},
      {"single-generator pointwise sampling", shannon},
      {"interpolation property", interpolation},
      {"finite-index equivalence on Z8", finite_index},
      {"semidirect pipeline", semidirect},
      {"foundations and verify --all", [&] { return foundations(gsample); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
