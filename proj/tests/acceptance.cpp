// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.  The CLI binary is taken from MILD_BIN (default
// build/mild) for the determinism and exit-code checks.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "mild/dsl.hpp"
#include "mild/models.hpp"
#include "mild/sectional.hpp"
#include "support/oracles.hpp"

using namespace mild;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return "";
  std::string s;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) s.append(buf.data(), n);
  std::fclose(f);
  return s;
}

Workspace corpus(const std::string& file, const std::string& ring = "") {
  std::string src = read_file("corpus/" + file);
  if (src.empty()) throw Error("missing corpus/" + file);
  if (!ring.empty()) {
    auto at = src.find("ring ");
    auto end = src.find('\n', at);
    src.replace(at, end - at, "ring " + ring);
  }
  return parse(src);
}

std::string mild_bin() {
  const char* b = std::getenv("MILD_BIN");
  return b ? b : "build/mild";
}

// Runs the CLI; returns exit status and stdout.
std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = mild_bin() + " " + args + " 2>/dev/null";
  std::FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

// 1. Smith normal form on random matrices.
Outcome snf_suite() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937 rng(20240601);
  int count = 0;
  for (auto R : {CoefficientRing::rationals(), CoefficientRing::localized({2}), CoefficientRing::localized({2, 3})}) {
    auto unit_det = [&](const ScalarMatrix& X) {
      mpq_class d = oracle::determinant(oracle::to_q(X));
      if (d == 0) return false;
      return R.is_field() ||
             (oracle::s_unit(d.get_num(), R.inverted_primes()) && oracle::s_unit(d.get_den(), R.inverted_primes()));
    };
    for (int i = 0; i < 500; ++i, ++count) {
      ScalarMatrix M = oracle::random_matrix(rng, 8, 30);
      auto s = smith_normal_form(M, R);
      if (!(s.U * M * s.V == s.D)) o.fail("U M V != D");
      for (int r = 0; r < s.D.rows(); ++r)
        for (int c = 0; c < s.D.cols(); ++c)
          if (r != c && !s.D(r, c).is_zero()) o.fail("D not diagonal");
      for (int k = 0; k + 1 < s.rank; ++k)
        if (!R.divides(s.diagonal(k), s.diagonal(k + 1))) o.fail("divisibility chain broken");
      if (s.rank != oracle::rank(oracle::to_q(M))) o.fail("rank differs from the oracle");
      if (!unit_det(s.U) || !unit_det(s.V)) o.fail("U or V not invertible over the ring");
    }
  }
  double t = seconds_since(t0);
  if (t >= 10) o.fail("took " + std::to_string(t) + " s");
  if (o.ok) o.detail = std::to_string(count) + " matrices in " + std::to_string(t).substr(0, 5) + " s";
  return o;
}

// 2. Torsion cohomology by hand, and Kunneth on corpus pairs.
Outcome cohomology_oracle() {
  Outcome o;
  auto z = corpus("spheres.mld");
  auto q = corpus("spheres.mld", "Q");
  auto h4 = cohomology(z.algebra("S2t"), 4).entry(4);
  if (!(h4.free_rank == 0 && h4.torsion == std::vector<Scalar>{Scalar(3)})) o.fail("H^4 over Z[1/2] is not R/3");
  if (!cohomology(q.algebra("S2t"), 4).entry(4).is_zero()) o.fail("H^4 over Q is not 0");
  const char* names[] = {"S3", "S2", "S2t", "CP2"};
  int pairs = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4 && pairs < 10; ++j, ++pairs)
      for (int k = 0; k <= 8; ++k)
        if (!kunneth_check(z.algebra(names[i]), z.algebra(names[j]), k).ok())
          o.fail(std::string("Kunneth fails for ") + names[i] + " x " + names[j] + " in degree " + std::to_string(k));
  if (o.ok) o.detail = "H^4 = R/3 over Z[1/2], 0 over Q; Kunneth on " + std::to_string(pairs) + " pairs to degree 8";
  return o;
}

const char* kModelCorpus[] = {"pt_s3", "pt_s2", "pt_s2t", "pt_t5", "pt_s2j", "pt_p2v", "s2_s2j", "p2_p2v",
                              "cp2_p2v", "s2c_s2", "id_s2", "s2_s2c"};

// 3. Relative models on the corpus.
Outcome model_construction() {
  Outcome o;
  int instances = 0, quotient_targets = 0;
  bool torsion_content = false;
  for (const char* ring : {"Q", "Z invert 2"}) {
    auto w = corpus("models.mld", ring);
    for (const char* name : kModelCorpus) {
      const auto& m = w.morphism(name);
      const auto& f = *m.map;
      const int window = 9;
      auto M = relative_model(f, window);
      ++instances;
      if (f.target_ideal()) ++quotient_targets;
      if (!is_quasi_iso(M.projection, window).ok) o.fail(std::string(name) + ": Phi not a quasi-iso");
      for (int g = 0; g < f.source()->num_generators(); ++g)
        if (!(M.projection.apply(M.inclusion.image(g)) == f.image(g))) o.fail(std::string(name) + ": Phi i != f");
      auto rep = check_minimality(M);
      if (!rep.minimal(w.ring)) o.fail(std::string(name) + ": not minimal over " + ring);
      for (auto& e : rep.entries)
        if (!e.decomposable && !w.ring.is_unit(e.scaling_factor)) torsion_content = true;
    }
  }
  if (instances < 8) o.fail("fewer than 8 instances");
  if (quotient_targets == 0) o.fail("no quotient targets");
  if (!torsion_content) o.fail("no non-invertible content factor seen over Z[1/2]");
  if (o.ok)
    o.detail = std::to_string(instances) + " models (" + std::to_string(quotient_targets) +
               " into quotients), non-invertible content where torsion forces it";
  return o;
}

// 4. Lifting through surjective quasi-isomorphisms.
Outcome lifting() {
  Outcome o;
  int pairs = 0;
  for (const char* ring : {"Q", "Z invert 2"}) {
    auto w = corpus("models.mld", ring);
    auto mor = [&](const char* n) -> const AlgebraMorphism& { return *w.morphism(n).map; };
    struct Pair {
      const char* model_of;
      const char* eta;
    };
    for (auto [src, eta_name] : {Pair{"pt_s2", "s2c_s2"}, Pair{"pt_s2j", "s2_s2j"}, Pair{"pt_p2v", "cp2_p2v"},
                                 Pair{"pt_s2", "id_s2"}, Pair{"pt_s3", "pt_s3"}}) {
      const auto& eta = mor(eta_name);
      auto M = relative_model(mor(src), 8);
      if (std::string(src) == "pt_s3") {
        // eta = Phi itself: lifting the model's own projection
        try {
          auto phi = lift(M.projection, M.projection, 8);
          if (lift_defect(phi, M.projection, M.projection)) o.fail("self lift defect");
        } catch (const LiftFailed& e) {
          o.fail(std::string("LiftFailed: ") + e.what());
        }
        ++pairs;
        continue;
      }
      try {
        auto phi = lift(M.projection, eta, 8);
        if (auto d = lift_defect(phi, eta, M.projection)) o.fail(std::string(src) + " via " + eta_name + ": " + *d);
      } catch (const LiftFailed& e) {
        o.fail(std::string("LiftFailed: ") + e.what());
      }
      ++pairs;
    }
  }
  if (pairs < 5) o.fail("fewer than 5 pairs");
  if (o.ok) o.detail = std::to_string(pairs) + " (psi, eta) pairs, eta lift(psi) = psi exactly";
  return o;
}

SectionalConfig cfg(int window, int m_max) {
  SectionalConfig c;
  c.window = window;
  c.m_max = m_max;
  return c;
}

// 5. Order relations among computed members.
Outcome inequality_chains() {
  Outcome o;
  std::vector<InvariantReport> reps;
  auto z = corpus("spheres.mld");
  auto q = corpus("spheres_q.mld");
  auto t = corpus("tensor.mld");
  reps.push_back(tc_report(z.algebra("S3"), 2, cfg(10, 4)).inv);
  reps.push_back(tc_report(q.algebra("S2"), 2, cfg(10, 3)).inv);
  reps.push_back(tc_report(q.algebra("S3"), 3, cfg(9, 3)).inv);
  reps.push_back(tc_report(q.algebra("S3S5"), 2, cfg(8, 3)).inv);
  reps.push_back(tc_report(q.algebra("CP2"), 2, cfg(8, 2)).inv);
  reps.push_back(tc_report(q.algebra("S2"), 1, cfg(8, 2)).inv);
  reps.push_back(atc_report(t.algebra("T3"), 2, cfg(6, 2)).inv);
  reps.push_back(atc_report(t.algebra("T2"), 2, cfg(5, 2)).inv);
  auto inv = corpus("invariants.mld");
  for (const char* name : {"mu", "proj", "id", "mu2"}) {
    const auto& phi = *inv.morphism(name).map;
    const int window = std::string(name) == "mu2" ? 8 : 9;
    reps.push_back(sectional_invariants(phi, kernel_ideal(phi, window + 1), cfg(window, 3)));
  }
  int finite_pairs = 0;
  for (auto& r : reps) {
    for (auto& v : chain_violations(r)) o.fail(r.morphism + ": " + v);
    finite_pairs += r.Hsecat.exact() + r.msecat.exact() + r.Hsc.exact() + r.msc.exact();
  }
  if (o.ok)
    o.detail = std::to_string(reps.size()) + " instances, " + std::to_string(finite_pairs) +
               " certified level members, 0 violations";
  return o;
}

// 6. Sphere benchmarks.
Outcome sphere_benchmarks() {
  Outcome o;
  auto z = corpus("spheres.mld");
  auto t0 = Clock::now();
  auto s3 = tc_report(z.algebra("S3"), 2, cfg(10, 4));
  double t3 = seconds_since(t0);
  const auto& v = s3.inv;
  for (const Bound* b : {&v.nil_ker_H, &v.nil_ker, &v.Hnil_ub, &v.Hsecat, &v.msecat, &v.Hsc, &v.msc})
    if (!b->exact() || b->value != 1) o.fail("S3: a chain member is not exactly 1");
  if (!(s3.TC.exact() && s3.TC.lo == 1 && s3.tc.exact() && s3.tc.lo == 1)) o.fail("S3: TC_2, tc_2 not squeezed to 1");
  auto q = corpus("spheres_q.mld");
  t0 = Clock::now();
  auto s2 = tc_report(q.algebra("S2"), 2, cfg(10, 4));
  double t2 = seconds_since(t0);
  if (!(s2.inv.nil_ker_H.exact() && s2.inv.nil_ker_H.value == 2)) o.fail("S2: nil_ker_H != 2");
  if (!(s2.inv.msecat.exact() && s2.inv.msecat.value == 2)) o.fail("S2: mTC_2 != 2");
  if (t3 >= 60 || t2 >= 60) o.fail("over 60 s");
  if (o.ok) {
    std::ostringstream d;
    d << "S3/Z[1/2]: TC_2 = tc_2 = 1 (" << t3 << " s); S2/Q: nil_ker_H = mTC_2 = 2, TC_2 in [" << s2.TC.lo << ","
      << (s2.TC.hi ? std::to_string(*s2.TC.hi) : "?") << "] (" << t2 << " s)";
    o.detail = d.str();
  }
  return o;
}

// 7. Negative controls.
Outcome negative_controls() {
  Outcome o;
  // corrupted retraction candidates
  auto w = corpus("retraction.mld");
  auto good = verify_multiplicative_retraction(*w.morphism("r").map, *w.morphism("j").map);
  if (!good.ok) o.fail("good retraction rejected: " + good.witness);
  auto bad = verify_multiplicative_retraction(*w.morphism("r_bad").map, *w.morphism("j").map);
  if (bad.ok || bad.witness.empty()) o.fail("corrupted retraction accepted");
  {
    // perturb an image of an added generator of a certified candidate
    auto q = corpus("spheres_q.mld");
    auto A = q.algebra("S3");
    auto S = tensor_power(*A, 2);
    auto phi = mu_n(A, 2, S);
    auto I = kernel_ideal(phi, 7, mu_kernel_seeds(*S, 2, 1));
    auto p = build_p(S, *I, 1, 6, 1);
    auto r = module_retraction(*p.pushout, *S, 6);
    if (!r) {
      o.fail("no module retraction for S3 at level 1");
    } else {
      auto cand = candidate_from_module(p.pushout, S, *r);
      if (!verify_multiplicative_retraction(cand, *p.j).ok) o.fail("S3 level-1 candidate rejected");
      auto broken = cand;
      broken.set_image(1, S->gen(0));
      auto chk = verify_multiplicative_retraction(broken, *p.j);
      if (chk.ok || chk.witness.empty()) o.fail("perturbed S3 candidate accepted");
    }
  }
  // quotient by a non-d-stable ideal
  try {
    corpus("bad_quotient.mld");
    o.fail("non-d-stable quotient accepted");
  } catch (const NotDStable&) {
  }
  // hypothesis (v): H^2 not injective
  try {
    auto m = corpus("models.mld");
    relative_model(*m.morphism("p2_pt").map, 6);
    o.fail("(v) violation accepted");
  } catch (const HypothesisViolated& e) {
    if (e.which() != "(v)" || e.degree() != 2) o.fail("wrong witness for (v): " + e.which());
  }
  // the same through the CLI
  if (run_cli("verify-retraction -i corpus/retraction.mld --morphism r_bad --inclusion j").first != 1)
    o.fail("CLI accepted the corrupted retraction");
  if (run_cli("cohomology -i corpus/bad_quotient.mld --algebra S2").first != 2) o.fail("CLI: bad quotient exit code");
  if (run_cli("model -i corpus/models.mld --morphism p2_pt").first != 3) o.fail("CLI: (v) exit code");
  if (o.ok) o.detail = "corrupted retractions, non-d-stable quotient and (v) at degree 2 rejected";
  return o;
}

// 8. Byte-identical JSON across runs and thread counts.
Outcome determinism() {
  Outcome o;
  const char* jobs[] = {
      "tc -i corpus/spheres_q.mld --algebra S2 --n 2 --m-max 3 --max-degree 10",
      "tc -i corpus/spheres.mld --algebra S3 --n 2 --max-degree 10",
      "atc -i corpus/tensor.mld --algebra T2 --n 2 --m-max 2 --max-degree 5",
      "invariants -i corpus/invariants.mld --morphism mu2 --m-max 3 --max-degree 8",
      "model -i corpus/models.mld --morphism cp2_p2v --max-degree 9",
      "cohomology -i corpus/spheres.mld --algebra S2t --max-degree 8",
  };
  int runs = 0;
  for (const char* job : jobs) {
    std::string first;
    for (int threads : {1, 4})
      for (int rep = 0; rep < 3; ++rep) {
        auto [code, out] =
            run_cli(std::string(job) + " --emit json" + (std::string(job).rfind("tc", 0) == 0 ||
                                                                 std::string(job).rfind("atc", 0) == 0 ||
                                                                 std::string(job).rfind("invariants", 0) == 0
                                                             ? " --threads " + std::to_string(threads)
                                                             : ""));
        ++runs;
        if (code != 0 || out.empty()) {
          o.fail(std::string("CLI failed: ") + job);
          continue;
        }
        if (first.empty()) first = out;
        if (out != first) o.fail(std::string("output differs: ") + job);
      }
  }
  if (o.ok) o.detail = std::to_string(runs) + " runs over " + std::to_string(std::size(jobs)) + " reports identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {
      {"1 smith normal form", snf_suite},
      {"2 cohomology oracle and Kunneth", cohomology_oracle},
      {"3 relative models", model_construction},
      {"4 lifting", lifting},
      {"5 inequality chains", inequality_chains},
      {"6 sphere benchmarks", sphere_benchmarks},
      {"7 negative controls", negative_controls},
      {"8 determinism", determinism},
  };
  int failed = 0;
  for (auto& c : all) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
