// mild: command-line front end.
//
//   mild cohomology --input ws.mld --algebra S2 --max-degree 8
//   mild model      --input ws.mld --morphism f
//   mild lift       --input ws.mld --morphism psi --over eta
//   mild tc         --input ws.mld --algebra S3 --n 2 --m-max 3 --json out.json
//   mild atc        --input ws.mld --algebra T3 --n 2
//   mild invariants --input ws.mld --morphism phi
//   mild verify-retraction --input ws.mld --morphism r --inclusion j
//
// Exit codes: 0 success, 1 other failure (or a rejected retraction),
// 2 input errors, 3 violated hypotheses, 4 uncertified results with --strict.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mild/dsl.hpp"
#include "mild/report.hpp"

using namespace mild;

namespace {

struct Options {
  std::string input, algebra, morphism, over, inclusion, json_path, emit = "text", ring_enlarge = "auto";
  std::vector<std::string> candidates;
  int n = 2, m_max = 4, max_degree = 10, r = 1, threads = 0;
  bool strict = false, assume_loops = false;
};

int exit_input(const std::string& msg) {
  std::cerr << "mild: " << msg << "\n";
  return 2;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw NameError("cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int thread_count(int requested) {
  int cap = 0;
  if (const char* env = std::getenv("MILD_THREADS")) cap = std::atoi(env);
  int t = requested > 0 ? requested : (cap > 0 ? cap : 1);
  if (cap > 0) t = std::min(t, cap);
  return std::max(t, 1);
}

// An algebra or a quotient, by name.
std::pair<AlgebraPtr, IdealPtr> resolve(const Workspace& ws, const std::string& name) {
  if (auto q = ws.quotient(name)) return {q->ambient, q->ideal};
  return {ws.algebra(name), nullptr};
}

json run(const std::string& cmd, const Options& o, const Workspace& ws) {
  if (cmd == "cohomology") {
    if (o.algebra.empty()) throw NameError("cohomology needs --algebra");
    auto [A, I] = resolve(ws, o.algebra);
    auto H = make_cohomology(A, I);
    return cohomology_json(o.algebra, cohomology(*H, o.max_degree), is_H_mild(*H, o.r, A->ring(), o.max_degree),
                           o.r);
  }
  if (cmd == "model") {
    std::shared_ptr<AlgebraMorphism> f;
    std::string label = o.morphism;
    if (!o.morphism.empty()) {
      f = ws.morphism(o.morphism).map;
    } else if (!o.algebra.empty()) {
      // absolute model: the map from the ground ring
      auto [A, I] = resolve(ws, o.algebra);
      auto pt = std::make_shared<FreeGradedAlgebra>(A->flavor(), A->ring(), "R");
      f = std::make_shared<AlgebraMorphism>("unit", pt, A, I);
      label = "R -> " + o.algebra;
    } else {
      throw NameError("model needs --morphism or --algebra");
    }
    auto M = relative_model(*f, o.max_degree, o.r);
    return model_json(label, M, o.max_degree);
  }
  if (cmd == "lift") {
    if (o.morphism.empty() || o.over.empty()) throw NameError("lift needs --morphism and --over");
    const auto& psi = *ws.morphism(o.morphism).map;
    const auto& eta = *ws.morphism(o.over).map;
    auto phi = lift(psi, eta, o.max_degree);
    return lift_json(psi, eta, phi, o.max_degree);
  }
  if (cmd == "tc" || cmd == "atc") {
    if (o.algebra.empty()) throw NameError(cmd + " needs --algebra");
    SectionalConfig cfg;
    cfg.m_max = o.m_max;
    cfg.window = o.max_degree;
    cfg.r = o.r;
    cfg.threads = thread_count(o.threads);
    RingPlan plan = o.ring_enlarge == "off" ? RingPlan::Off : RingPlan::Auto;
    auto A = ws.algebra(o.algebra);
    auto rep = cmd == "tc" ? tc_report(A, o.n, cfg, plan) : atc_report(A, o.n, cfg, plan);
    json j = tc_json(rep, cmd.c_str());
    j["assumptions"] = {{"loop_homology_torsion_free", o.assume_loops ? "asserted" : "not_asserted"}};
    return j;
  }
  if (cmd == "invariants") {
    if (o.morphism.empty()) throw NameError("invariants needs --morphism");
    const auto& phi = *ws.morphism(o.morphism).map;
    SectionalConfig cfg;
    cfg.m_max = o.m_max;
    cfg.window = o.max_degree;
    cfg.r = o.r;
    cfg.threads = thread_count(o.threads);
    for (auto& c : o.candidates) {
      const auto& I = ws.ideal(c);
      if (I.ambient != phi.source()) throw NameError("ideal " + c + " does not live in the source of " + o.morphism);
      cfg.candidates.push_back(I.ideal);
    }
    check_surjective(phi, cfg.window + 1);
    auto I = kernel_ideal(phi, cfg.window + 1);
    json j = invariants_json(sectional_invariants(phi, I, cfg));
    j["command"] = "invariants";
    j["status"] = fully_certified(j) ? "exact" : "partial";
    return j;
  }
  if (cmd == "verify-retraction") {
    if (o.morphism.empty() || o.inclusion.empty()) throw NameError("verify-retraction needs --morphism and --inclusion");
    const auto& r = *ws.morphism(o.morphism).map;
    const auto& j = *ws.morphism(o.inclusion).map;
    return retraction_json(o.morphism, o.inclusion, verify_multiplicative_retraction(r, j));
  }
  throw NameError("unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mild: models, cohomology and sectional invariants of free graded algebras"};
  app.require_subcommand(1, 1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--input,-i", o.input, "workspace file ('-' for stdin)")->required();
    s->add_option("--max-degree", o.max_degree, "top degree of the window")->check(CLI::Range(1, 64));
    s->add_option("--r", o.r, "connectivity r")->check(CLI::Range(1, 16));
    s->add_option("--json", o.json_path, "also write the JSON report to this file");
    s->add_option("--emit", o.emit, "stdout format")->check(CLI::IsMember({"text", "json"}));
    s->add_flag("--strict", o.strict, "exit 4 when a result is not certified");
  };
  auto sectional = [&](CLI::App* s) {
    s->add_option("--m-max", o.m_max, "largest level searched")->check(CLI::Range(0, 16));
    s->add_option("--threads", o.threads, "worker threads (capped by MILD_THREADS)")->check(CLI::Range(0, 64));
  };
  auto* coh = app.add_subcommand("cohomology", "cohomology table with torsion");
  common(coh);
  coh->add_option("--algebra", o.algebra, "algebra or quotient");
  auto* mod = app.add_subcommand("model", "relative model of a morphism (or absolute model of an algebra)");
  common(mod);
  mod->add_option("--morphism", o.morphism);
  mod->add_option("--algebra", o.algebra);
  auto* lif = app.add_subcommand("lift", "lift a morphism through a surjective quasi-isomorphism");
  common(lif);
  lif->add_option("--morphism", o.morphism, "psi: M -> B")->required();
  lif->add_option("--over", o.over, "eta: A -> B")->required();
  for (const char* name : {"tc", "atc"}) {
    auto* t = app.add_subcommand(name, std::string(name) == "tc" ? "bounds on TC_n and tc_n"
                                                                 : "bounds on ATC_n and Atc_n (tensor flavor)");
    common(t);
    sectional(t);
    t->add_option("--algebra", o.algebra)->required();
    t->add_option("--n", o.n, "number of factors")->check(CLI::Range(1, 8));
    t->add_option("--ring-enlarge", o.ring_enlarge, "invert more primes when needed")
        ->check(CLI::IsMember({"auto", "off"}));
    t->add_flag("--assume-torsion-free-loops", o.assume_loops,
                "record that the loop space homology is torsion free (not checked)");
  }
  auto* inv = app.add_subcommand("invariants", "the invariant battery for a surjective morphism");
  common(inv);
  sectional(inv);
  inv->add_option("--morphism", o.morphism)->required();
  inv->add_option("--candidate", o.candidates, "ideal to try as an acyclic container");
  auto* ver = app.add_subcommand("verify-retraction", "check a candidate multiplicative retraction");
  common(ver);
  ver->add_option("--morphism", o.morphism, "candidate r: E -> A")->required();
  ver->add_option("--inclusion", o.inclusion, "inclusion j: A -> E")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  Workspace ws;
  try {
    ws = parse(read_file(o.input), o.r);
  } catch (const Error& e) {
    return exit_input(e.what());
  }

  json report;
  try {
    report = run(cmd, o, ws);
  } catch (const NameError& e) {
    return exit_input(e.what());
  } catch (const HypothesisViolated& e) {
    std::cerr << "mild: hypothesis " << e.which() << " fails in degree " << e.degree() << ": " << e.what() << "\n";
    return 3;
  } catch (const NotSurjective& e) {
    std::cerr << "mild: not surjective in degree " << e.degree() << ": " << e.what() << "\n";
    return 3;
  } catch (const NotQuasiIso& e) {
    std::cerr << "mild: not a quasi-isomorphism in degree " << e.degree() << ": " << e.what() << "\n";
    return 3;
  } catch (const NotDStable& e) {
    std::cerr << "mild: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "mild: " << e.what() << "\n";
    return 1;
  }

  const std::string text = report.dump(2) + "\n";
  if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    if (!out) return exit_input("cannot write " + o.json_path);
    out << text;
  }
  std::cout << (o.emit == "json" ? text : render_text(report));
  if (cmd == "verify-retraction" && report["status"] == "rejected") return 1;
  if (o.strict && !fully_certified(report)) return 4;
  return 0;
}
