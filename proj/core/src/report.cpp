#include "framelab/report.hpp"

#include "framelab/perturbation.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

namespace framelab {

using nlohmann::ordered_json;

std::uint64_t fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Rat scalar_from_json(const nlohmann::json& j, Mode mode) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(long(j.get<long long>()));
  if (j.is_number_float()) {
    if (mode == Mode::Exact)
      throw ParseError("float scalar in exact mode; use \"p/q\" strings");
    Rat r;
    r = j.get<double>();  // exact binary64 -> rational
    return r;
  }
  throw ParseError("malformed scalar: " + j.dump());
}

std::vector<Rat> vector_from_json(const nlohmann::json& j, Mode mode, int dim) {
  if (!j.is_array()) throw ParseError("vector must be an array");
  if (dim >= 0 && int(j.size()) != dim) throw ParseError("ragged rows: vector length mismatch");
  std::vector<Rat> v;
  for (const auto& e : j) v.push_back(scalar_from_json(e, mode));
  return v;
}

ordered_json vector_to_json(const std::vector<Rat>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& e : v) a.push_back(to_string(e));
  return a;
}

ordered_json subset_to_json(SubsetMask mask, int m) {
  ordered_json a = ordered_json::array();
  for (int i : mask_to_indices(mask, m)) a.push_back(i + 1);  // 1-based in reports
  return a;
}

SubsetMask subset_from_json(const nlohmann::json& j) {
  SubsetMask mask = 0;
  for (const auto& e : j) mask |= SubsetMask(1) << (e.get<int>() - 1);
  return mask;
}

const char* expect_of(Verdict v) {
  switch (v) {
    case Verdict::CertifiedYes: return "yes";
    case Verdict::CertifiedNo: return "no";
    default: return "undecided";
  }
}

}  // namespace

RunConfig parse_input_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  RunConfig c;
  c.input_digest = hex64(fnv1a_digest(text));
  if (j.contains("mode")) {
    const auto m = j["mode"].get<std::string>();
    if (m == "exact") c.mode = Mode::Exact;
    else if (m == "float") c.mode = Mode::Float;
    else throw ParseError("unknown mode: " + m);
  }
  if (j.contains("eps")) c.eps = j["eps"].get<double>();
  if (j.contains("trials")) c.trials = j["trials"].get<std::uint64_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("samples")) c.samples = j["samples"].get<std::uint64_t>();
  if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
  if (j.contains("max_subset_bits")) c.max_subset_bits = j["max_subset_bits"].get<int>();

  int dim = j.value("dim", -1);
  if (j.contains("frame")) {
    const auto& fj = j["frame"];
    if (!fj.contains("vectors") || !fj["vectors"].is_array() || fj["vectors"].empty())
      throw ParseError("EmptyFamily: frame.vectors must be a non-empty array");
    std::vector<std::vector<Rat>> vs;
    for (const auto& vj : fj["vectors"]) {
      auto v = vector_from_json(vj, c.mode, dim < 0 ? -1 : dim);
      if (dim < 0) dim = int(v.size());
      vs.push_back(std::move(v));
    }
    c.frame = Frame::from_vectors(dim, vs);
  }
  if (j.contains("fusion")) {
    const auto& fj = j["fusion"];
    if (!fj.contains("subspaces") || !fj["subspaces"].is_array() || fj["subspaces"].empty())
      throw ParseError("EmptyFamily: fusion.subspaces must be a non-empty array");
    std::vector<WeightedSubspace> members;
    for (const auto& sj : fj["subspaces"]) {
      if (!sj.contains("basis") || sj["basis"].empty())
        throw ParseError("subspace needs a non-empty basis");
      std::vector<std::vector<Rat>> basis_vecs;
      for (const auto& vj : sj["basis"]) {
        auto v = vector_from_json(vj, c.mode, dim < 0 ? -1 : dim);
        if (dim < 0) dim = int(v.size());
        basis_vecs.push_back(std::move(v));
      }
      Mat basis(dim, int(basis_vecs.size()));
      for (int k = 0; k < int(basis_vecs.size()); ++k) basis.set_col(k, basis_vecs[k]);
      Rat weight = 1;
      if (sj.contains("weight")) weight = scalar_from_json(sj["weight"], c.mode);
      members.push_back({Subspace(dim, std::move(basis)), weight});
    }
    c.fusion = FusionFrame(dim, std::move(members));
  }
  if (j.contains("sequence")) {
    const auto& sj = j["sequence"];
    const auto kind = sj.value("kind", "");
    if (kind == "Canonical") c.sequence = VectorSequenceRule::canonical();
    else if (kind == "PowersOfTwoFamily")
      c.sequence = VectorSequenceRule::powers_of_two(sj.value("n", 3));
    else if (kind == "PairSums") c.sequence = VectorSequenceRule::pair_sums();
    else if (kind == "ExplicitList") {
      std::vector<std::vector<Rat>> vs;
      for (const auto& vj : sj.at("vectors")) vs.push_back(vector_from_json(vj, c.mode, -1));
      c.sequence = VectorSequenceRule::explicit_list(std::move(vs));
    } else {
      throw ParseError("unknown sequence kind: " + kind);
    }
    if (sj.contains("I"))
      for (const auto& e : sj["I"]) c.sequence_coords.push_back(e.get<int>());
    c.sequence_truncation = sj.value("N", 8);
    c.sequence_dim = sj.value("dim", dim < 0 ? 5 : dim);
  }
  if (j.contains("tasks")) {
    for (const auto& tj : j["tasks"]) {
      TaskSpec t;
      if (tj.is_string()) {
        t.name = tj.get<std::string>();
      } else {
        t.name = tj.at("task").get<std::string>();
        if (tj.contains("expect")) t.expect = tj["expect"].get<std::string>();
      }
      c.tasks.push_back(std::move(t));
    }
  }
  if (c.tasks.empty()) c.tasks.push_back({"analyze", std::nullopt});
  return c;
}

RunConfig parse_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_input_text(ss.str());
}

namespace {

ordered_json nr_witness_json(const NrFailWitness& w, int m) {
  ordered_json c;
  c["kind"] = "nr-fail";
  c["subset"] = subset_to_json(w.subset, m);
  c["x"] = vector_to_json(w.x);
  c["y"] = vector_to_json(w.y);
  c["u"] = vector_to_json(w.u);
  c["v"] = vector_to_json(w.v);
  return c;
}

ordered_json pr_witness_json(const PrFailWitness& w, int m) {
  ordered_json c;
  c["kind"] = "pr-fail";
  c["subset"] = subset_to_json(w.subset, m);
  c["rank_subset"] = w.rank_subset;
  c["rank_complement"] = w.rank_complement;
  return c;
}

ordered_json fusion_decision_json(const FusionDecision& d, int m) {
  ordered_json t;
  t["verdict"] = to_string(d.verdict);
  t["rule"] = to_string(d.rule);
  if (d.tight_constant) {
    t["certificate"] = {{"kind", "tight"}, {"A", to_string(*d.tight_constant)}};
  } else if (d.indicator_coefficients) {
    t["certificate"] = {{"kind", "indicator-coefficients"},
                        {"coefficients", vector_to_json(*d.indicator_coefficients)}};
  } else if (d.coordinate_witness) {
    t["certificate"] = {{"kind", "coordinate-squares"},
                        {"u_sq", vector_to_json(d.coordinate_witness->u_sq)},
                        {"v_sq", vector_to_json(d.coordinate_witness->v_sq)}};
    t["caveats"] = {"witness exported as coordinate squares; the vectors may need "
                    "irrational entries"};
  } else if (d.orthogonality_witness) {
    t["certificate"] = {{"kind", "orthogonality-fail"},
                        {"subset", subset_to_json(d.orthogonality_witness->subset, m)},
                        {"x", vector_to_json(d.orthogonality_witness->x)},
                        {"y", vector_to_json(d.orthogonality_witness->y)}};
  } else if (d.span_witness) {
    t["certificate"] = {{"kind", "span-fail"}, {"x", vector_to_json(*d.span_witness)}};
  }
  if (d.verdict == Verdict::Undecided) {
    t["trials"] = d.trials;
    t["seed"] = d.seed;
    t["caveats"] = {"Undecided: falsifiers exhausted their budget; no sufficient "
                    "condition applied"};
  }
  return t;
}

struct TaskRunner {
  const RunConfig& config;
  SweepOptions sweep;
  FalsifierBudget budget;

  explicit TaskRunner(const RunConfig& c) : config(c) {
    sweep.jobs = c.jobs;
    sweep.max_subset_bits = c.max_subset_bits;
    budget.trials = c.trials;
    budget.seed = c.seed;
    budget.jobs = c.jobs;
  }

  const Frame& frame() const {
    if (!config.frame) throw PreconditionViolation("task requires a frame input");
    return *config.frame;
  }
  const FusionFrame& fusion() const {
    if (!config.fusion) throw PreconditionViolation("task requires a fusion input");
    return *config.fusion;
  }
  void require_exact() const {
    if (config.mode != Mode::Exact)
      throw PreconditionViolation("task requires exact mode");
  }

  ordered_json run_task(const std::string& name) {
    ordered_json t;
    t["task"] = name;
    if (name == "pr") {
      require_exact();
      const auto d = does_phase_retrieval(frame(), sweep);
      t["verdict"] = to_string(d.verdict);
      if (d.pr_witness) t["certificate"] = pr_witness_json(*d.pr_witness, frame().count());
    } else if (name == "nr") {
      require_exact();
      const auto d = does_norm_retrieval(frame(), sweep);
      t["verdict"] = to_string(d.verdict);
      if (d.nr_witness) t["certificate"] = nr_witness_json(*d.nr_witness, frame().count());
    } else if (name == "spark") {
      require_exact();
      const int s = spark(frame(), sweep);
      t["spark"] = s;
      t["full_spark"] = frame().count() >= frame().dim && s == frame().dim + 1;
    } else if (name == "bounds") {
      if (config.mode == Mode::Exact)
        throw UnsupportedInExactMode("eigen-bounds need float mode");
      if (config.fusion) {
        const auto [a, b] = fusion_bounds(fusion());
        t["A"] = a;
        t["B"] = b;
      } else {
        const auto [a, b] = frame_bounds(frame());
        t["A"] = a;
        t["B"] = b;
        if (const auto rb = riesz_bounds(frame())) {
          t["riesz_A"] = rb->first;
          t["riesz_B"] = rb->second;
        } else {
          t["riesz"] = "NotRiesz";
        }
      }
    } else if (name == "fusion-nr") {
      require_exact();
      const auto d = decide_norm_retrieval(fusion(), budget, sweep);
      t.update(fusion_decision_json(d, fusion().count()));
    } else if (name == "fusion-pr-falsify") {
      const auto r = concat_onb_falsifier_pr(fusion(), config.samples, config.seed, config.eps);
      t["verdict"] = to_string(r.verdict);
      t["exact"] = r.exact;
      if (r.witness && r.exact) {
        int total = 0;
        for (const auto& w : fusion().members) total += w.space.dim();
        t["certificate"] = pr_witness_json(*r.witness, total);
      }
      ordered_json caveats = ordered_json::array();
      if (r.verdict == Verdict::Undecided)
        caveats.push_back("passing samples prove nothing: phase retrieval needs every "
                          "orthonormal basis concatenation to pass");
      if (r.verdict == Verdict::CertifiedNo && !r.exact)
        caveats.push_back("float-confidence only: the failing concatenation is irrational");
      if (!caveats.empty()) t["caveats"] = caveats;
    } else if (name == "perturb-nr-stability") {
      require_exact();
      const auto rep = nr_failure_stability_experiment(frame(), config.samples, config.seed, sweep);
      t["samples"] = rep.samples;
      t["still_failing"] = rep.hits;
      t["epsilon"] = rep.epsilon;
      t["pass"] = rep.pass;
      t["verdict"] = rep.pass ? "CertifiedYes" : "CertifiedNo";
    } else if (name.rfind("verify-theorem:", 0) == 0) {
      const auto which = name.substr(15);
      if (which == "TT") {
        require_exact();
        const bool exercised = check_orthogonality_of_independent_nr(frame(), sweep);
        t["exercised"] = exercised;
        t["verdict"] = "CertifiedYes";  // reaching here means no inconsistency was found
      } else {
        throw ParseError("unknown theorem name: " + which);
      }
    } else if (name == "analyze") {
      ordered_json sub = ordered_json::array();
      if (config.frame) {
        if (config.mode == Mode::Exact) {
          for (const char* s : {"spark", "pr", "nr"}) sub.push_back(run_task(s));
        } else {
          sub.push_back(run_task("bounds"));
        }
      }
      if (config.fusion) {
        if (config.mode == Mode::Exact) sub.push_back(run_task("fusion-nr"));
        else sub.push_back(run_task("bounds"));
      }
      if (config.sequence) sub.push_back(run_sequence_analysis());
      t["subtasks"] = std::move(sub);
    } else {
      throw ParseError("unknown task: " + name);
    }
    return t;
  }

  ordered_json run_sequence_analysis() {
    ordered_json t;
    t["task"] = "sequence-analyze";
    const auto& rule = *config.sequence;
    if (rule.kind == VectorSequenceRule::Kind::PairSums) {
      const int n = config.sequence_dim;
      const auto cp = truncated_complement_property(n, sweep);
      t["truncated_complement_property"] = cp.holds;
      if (cp.witness) {
        const int m = n * (n - 1) / 2;
        t["certificate"] = pr_witness_json(*cp.witness, m);
      }
      ordered_json growth = ordered_json::array();
      for (const auto& [tt, v] : bessel_violation_probe(std::min(n * 4, 64)))
        growth.push_back({{"n", tt}, {"sum", to_string(v)}});
      t["bessel_growth"] = std::move(growth);
      t["caveats"] = {"truncated evidence only"};
    } else {
      auto coords = config.sequence_coords;
      if (coords.empty()) coords = {1, 2, 3};
      const auto r =
          finitely_full_spark_check(rule, coords, config.sequence_truncation, sweep);
      t["consistent_with_finitely_full_spark"] = r.consistent;
      if (r.dependent_subset) {
        ordered_json dep = ordered_json::array();
        for (auto i : *r.dependent_subset) dep.push_back(i);
        t["dependent_subset"] = std::move(dep);
      }
      t["caveats"] = {"truncated evidence only: checked N=" +
                      std::to_string(config.sequence_truncation) + " vectors"};
    }
    return t;
  }
};

Verdict verdict_of_task(const ordered_json& t) {
  if (!t.contains("verdict")) return Verdict::Undecided;
  const auto s = t["verdict"].get<std::string>();
  if (s == "CertifiedYes") return Verdict::CertifiedYes;
  if (s == "CertifiedNo") return Verdict::CertifiedNo;
  return Verdict::Undecided;
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult res;
  res.report["schema"] = "1";
  res.report["input_digest"] = config.input_digest;
  res.report["mode"] = config.mode == Mode::Exact ? "exact" : "float";
  res.report["seed"] = config.seed;
  ordered_json tasks = ordered_json::array();
  TaskRunner runner(config);
  for (const auto& spec : config.tasks) {
    ordered_json t;
    const auto start = std::chrono::steady_clock::now();
    try {
      t = runner.run_task(spec.name);
    } catch (const ParseError&) {
      throw;  // unknown tasks abort the run with exit code 3
    } catch (const std::exception& e) {
      t["task"] = spec.name;
      t["error"] = e.what();
    }
    if (config.timings) {
      const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      t["micros"] = us;
    }
    if (spec.expect) {
      t["expect"] = *spec.expect;
      const Verdict v = verdict_of_task(t);
      const bool matched = *spec.expect == expect_of(v);
      t["expect_matched"] = matched;
      if (*spec.expect == "yes" && v == Verdict::CertifiedNo) res.exit_code = 2;
    }
    tasks.push_back(std::move(t));
  }
  res.report["tasks"] = std::move(tasks);
  return res;
}

std::string pretty_report(const ordered_json& report) {
  std::ostringstream out;
  out << "mode=" << report.value("mode", "?") << " digest=" << report.value("input_digest", "?")
      << "\n";
  std::function<void(const ordered_json&, int)> show = [&](const ordered_json& t, int indent) {
    const std::string pad(indent, ' ');
    out << pad << t.value("task", "?");
    if (t.contains("verdict")) out << ": " << t["verdict"].get<std::string>();
    if (t.contains("rule")) out << " [" << t["rule"].get<std::string>() << "]";
    if (t.contains("spark")) out << ": spark=" << t["spark"].dump();
    if (t.contains("A")) out << ": A=" << t["A"].dump() << " B=" << t["B"].dump();
    if (t.contains("error")) out << ": error: " << t["error"].get<std::string>();
    if (t.contains("expect_matched"))
      out << (t["expect_matched"].get<bool>() ? " (as expected)" : " (EXPECT MISMATCH)");
    out << "\n";
    if (t.contains("certificate"))
      out << pad << "  certificate: " << t["certificate"].dump() << "\n";
    if (t.contains("caveats"))
      for (const auto& c : t["caveats"]) out << pad << "  caveat: " << c.get<std::string>() << "\n";
    if (t.contains("subtasks"))
      for (const auto& s : t["subtasks"]) show(s, indent + 2);
  };
  for (const auto& t : report["tasks"]) show(t, 0);
  return out.str();
}

namespace {

bool verify_task(const RunConfig& config, const ordered_json& t, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = t.value("task", "?") + ": " + msg;
    return false;
  };
  if (t.contains("subtasks")) {
    for (const auto& s : t["subtasks"])
      if (!verify_task(config, s, why)) return false;
    return true;
  }
  if (!t.contains("certificate")) return true;
  const auto& c = t["certificate"];
  const auto kind = c.value("kind", "");
  if (kind == "pr-fail") {
    if (!config.frame) return true;  // concatenation witnesses carry no frame input
    PrFailWitness w;
    w.subset = subset_from_json(c["subset"]);
    if (!verify_pr_fail_witness(*config.frame, w)) return fail("pr-fail witness rejected");
  } else if (kind == "nr-fail") {
    NrFailWitness w;
    w.subset = subset_from_json(c["subset"]);
    for (const auto& e : c["x"]) w.x.push_back(parse_rational(e.get<std::string>()));
    for (const auto& e : c["y"]) w.y.push_back(parse_rational(e.get<std::string>()));
    for (const auto& e : c["u"]) w.u.push_back(parse_rational(e.get<std::string>()));
    for (const auto& e : c["v"]) w.v.push_back(parse_rational(e.get<std::string>()));
    if (!config.frame) return fail("nr-fail certificate without frame input");
    if (!verify_nr_fail_witness(*config.frame, w)) return fail("nr-fail witness rejected");
  } else if (kind == "tight") {
    if (!config.fusion) return fail("tight certificate without fusion input");
    const auto d = is_tight_then_nr(*config.fusion);
    if (!d.tight_constant || to_string(*d.tight_constant) != c["A"].get<std::string>())
      return fail("tightness constant rejected");
  } else if (kind == "indicator-coefficients") {
    if (!config.fusion) return fail("certificate without fusion input");
    std::vector<Rat> coef;
    for (const auto& e : c["coefficients"]) coef.push_back(parse_rational(e.get<std::string>()));
    if (!verify_indicator_coefficients(*config.fusion, coef))
      return fail("indicator coefficients rejected");
  } else if (kind == "coordinate-squares") {
    if (!config.fusion) return fail("certificate without fusion input");
    CoordinateSquareWitness w;
    for (const auto& e : c["u_sq"]) w.u_sq.push_back(parse_rational(e.get<std::string>()));
    for (const auto& e : c["v_sq"]) w.v_sq.push_back(parse_rational(e.get<std::string>()));
    if (!verify_coordinate_square_witness(*config.fusion, w))
      return fail("coordinate-square witness rejected");
  } else if (kind == "orthogonality-fail") {
    if (!config.fusion) return fail("certificate without fusion input");
    FusionOrthogonalityWitness w;
    w.subset = subset_from_json(c["subset"]);
    for (const auto& e : c["x"]) w.x.push_back(parse_rational(e.get<std::string>()));
    for (const auto& e : c["y"]) w.y.push_back(parse_rational(e.get<std::string>()));
    if (!verify_fusion_orthogonality_witness(*config.fusion, w))
      return fail("orthogonality witness rejected");
  } else if (kind == "span-fail") {
    if (!config.fusion) return fail("certificate without fusion input");
    std::vector<Rat> x;
    for (const auto& e : c["x"]) x.push_back(parse_rational(e.get<std::string>()));
    if (!verify_span_witness(*config.fusion, x)) return fail("span witness rejected");
  }
  return true;
}

}  // namespace

bool verify_report(const RunConfig& config, const ordered_json& report, std::string* why) {
  for (const auto& t : report["tasks"])
    if (!verify_task(config, t, why)) return false;
  return true;
}

}  // namespace framelab
