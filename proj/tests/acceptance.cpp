// Acceptance run: every suite in check mode against the pinned baselines, one line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wtrace/embeddings.hpp"
#include "wtrace/report.hpp"
#include "wtrace/stefan.hpp"
#include "wtrace/suites.hpp"
#include "wtrace/trace.hpp"

using namespace wtrace;

namespace {

struct Selector {
  std::string suite;
  std::string prefix;
};

using Reports = std::map<std::string, VerificationReport>;
// Returns an explanation on failure.
using Extra = std::function<std::optional<std::string>(const Reports&)>;

struct Criterion {
  int id;
  std::string title;
  std::vector<Selector> select;
  Extra extra;
};

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

const CaseRecord* find_case(const Reports& rs, const std::string& suite, const std::string& id) {
  for (const auto& c : rs.at(suite).cases)
    if (c.case_id == id) return &c;
  return nullptr;
}

TraceContext context_of(const RunConfig& cfg) {
  TraceContext ctx;
  ctx.grid = GridSpec(cfg.half_width, cfg.n_samples);
  ctx.sys = DyadicSystem(cfg.max_block);
  ctx.nodes_per_cell = cfg.nodes_per_cell;
  ctx.target_quad = cfg.interp;
  return ctx;
}

std::string num(double v) { return format_double(v); }

// Difference-norm windows recomputed on a grid twice as fine, compared with the suite values.
std::optional<std::string> window_stability(const Reports& rs, const RunConfig& cfg) {
  struct Eq {
    double s, p, q, g;
    int m;
  };
  const GridSpec fine(cfg.half_width, 2 * cfg.n_samples);
  const DyadicSystem sys(cfg.max_block);
  const auto family = seeded_family(cfg.seed, cfg.family, fine);
  for (const Eq& e : {Eq{0.5, 2, 1, 0, 1}, Eq{0.5, 2, 2, 0.5, 1}, Eq{1.5, 2, 1, 0, 2}}) {
    RatioWindow w;
    for (const auto& f : family)
      w.add(norm_equivalence_ratio(f, triebel(e.s, e.p, e.q, e.g), e.m, sys, cfg.nodes_per_cell));
    const std::string id = "difference-equivalence/s=" + num(e.s) + ",p=" + num(e.p) + ",q=" + num(e.q) +
                           ",g=" + num(e.g) + ",m=" + std::to_string(e.m);
    for (auto [tag, v] : {std::pair{"/max", w.max}, std::pair{"/min", w.min}}) {
      const CaseRecord* c = find_case(rs, "norms", id + tag);
      if (!c) return "missing " + id + tag;
      const double drift = std::abs(v / c->value - 1.0);
      std::fprintf(stderr, "      %s%s: N=%d %s, N=%d %s, drift %.2e\n", id.c_str(), tag, cfg.n_samples,
                  num(c->value).c_str(), 2 * cfg.n_samples, num(v).c_str(), drift);
      if (!(drift <= kBaselineTolerance)) return id + tag + " drifts by " + num(drift) + " between grids";
    }
  }
  return std::nullopt;
}

// One target norm per member: ratio times the (q, r) intersection norm gives back the same number.
std::optional<std::string> same_target(const RunConfig& cfg) {
  const TraceContext ctx = context_of(cfg);
  Vec l(4);
  l << 1.0, 2.0, 4.0, 8.0;
  const auto a = PositiveOperator::diagonal(l);
  const double qs[] = {1.0, 2.0, kInf};
  for (const TraceProblem& base : {TraceProblem{0.0, 1.0, 2.0, kInf, kInf, 0.0},
                                   TraceProblem{-0.2, 1.0, 2.0, kInf, kInf, 0.5},
                                   TraceProblem{0.3, 0.9, 3.0, kInf, kInf, 1.0}}) {
    const OrbitFunction u = trace_family(base, a, 1, cfg.seed, ctx).front();
    const double target = target_norm(a, base.theta(), base.p, trace_at_zero(u), ctx);
    const Mat table = intersection_norms(u.u, SpaceKind::F, base, a, qs, qs, ctx);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        TraceProblem pb = base;
        pb.q = qs[i];
        pb.r = qs[j];
        const double back = trace_continuity_ratio(pb, a, u, SpaceKind::F, ctx) * table(i, j);
        if (!(std::abs(back / target - 1.0) <= 1e-12)) return "target norm depends on (q, r)";
      }
  }
  return std::nullopt;
}

std::optional<std::string> counterexample_example() {
  CounterexampleSpec spec;
  spec.s = -1.0;
  spec.t = 2.0;
  spec.alpha = 1.0;
  spec.beta = 2.0;
  spec.u = 1.0;
  spec.q = 2.0;
  const double r = counterexample_norms(all_ones(spec, 16)).ratio();
  if (r != 4.0) return "N = 16, (u, q) = (1, 2) gives " + num(r);
  return std::nullopt;
}

std::optional<std::string> stefan_error_text() {
  try {
    classify_spaces(StefanParams::make(Rational(4, 3), Rational(2)));
  } catch (const std::exception& e) {
    if (std::string(e.what()) == "excluded by hypothesis: 1 - 1/(2q) = 1/p") return std::nullopt;
    return std::string("unexpected message: ") + e.what();
  }
  return "(4/3, 2) was not rejected";
}

Reports run_all(const RunConfig& cfg) {
  Reports out;
  for (const auto& name : suite_names()) out.emplace(name, run_suite(name, cfg, BaselineMode::check));
  return out;
}

std::string serialize(const Reports& rs) {
  std::vector<VerificationReport> v;
  for (const auto& name : suite_names()) v.push_back(rs.at(name));
  return emit_reports(v, ReportFormat::json);
}

}  // namespace

int main() {
  const RunConfig cfg;
  const auto t0 = std::chrono::steady_clock::now();
  Reports reports;
  try {
    reports = run_all(cfg);
  } catch (const std::exception& e) {
    std::printf("FAIL  suites could not run: %s\n", e.what());
    return 1;
  }
  std::string second;
  std::optional<std::string> rerun_error;
  try {
    second = serialize(run_all(cfg));
  } catch (const std::exception& e) {
    rerun_error = e.what();
  }
  const std::string first = serialize(reports);

  const std::vector<Criterion> criteria = {
      {1, "dyadic exactness",
       {{"dyadic", "partition/"}, {"dyadic", "reconstruction"}, {"dyadic", "disjointness"}}, nullptr},
      {2, "B = F on the diagonal", {{"norms", "bf-diagonal/"}}, nullptr},
      {3, "q-monotonicity", {{"norms", "q-monotone/"}}, nullptr},
      {4, "difference-norm equivalence",
       {{"norms", "difference-equivalence/"}},
       [&](const Reports& rs) { return window_stability(rs, cfg); }},
      {5, "Hardy-Young", {{"hardy", ""}}, nullptr},
      {6, "extension coefficients", {{"extension", "vandermonde/"}}, nullptr},
      {7, "intertwining", {{"extension", "intertwining/"}}, nullptr},
      {8, "right-inverse identity",
       {{"extension", "right-inverse-identity/"}, {"trace-f", "right-inverse/scalar1/trace"},
        {"trace-f", "right-inverse/diagonal6/trace"}},
       nullptr},
      {9, "trace continuity, F", {{"trace-f", "continuity/"}}, [&](const Reports&) { return same_target(cfg); }},
      {10, "trace continuity, B", {{"trace-b", "continuity/"}}, nullptr},
      {11, "interpolation closed forms", {{"norms", "interp/"}}, nullptr},
      {12, "mixed-derivative inequality", {{"mixed", ""}}, nullptr},
      {13, "counterexample divergence", {{"counterexample", ""}}, [](const Reports&) { return counterexample_example(); }},
      {14, "Sobolev embedding", {{"sobolev", ""}}, nullptr},
      {15, "Stefan classifier",
       {{"stefan", "classify/"}, {"stefan", "degenerate/"}},
       [](const Reports&) { return stefan_error_text(); }},
      {16, "semigroup orbit", {{"semigroup", ""}}, nullptr},
      {17, "determinism", {}, [&](const Reports&) -> std::optional<std::string> {
         if (rerun_error) return "second run failed: " + *rerun_error;
         if (first != second) return std::string("reports differ between runs");
         return std::nullopt;
       }},
  };

  bool all = true;
  std::map<std::string, std::vector<bool>> covered;
  for (const auto& [name, r] : reports) covered[name].assign(r.cases.size(), false);

  for (const Criterion& c : criteria) {
    int count = 0;
    std::string why;
    for (const Selector& s : c.select) {
      const auto& cases = reports.at(s.suite).cases;
      for (std::size_t i = 0; i < cases.size(); ++i) {
        if (!starts_with(cases[i].case_id, s.prefix)) continue;
        covered[s.suite][i] = true;
        ++count;
        if (!cases[i].pass && why.empty()) why = s.suite + ":" + cases[i].case_id + " = " + num(cases[i].value);
      }
    }
    if (!c.select.empty() && count == 0) why = "no cases selected";
    if (why.empty() && c.extra) {
      try {
        if (auto e = c.extra(reports)) why = *e;
      } catch (const std::exception& e) {
        why = e.what();
      }
    }
    const bool ok = why.empty();
    all = all && ok;
    const std::string scope = c.select.empty() ? std::to_string(reports.size()) + " suites, 2 runs"
                                               : std::to_string(count) + " cases";
    std::printf("%s  %2d  %s (%s)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), scope.c_str(),
                ok ? "" : ": ", why.c_str());
  }

  // cases outside the criteria still have to pass
  for (const auto& [name, r] : reports)
    for (std::size_t i = 0; i < r.cases.size(); ++i)
      if (!covered[name][i] && !r.cases[i].pass) {
        all = false;
        std::printf("note: supporting case failed: %s:%s\n", name.c_str(), r.cases[i].case_id.c_str());
      }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s in %.1f s\n", all ? "all criteria pass" : "some criteria fail", secs);
  return all ? 0 : 1;
}
