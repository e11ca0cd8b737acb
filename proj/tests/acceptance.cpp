// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 if any
// criterion fails, except those named with --expect-fail <id>, whose outcome
// must instead be FAIL (an unexpected pass is reported and also exits 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "metadyn/diagnostics.hpp"
#include "metadyn/geometry.hpp"
#include "metadyn/metadynamics.hpp"
#include "metadyn/perf.hpp"
#include "metadyn/toysim.hpp"
#include "support.hpp"

using namespace metadyn;
using namespace metadyn::testing;

namespace {

int failures = 0;
int known_failures = 0;
int unexpected_passes = 0;
std::set<int> expected_to_fail;

void report(int id, const std::string& title, bool pass, const std::string& detail, double seconds) {
  const bool known = expected_to_fail.count(id) > 0;
  std::printf("[%s] %d. %s: %s (%.2f s)%s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds,
              known ? (pass ? " [expected FAIL]" : " [known failure]") : "");
  std::fflush(stdout);
  if (!pass) ++failures;
  if (!pass && known) ++known_failures;
  if (pass && known) ++unexpected_passes;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

template <typename F>
void timed(int id, const std::string& title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, title, pass, detail,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

/// L1 distance between normalized 50-bin histograms over the pooled range.
double histogram_l1(const std::vector<double>& a, const std::vector<double>& b, int bins = 50) {
  double lo = std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end()));
  double hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
  if (hi <= lo) return 0.0;
  auto hist = [&](const std::vector<double>& v) {
    std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
    for (double s : v) {
      const int k = std::min(bins - 1, static_cast<int>((s - lo) / (hi - lo) * bins));
      h[static_cast<std::size_t>(k)] += 1.0 / static_cast<double>(v.size());
    }
    return h;
  };
  const auto ha = hist(a);
  const auto hb = hist(b);
  double l1 = 0;
  for (int k = 0; k < bins; ++k) l1 += std::abs(ha[static_cast<std::size_t>(k)] - hb[static_cast<std::size_t>(k)]);
  return l1;
}

bool identity_holds(const RunReport& r) {
  std::int64_t expected = 0;
  if (r.mode == Mode::close) {
    expected = r.steps + r.reassign_count * r.references;
  } else {
    const std::int64_t m = r.nl_size > 0 ? r.nl_size : r.references;
    const std::int64_t updates = r.nl_size > 0 ? r.nl_updates : r.steps;
    expected = r.steps * m + updates * (r.references - m);
  }
  std::int64_t recount = 0;
  for (const StepEvent& e : r.events) recount += e.expensive;
  return expected == r.expensive_count && recount == r.expensive_count;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--expect-fail") expected_to_fail.insert(std::atoi(argv[i + 1]));

  timed(1, "cost model", [](std::string& d) {
    const CostModel protein{2120, 50, 50, 3000};
    const CostModel ring{512, 0, 1, 10000};
    const double orig = original_cost(protein);
    const double close = close_cost(protein);
    const double s1 = msd_speedup(protein);
    const double s2 = msd_speedup(ring);
    d = fmt("original %.10g, close %.6f, speed-up %.4f; N=512 speed-up %.4f", orig, close, s1, s2);
    return orig == 91.4 && near(close, 1.7067, 1e-4) && near(s1, 53.6, 0.1) && near(s2, 487.1, 0.5);
  });

  timed(2, "Amdahl", [](std::string& d) {
    const double a = amdahl({0.93, 488});
    const double b = amdahl({0.43, 54});
    d = fmt("amdahl(0.93, 488) = %.4f, amdahl(0.43, 54) = %.4f", a, b);
    return near(a, 13.9, 0.1) && near(b, 1.73, 0.02);
  });

  timed(3, "rotation fit", [](std::string& d) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> atoms(3, 12);
    double ortho = 0, self = 0, oracle = 0;
    for (int i = 0; i < 100; ++i) {
      const int n = atoms(rng);
      const StructureD a = random_structure(rng, n);
      const StructureD x = with_weights_of(random_structure(rng, n), a);
      const Mat3<double> r = kearsley_fit(x, a).rotation;
      ortho = std::max({ortho, (r.transpose() * r - Mat3<double>::Identity()).cwiseAbs().maxCoeff(),
                        std::abs(r.determinant() - 1.0)});
      StructureD qa = a;
      qa.coords = random_rotation(rng) * a.coords;
      self = std::max(self, kearsley_fit(qa, a).eigvals(0));
      if (i < 20) {
        const double fit = kearsley_fit(x, a).eigvals(0);
        const double brute = brute_force_min_residual(x, a);
        oracle = std::max(oracle, std::abs(fit - brute) / std::max(brute, 1e-300));
      }
    }
    d = fmt("orthonormality %.2e, self-fit residual %.2e, brute-force rel %.2e", ortho, self, oracle);
    return ortho <= 1e-10 && self <= 1e-10 && oracle <= 1e-6;
  });

  timed(4, "gradient suite", [](std::string& d) {
    bool ok = true;
    for (const CheckRow& row : run_self_checks(11, 100)) {
      if (row.name.rfind("rotation orthonormality", 0) == 0) continue;
      d += fmt("%s%.1e", d.empty() ? "" : ", ", row.measured);
      ok = ok && row.pass;
    }
    d = "worst rel errors [dR, exact, cached, chain, hill] " + d;
    return ok;
  });

  const ToySystem system;
  const ReferenceSet ref = generate_references(system, 16, 500, 1000, 100.0);
  std::vector<RunReport> all_runs;

  timed(5, "approximation-exactness boundary", [&](std::string& d) {
    RunOptions close;
    close.mode = Mode::close;
    close.epsilon = 0.0;
    RunOptions orig;
    orig.mode = Mode::original;
    all_runs.push_back(run(system, ref, close));
    all_runs.push_back(run(system, ref, orig));
    const auto& a = all_runs[all_runs.size() - 2].cv_series;
    const auto& b = all_runs.back().cv_series;
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    d = fmt("max |dS| over %zu steps = %.2e", a.size(), worst);
    return a.size() == 5000 && worst <= 1e-10;
  });

  timed(6, "accuracy surrogate", [&](std::string& d) {
    RunOptions close;
    close.mode = Mode::close;
    close.epsilon = 0.01;
    close.record_exact_comparison = true;
    RunOptions orig;
    orig.mode = Mode::original;
    const RunReport rc = run(system, ref, close);
    const RunReport ro = run(system, ref, orig);
    const double r = pearson(rc.approx_values, rc.exact_values);
    const double l1 = histogram_l1(rc.cv_series, ro.cv_series);
    d = fmt("Pearson %.4f over %zu pairs (>= 0.99), histogram L1 %.3f (< 0.1), %lld reassignments", r,
            rc.approx_values.size(), l1, static_cast<long long>(rc.reassign_count));
    all_runs.push_back(rc);
    all_runs.push_back(ro);
    return r >= 0.99 && l1 < 0.1;
  });

  timed(7, "counter identities", [&](std::string& d) {
    RunOptions nl;
    nl.mode = Mode::original;
    nl.nl = {true, 8, 50};
    all_runs.push_back(run(system, ref, nl));
    nl.mode = Mode::close;
    all_runs.push_back(run(system, ref, nl));
    int ok = 0;
    for (const RunReport& r : all_runs) ok += identity_holds(r) ? 1 : 0;
    d = fmt("%d of %zu runs match exactly", ok, all_runs.size());
    return ok == static_cast<int>(all_runs.size());
  });

  timed(8, "grid fidelity", [](std::string& d) {
    HillStore store({0.5}, 0.5, 1);
    store.enable_grid({{-2.0}, {17.0}, {500}});
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 0.3);
    double s = 7.5;
    for (int i = 0; i < 1000; ++i) {
      s = std::clamp(s + g(rng), 0.0, 15.0);
      store.deposit(std::vector<double>{s}, i);
    }
    double worst = 0;
    for (int node = 0; node <= 500; ++node) {
      const std::vector<int> idx{node};
      worst = std::max(worst, std::abs(store.node_value(idx) - store.value_direct(store.node_position(idx))));
    }
    d = fmt("max node deviation %.2e after 1000 hills", worst);
    return worst <= 1e-6;
  });

  std::printf("%d of 8 criteria passed; %d failed (%d known)", 8 - failures, failures, known_failures);
  if (unexpected_passes > 0) std::printf("; %d expected failures now pass", unexpected_passes);
  std::printf("\n");
  return failures == known_failures && unexpected_passes == 0 ? 0 : 1;
}
