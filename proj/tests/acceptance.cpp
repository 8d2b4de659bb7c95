// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "gencluster/cli.hpp"

using namespace gencluster;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Sweep {
  std::vector<Instance> instances;
  std::vector<std::unique_ptr<Workbench>> benches;
  std::map<std::string, std::vector<CheckReport>> reports;
  std::map<std::string, double> seconds;
};

bool all_passed(const Sweep& sw, const std::vector<std::string>& checks, std::string& detail) {
  std::size_t vertices = 0, reports = 0;
  for (const auto& name : checks)
    for (const auto& r : sw.reports.at(name)) {
      ++reports;
      vertices += r.vertices_checked;
      if (!r.passed()) {
        detail = r.check + " failed on " + r.params.front().second + " at " + word_to_string(r.failures.front().word) +
                 ": " + r.failures.front().message;
        return false;
      }
    }
  detail = std::to_string(reports) + " reports, " + std::to_string(vertices) + " vertex checks";
  return reports > 0;
}

double seconds_for(const Sweep& sw, const std::vector<std::string>& checks) {
  double s = 0;
  for (const auto& name : checks) s += sw.seconds.at(name);
  return s;
}

bool within_bounds(const Instance& inst) {
  const auto& m = inst.B.matrix();
  if (inst.B.rank() > 3 || inst.depth > 5 || inst.depth < 1) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > 3) return false;
  for (int d : inst.d)
    if (d < 1 || d > 3) return false;
  return true;
}

int failures = 0;

void line(int id, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << detail << std::endl;
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

}  // namespace

int main() {
  // 1. Golden example through the command-line entry point.
  {
    const char* argv[] = {"gencluster", "example"};
    std::ostringstream out, err;
    const auto start = Clock::now();
    const int code = cli::run(2, argv, out, err);
    const double t = seconds_since(start);
    const GoldenReport rep = run_golden(b2_golden());
    const bool ok = code == 0 && rep.passed() &&
                    out.str().find("7/7 seeds match, 7 C, 7 G, 14 F-polynomials match") != std::string::npos &&
                    rep.periodic_universal && rep.periodic_principal && t < 1.0;
    line(1, "B2 golden reproduction", ok, rep.summary() + ", periodic " + (rep.periodic_universal ? "yes" : "no") + "/" +
                                           (rep.periodic_principal ? "yes" : "no") + ", " + fmt_seconds(t) + " (< 1s)");
  }

  // Sweep: B2 at depth 6 and random acyclic instances.
  Sweep sw;
  sw.instances.push_back(b2_instance());
  for (auto& inst : random_instances(1, SweepOptions{})) sw.instances.push_back(std::move(inst));
  for (const auto& inst : sw.instances) sw.benches.push_back(std::make_unique<Workbench>(inst));
  const auto sweep_start = Clock::now();
  for (const auto& name : check_names()) {
    const auto start = Clock::now();
    auto& bucket = sw.reports[name];
    for (const auto& wb : sw.benches) {
      auto r = run_check(*wb, name, wb->instance().name == "B2");
      bucket.insert(bucket.end(), r.begin(), r.end());
    }
    sw.seconds[name] = seconds_since(start);
  }
  const double sweep_seconds = seconds_since(sweep_start);
  bool bounds = true;
  for (std::size_t i = 1; i < sw.instances.size(); ++i) bounds &= within_bounds(sw.instances[i]);
  const std::size_t random_count = sw.instances.size() - 1;
  std::string detail;

  {
    const std::vector<std::string> checks{"two-route-c", "two-route-g", "two-route-f", "homogeneity"};
    const double t = seconds_for(sw, checks);
    const bool ok = all_passed(sw, checks, detail) && random_count >= 20 && bounds && t < 120.0;
    line(2, "two-route consistency", ok,
         "B2 + " + std::to_string(random_count) + " random instances, " + detail + ", " + fmt_seconds(t) +
             " (< 120s; all 18 checks " + fmt_seconds(sweep_seconds) + ")");
  }
  {
    const bool ok = all_passed(sw, {"laurent"}, detail);
    line(3, "Laurent property", ok, detail);
  }
  {
    const bool ok = all_passed(sw, {"sign-coherence"}, detail);
    line(4, "sign-coherence and F constant term 1", ok, detail);
  }
  {
    const bool ok = all_passed(sw, {"ordinary-c", "ordinary-ct", "ordinary-g", "ordinary-gt"}, detail);
    line(5, "ordinary-pattern correspondences", ok, detail);
  }
  {
    const Instance b2 = b2_instance();
    auto p = principal_pattern(b2.B, b2.d);
    const MutationWord w4{0, 1, 0};
    const bool b2_t4 = g_matrix(*p, w4).transpose() * c_matrix(*p, w4) == IntMatrix::identity(2);
    const bool ok = all_passed(sw, {"duality"}, detail) && b2_t4;
    line(6, "G-C duality", ok, detail + ", B2 G(4)^T C(4) = I: " + (b2_t4 ? "yes" : "no"));
  }
  {
    const bool ok = all_passed(sw, {"separation-y", "separation-x", "specialization"}, detail);
    line(7, "separation formulas", ok, detail);
  }
  {
    bool b2_universal = false;
    for (const auto& r : sw.reports.at("bridge"))
      if (r.check == "bridge" && r.params.front().second == "B2") b2_universal = r.passed();
    const bool ok = all_passed(sw, {"bridge"}, detail) && b2_universal;
    line(8, "p-coefficient bridge", ok, detail + ", B2 universal: " + (b2_universal ? "yes" : "no"));
  }
  {
    const bool ok = all_passed(sw, {"involution", "epsilon", "yhat-mutation"}, detail);
    line(9, "mutation axioms", ok, detail);
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
