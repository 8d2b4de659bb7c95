#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "printers.hpp"

#include "gencluster/b2_golden.hpp"
#include "gencluster/identities.hpp"

using namespace gencluster;

namespace {

void expect_all_passed(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    EXPECT_TRUE(r.passed()) << r.check << " on " << r.params.front().second << ": "
                            << (r.failures.empty() ? "" : r.failures.front().message + " at " +
                                                              word_to_string(r.failures.front().word));
    EXPECT_GT(r.vertices_checked, 0u) << r.check;
  }
}

bool is_acyclic_forest(const IntMatrix& b) {
  const auto n = b.rows();
  std::size_t edges = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges += b(i, j) != 0;
  return edges + static_cast<std::size_t>(component_count(b)) == n;
}

}  // namespace

TEST(Checks, AllPassOnB2) {
  const Workbench wb(b2_instance());
  const auto reports = run_all_checks(wb, true);
  EXPECT_EQ(reports.size(), check_names().size());
  expect_all_passed(reports);
  for (const auto& r : reports) EXPECT_EQ(r.vertices_checked, reduced_words(2, 6).size()) << r.check;
}

TEST(Checks, AllPassOnRandomInstances) {
  SweepOptions opt;
  opt.count = 6;
  opt.max_depth = 3;
  opt.volume_limit = 2e4;
  for (const auto& inst : random_instances(17, opt)) expect_all_passed(run_all_checks(Workbench(inst)));
}

TEST(Checks, UnknownNameIsAnInputError) {
  EXPECT_THROW(run_check(Workbench(b2_instance(1)), "frobnicate"), InputError);
}

TEST(Checks, DualityRejectsAWrongSkewSymmetrizer) {
  const Workbench wb(b2_instance(2));
  EXPECT_THROW(check_duality(wb, {1, 1}), InvalidSkewsymmetrizer);
  EXPECT_TRUE(check_duality(wb, {3, 6}).passed());
  Instance no_r = b2_instance(2);
  no_r.R.clear();
  EXPECT_THROW(run_check(Workbench(no_r), "duality"), InvalidSkewsymmetrizer);
}

TEST(Checks, DualityProductDetectsCorruption) {
  const std::vector<int> d{2, 1};
  const IntMatrix c{{1, -2}, {0, -1}}, g{{1, 0}, {-2, -1}};
  EXPECT_TRUE(duality_product(g, c, d, {1, 2}).is_identity());
  EXPECT_FALSE(duality_product(IntMatrix{{1, 0}, {-1, -1}}, c, d, {1, 2}).is_identity());
}

TEST(Checks, ForestsCheckBothSkewSymmetrizers) {
  // Two components: {1,2} and {3}.
  Instance inst{"forest", ExchangeMatrix{{0, 2, 0}, {-1, 0, 0}, {0, 0, 0}}, {1, 2, 3}, 3, {}, {}};
  const auto db = scaled_left(inst.d, inst.B.matrix());
  inst.R = tree_skewsymmetrizer(db);
  inst.R_alt = tree_skewsymmetrizer(db, {2});
  EXPECT_NE(inst.R, inst.R_alt);
  const auto reports = run_check(Workbench(inst), "duality");
  ASSERT_EQ(reports.size(), 2u);
  expect_all_passed(reports);
}

TEST(Checks, SignCoherenceHelper) {
  const IntMatrix c{{1, -1, 0}, {2, 1, 0}};
  EXPECT_TRUE(detail::sign_coherent(c, 0));
  EXPECT_FALSE(detail::sign_coherent(c, 1));
  EXPECT_FALSE(detail::sign_coherent(c, 2));
}

TEST(Checks, GoldenReportFlagsACorruptedRow) {
  auto fx = b2_golden();
  EXPECT_TRUE(golden_report(fx).passed());
  fx.principal[4].C(0, 1) = 3;
  GoldenReport detail_report;
  const auto rep = golden_report(fx, &detail_report);
  ASSERT_FALSE(rep.passed());
  EXPECT_EQ(rep.failures.front().word, (MutationWord{0, 1, 0, 1}));
  ASSERT_NE(detail_report.first_mismatch(), nullptr);
  EXPECT_EQ(detail_report.first_mismatch()->t, 5);
}

TEST(Skewsymmetrizer, TreePropagation) {
  EXPECT_EQ(tree_skewsymmetrizer(IntMatrix{{0, -2}, {1, 0}}), (std::vector<std::int64_t>{1, 2}));
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const auto inst = random_tree_instance(rng, SweepOptions{}, i);
    const auto db = scaled_left(inst.d, inst.B.matrix());
    EXPECT_TRUE(is_skew_symmetrizer(db, inst.R));
    if (!inst.R_alt.empty()) {
      EXPECT_TRUE(is_skew_symmetrizer(db, inst.R_alt));
    }
  }
  // A 3-cycle whose products around the cycle are inconsistent.
  EXPECT_THROW(tree_skewsymmetrizer(IntMatrix{{0, 1, -1}, {-1, 0, 2}, {1, -1, 0}}), InvalidSkewsymmetrizer);
}

TEST(Instances, RandomTreesRespectTheOptions) {
  SweepOptions opt;
  opt.count = 50;
  const auto a = random_instances(99, opt), b = random_instances(99, opt);
  std::set<int> ranks;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& m = a[i].B.matrix();
    EXPECT_EQ(m, b[i].B.matrix());
    EXPECT_EQ(a[i].d, b[i].d);
    ranks.insert(a[i].B.rank());
    EXPECT_TRUE(is_acyclic_forest(m));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) EXPECT_LE(std::abs(m(r, c)), opt.max_entry);
    for (int di : a[i].d) {
      EXPECT_GE(di, 1);
      EXPECT_LE(di, opt.max_degree);
    }
    EXPECT_GE(a[i].depth, 1);
    EXPECT_LE(a[i].depth, opt.max_depth);
  }
  EXPECT_EQ(ranks, (std::set<int>{2, 3}));
}

TEST(Instances, ComponentCount) {
  EXPECT_EQ(component_count(IntMatrix(3, 3)), 3);
  EXPECT_EQ(component_count(IntMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}), 2);
  EXPECT_EQ(component_count(IntMatrix{{0, 1, 0}, {-1, 0, 1}, {0, -1, 0}}), 1);
}

TEST(Instances, VolumeProfileMatchesActualFPolynomials) {
  SweepOptions opt;
  opt.count = 8;
  opt.max_depth = 3;
  opt.volume_limit = 2e4;
  auto instances = random_instances(4, opt);
  instances.push_back(b2_instance(4));
  for (const auto& inst : instances) {
    const int depth = std::min(inst.depth, 3);
    const auto profile = f_volume_profile(inst.B.matrix(), inst.d, depth);
    auto p = principal_pattern(inst.B, inst.d);
    std::vector<double> actual(depth + 1, 1.0);
    for (const auto& w : reduced_words(inst.B.rank(), depth))
      for (const auto& f : f_polynomials_rec(*p, w)) {
        double vol = 1.0;
        const auto hi = f.max_exponents();
        for (std::size_t g = 0; g < hi.size(); ++g) vol *= static_cast<double>(hi[g] + 1);
        actual[w.size()] = std::max(actual[w.size()], vol);
      }
    EXPECT_EQ(profile, actual) << inst.name;
  }
}

TEST(Instances, TractableDepthGrowsWithTheLimit) {
  const IntMatrix b{{0, -1}, {1, 0}};
  const std::vector<int> d{2, 1};
  EXPECT_EQ(tractable_depth(b, d, 0, 1e9), 0);
  EXPECT_EQ(tractable_depth(b, d, 4, 1.0), 1);
  int prev = 0;
  for (double limit : {1.0, 10.0, 100.0, 1e4, 1e9}) {
    const int depth = tractable_depth(b, d, 6, limit);
    EXPECT_GE(depth, prev);
    prev = depth;
  }
  EXPECT_EQ(prev, 6);
}
