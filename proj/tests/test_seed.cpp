#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "printers.hpp"

#include "gencluster/expr.hpp"
#include "gencluster/identities.hpp"
#include "gencluster/pattern.hpp"
#include "gencluster/seed.hpp"

using namespace gencluster;

namespace {

const ExchangeMatrix kB2{{0, -1}, {1, 0}};
const std::vector<int> kD2{2, 1};

template <class S>
Seed<S> b2_seed() {
  return Seed<S>::initial(make_table(kB2, kD2), kB2);
}

SfRational E(const TablePtr& t, const std::string& text, const IntMatrix& b = kB2.matrix()) {
  ExpressionParser p(t, OplusMode::universal);
  p.with_exchange_matrix(b);
  return p.parse(text);
}

// mu_k(B): b'_ij = -b_ij on row/column k, else b_ij + sgn(b_ik) [b_ik b_kj]_+.
IntMatrix ordinary_oracle(const IntMatrix& b, int k) {
  IntMatrix out = b;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (static_cast<int>(i) == k || static_cast<int>(j) == k) {
        out(i, j) = -b(i, j);
      } else {
        const auto prod = b(i, k) * b(k, j);
        const auto sign = (b(i, k) > 0) - (b(i, k) < 0);
        out(i, j) = b(i, j) + sign * (prod > 0 ? prod : 0);
      }
    }
  return out;
}

// Seeds reached by short random walks from random acyclic instances.
// A walk stops early once an exchange matrix entry exceeds 4.
template <class S>
std::vector<Seed<S>> random_seeds(std::uint64_t seed, int count, int max_len) {
  std::mt19937_64 rng(seed);
  SweepOptions opt;
  opt.max_entry = 2;
  opt.max_degree = 2;
  opt.max_depth = 0;
  std::vector<Seed<S>> out;
  for (int c = 0; c < count; ++c) {
    const Instance inst = random_tree_instance(rng, opt, c);
    Seed<S> s = Seed<S>::initial(make_table(inst.B, inst.d), inst.B);
    const int len = static_cast<int>(rng() % static_cast<std::uint64_t>(max_len + 1));
    for (int step = 0; step < len; ++step) {
      auto next = mutate_seed(s, static_cast<int>(rng() % s.rank()));
      const auto& m = next.B().matrix();
      bool small = true;
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) small = small && std::abs(m(i, j)) <= 4;
      if (!small) break;
      s = std::move(next);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST(ExchangeMatrix, Validation) {
  EXPECT_THROW(ExchangeMatrix({{0, 1}, {1, 0}}), InvalidExchangeMatrix);
  EXPECT_THROW(ExchangeMatrix({{0, 1}, {0, 0}}), InvalidExchangeMatrix);
  EXPECT_THROW(ExchangeMatrix({{1, 0}, {0, 0}}), InvalidExchangeMatrix);
  EXPECT_THROW(ExchangeMatrix(IntMatrix(2, 3)), InvalidExchangeMatrix);
  EXPECT_NO_THROW(ExchangeMatrix({{0, -3}, {1, 0}}));
}

TEST(ExchangeMatrix, SkewSymmetrizer) {
  EXPECT_TRUE(is_skew_symmetrizer(IntMatrix{{0, -1}, {2, 0}}, {2, 1}));
  EXPECT_FALSE(is_skew_symmetrizer(IntMatrix{{0, -1}, {2, 0}}, {1, 1}));
  EXPECT_FALSE(is_skew_symmetrizer(IntMatrix{{0, -1}, {2, 0}}, {0, 0}));
}

TEST(MutateMatrix, Examples) {
  EXPECT_EQ(mutate_matrix(kB2, kD2, 0).matrix(), (IntMatrix{{0, 1}, {-1, 0}}));
  EXPECT_EQ(mutate_matrix(mutate_matrix(kB2, kD2, 0), kD2, 0), kB2);
  EXPECT_EQ(mutate_matrix(mutate_matrix(kB2, kD2, 0), kD2, 1), kB2);
  EXPECT_THROW(mutate_matrix(kB2, kD2, 2), IndexOutOfRange);
}

TEST(MutateMatrix, MatchesOrdinaryMutationOfDBAndBD) {
  std::mt19937_64 rng(3);
  SweepOptions opt;
  opt.max_depth = 0;
  for (int c = 0; c < 40; ++c) {
    const Instance inst = random_tree_instance(rng, opt, c);
    IntMatrix b = inst.B.matrix();
    const IntMatrix d = degree_matrix(inst.d);
    for (int step = 0; step < 6; ++step) {
      const int k = static_cast<int>(rng() % b.rows());
      const IntMatrix next = mutate_matrix(b, inst.d, k);
      EXPECT_EQ(d * next, ordinary_oracle(d * b, k));
      EXPECT_EQ(next * d, ordinary_oracle(b * d, k));
      EXPECT_EQ(mutate_matrix(next, inst.d, k), b);
      b = next;
    }
  }
}

TEST(Yhat, Examples) {
  const auto s = b2_seed<Universal>();
  const auto& t = s.table();
  const auto yh = yhat(s);
  EXPECT_EQ(yh[0], E(t, "y1*x2"));
  EXPECT_EQ(yh[1], E(t, "y2*x1^-1"));
  const ExchangeMatrix zero(IntMatrix(2, 2));
  const auto s0 = Seed<Universal>::initial(make_table(zero, kD2), zero);
  EXPECT_EQ(yhat(s0)[0], SfRational::generator(s0.table(), s0.table()->y(0)));
  const Grading g(t, kB2.matrix());
  for (const auto& v : yh) EXPECT_EQ(poly_degree(*v.as_laurent_poly(), g), (DegreeVector{0, 0}));
}

TEST(MutateY, B2FirstStep) {
  const auto u = b2_seed<Universal>();
  EXPECT_EQ(mutate_y(u, 0)[1], E(u.table(), "y2*(1 + z_1_1*y1 + y1^2)"));
  EXPECT_EQ(mutate_y(u, 0)[0], E(u.table(), "y1^-1"));
  const auto p = b2_seed<Tropical>();
  EXPECT_EQ(mutate_y(p, 0)[1], Tropical::generator(p.table(), p.table()->y(1)));
}

TEST(MutateX, B2Steps) {
  const auto u = b2_seed<Universal>();
  const auto& t = u.table();
  EXPECT_EQ(mutate_x(u, 0)[0], E(t, "x1^-1*(1 + z_1_1*yh1 + yh1^2)/(1 + z_1_1*y1 + y1^2)"));
  EXPECT_EQ(mutate_x(u, 0)[1], E(t, "x2"));
  Seed<Universal> s = u;
  for (int k : {0, 1, 0, 1}) s = mutate_seed(s, k);
  EXPECT_EQ(s.x()[1], E(t, "x1*x2^-1*(1 + yh2)/(1 + y2)"));
  s = mutate_seed(s, 0);
  EXPECT_EQ(s.x()[0], E(t, "x1"));
  s = mutate_seed(s, 1);
  EXPECT_EQ(s.x()[1], E(t, "x2"));
  EXPECT_EQ(s, u);
}

TEST(MutateX, B2TableRowFour) {
  Seed<Universal> s = b2_seed<Universal>();
  const auto& t = s.table();
  for (int k : {0, 1, 0}) s = mutate_seed(s, k);
  EXPECT_EQ(s.x()[0], E(t, "x1*x2^-2*(1 + 2*yh2 + yh2^2 + z_1_1*yh1*yh2 + z_1_1*yh1*yh2^2 + yh1^2*yh2^2)"
                           "/(1 + 2*y2 + y2^2 + z_1_1*y1*y2 + z_1_1*y1*y2^2 + y1^2*y2^2)"));
  EXPECT_EQ(s.x()[1], E(t, "x2^-1*(1 + yh2 + z_1_1*yh1*yh2 + yh1^2*yh2)/(1 + y2 + z_1_1*y1*y2 + y1^2*y2)"));
}

TEST(MutateX, UnitDegreesGiveTheBinomialExchange) {
  std::mt19937_64 rng(29);
  SweepOptions opt;
  opt.max_degree = 1;
  opt.max_depth = 0;
  for (int c = 0; c < 20; ++c) {
    const Instance inst = random_tree_instance(rng, opt, c);
    const auto s = Seed<Universal>::initial(make_table(inst.B, inst.d), inst.B);
    const auto& t = s.table();
    for (int k = 0; k < s.rank(); ++k) {
      // x_k x_k' = (y_k prod x_j^[b_jk]+ + prod x_j^[-b_jk]+) / (y_k (+) 1)
      SfRational plus = s.y()[k], minus = SfRational::one(t);
      for (int j = 0; j < s.rank(); ++j) {
        const auto b = inst.B(j, k);
        if (b > 0) plus = plus * pow(s.x()[j], b);
        if (b < 0) minus = minus * pow(s.x()[j], -b);
      }
      const auto expected = (plus + minus) / (s.y()[k] + SfRational::one(t)) / s.x()[k];
      EXPECT_EQ(mutate_x(s, k)[k], expected);
    }
  }
}

TEST(MutateSeed, B2IsPeriodic) {
  for (bool debug : {false, true}) {
    Seed<Universal> u = b2_seed<Universal>();
    Seed<Tropical> p = b2_seed<Tropical>();
    for (int k : {0, 1, 0, 1, 0, 1}) {
      u = mutate_seed(u, k, debug);
      p = mutate_seed(p, k, debug);
    }
    EXPECT_EQ(u, b2_seed<Universal>());
    EXPECT_EQ(p, b2_seed<Tropical>());
  }
}

TEST(MutateSeed, InvolutionAndSignIndependence) {
  for (const auto& s : random_seeds<Universal>(41, 25, 3)) {
    for (int k = 0; k < s.rank(); ++k) {
      EXPECT_EQ(mutate_seed(mutate_seed(s, k), k), s);
      EXPECT_EQ(mutate_y(s, k, 1), mutate_y(s, k, -1));
      EXPECT_EQ(mutate_x(s, k, 1), mutate_x(s, k, -1));
    }
  }
  for (const auto& s : random_seeds<Tropical>(43, 40, 5)) {
    for (int k = 0; k < s.rank(); ++k) {
      EXPECT_EQ(mutate_seed(mutate_seed(s, k), k), s);
      EXPECT_EQ(mutate_y(s, k, 1), mutate_y(s, k, -1));
      EXPECT_EQ(mutate_x(s, k, 1), mutate_x(s, k, -1));
    }
  }
}

TEST(MutateSeed, RejectsBadSign) { EXPECT_THROW(mutate_y(b2_seed<Tropical>(), 0, 2), Error); }

TEST(MutateYhat, PropagatesLikeY) {
  for (const auto& s : random_seeds<Universal>(47, 20, 3))
    for (int k = 0; k < s.rank(); ++k) {
      const auto next = mutate_seed(s, k);
      EXPECT_EQ(yhat(next), mutate_yhat(yhat(s), s, k, 1));
      EXPECT_EQ(yhat(next), mutate_yhat(yhat(s), s, k, -1));
    }
}

TEST(PCoefficients, TropicalB2) {
  const auto s = b2_seed<Tropical>();
  const auto& t = s.table();
  const auto p = p_from_yz(s);
  const auto y1 = TropElement::generator(t, t->y(0));
  const auto y2 = TropElement::generator(t, t->y(1));
  const auto z = TropElement::generator(t, *t->z(0, 1));
  EXPECT_TRUE(p.p[0][0].is_one());
  EXPECT_EQ(p.p[0][1], z * y1);
  EXPECT_EQ(p.p[0][2], pow(y1, 2));
  // d = 1: 1/(1 (+) y2) and y2/(1 (+) y2).
  EXPECT_TRUE(p.p[1][0].is_one());
  EXPECT_EQ(p.p[1][1], y2);
  EXPECT_EQ((p.p[0][1] / p.p[0][0]) * (p.p[0][2] / p.p[0][1]), pow(y1, 2));
  EXPECT_NO_THROW(check_normalization(p, t));
}

TEST(PCoefficients, UniversalUnitDegreeIsOrdinaryPair) {
  const auto s = b2_seed<Universal>();
  const auto p = p_from_yz(s);
  EXPECT_EQ(p.p[1][0], E(s.table(), "1/(1 + y2)"));
  EXPECT_EQ(p.p[1][1], E(s.table(), "y2/(1 + y2)"));
  EXPECT_EQ(p.p[0][1], E(s.table(), "z_1_1*y1/(1 + z_1_1*y1 + y1^2)"));
}

TEST(PCoefficients, RoundTrip) {
  const auto tp = b2_seed<Tropical>();
  const auto rt = yz_from_p(p_from_yz(tp), tp.table());
  EXPECT_EQ(rt.y, tp.y());
  EXPECT_EQ(rt.data.z, tp.data().z);
  const auto up = b2_seed<Universal>();
  const auto ru = yz_from_p(p_from_yz(up), up.table());
  EXPECT_EQ(ru.y, up.y());
  EXPECT_EQ(ru.data.z, up.data().z);
  for (const auto& s : random_seeds<Tropical>(53, 30, 4)) {
    const auto r = yz_from_p(p_from_yz(s), s.table());
    EXPECT_EQ(r.y, s.y());
    EXPECT_EQ(r.data.z, s.data().z);
  }
}

TEST(PCoefficients, RootFailures) {
  const auto s = b2_seed<Tropical>();
  const auto& t = s.table();
  const auto y1 = TropElement::generator(t, t->y(0));
  const auto y2 = TropElement::generator(t, t->y(1));
  const auto z = TropElement::generator(t, *t->z(0, 1));
  const auto one = TropElement::one(t);
  PCoefficients<Tropical> bad{{{one, z, y1 * pow(z, 2)}, {one, y2}}};
  EXPECT_THROW(yz_from_p(bad, t), RootFailure);
  PCoefficients<Tropical> unnormalized{{{y1, z * y1, pow(y1, 2)}, {one, y2}}};
  EXPECT_THROW(yz_from_p(unnormalized, t), NormalizationFailure);

  const auto u = b2_seed<Universal>();
  const auto& tu = u.table();
  const auto total = E(tu, "3 + 2*y1 + y1^2");
  PCoefficients<Universal> opaque{{{E(tu, "1") / total, E(tu, "1 + y1") / total, E(tu, "1 + y1 + y1^2") / total},
                                   {E(tu, "1/(1 + y2)"), E(tu, "y2/(1 + y2)")}}};
  EXPECT_THROW(yz_from_p(opaque, tu), UnsupportedRoot);
}

TEST(MutateP, CommutesWithSeedMutation) {
  const auto u = b2_seed<Universal>();
  EXPECT_EQ(mutate_p(p_from_yz(u), u.B().matrix(), kD2, 0), p_from_yz(mutate_seed(u, 0)));
  for (const auto& s : random_seeds<Tropical>(59, 30, 4))
    for (int k = 0; k < s.rank(); ++k) {
      const auto mp = mutate_p(p_from_yz(s), s.B().matrix(), s.degrees(), k);
      EXPECT_EQ(mp, p_from_yz(mutate_seed(s, k)));
      EXPECT_NO_THROW(yz_from_p(mp, s.table()));
    }
}

TEST(MutateP, UnitDegreesGiveOrdinaryCoefficientMutation) {
  const ExchangeMatrix b{{0, 2, 0}, {-1, 0, 1}, {0, -3, 0}};
  const std::vector<int> d{1, 1, 1};
  const auto s = Seed<Universal>::initial(make_table(b, d), b);
  const auto& t = s.table();
  const auto one = SfRational::one(t);
  for (int k = 0; k < 3; ++k) {
    // y_k' = y_k^-1, y_i' = y_i y_k^[b_ki]+ (1 + y_k)^-b_ki
    std::vector<SfRational> y = s.y();
    for (int i = 0; i < 3; ++i) {
      if (i == k) continue;
      const auto bki = b(k, i);
      y[i] = y[i] * pow(s.y()[k], bki > 0 ? bki : 0) * pow(s.y()[k] + one, -bki);
    }
    y[k] = one / s.y()[k];
    PCoefficients<Universal> expected;
    for (const auto& v : y) expected.p.push_back({one / (one + v), v / (one + v)});
    EXPECT_EQ(mutate_p(p_from_yz(s), b.matrix(), d, k), expected);
  }
}

TEST(MutationData, ReciprocityIsValidated) {
  const auto s = b2_seed<Universal>();
  auto data = s.data();
  EXPECT_NO_THROW(data.validate(s.table()));
  data.z[0][2] = SfRational::generator(s.table(), s.table()->y(0));
  EXPECT_THROW(data.validate(s.table()), ReciprocityFailure);
}
