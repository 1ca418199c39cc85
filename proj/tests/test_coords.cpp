#include <gtest/gtest.h>

#include <cmath>

#include "hypercycle/coords.hpp"
#include "hypercycle/crosscheck.hpp"
#include "test_support.hpp"

using namespace hypercycle;
using hypercycle::testing::random_interior;
using hypercycle::testing::random_params;
using hypercycle::testing::rng;
using hypercycle::testing::uniform;

namespace {

const Params kOnes({1.0, 1.0, 1.0, 1.0});

double dist(const ReducedState& a, const ReducedState& b) { return (a - b).norm(); }

ReducedState random_small_state(double radius) {
  return {{uniform(-radius, radius), uniform(-radius, radius), uniform(-radius, radius)}};
}

// || G(z) - z - delta g(z) || for the parameter with the given delta and k2=k3=k4=1.
double remainder(const ReducedState& z, double delta) {
  const double k1 = delta / (1.0 - 4.0 * delta);
  const Params p = kOnes.with_k1(k1);
  const ReducedState gz = reduced_map(z, p);
  const auto g = g_exact(z);
  const ReducedState lin{{z.z[0] + delta * g[0], z.z[1] + delta * g[1], z.z[2] + delta * g[2]}};
  return dist(gz, lin);
}

}  // namespace

TEST(Barycentric, Examples) {
  for (const Params& p : {kOnes, Params({1.0, 2.0, 4.0, 4.0}), Params({0.05, 1.0, 2.0, 3.0})}) {
    const auto y = to_barycentric(interior_fixed_point(p), p);
    for (double v : y.y) EXPECT_NEAR(v, 0.25, 1e-15);
  }
  const auto yq = to_barycentric(corner_q(), Params({0.1, 1.0, 1.0, 1.0}));
  EXPECT_EQ(yq.y, (Vec4{0, 0, 0, 1}));
  const Params p({1.0, 2.0, 4.0, 4.0});
  const auto y = to_barycentric(SimplexPoint({0.25, 0.25, 0.25, 0.25}), p);
  EXPECT_NEAR(y.y[0], 2.0 / 11.0, 1e-16);
  EXPECT_NEAR(y.y[1], 4.0 / 11.0, 1e-16);
  EXPECT_NEAR(y.y[2], 4.0 / 11.0, 1e-16);
  EXPECT_NEAR(y.y[3], 1.0 / 11.0, 1e-16);
}

TEST(Barycentric, Errors) {
  EXPECT_THROW(to_barycentric(corner_q(), kOnes.with_k1(0.0)), SingularTransform);
  EXPECT_THROW(from_barycentric(BarycentricPoint({0.25, 0.25, 0.25, 0.25}), kOnes.with_k1(0.0)), SingularTransform);
  // weighted sum x1 + x2 + x3 + k1 x4 vanishes for k1 = -0.25 at x = (0.2, 0, 0, 0.8)
  EXPECT_THROW(to_barycentric(SimplexPoint({0.2, 0.0, 0.0, 0.8}), kOnes.with_k1(-0.25)), DegenerateDenominator);
  // N(y) = y1 + y2 + y3 + y4 / k1 vanishes for k1 = -0.25 at y = (0.8, 0, 0, 0.2)
  EXPECT_THROW(from_barycentric(BarycentricPoint({0.8, 0.0, 0.0, 0.2}), kOnes.with_k1(-0.25)), DegenerateDenominator);
}

TEST(Barycentric, Inverse) {
  const auto x = from_barycentric(BarycentricPoint({0.25, 0.25, 0.25, 0.25}), kOnes);
  for (double v : x.coords()) EXPECT_NEAR(v, 0.25, 1e-16);
  const auto q = from_barycentric(BarycentricPoint({0, 0, 0, 1}), kOnes.with_k1(0.1));
  EXPECT_EQ(q.coords(), (Vec4{0, 0, 0, 1}));
  const auto u =
      from_barycentric(BarycentricPoint({2.0 / 11.0, 4.0 / 11.0, 4.0 / 11.0, 1.0 / 11.0}), Params({1.0, 2.0, 4.0, 4.0}));
  for (double v : u.coords()) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(Barycentric, RoundTrip) {
  for (int s = 0; s < 10000; ++s) {
    Params p = random_params(-0.3, 2.0);
    if (p.k1() == 0.0) p = p.with_k1(0.1);
    const BarycentricPoint y(random_interior());
    double n = 0.0;
    for (std::size_t j = 0; j < 4; ++j) n += y.y[j] / p[next(j)];
    Vec4 x{};
    bool positive = true;
    for (std::size_t i = 0; i < 4; ++i) {
      x[i] = y.y[i] / (n * p[next(i)]);
      positive = positive && x[i] >= 0.0;
    }
    if (!positive) continue;  // the inverse image leaves S4 when k1 < 0
    const auto back = to_barycentric(from_barycentric(y, p), p);
    EXPECT_LE(max_abs_diff(back.y, y.y), 1e-12);
  }
}

TEST(CenterAndReduce, Examples) {
  const auto a = center_and_reduce(BarycentricPoint({0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(a.z, (std::array<double, 3>{0, 0, 0}));
  const auto b = center_and_reduce(BarycentricPoint({0.5, 0.25, 0.25, 0.0}));
  EXPECT_EQ(b.z, (std::array<double, 3>{0.25, 0, -0.25}));
  const auto c = center_and_reduce(BarycentricPoint({0, 0, 0, 1}));
  EXPECT_EQ(c.z, (std::array<double, 3>{-0.25, -0.25, 0.75}));
}

TEST(Embed, Examples) {
  EXPECT_EQ(embed(ReducedState{}), (Vec4{0, 0, 0, 0}));
  EXPECT_EQ(uncenter(ReducedState{}).y, (Vec4{0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(embed(ReducedState{{0.25, 0.0, -0.25}}), (Vec4{0.25, 0, 0, -0.25}));
  for (int s = 0; s < 1000; ++s) {
    const ReducedState r = random_small_state(0.2);
    const Vec4 c = embed(r);
    EXPECT_LE(std::abs(c[0] + c[1] + c[2] + c[3]), 1e-15);
    const ReducedState back = center_and_reduce(uncenter(r));
    EXPECT_LE(dist(back, r), 1e-15);
  }
}

TEST(ReducedMap, OriginIsFixed) {
  for (double k1 : {0.001, 0.05, 0.5, 3.0}) {
    EXPECT_LE(reduced_map(ReducedState{}, kOnes.with_k1(k1)).norm(), 1e-13);
  }
  const Params p({0.2, 1.5, 0.7, 2.0});
  EXPECT_LE(reduced_map(ReducedState{}, p).norm(), 1e-13);
  EXPECT_THROW(reduced_map(ReducedState{}, kOnes.with_k1(0.0)), SingularTransform);
}

TEST(ReducedMap, PipelineMatchesOriginalCoordinates) {
  const Params p = kOnes.with_k1(0.05);
  const ReducedState z{{0.05, 0.0, 0.0}};
  // by hand through the original coordinates
  const Vec4 y{0.30, 0.20, 0.25, 0.25};
  double n = 0.0;
  for (std::size_t j = 0; j < 4; ++j) n += y[j] / p[next(j)];
  Vec4 x{};
  for (std::size_t i = 0; i < 4; ++i) x[i] = y[i] / (n * p[next(i)]);
  const Vec4 fx = detail::step_raw(x, p);
  double w = 0.0;
  for (std::size_t i = 0; i < 4; ++i) w += p[next(i)] * fx[i];
  const ReducedState expect{{p[1] * fx[0] / w - 0.25, p[3] * fx[2] / w - 0.25, p[0] * fx[3] / w - 0.25}};
  EXPECT_LE(dist(reduced_map(z, p), expect), 1e-13);
}

TEST(ReducedMap, ClosedFormAgrees) {
  for (int s = 0; s < 5000; ++s) {
    const Params p({uniform(0.001, 2.0), uniform(0.2, 3.0), uniform(0.2, 3.0), uniform(0.2, 3.0)});
    const ReducedState z = random_small_state(0.08);
    EXPECT_LE(dist(reduced_map(z, p), reduced_map_closed_form(z, p)), 1e-13);
  }
}

TEST(GExact, Examples) {
  EXPECT_EQ(g_exact(ReducedState{}), (std::array<double, 3>{0, 0, 0}));
  const auto a = g_exact(ReducedState{{0.1, 0.0, 0.0}});
  EXPECT_NEAR(a[0], 0.014, 1e-16);
  EXPECT_NEAR(a[1], -0.09, 1e-16);
  EXPECT_NEAR(a[2], 0.01, 1e-16);
  const auto b = g_exact(ReducedState{{0.0, 0.0, 0.1}});
  EXPECT_NEAR(b[0], 0.1 / 1.4, 1e-16);
  EXPECT_NEAR(b[1], -0.1 / 1.4, 1e-16);
  EXPECT_EQ(b[2], 0.0);
  EXPECT_THROW(g_exact(ReducedState{{0.0, 0.0, -0.25}}), PoleError);
}

TEST(GExact, IsFirstOrderTermOfReducedMap) {
  // The remainder is O(delta^2): halving delta divides it by about 4.
  for (int s = 0; s < 50; ++s) {
    ReducedState z = random_small_state(0.05);
    if (z.norm() > 0.05) z = (0.05 / z.norm()) * z;
    double prev_r = remainder(z, 0.05);
    for (double d = 0.025; d > 0.006; d /= 2.0) {
      const double r = remainder(z, d);
      const double ratio = prev_r / r;
      EXPECT_GE(ratio, 3.5) << "delta " << d;
      EXPECT_LE(ratio, 4.5) << "delta " << d;
      prev_r = r;
    }
  }
  // fitted constant K at delta = 0.05 stays valid as delta halves
  const ReducedState z{{0.03, -0.02, 0.01}};
  const double k = remainder(z, 0.05) / (0.05 * 0.05 * z.norm() * z.norm());
  for (double d = 0.025; d > 0.001; d /= 2.0) EXPECT_LE(remainder(z, d), 1.05 * k * d * d * z.norm() * z.norm());
}

TEST(GJet, MatchesWrittenPolynomials) {
  const JetMap3 g = g_jet(3);
  EXPECT_EQ(g[0].coeff({0, 0, 2}), ExactComplex(-4));
  EXPECT_EQ(g[2].coeff({2, 0, 0}), ExactComplex(1));
  EXPECT_TRUE(g[2].homogeneous_part(3).is_zero());
  const auto parts = reference::g_parts();
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(g[c].homogeneous_part(2), parts[c][0]) << c;
    EXPECT_EQ(g[c].homogeneous_part(3), parts[c][1]) << c;
  }
  LinearMap3 dg;
  dg.a = {{{0, 0, 1}, {-1, -1, -1}, {0, 1, 0}}};
  EXPECT_EQ(linear_part(g), dg);
}

TEST(GJet, AgreesWithClosedFormNumerically) {
  // Taylor polynomial of degree 3 approximates g_exact to O(|z|^4).
  const JetMap3 g = g_jet(3);
  for (double s : {1e-2, 5e-3}) {
    const ReducedState z{{0.7 * s, -0.4 * s, 0.9 * s}};
    const auto exact = g_exact(z);
    for (std::size_t c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (const auto& [e, coef] : g[c].terms()) {
        acc += coef.to_complex().real() * std::pow(z.z[0], e[0]) * std::pow(z.z[1], e[1]) * std::pow(z.z[2], e[2]);
      }
      EXPECT_LE(std::abs(acc - exact[c]), 300.0 * std::pow(s, 4));
    }
  }
  // higher jets extend consistently
  const JetMap3 g5 = g_jet(5);
  for (std::size_t c = 0; c < 3; ++c) {
    for (const auto& [e, coef] : g[c].terms()) EXPECT_EQ(g5[c].coeff(e), coef);
  }
}
