#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "bocs/binary.hpp"
#include "bocs/quadratic.hpp"
#include "bocs/rng.hpp"

using namespace bocs;

namespace {

double l1(const BinaryPoint& x) {
  double s = 0.0;
  for (auto b : x) s += b;
  return s;
}

// Sample mean/variance helper for the distribution tests.
struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class Draw>
Moments sample_moments(int n, Draw&& draw) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  Moments m;
  m.mean = s / n;
  m.var = s2 / n - m.mean * m.mean;
  return m;
}

}  // namespace

TEST_CASE("seed mixer matches the published splitmix64 outputs") {
  // First two outputs of the splitmix64 stream seeded with zero.
  CHECK(mix64(0) == 0xe220a8397b1dcdafull);
  CHECK(mix64(0x9e3779b97f4a7c15ull) == 0x6e789e6aa1b965f4ull);
}

TEST_CASE("string hash matches the published fnv-1a vectors") {
  CHECK(hash_part("") == 0xcbf29ce484222325ull);
  CHECK(hash_part("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hash_part("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("subseed separates roles, indices and argument order") {
  const std::uint64_t m = 42;
  CHECK(subseed(m, "acq", 3) == subseed(m, "acq", 3));
  CHECK(subseed(m, "acq", 3) != subseed(m, "acq", 4));
  CHECK(subseed(m, "acq", 3) != subseed(m, "eval", 3));
  CHECK(subseed(m, "a", "b") != subseed(m, "b", "a"));
  CHECK(subseed(m, "1") != subseed(m, 1));  // strings and ints hash differently
  CHECK(subseed(m, "x") != subseed(m + 1, "x"));
}

TEST_CASE("identical seeds reproduce identical streams") {
  Rng a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 200; ++i) {
    const double u = a.uniform();
    all_equal = all_equal && u == b.uniform();
    any_diff = any_diff || u != c.uniform();
  }
  CHECK(all_equal);
  CHECK(any_diff);
  // mixed-call streams stay aligned too
  Rng d(7), e(7);
  CHECK(d.normal() == e.normal());
  CHECK(d.gamma(2.5, 1.0) == e.gamma(2.5, 1.0));
  CHECK(d.beta(2.0, 3.0) == e.beta(2.0, 3.0));
  CHECK(d.below(17) == e.below(17));
}

TEST_CASE("uniform lies in the half-open unit interval with the right mean") {
  Rng rng(1);
  bool in_range = true;
  const auto m = sample_moments(40000, [&] {
    const double u = rng.uniform();
    in_range = in_range && u >= 0.0 && u < 1.0;
    return u;
  });
  CHECK(in_range);
  CHECK(m.mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(m.var == doctest::Approx(1.0 / 12.0).epsilon(0.05));
}

TEST_CASE("below is bounded and covers its range") {
  Rng rng(2);
  CHECK(rng.below(1) == 0);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 20000; ++i) ++counts[rng.below(10)];
  for (int k = 0; k < 10; ++k) CHECK(counts[k] > 1600);  // fair die: expect 2000 each
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("normal sampler has standard moments") {
  Rng rng(3);
  const auto m = sample_moments(40000, [&] { return rng.normal(); });
  CHECK(std::abs(m.mean) < 0.02);
  CHECK(m.var == doctest::Approx(1.0).epsilon(0.04));
}

TEST_CASE("gamma moments match shape * scale and shape * scale^2") {
  Rng rng(4);
  SUBCASE("shape above one") {
    const auto m = sample_moments(40000, [&] { return rng.gamma(3.0, 2.0); });
    CHECK(m.mean == doctest::Approx(6.0).epsilon(0.03));
    CHECK(m.var == doctest::Approx(12.0).epsilon(0.08));
  }
  SUBCASE("shape below one uses the boost path") {
    const auto m = sample_moments(40000, [&] { return rng.gamma(0.5, 1.0); });
    CHECK(m.mean == doctest::Approx(0.5).epsilon(0.04));
    CHECK(m.var == doctest::Approx(0.5).epsilon(0.08));
  }
  CHECK_THROWS_AS(rng.gamma(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.gamma(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("inverse gamma matches scale / (shape - 1) and handles zero scale") {
  Rng rng(5);
  const auto m = sample_moments(40000, [&] { return rng.inv_gamma(3.0, 2.0); });
  CHECK(m.mean == doctest::Approx(1.0).epsilon(0.05));
  CHECK(rng.inv_gamma(2.0, 0.0) == 0.0);
}

TEST_CASE("beta sampler: moments, degenerate point mass, pathwise ordering") {
  Rng rng(6);
  SUBCASE("general shapes via the gamma ratio") {
    const auto m = sample_moments(40000, [&] { return rng.beta(2.0, 5.0); });
    CHECK(m.mean == doctest::Approx(2.0 / 7.0).epsilon(0.03));
  }
  SUBCASE("unit first shape via the inverse cdf") {
    const auto m = sample_moments(40000, [&] { return rng.beta(1.0, 30.0); });
    CHECK(m.mean == doctest::Approx(1.0 / 31.0).epsilon(0.05));
    bool in_unit = true;
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.beta(1.0, 0.4);
      in_unit = in_unit && x >= 0.0 && x <= 1.0;
    }
    CHECK(in_unit);
  }
  SUBCASE("second shape zero collapses to one") {
    for (int i = 0; i < 10; ++i) CHECK(rng.beta(1.0, 0.0) == 1.0);
  }
  SUBCASE("draws are pathwise decreasing in the second shape") {
    // Beta(1, b) via inverse cdf consumes one uniform, so equal seeds pair
    // the draws and the map b -> 1 - (1-u)^(1/b) is monotone.
    Rng lo(99), hi(99);
    bool ordered = true;
    for (int i = 0; i < 1000; ++i) ordered = ordered && hi.beta(1.0, 5.0) <= lo.beta(1.0, 2.0);
    CHECK(ordered);
  }
  CHECK_THROWS_AS(rng.beta(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("bitstring round trips and mask expansion") {
  const BinaryPoint x = from_bitstring("0101");
  CHECK(x == BinaryPoint{0, 1, 0, 1});
  CHECK(to_bitstring(x) == "0101");
  CHECK_THROWS_AS(from_bitstring("01x1"), std::invalid_argument);
  // bit i of the mask is coordinate i
  CHECK(point_from_mask(0b101, 4) == BinaryPoint{1, 0, 1, 0});
  CHECK(point_from_mask(0, 3) == BinaryPoint{0, 0, 0});
  Rng rng(7);
  const BinaryPoint r = random_point(12, rng);
  CHECK(r.size() == 12);
  bool binary = true;
  for (auto b : r) binary = binary && (b == 0 || b == 1);
  CHECK(binary);
}

TEST_CASE("monomial basis enumerates subsets in size-then-lex order") {
  const MonomialBasis basis = make_basis(3, 2);
  const std::vector<std::vector<int>> expected = {{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
  CHECK(basis.terms == expected);
  CHECK(basis.size() == 7);

  CHECK(basis_size(10, 2) == 56);
  CHECK(basis_size(24, 3) == 2325);
  CHECK(basis_size(64, 2) == 2081);
  CHECK(basis_size(1, 3) == 2);  // subsets cap at the dimension

  // closed form against the materialized list
  for (int d = 1; d <= 12; ++d)
    for (int k = 1; k <= 3; ++k)
      CHECK(basis_size(d, k) == make_basis(d, k).size());

  CHECK_THROWS_AS(make_basis(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_basis(3, 0), std::invalid_argument);
}

TEST_CASE("feature expansion multiplies the selected bits") {
  const MonomialBasis basis = make_basis(3, 2);
  const Eigen::VectorXd phi = expand(basis, from_bitstring("101"));
  Eigen::VectorXd expected(7);
  expected << 1, 1, 0, 1, 0, 1, 0;
  CHECK((phi.array() == expected.array()).all());
  CHECK_THROWS_AS(expand(basis, from_bitstring("10")), std::invalid_argument);

  // every entry is the product of bits, checked against a direct recompute
  Rng rng(8);
  const MonomialBasis b3 = make_basis(6, 3);
  for (int rep = 0; rep < 20; ++rep) {
    const BinaryPoint x = random_point(6, rng);
    const Eigen::VectorXd f = expand(b3, x);
    for (int t = 0; t < b3.size(); ++t) {
      double v = 1.0;
      for (int i : b3.terms[t]) v *= x[i];
      CHECK(f[t] == v);
    }
  }
}

TEST_CASE("dataset appends rows and survives reallocation") {
  Dataset data(make_basis(4, 2));
  CHECK(data.size() == 0);
  CHECK(data.num_features() == 11);
  Rng rng(9);
  std::vector<BinaryPoint> xs;
  for (int i = 0; i < 40; ++i) {  // crosses the initial capacity twice
    xs.push_back(random_point(4, rng));
    data.append(xs.back(), 0.5 * i);
  }
  CHECK(data.size() == 40);
  CHECK(data.features().rows() == 40);
  for (int i = 0; i < 40; ++i) {
    const Eigen::VectorXd fi = expand(data.basis(), xs[i]);
    CHECK((data.features().row(i).transpose().array() == fi.array()).all());
    CHECK(data.targets()[i] == 0.5 * i);
    CHECK(data.points()[i] == xs[i]);
  }
}

TEST_CASE("penalties agree on the cube where x^2 = x") {
  const BinaryPoint x = from_bitstring("1011");
  CHECK(Penalty{Penalty::Kind::none, 3.0}(x) == 0.0);
  CHECK(Penalty{Penalty::Kind::l1, 0.5}(x) == doctest::Approx(1.5));
  CHECK(Penalty{Penalty::Kind::l2sq, 0.5}(x) == doctest::Approx(1.5));
}

TEST_CASE("quadratic assembly: frozen coefficients, symmetry, penalty shift") {
  CoefficientDraw draw;
  draw.basis = make_basis(2, 2);  // terms: {}, {0}, {1}, {0,1}
  draw.alpha = Eigen::Vector4d(0.0, 2.0, 0.0, -3.0);

  const QuadObjective q = build_quadratic(draw, Penalty{Penalty::Kind::l1, 1.0});
  CHECK(q.constant == 0.0);
  CHECK(q.b[0] == doctest::Approx(1.0));   // 2 - lambda
  CHECK(q.b[1] == doctest::Approx(-1.0));  // 0 - lambda
  CHECK(q.A(0, 1) == doctest::Approx(-1.5));
  CHECK(q.A(1, 0) == doctest::Approx(-1.5));
  CHECK(q.A(0, 0) == 0.0);
  CHECK(q.A(1, 1) == 0.0);

  // without the penalty the linear term is the raw coefficients
  const QuadObjective q0 = build_quadratic(draw, Penalty{});
  CHECK(q0.b[0] == doctest::Approx(2.0));
  CHECK(q0.value(from_bitstring("11")) == doctest::Approx(2.0 - 3.0));
}

TEST_CASE("quadratic value equals surrogate prediction minus penalty, exhaustively") {
  const int d = 8;
  const MonomialBasis basis = make_basis(d, 2);
  Rng rng(10);
  CoefficientDraw draw;
  draw.basis = basis;
  draw.alpha.resize(basis.size());
  for (int i = 0; i < basis.size(); ++i) draw.alpha[i] = rng.normal();

  for (auto kind : {Penalty::Kind::l1, Penalty::Kind::l2sq}) {
    const Penalty pen{kind, 0.7};
    const QuadObjective q = build_quadratic(draw, pen);
    for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
      const BinaryPoint x = point_from_mask(mask, d);
      const double expected = predict(draw.alpha, basis, x) - 0.7 * l1(x);
      CHECK(q.value(x) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("quadratic assembly drops higher-order terms and rejects linear bases") {
  const int d = 5;
  const MonomialBasis b3 = make_basis(d, 3);
  Rng rng(11);
  CoefficientDraw draw;
  draw.basis = b3;
  draw.alpha.resize(b3.size());
  for (int i = 0; i < b3.size(); ++i) draw.alpha[i] = rng.normal();

  const QuadObjective q = build_quadratic(draw, Penalty{});
  // oracle: accumulate only the terms of order <= 2 directly from the list
  for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
    const BinaryPoint x = point_from_mask(mask, d);
    double expected = 0.0;
    for (int t = 0; t < b3.size(); ++t) {
      if (b3.terms[t].size() > 2) continue;
      double v = 1.0;
      for (int i : b3.terms[t]) v *= x[i];
      expected += draw.alpha[t] * v;
    }
    CHECK(q.value(x) == doctest::Approx(expected).epsilon(1e-12));
  }

  CoefficientDraw linear;
  linear.basis = make_basis(3, 1);
  linear.alpha = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(build_quadratic(linear, Penalty{}), std::invalid_argument);
}

TEST_CASE("plus-minus lift: frozen example") {
  QuadObjective q;
  q.A.resize(2, 2);
  q.A << 0.0, -1.5, -1.5, 0.0;
  q.b = Eigen::Vector2d(1.0, -1.0);
  q.constant = 0.0;

  const PlusMinusForm pm = to_plus_minus(q);
  CHECK(pm.constant == doctest::Approx(-0.75));
  CHECK(pm.B(0, 1) == doctest::Approx(-0.375));  // A/4 block
  CHECK(pm.B(0, 2) == doctest::Approx(-0.125));  // c = b/4 + A*1/4
  CHECK(pm.B(1, 2) == doctest::Approx(-0.625));
  CHECK(pm.B(2, 2) == 0.0);
  CHECK(pm.B.isApprox(pm.B.transpose()));

  Eigen::Vector3d z(1.0, -1.0, 1.0);  // x = (1, 0) homogenized
  CHECK(z.dot(pm.B * z) == doctest::Approx(1.75));
  CHECK(pm.value(z) == doctest::Approx(q.value(from_bitstring("10"))));
}

TEST_CASE("plus-minus lift agrees with the 0/1 objective on the whole cube") {
  const int d = 6;
  Rng rng(12);
  CoefficientDraw draw;
  draw.basis = make_basis(d, 2);
  draw.alpha.resize(draw.basis.size());
  for (int i = 0; i < draw.basis.size(); ++i) draw.alpha[i] = 2.0 * rng.normal();

  const QuadObjective q = build_quadratic(draw, Penalty{Penalty::Kind::l1, 0.3});
  const PlusMinusForm pm = to_plus_minus(q);
  CHECK(pm.dim() == d);
  for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
    const BinaryPoint x = point_from_mask(mask, d);
    Eigen::VectorXd z(d + 1);
    for (int i = 0; i < d; ++i) z[i] = x[i] ? 1.0 : -1.0;
    z[d] = 1.0;
    CHECK(pm.value(z) == doctest::Approx(q.value(x)).epsilon(1e-12));
  }
}
