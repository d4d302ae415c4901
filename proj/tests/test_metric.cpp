#include <cmath>
#include <random>

#include "doctest.h"

#include "alexprobe/error.hpp"
#include "alexprobe/metric.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace alexprobe;
using support::error_code;

TEST_CASE("validate_metric accepts the equilateral triple") {
  auto r = validate_metric(support::equilateral());
  REQUIRE(r);
  CHECK(r.violations.empty());
  CHECK(r.metric->size() == 3);
  CHECK((*r.metric)(0, 1) == 1.0);
}

TEST_CASE("validate_metric reports a triangle violation with magnitude") {
  auto r = validate_metric({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
  CHECK_FALSE(r);
  REQUIRE(r.violations.size() == 1);
  const auto& v = r.violations[0];
  CHECK(v.kind == ViolationKind::TriangleViolation);
  CHECK(v.indices == std::vector<std::size_t>{0, 2, 1});
  CHECK(v.magnitude == doctest::Approx(1.0));
}

TEST_CASE("validate_metric reports asymmetry") {
  auto r = validate_metric({{0, 1}, {2, 0}});
  CHECK_FALSE(r);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == ViolationKind::Asymmetry);
  CHECK(r.violations[0].indices == std::vector<std::size_t>{0, 1});
  CHECK(r.violations[0].magnitude == doctest::Approx(1.0));
}

TEST_CASE("validate_metric collects every violation") {
  auto r = validate_metric({{1, -1, 0}, {-1, 0, 5}, {0, 5, 0}});
  CHECK_FALSE(r);
  bool neg = false, diag = false, tri = false;
  for (const auto& v : r.violations) {
    CHECK(v.magnitude > 0.0);
    neg |= v.kind == ViolationKind::NegativeEntry;
    diag |= v.kind == ViolationKind::NonzeroDiagonal;
    tri |= v.kind == ViolationKind::TriangleViolation;
    CHECK_FALSE(describe(v).empty());
  }
  CHECK(neg);
  CHECK(diag);
  CHECK(tri);
}

TEST_CASE("validate_metric errors") {
  CHECK(error_code([] { validate_metric(RawMatrix(2, 3)); }) == ErrorCode::Shape);
  CHECK(error_code([] { validate_metric(RawMatrix(1, 1)); }) == ErrorCode::Shape);
  CHECK(error_code([] { validate_metric(RawMatrix(17, 17)); }) == ErrorCode::Shape);
  CHECK(error_code([] { validate_metric({{0, NAN}, {NAN, 0}}); }) == ErrorCode::Value);
  CHECK(error_code([] { validate_metric({{0, INFINITY}, {INFINITY, 0}}); }) == ErrorCode::Value);
  CHECK(error_code([] { validate_metric({{0, 1}, {1, 0}}, -1.0); }) == ErrorCode::Domain);
  CHECK(error_code([] { require_metric({{0, 1}, {2, 0}}); }) == ErrorCode::Domain);
}

TEST_CASE("slack is relative to the largest entry") {
  // 2 + 1e-10 exceeds 1 + 1 by 1e-10 = 5e-11 * max.
  RawMatrix m{{0, 1, 2 + 1e-10}, {1, 0, 1}, {2 + 1e-10, 1, 0}};
  CHECK(validate_metric(m, 1e-9));
  CHECK_FALSE(validate_metric(m, 0.0));
}

TEST_CASE("slack-accepted asymmetry is symmetrized") {
  auto r = validate_metric({{0, 1.0}, {1.0 + 1e-12, 0}});
  REQUIRE(r);
  CHECK((*r.metric)(0, 1) == (*r.metric)(1, 0));
}

TEST_CASE("parse_matrix literal forms") {
  CHECK(parse_matrix("0 1\n1 0") == RawMatrix{{0, 1}, {1, 0}});
  CHECK(parse_matrix("# tripod\n0 1 1 1\n1 0 2 2\n1 2 0 2\n1 2 2 0") == support::tripod());
  CHECK(parse_matrix("0, 1.5\n\n1.5,0\n") == RawMatrix{{0, 1.5}, {1.5, 0}});
}

TEST_CASE("parse_matrix errors carry positions") {
  try {
    parse_matrix("0 1\n1");
    FAIL("expected shape error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Shape);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  try {
    parse_matrix("0 1\n1 x0");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    const std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
    CHECK(what.find("column 3") != std::string::npos);
  }
  CHECK(error_code([] { parse_matrix("# nothing\n"); }) == ErrorCode::Shape);
}

TEST_CASE("scale examples") {
  auto eq = support::metric(support::equilateral());
  auto two = scale(eq, 2.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(two(i, j) == (i == j ? 0.0 : 2.0));
  CHECK(scale(eq, 1.0) == eq);
  auto t = support::metric(support::tripod());
  auto half = scale(t, 0.5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(half(i, j) == t(i, j) / 2);
  CHECK(validate_metric(half.raw(), 0.0));
  CHECK(error_code([&] { scale(eq, 0.0); }) == ErrorCode::Domain);
  CHECK(error_code([&] { scale(eq, -1.0); }) == ErrorCode::Domain);
}

TEST_CASE("select extracts principal submatrices in order") {
  auto t = support::metric(support::tripod());
  const std::size_t idx[] = {3, 0};
  auto s = t.select(idx);
  CHECK(s.size() == 2);
  CHECK(s(0, 1) == 1.0);
  const std::size_t bad[] = {0, 9};
  CHECK(error_code([&] { t.select(bad); }) == ErrorCode::Index);
}

TEST_CASE("property: accepted matrices satisfy the axioms exactly at slack 0") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 15;
    // Integer weights keep the shortest-path repair exact.
    std::uniform_int_distribution<int> w(1, 20);
    RawMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = w(rng);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = std::min(m(i, j), m(i, k) + m(k, j));
    auto r = validate_metric(m, 0.0);
    REQUIRE(r);
    const auto& d = *r.metric;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d(i, i) == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(d(i, j) == d(j, i));
        CHECK(d(i, j) >= 0.0);
        for (std::size_t k = 0; k < n; ++k) CHECK(d(i, k) <= d(i, j) + d(j, k));
      }
    }
  }
}

TEST_CASE("property: serialize then parse is the identity") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(1e-8, 1e8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 15;
    RawMatrix m(n, n + trial % 3);
    for (double& v : m.values) v = u(rng) * (trial % 2 ? 1.0 : 1e-6);
    CHECK(parse_matrix(serialize(m)) == m);
  }
  auto t = support::metric(support::tripod());
  CHECK(parse_matrix(serialize(t)) == t.raw());
}

TEST_CASE("property: scale composes") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(1e-3, 1e3);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = require_metric(oracle::random_metric(5, rng));
    const double a = u(rng), b = u(rng);
    auto lhs = scale(scale(d, a), b);
    auto rhs = scale(d, a * b);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        CHECK(std::fabs(lhs(i, j) - rhs(i, j)) <= 1e-15 * std::fabs(rhs(i, j)) + 1e-300);
  }
}
