#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "prophet/errors.hpp"
#include "prophet/numeric.hpp"

using namespace prophet;

TEST_CASE("compensated sum recovers small terms lost by naive addition") {
  CompensatedSum s;
  double naive = 0.0;
  s += 1.0;
  naive += 1.0;
  for (int i = 0; i < 10; ++i) {
    s += 1e-16;
    naive += 1e-16;
  }
  s += -1.0;
  naive += -1.0;
  CHECK(naive == 0.0);
  CHECK(s.value() == doctest::Approx(1e-15).epsilon(1e-6));
}

TEST_CASE("pairwise sum matches exact integer sums") {
  std::vector<double> xs;
  for (int i = 1; i <= 1001; ++i) xs.push_back(i);
  CHECK(pairwise_sum(xs) == 1001.0 * 1002.0 / 2.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("probabilities parse as decimals or exact fractions") {
  const auto quarter = parse_probability("1/4");
  CHECK(quarter.exact);
  CHECK(quarter.numerator == 1);
  CHECK(quarter.denominator == 4);
  CHECK(quarter.value == 0.25);
  CHECK(parse_probability("0.25").value == 0.25);
  CHECK(parse_probability("1e-3").value == doctest::Approx(1e-3));
  CHECK_THROWS_AS(parse_probability("abc"), ParseError);
  CHECK_THROWS_AS(parse_probability("1/0"), ParseError);
}

TEST_CASE("rational masses are checked exactly") {
  const std::vector<std::int64_t> num{1, 1, 1};
  const std::vector<std::int64_t> den{3, 3, 3};
  CHECK(rationals_sum_to_one(num, den));
  const std::vector<std::int64_t> num2{1, 1};
  const std::vector<std::int64_t> den2{3, 3};
  CHECK_FALSE(rationals_sum_to_one(num2, den2));
}

TEST_CASE("derived seeds are deterministic and distinct per stream") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t j = 0; j < 1000; ++j) seen.insert(derive_seed(42, j));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("uniform draws stay in [0,1) and index sampling follows weights") {
  Rng rng(123);
  std::vector<double> w{1.0, 3.0, 0.0, 6.0};
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    CHECK_UNARY(u >= 0.0);
    CHECK_UNARY(u < 1.0);
    ++counts[sample_index(w, rng)];
  }
  CHECK(counts[2] == 0);
  CHECK(counts[0] / double(n) == doctest::Approx(0.1).epsilon(0.05));
  CHECK(counts[3] / double(n) == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("error categories map to distinct exit codes") {
  CHECK(category_exit_code(ErrorCategory::Parse) == 2);
  CHECK(category_exit_code(ErrorCategory::Validation) == 3);
  CHECK(category_exit_code(ErrorCategory::EnumerationCap) == 4);
  CHECK(category_exit_code(ErrorCategory::InvalidArgument) == 5);
  CHECK(category_exit_code(ErrorCategory::Internal) == 1);
  CHECK(std::string(category_name(ErrorCategory::EnumerationCap)) == "enumeration-cap");
}
