#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace prophet {

/// Tolerance used wherever doubles are compared against analytic constants.
inline constexpr double kTolerance = 1e-9;

/// Default cap on the number of realizations (or DP states) enumerated exactly.
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

/// Pairwise summation in a fixed order; the result depends only on the input sequence.
double pairwise_sum(std::span<const double> xs);

using Rng = std::mt19937_64;

/// Uniform double in [0,1) built from the top 53 bits, identical on every platform.
double uniform01(Rng& rng);

/// SplitMix64 mix of (seed, stream); used to derive per-trial generator seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Index drawn with probability proportional to the nonnegative weights.
std::size_t sample_index(std::span<const double> weights, Rng& rng);

/// Parses "0.25", "1/4" or "1e-3". Fractions are exact rationals; `exact` reports which.
struct ParsedProbability {
  double value = 0.0;
  bool exact = false;
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
};
ParsedProbability parse_probability(const std::string& text);

/// Exact check that the rationals num[i]/den[i] sum to one.
bool rationals_sum_to_one(std::span<const std::int64_t> numerators,
                          std::span<const std::int64_t> denominators);

}  // namespace prophet
