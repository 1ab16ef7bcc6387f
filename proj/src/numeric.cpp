#include "prophet/numeric.hpp"

#include <boost/rational.hpp>
#include <cmath>

#include "prophet/errors.hpp"

namespace prophet {

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Validation: return "validation";
    case ErrorCategory::EnumerationCap: return "enumeration-cap";
    case ErrorCategory::InvalidArgument: return "invalid-argument";
    case ErrorCategory::Internal: return "internal";
  }
  return "internal";
}

int category_exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Parse: return 2;
    case ErrorCategory::Validation: return 3;
    case ErrorCategory::EnumerationCap: return 4;
    case ErrorCategory::InvalidArgument: return 5;
    case ErrorCategory::Internal: return 1;
  }
  return 1;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights)
    if (w > 0.0) total += w;
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  // u landed in the rounding gap above the accumulated mass
  return last_positive;
}

ParsedProbability parse_probability(const std::string& text) {
  ParsedProbability out;
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      out.value = std::stod(text, &used);
      if (used != text.size()) throw ParseError("trailing characters in probability '" + text + "'");
      return out;
    }
    std::size_t used_num = 0;
    std::size_t used_den = 0;
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    out.numerator = std::stoll(num, &used_num);
    out.denominator = std::stoll(den, &used_den);
    if (used_num != num.size() || used_den != den.size()) {
      throw ParseError("malformed fraction '" + text + "'");
    }
  } catch (const std::logic_error&) {
    throw ParseError("malformed probability '" + text + "'");
  }
  if (out.denominator <= 0) throw ParseError("non-positive denominator in '" + text + "'");
  out.exact = true;
  out.value = static_cast<double>(out.numerator) / static_cast<double>(out.denominator);
  return out;
}

bool rationals_sum_to_one(std::span<const std::int64_t> numerators,
                          std::span<const std::int64_t> denominators) {
  boost::rational<std::int64_t> total(0);
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    total += boost::rational<std::int64_t>(numerators[i], denominators[i]);
  }
  return total.numerator() == 1 && total.denominator() == 1;
}

}  // namespace prophet
