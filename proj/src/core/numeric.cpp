#include "numeric.hpp"

#include "error.hpp"

namespace sharpvar {

namespace {

constexpr std::size_t kLeafSize = 8;

double dot_range(const double* a, const double* b, std::size_t count) noexcept {
  if (count <= kLeafSize) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += b ? a[i] * b[i] : a[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return dot_range(a, b, half) +
         dot_range(a + half, b ? b + half : nullptr, count - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  return dot_range(values.data(), nullptr, values.size());
}

double pairwise_dot(std::span<const double> a, std::span<const double> b) noexcept {
  return dot_range(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid input";
    case ErrorCode::InvalidDesign: return "invalid design";
    case ErrorCode::TooLarge: return "too large";
    case ErrorCode::NumericalFailure: return "numerical failure";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace sharpvar
