#include "mlh/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mlh {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;
constexpr double kReflectBelow = -8.0;

void check_order(int k) {
  if (k < 0 || k > kMaxErfcOrder) {
    throw std::invalid_argument("erfc order " + std::to_string(k) + " outside [0, " +
                                std::to_string(kMaxErfcOrder) + "]");
  }
}

// z^(k-1) exp(-z^2) without forming the two factors separately.
double power_gauss(int k, double z) {
  if (z == 0.0) return k == 1 ? 1.0 : 0.0;
  const int n = k - 1;
  const double mag = std::exp(n * std::log(std::abs(z)) - z * z);
  return (z < 0.0 && n % 2 == 1) ? -mag : mag;
}

double erfc_k_upward(int k, double z) {
  double even = std::erfc(z);
  double odd = std::exp(-z * z) * kInvSqrtPi;
  if (k == 0) return even;
  if (k == 1) return odd;
  for (int j = 2; j <= k; ++j) {
    double& slot = (j % 2 == 0) ? even : odd;
    slot = power_gauss(j, z) * kInvSqrtPi + 0.5 * (j - 1) * slot;
  }
  return (k % 2 == 0) ? even : odd;
}

}  // namespace

double gamma_half(int k) {
  check_order(k);
  if (k % 2 == 1) {
    // Gamma(m) = (m-1)!
    double g = 1.0;
    for (int i = 2; i <= (k + 1) / 2 - 1; ++i) g *= i;
    return g;
  }
  // Gamma(m + 1/2) = sqrt(pi) * prod_{i=1}^m (2i - 1)/2
  double g = std::sqrt(std::numbers::pi);
  for (int i = 1; i <= k / 2; ++i) g *= (2.0 * i - 1.0) / 2.0;
  return g;
}

double erfc_k_limit_neg(int k) {
  check_order(k);
  if (k % 2 == 1) return 0.0;
  // 2 Gamma(k/2 + 1/2) / sqrt(pi) = 2 prod_{i=1}^{k/2} (2i - 1)/2, exact for small k
  double g = 2.0;
  for (int i = 1; i <= k / 2; ++i) g *= (2.0 * i - 1.0) / 2.0;
  return g;
}

double erfc_k(int k, double z) {
  check_order(k);
  if (!std::isfinite(z)) throw std::invalid_argument("erfc_k argument is not finite");
  if (z < kReflectBelow) {
    const double mirrored = erfc_k_upward(k, -z);
    return (k % 2 == 0) ? erfc_k_limit_neg(k) - mirrored : mirrored;
  }
  return erfc_k_upward(k, z);
}

std::uint64_t binomial(int n, int j) {
  if (n < 0 || n > kMaxErfcOrder || j < 0 || j > n) {
    throw std::invalid_argument("binomial(" + std::to_string(n) + ", " + std::to_string(j) +
                                ") out of range");
  }
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxErfcOrder + 1>, kMaxErfcOrder + 1> t{};
    for (int m = 0; m <= kMaxErfcOrder; ++m) {
      t[m][0] = t[m][m] = 1;
      for (int i = 1; i < m; ++i) t[m][i] = t[m - 1][i - 1] + t[m - 1][i];
    }
    return t;
  }();
  return table[n][j];
}

}  // namespace mlh
