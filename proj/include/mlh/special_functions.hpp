#pragma once

#include <cstdint>

namespace mlh {

/// Largest supported order of the erfc_k family.
inline constexpr int kMaxErfcOrder = 64;

/// Gamma((k+1)/2) for integer k >= 0, from the half-integer closed forms.
double gamma_half(int k);

/**
 * The k-th Gaussian tail moment
 *
 *     erfc_k(z) = (2/sqrt(pi)) * integral_z^inf u^k exp(-u^2) du.
 *
 * erfc_0 is the ordinary complementary error function. Higher orders come from
 * the upward recurrence
 *
 *     erfc_k(z) = z^(k-1) exp(-z^2) / sqrt(pi) + (k-1)/2 * erfc_{k-2}(z).
 *
 * For z < -8 the value is assembled from the z -> -inf limit and the
 * reflection identity erfc_k(z) + (-1)^k erfc_k(-z) = erfc_k_limit_neg(k).
 *
 * Throws std::invalid_argument if k is outside [0, kMaxErfcOrder] or z is not finite.
 */
double erfc_k(int k, double z);

/// lim_{z -> -inf} erfc_k(z) = (1 + (-1)^k) Gamma((k+1)/2) / sqrt(pi).
double erfc_k_limit_neg(int k);

/// Exact binomial coefficient for 0 <= j <= n <= kMaxErfcOrder.
std::uint64_t binomial(int n, int j);

}  // namespace mlh
