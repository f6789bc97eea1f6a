#pragma once

#include <string>

#include "mlh/medium.hpp"

namespace mlh {

enum class KernelForm { skew_bm, single_at_0, single_at_a, two_interface_special, m_symmetric };

/// How the end point y was classified. At an interface point the density is
/// the left-continuous representative: sign(0) = -1 and the left layer's weight.
enum class PointConvention { interior, interface_left_closed };

const char* to_string(KernelForm f);
/// Parses the names printed by to_string plus the short CLI aliases
/// (skew_bm, single_0, single_a, two_interface, m_symmetric). Throws std::invalid_argument.
KernelForm kernel_form_from_string(const std::string& name);

struct KernelEval {
  double value;
  KernelForm form;
  PointConvention convention;
};

/// Skew Brownian motion with symmetric-local-time coefficient gamma, |gamma| < 1.
KernelEval skew_bm_density(double gamma, double t, double x, double y);

/// Density of a one-interface diffusion: skew BM in scale coordinates, pulled back through the scale map.
KernelEval kernel_single(const SingleInterface& d, double t, double x, double y);

/// Kernel of the diffusion with interface at 0 built from (p, q, alpha).
/// It is the kernel of Y itself when q = r and beta = 0.
KernelEval kernel_single_0(const SdeParams& params, double t, double x, double y);

/// Kernel of the diffusion with interface at a built from (q, r, beta).
/// It is the kernel of Y itself when p = q and alpha = 0.
KernelEval kernel_single_a(const SdeParams& params, double t, double x, double y);

/// Two-interface kernel (Lebesgue density) valid when beta = 1 - q/r.
/// Throws MatchingConditionError otherwise.
KernelEval kernel_two_interface(const SdeParams& params, double t, double x, double y);

/// Heat kernel q(t, x, y) with respect to m(dy) = rho(y) dy; symmetric in x and y.
/// Throws MatchingConditionError unless rho_2 sqrt(a_2) = rho_3 sqrt(a_3).
KernelEval kernel_m_symmetric(const PhysicalMedium& m, double t, double x, double y);

/// Distribution functions matching the densities above.
double skew_bm_cdf(double gamma, double t, double x, double y);
double single_interface_cdf(const SingleInterface& d, double t, double x, double y);
double two_interface_cdf(const SdeParams& params, double t, double x, double y);

}  // namespace mlh
