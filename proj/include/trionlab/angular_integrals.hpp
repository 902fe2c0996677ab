#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace trionlab::assembly {

/// Tolerances for the theta integrals. angular_order selects the Gauss-Kronrod rule
/// (the nearest of 15, 21, 31, 41, 51, 61 points); max_subdivisions bounds the bisection depth.
struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    int angular_order = 64;

    void validate() const;
    int kronrod_points() const;
    int max_depth() const;
};

/// Angular profiles f(theta): 1, |sin(theta/2)|, sin^2(theta/2) and the self-convolution
/// g(theta) = integral of |sin(phi/2)| |sin((theta-phi)/2)| over a period.
enum Profile : int { One = 0, Sin = 1, Sin2 = 2, Conv = 3 };
using ProfileVector = std::array<double, 4>;

double profile_value(Profile f, double theta);

/// Integrals over theta in [-pi, pi] of f(theta) e^z K0(z) with z = 2 rho2 sin^2(theta/2).
/// e^z K0(z) is the Coulomb potential of a cylinder averaged over a Gaussian axial
/// density with reduced exponent zeta, where rho2 = r^2 zeta.
ProfileVector screened_profile_integrals(double rho2, const QuadratureSpec& quad);

/// Same, memoized in a process-wide table keyed by rho2 rounded to about 12 significant
/// digits. Values depend only on the key, never on what was cached before.
ProfileVector cached_profile_integrals(double rho2, const QuadratureSpec& quad);

/// Fills the table for all keys, evaluating missing entries in parallel.
void prefetch_profile_integrals(const std::vector<double>& rho2s, const QuadratureSpec& quad);

std::size_t profile_cache_size();
void clear_profile_cache();

} // namespace trionlab::assembly
