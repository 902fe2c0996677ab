#pragma once
// Slow reference integrals for cross-checking the library by an independent route:
// axial Gaussians marginalized onto the Coulomb coordinate, plain adaptive quadrature
// over the angles and the axial distance, no special functions.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

inline double abs_sin_half(double t) { return std::abs(std::sin(t / 2.0)); }

/// phi_l(theta1, theta2) without the 1/(2 pi) prefactor, l in 1..4.
inline double phi(int l, double t1, double t2)
{
    switch (l) {
    case 1: return 1.0;
    case 2: return abs_sin_half(t1);
    case 3: return abs_sin_half(t2);
    default: return abs_sin_half(t1 - t2);
    }
}

/// Adaptive 1D integral over [a, b] split at the given interior points.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        std::vector<double> cuts = {}, double tol = 1e-12)
{
    std::vector<double> pts{a};
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
        if (c > a && c < b) pts.push_back(c);
    pts.push_back(b);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1], 12, tol);
    return s;
}

/// Integral over the torus [-pi, pi]^2 of f(theta1, theta2), splitting at the |sin| kinks.
inline double torus(const std::function<double(double, double)>& f, double tol = 1e-12)
{
    return integrate(
        [&](double t1) {
            return integrate([&](double t2) { return f(t1, t2); }, -pi, pi, {0.0, t1}, tol);
        },
        -pi, pi, {0.0}, tol);
}

/// Angular overlap <phi_l|phi_l'> with the 1/(2 pi) prefactors, by direct quadrature.
inline double angular_overlap(int l, int lp)
{
    return torus([&](double a, double b) { return phi(l, a, b) * phi(lp, a, b); }) / (4.0 * pi * pi);
}

enum class Term { Attraction1, Attraction2, Repulsion };

/// <Phi phi_l | V_term | Phi' phi_l'> for three-Gaussian products with summed exponents
/// a = ai+ai', b = aj+aj', c = ak+ak'. Positive potential 2/distance (no sign applied).
/// The axial Gaussian is marginalized onto y = v.x, the spectator angle is integrated
/// numerically into m(u), the y integral uses y = eps sinh(tau) to remove the peak, and the
/// outer u integral runs by tanh-sinh on both half periods.
inline double potential_term(Term term, double a, double b, double c, int l, int lp, double r)
{
    Eigen::Matrix2d A;
    A << a + c, -c, -c, b + c;
    Eigen::Vector2d v;
    if (term == Term::Attraction1) v << 1, 0;
    else if (term == Term::Attraction2) v << 0, 1;
    else v << 1, -1;
    const double var = v.dot(A.inverse() * v);  // 2 <y^2>
    const double kappa = 1.0 / var;
    const double weight = pi / std::sqrt(A.determinant()) / std::sqrt(pi * var);

    auto marginal = [&](double u) {
        auto f = [&](double s) {
            if (term == Term::Attraction1) return phi(l, u, s) * phi(lp, u, s);
            if (term == Term::Attraction2) return phi(l, s, u) * phi(lp, s, u);
            return phi(l, s, s - u) * phi(lp, s, s - u);
        };
        return integrate(f, -pi, pi, {0.0, u});
    };
    auto axial = [&](double u) {
        const double eps = 2.0 * r * std::abs(std::sin(u / 2.0));
        const double tau_max = std::asinh(std::sqrt(50.0 / kappa) / eps);
        auto g = [&](double tau) {
            const double y = eps * std::sinh(tau);
            return std::exp(-kappa * y * y);
        };
        return 4.0 * integrate(g, 0.0, tau_max);
    };
    auto outer = [&](double u) { return marginal(u) * axial(u); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double total = ts.integrate(outer, -pi, 0.0, 1e-10) + ts.integrate(outer, 0.0, pi, 1e-10);
    return weight * total / (4.0 * pi * pi);
}

/// <a|V_H|b> for a one-particle basis e^{-alpha x^2} |sin(theta/2)|^deg ordered as
/// (gaussian, degree) with `degrees` angular functions per Gaussian, and the Hartree
/// potential V_H(x, theta) = integral of |chi(x', theta')|^2 2/distance.
inline double hartree_element(const std::vector<double>& alphas, int degrees, const Eigen::VectorXd& chi,
                              std::size_t a, std::size_t b, double r)
{
    const std::size_t n = static_cast<std::size_t>(chi.size());
    auto expo = [&](std::size_t p) { return alphas[p / degrees]; };
    auto deg = [&](std::size_t p) { return static_cast<int>(p % degrees); };
    const double A = expo(a) + expo(b);
    const int pdeg = deg(a) + deg(b);

    auto marginal = [&](int q, double u) {
        return integrate(
            [&](double t1) { return std::pow(abs_sin_half(t1), pdeg) * std::pow(abs_sin_half(t1 - u), q); },
            -pi, pi, {0.0, u});
    };
    auto axial = [&](double kappa, double u) {
        const double eps = 2.0 * r * std::abs(std::sin(u / 2.0));
        const double tau_max = std::asinh(std::sqrt(50.0 / kappa) / eps);
        return 4.0 * integrate(
                         [&](double tau) {
                             const double y = eps * std::sinh(tau);
                             return std::exp(-kappa * y * y);
                         },
                         0.0, tau_max);
    };
    auto outer = [&](double u) {
        const double m[3] = {marginal(0, u), marginal(1, u), marginal(2, u)};
        double sum = 0.0;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d) {
                const double B = expo(c) + expo(d);
                const double var = 1.0 / A + 1.0 / B;
                const double weight = pi / std::sqrt(A * B) / std::sqrt(pi * var);
                sum += chi(c) * chi(d) * weight * m[deg(c) + deg(d)] * axial(1.0 / var, u);
            }
        return sum;
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(outer, -pi, 0.0, 1e-9) + ts.integrate(outer, 0.0, pi, 1e-9);
}

} // namespace oracle
