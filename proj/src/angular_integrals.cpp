#include "trionlab/angular_integrals.hpp"
#include "trionlab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

namespace trionlab::assembly {

namespace {

constexpr double pi = std::numbers::pi;

double scaled_k0(double z)
{
    if (z <= 0.0) return std::numeric_limits<double>::infinity();
    gsl_sf_result res;
    if (gsl_sf_bessel_K0_scaled_e(z, &res) != GSL_SUCCESS)
        throw NumericalError("K0 evaluation failed");
    return res.val;
}

double quantize(double x)
{
    auto bits = std::bit_cast<std::uint64_t>(x);
    constexpr std::uint64_t half = std::uint64_t{1} << 11;
    bits = (bits + half) & ~((std::uint64_t{1} << 12) - 1);
    return std::bit_cast<double>(bits);
}

template <unsigned N>
ProfileVector integrate_rule(double rho2, const QuadratureSpec& q)
{
    using boost::math::quadrature::gauss_kronrod;
    ProfileVector out{};
    double worst = 0.0;
    bool failed = false;
    for (int f = 0; f < 4; ++f) {
        // theta = pi v^3 tames the logarithmic peak of K0 at theta = 0
        auto integrand = [&](double v) {
            const double theta = pi * v * v * v;
            const double s = std::sin(theta / 2.0);
            const double z = 2.0 * rho2 * s * s;
            return profile_value(static_cast<Profile>(f), theta) * scaled_k0(z) * 3.0 * pi * v * v;
        };
        double err = 0.0;
        const double half = gauss_kronrod<double, N>::integrate(integrand, 0.0, 1.0, q.max_depth(),
                                                                q.rel_tol, &err);
        out[f] = 2.0 * half;
        err *= 2.0;
        if (!std::isfinite(out[f]) || err > std::max(q.abs_tol, q.rel_tol * std::abs(out[f]))) {
            failed = true;
            worst = std::max(worst, std::isfinite(err) ? err : std::numeric_limits<double>::infinity());
        }
    }
    if (failed) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "theta quadrature did not reach tolerance at rho2 = %.10g", rho2);
        throw QuadratureError(msg, worst);
    }
    return out;
}

using CacheKey = std::tuple<double, double, double, int, int>;

struct Cache {
    std::shared_mutex mutex;
    std::map<CacheKey, ProfileVector> table;
};

Cache& cache()
{
    static Cache c;
    return c;
}

CacheKey make_key(double rho2, const QuadratureSpec& q)
{
    return {quantize(rho2), q.rel_tol, q.abs_tol, q.max_subdivisions, q.kronrod_points()};
}

} // namespace

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
    if (angular_order < 8) throw DomainError("angular_order must be at least 8");
}

int QuadratureSpec::kronrod_points() const
{
    static constexpr int rules[] = {15, 21, 31, 41, 51, 61};
    int best = rules[0];
    for (int p : rules)
        if (std::abs(p - angular_order) < std::abs(best - angular_order)) best = p;
    return best;
}

int QuadratureSpec::max_depth() const
{
    return static_cast<int>(std::bit_width(static_cast<unsigned>(std::max(1, max_subdivisions))));
}

double profile_value(Profile f, double theta)
{
    switch (f) {
    case One: return 1.0;
    case Sin: return std::abs(std::sin(theta / 2.0));
    case Sin2: {
        const double s = std::sin(theta / 2.0);
        return s * s;
    }
    case Conv: {
        // reduce to [0, pi]; g is even and 2pi-periodic
        double t = std::fmod(std::abs(theta), 2.0 * pi);
        if (t > pi) t = 2.0 * pi - t;
        return 2.0 * std::sin(t / 2.0) + (pi - t) * std::cos(t / 2.0);
    }
    }
    return 0.0;
}

ProfileVector screened_profile_integrals(double rho2, const QuadratureSpec& quad)
{
    quad.validate();
    if (!(rho2 > 0.0) || !std::isfinite(rho2)) throw DomainError("rho2 must be positive and finite");
    static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)handler_off;
    switch (quad.kronrod_points()) {
    case 15: return integrate_rule<15>(rho2, quad);
    case 21: return integrate_rule<21>(rho2, quad);
    case 31: return integrate_rule<31>(rho2, quad);
    case 41: return integrate_rule<41>(rho2, quad);
    case 51: return integrate_rule<51>(rho2, quad);
    default: return integrate_rule<61>(rho2, quad);
    }
}

ProfileVector cached_profile_integrals(double rho2, const QuadratureSpec& quad)
{
    const CacheKey key = make_key(rho2, quad);
    auto& c = cache();
    {
        std::shared_lock lock(c.mutex);
        auto it = c.table.find(key);
        if (it != c.table.end()) return it->second;
    }
    const ProfileVector v = screened_profile_integrals(std::get<0>(key), quad);
    std::unique_lock lock(c.mutex);
    c.table.emplace(key, v);
    return v;
}

void prefetch_profile_integrals(const std::vector<double>& rho2s, const QuadratureSpec& quad)
{
    std::vector<CacheKey> missing;
    {
        auto& c = cache();
        std::shared_lock lock(c.mutex);
        for (double r : rho2s) {
            CacheKey k = make_key(r, quad);
            if (!c.table.count(k)) missing.push_back(k);
        }
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());

    std::vector<ProfileVector> values(missing.size());
    std::vector<std::string> errors(missing.size());
    std::vector<double> worst(missing.size(), 0.0);
    const long n = static_cast<long>(missing.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            values[i] = screened_profile_integrals(std::get<0>(missing[i]), quad);
        } catch (const QuadratureError& e) {
            errors[i] = e.what();
            worst[i] = e.worst_estimate();
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (long i = 0; i < n; ++i)
        if (!errors[i].empty()) throw QuadratureError(errors[i], worst[i]);

    auto& c = cache();
    std::unique_lock lock(c.mutex);
    for (long i = 0; i < n; ++i) c.table.emplace(missing[i], values[i]);
}

std::size_t profile_cache_size()
{
    auto& c = cache();
    std::shared_lock lock(c.mutex);
    return c.table.size();
}

void clear_profile_cache()
{
    auto& c = cache();
    std::unique_lock lock(c.mutex);
    c.table.clear();
}

} // namespace trionlab::assembly
