#include "trionlab/tb_bands.hpp"
#include "trionlab/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace trionlab::tb {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt3 = std::numbers::sqrt3;
// hbar^2 / m0 in eV*Angstrom^2 and hbar in eV*s (CODATA 2018).
constexpr double hbar2_over_m0 = 7.619964231070681;
constexpr double hbar_eVs = 6.582119569e-16;

Eigen::Vector2d lattice_a1(double a) { return {a * sqrt3 / 2.0, a / 2.0}; }
Eigen::Vector2d lattice_a2(double a) { return {a * sqrt3 / 2.0, -a / 2.0}; }

Eigen::Vector2d chiral_vector(const ChiralIndex& ch, double a)
{
    return ch.n * lattice_a1(a) + ch.m * lattice_a2(a);
}

// Geometry of the allowed line k.C = 2 pi mu.
struct Line {
    Eigen::Vector2d origin;  // foot of the perpendicular from K onto the line
    Eigen::Vector2d dir;     // unit vector along the tube axis
    int mu;
};

Line allowed_line(const ChiralIndex& ch, double a, int mu)
{
    const Eigen::Vector2d c = chiral_vector(ch, a);
    const Eigen::Vector2d chat = c.normalized();
    const Eigen::Vector2d dir{-chat.y(), chat.x()};
    const Eigen::Vector2d k = k_point(a);
    const double along = k.dot(dir);
    return {2.0 * pi * mu / c.norm() * chat + along * dir, dir, mu};
}

double gap_at(const Eigen::Vector2d& k, const TightBindingParams& p)
{
    return graphene_band(k, p, Branch::Conduction) - graphene_band(k, p, Branch::Valence);
}

// Second derivative of `band` along `dir` with one Richardson extrapolation.
double curvature(const Eigen::Vector2d& k0, const Eigen::Vector2d& dir, double h,
                 const TightBindingParams& p, Branch branch)
{
    auto central = [&](double step) {
        const double ep = graphene_band(k0 + step * dir, p, branch);
        const double e0 = graphene_band(k0, p, branch);
        const double em = graphene_band(k0 - step * dir, p, branch);
        return (ep - 2.0 * e0 + em) / (step * step);
    };
    return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

} // namespace

void ChiralIndex::validate() const
{
    if (m < 0 || n < m || (n == 0 && m == 0))
        throw DomainError("chiral index must satisfy n >= m >= 0 and (n,m) != (0,0), got " +
                          to_string());
}

ChiralIndex ChiralIndex::canonical(int n, int m)
{
    // (n,m), (m,n) and (-n,-m) describe the same tube up to mirror/orientation.
    if (n < 0 && m < 0) {
        n = -n;
        m = -m;
    }
    if (n < m) std::swap(n, m);
    ChiralIndex ch{n, m};
    ch.validate();
    return ch;
}

std::string ChiralIndex::to_string() const
{
    return "(" + std::to_string(n) + "," + std::to_string(m) + ")";
}

void TightBindingParams::validate() const
{
    if (!(t < 0.0)) throw DomainError("transfer integral t must be negative");
    if (!(s >= 0.0 && s < 1.0)) throw DomainError("overlap s must lie in [0,1)");
    if (!(a > 0.0)) throw DomainError("lattice constant must be positive");
}

double radius(const ChiralIndex& ch, double a)
{
    ch.validate();
    const double n = ch.n, m = ch.m;
    return a * std::sqrt(n * n + n * m + m * m) / (2.0 * pi);
}

double chiral_angle(const ChiralIndex& ch)
{
    ch.validate();
    const double n = ch.n, m = ch.m;
    return std::atan2(sqrt3 * m, 2.0 * n + m);
}

bool is_semiconducting(const ChiralIndex& ch)
{
    ch.validate();
    return (ch.n - ch.m) % 3 != 0;
}

Eigen::Vector2d k_point(double a)
{
    // b1 = 2pi/a (1/sqrt3, 1), b2 = 2pi/a (1/sqrt3, -1); K = (2 b1 + b2) / 3
    const double g = 2.0 * pi / a;
    const Eigen::Vector2d b1{g / sqrt3, g};
    const Eigen::Vector2d b2{g / sqrt3, -g};
    return (2.0 * b1 + b2) / 3.0;
}

double structure_factor(const Eigen::Vector2d& k, double a)
{
    const std::complex<double> f = 1.0 + std::polar(1.0, k.dot(lattice_a1(a))) +
                                   std::polar(1.0, k.dot(lattice_a2(a)));
    return std::abs(f);
}

double graphene_band(const Eigen::Vector2d& k, const TightBindingParams& p, Branch branch)
{
    const double w = structure_factor(k, p.a);
    // With t < 0 the (e2p - t w)/(1 - s w) branch is the upper one.
    if (branch == Branch::Conduction) return (p.e2p - p.t * w) / (1.0 - p.s * w);
    return (p.e2p + p.t * w) / (1.0 + p.s * w);
}

std::pair<int, int> translation_indices(const ChiralIndex& ch)
{
    ch.validate();
    const int dr = std::gcd(2 * ch.m + ch.n, 2 * ch.n + ch.m);
    return {(2 * ch.m + ch.n) / dr, -(2 * ch.n + ch.m) / dr};
}

BandEdge band_edge(const ChiralIndex& ch, const TightBindingParams& p, const MassOptions& opt)
{
    p.validate();
    if (!is_semiconducting(ch))
        throw DomainError("species " + ch.to_string() + " is metallic; no band gap");
    if (opt.samples_per_line < 3 || !(opt.step > 0.0))
        throw DomainError("mass options need >= 3 samples and a positive step");

    const Eigen::Vector2d c = chiral_vector(ch, p.a);
    const double k_over_line = k_point(p.a).dot(c) / (2.0 * pi);
    const int mu0 = static_cast<int>(std::lround(k_over_line));
    // Half the K-K' spacing on either side of the foot of K, so only the K valley is seen.
    const double half_width = 0.5 * k_point(p.a).norm();

    double best_gap = std::numeric_limits<double>::infinity();
    Line best_line{};
    double best_s = 0.0;
    double best_lo = 0.0, best_hi = 0.0;
    for (int mu = mu0 - 1; mu <= mu0 + 1; ++mu) {
        const Line line = allowed_line(ch, p.a, mu);
        const int n = opt.samples_per_line;
        const double ds = 2.0 * half_width / (n - 1);
        int arg = 0;
        double line_best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double s = -half_width + i * ds;
            const double g = gap_at(line.origin + s * line.dir, p);
            if (g < line_best) {
                line_best = g;
                arg = i;
            }
        }
        if (line_best < best_gap) {
            if (arg == 0 || arg == n - 1)
                throw NumericalError("band-edge search on " + ch.to_string() +
                                     " did not bracket a minimum");
            best_gap = line_best;
            best_line = line;
            best_s = -half_width + arg * ds;
            best_lo = best_s - ds;
            best_hi = best_s + ds;
        }
    }

    constexpr int bits = std::numeric_limits<double>::digits / 2 + 4;
    auto on_line = [&](double s) -> Eigen::Vector2d { return best_line.origin + s * best_line.dir; };
    const double s_c = boost::math::tools::brent_find_minima(
                           [&](double s) { return graphene_band(on_line(s), p, Branch::Conduction); },
                           best_lo, best_hi, bits)
                           .first;
    const double s_v = boost::math::tools::brent_find_minima(
                           [&](double s) { return -graphene_band(on_line(s), p, Branch::Valence); },
                           best_lo, best_hi, bits)
                           .first;

    BandEdge edge;
    edge.subband = best_line.mu;
    edge.chiral_angle = chiral_angle(ch);
    edge.k_edge = on_line(s_c);
    edge.conduction_min = graphene_band(on_line(s_c), p, Branch::Conduction);
    edge.valence_max = graphene_band(on_line(s_v), p, Branch::Valence);
    edge.gap = edge.conduction_min - edge.valence_max;

    // Stepping h in the reference coordinate moves h / cos(theta) along the line.
    double h = opt.step;
    if (opt.axis == MassAxis::ZigzagReference) h /= std::cos(edge.chiral_angle);
    const double scale = opt.axis == MassAxis::ZigzagReference
                             ? std::pow(std::cos(edge.chiral_angle), 2)
                             : 1.0;
    const double d2c = curvature(on_line(s_c), best_line.dir, h, p, Branch::Conduction) / scale;
    const double d2v = curvature(on_line(s_v), best_line.dir, h, p, Branch::Valence) / scale;
    if (!(d2c > 0.0) || !(d2v < 0.0))
        throw NumericalError("band edge of " + ch.to_string() + " is not an extremum");

    auto& ms = edge.masses;
    ms.m_e = hbar2_over_m0 / d2c;
    ms.m_h = -hbar2_over_m0 / d2v;
    ms.mu = 1.0 / (1.0 / ms.m_e + 1.0 / ms.m_h);
    ms.sigma = ms.m_e / ms.m_h;
    return edge;
}

EffectiveMasses effective_masses(const ChiralIndex& ch, const TightBindingParams& p,
                                 const MassOptions& opt)
{
    return band_edge(ch, p, opt).masses;
}

double fermi_velocity(const TightBindingParams& p)
{
    p.validate();
    const Eigen::Vector2d k = k_point(p.a);
    const Eigen::Vector2d dir = -k.normalized();  // towards Gamma
    // Half the direct gap over the distance from K; the overlap enters only at O(dk^2)
    // and cancels in the difference, so the sequence converges quickly.
    auto slope = [&](double dk) { return gap_at(k + dk * dir, p) / (2.0 * dk); };
    double dk = 1e-2;
    double prev = slope(dk);
    double extrapolated = prev;
    for (int it = 0; it < 12; ++it) {
        dk /= 2.0;
        const double cur = slope(dk);
        extrapolated = (4.0 * cur - prev) / 3.0;
        if (std::abs(cur - prev) < 1e-12 * std::abs(cur)) break;
        prev = cur;
    }
    return extrapolated / hbar_eVs * 1e-10;
}

std::vector<Species> enumerate_species(double r_min, double r_max, const TightBindingParams& p)
{
    p.validate();
    if (!(r_min > 0.0) || !(r_min < r_max))
        throw DomainError("species enumeration needs 0 < r_min < r_max");
    std::vector<Species> out;
    // radius >= a n / (2 pi) for n >= m >= 0
    const int n_max = static_cast<int>(std::ceil(2.0 * pi * r_max / p.a)) + 1;
    for (int n = 1; n <= n_max; ++n) {
        for (int m = 0; m <= n; ++m) {
            const ChiralIndex ch{n, m};
            if (!is_semiconducting(ch)) continue;
            const double r = radius(ch, p.a);
            if (r >= r_min && r <= r_max) out.push_back({ch, r});
        }
    }
    std::sort(out.begin(), out.end(), [](const Species& x, const Species& y) {
        if (x.radius != y.radius) return x.radius < y.radius;
        if (x.chirality.n != y.chirality.n) return x.chirality.n < y.chirality.n;
        return x.chirality.m < y.chirality.m;
    });
    return out;
}

std::vector<DispersionPoint> line_dispersion(const ChiralIndex& ch, const TightBindingParams& p,
                                             int subband, double half_width, int points)
{
    p.validate();
    ch.validate();
    if (points < 2 || !(half_width > 0.0)) throw DomainError("dispersion needs >= 2 points");
    const Line line = allowed_line(ch, p.a, subband);
    std::vector<DispersionPoint> out;
    out.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double s = -half_width + 2.0 * half_width * i / (points - 1);
        const Eigen::Vector2d k = line.origin + s * line.dir;
        out.push_back({s, graphene_band(k, p, Branch::Valence), graphene_band(k, p, Branch::Conduction)});
    }
    return out;
}

} // namespace trionlab::tb
