#include "trionlab/matrix_assembly.hpp"
#include "trionlab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace trionlab::assembly {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inv_4pi2 = 1.0 / (4.0 * pi * pi);

using basis::AngularSet;
using basis::BasisSpec;

// Profile coefficients of the angular marginal of phi_l phi_l' (without 1/4pi^2) for
// the attraction on particle 1, the attraction on particle 2 and the repulsion.
using Coeffs = ProfileVector;
using Table = std::array<std::array<Coeffs, 4>, 4>;

constexpr double TW = 2.0 * pi;

Table make_table(const std::array<std::pair<std::pair<int, int>, Coeffs>, 10>& entries)
{
    Table t{};
    for (const auto& [lp, c] : entries) {
        t[lp.first - 1][lp.second - 1] = c;
        t[lp.second - 1][lp.first - 1] = c;
    }
    return t;
}

const Table& attraction1_table()
{
    static const Table t = make_table({{
        {{1, 1}, {TW, 0, 0, 0}},
        {{1, 2}, {0, TW, 0, 0}},
        {{1, 3}, {4, 0, 0, 0}},
        {{1, 4}, {4, 0, 0, 0}},
        {{2, 2}, {0, 0, TW, 0}},
        {{2, 3}, {0, 4, 0, 0}},
        {{2, 4}, {0, 4, 0, 0}},
        {{3, 3}, {pi, 0, 0, 0}},
        {{3, 4}, {0, 0, 0, 1}},
        {{4, 4}, {pi, 0, 0, 0}},
    }});
    return t;
}

const Table& attraction2_table()
{
    // relabel electrons: 2 <-> 3
    static const Table t = [] {
        const int swap[4] = {0, 2, 1, 3};
        Table out{};
        const Table& a1 = attraction1_table();
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m) out[l][m] = a1[swap[l]][swap[m]];
        return out;
    }();
    return t;
}

const Table& repulsion_table()
{
    static const Table t = make_table({{
        {{1, 1}, {TW, 0, 0, 0}},
        {{1, 2}, {4, 0, 0, 0}},
        {{1, 3}, {4, 0, 0, 0}},
        {{1, 4}, {0, TW, 0, 0}},
        {{2, 2}, {pi, 0, 0, 0}},
        {{2, 3}, {0, 0, 0, 1}},
        {{2, 4}, {0, 4, 0, 0}},
        {{3, 3}, {pi, 0, 0, 0}},
        {{3, 4}, {0, 4, 0, 0}},
        {{4, 4}, {0, 0, TW, 0}},
    }});
    return t;
}

double dot(const Coeffs& c, const ProfileVector& b)
{
    return c[0] * b[0] + c[1] * b[1] + c[2] * b[2] + c[3] * b[3];
}

void require_radius(double r)
{
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cylinder radius must be positive");
}

void require_two_particle(const BasisSpec& b)
{
    b.validate();
    if (!b.two_particle()) throw DomainError("a two-particle basis is required");
}

void require_one_particle(const BasisSpec& b)
{
    b.validate();
    if (b.two_particle()) throw DomainError("a one-particle basis is required");
}

// Axial data for one ordered pair of three-Gaussian products.
struct AxialPair {
    double a, b, c, det;
};

struct Layout {
    std::size_t n1, n2, n3, nax;
    int L;
};

Layout layout(const BasisSpec& b)
{
    return {b.axial.alphas_i.size(), b.axial.alphas_j.size(), b.axial.alphas_k.size(), b.axial_count(),
            b.angular_count()};
}

void axial_split(const Layout& lay, std::size_t p, std::size_t& i, std::size_t& j, std::size_t& k)
{
    k = p % lay.n3;
    j = (p / lay.n3) % lay.n2;
    i = p / (lay.n3 * lay.n2);
}

AxialPair axial_pair(const BasisSpec& basis, const Layout& lay, std::size_t p, std::size_t q)
{
    std::size_t i, j, k, ip, jp, kp;
    axial_split(lay, p, i, j, k);
    axial_split(lay, q, ip, jp, kp);
    const auto& ax = basis.axial;
    AxialPair out{};
    out.a = ax.alphas_i[i] + ax.alphas_i[ip];
    out.b = ax.alphas_j[j] + ax.alphas_j[jp];
    out.c = ax.alphas_k[k] + ax.alphas_k[kp];
    out.det = out.a * out.b + out.b * out.c + out.c * out.a;
    return out;
}

// Screened widths for the three potential terms: w and rho2 = r^2 det / w.
struct Widths {
    std::array<double, 3> w;
    std::array<double, 3> rho2;
};

Widths widths(const AxialPair& ap, double r)
{
    Widths out{};
    out.w = {ap.b + ap.c, ap.a + ap.c, ap.a + ap.b};
    for (int t = 0; t < 3; ++t) out.rho2[t] = r * r * ap.det / out.w[t];
    return out;
}

double trion_potential(const Widths& wd, const std::array<ProfileVector, 3>& bv, int l, int lp,
                       bool attraction, bool repulsion)
{
    double u = 0.0;
    const Table* tables[3] = {&attraction1_table(), &attraction2_table(), &repulsion_table()};
    for (int t = 0; t < 3; ++t) {
        if (t < 2 && !attraction) continue;
        if (t == 2 && !repulsion) continue;
        const double sign = t < 2 ? -1.0 : 1.0;
        const double pref = 2.0 * std::sqrt(pi) / std::sqrt(wd.w[t]) * inv_4pi2;
        u += sign * pref * dot((*tables[t])[l - 1][lp - 1], bv[t]);
    }
    return u;
}

std::string index_text(const BasisSpec& basis, std::size_t row)
{
    if (!basis.two_particle())
        return "(" + std::to_string(row / basis.angular_count()) + "," +
               std::to_string(row % basis.angular_count() + 1) + ")";
    const TrionIndex t = decode_trion_index(basis, row);
    return "(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," + std::to_string(t.k) + "," +
           std::to_string(t.l) + ")";
}

double one_particle_overlap(const BasisSpec& b, std::size_t p, std::size_t q)
{
    const int L = b.angular_count();
    const double a = b.axial.alphas_i[p / L], ap = b.axial.alphas_i[q / L];
    const int l = static_cast<int>(p % L) + 1, lp = static_cast<int>(q % L) + 1;
    return basis::gaussian_overlap_1d(a, ap) * basis::exciton_angular_overlap(l, lp);
}

// Degree of |sin(theta/2)| in the product of two one-particle angular functions.
int product_degree(const BasisSpec& b, std::size_t p, std::size_t q)
{
    const int L = b.angular_count();
    return static_cast<int>(p % L) + static_cast<int>(q % L);
}

// Marginal coefficients for (f1 f2) products of degrees d1, d2 under the repulsion.
Coeffs hartree_coeffs(int d1, int d2)
{
    if (d1 > d2) std::swap(d1, d2);
    if (d1 == 0 && d2 == 0) return {TW, 0, 0, 0};
    if (d1 == 0 && d2 == 1) return {4, 0, 0, 0};
    if (d1 == 0 && d2 == 2) return {pi, 0, 0, 0};
    if (d1 == 1 && d2 == 1) return {0, 0, 0, 1};
    if (d1 == 1 && d2 == 2) return {8.0 / 3.0, 0, -4.0 / 3.0, 0};
    return {3.0 * pi / 4.0, 0, -pi / 2.0, 0};
}

template <typename Fn>
void fill_upper_parallel(Matrix& m, Fn&& element)
{
    const long n = m.rows();
    std::vector<std::string> errors(static_cast<std::size_t>(n));
    std::vector<double> worst(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (long p = 0; p < n; ++p) {
        try {
            for (long q = p; q < n; ++q) m(p, q) = element(p, q);
        } catch (const QuadratureError& e) {
            errors[p] = e.what();
            worst[p] = e.worst_estimate();
        } catch (const std::exception& e) {
            errors[p] = e.what();
        }
    }
    for (long p = 0; p < n; ++p)
        if (!errors[p].empty()) throw QuadratureError(errors[p], worst[p]);
    for (long p = 0; p < n; ++p)
        for (long q = 0; q < p; ++q) m(p, q) = m(q, p);
}

} // namespace

TrionIndex decode_trion_index(const BasisSpec& basis, std::size_t row)
{
    const Layout lay = layout(basis);
    if (row >= basis.size()) throw DomainError("basis index out of range");
    TrionIndex t{};
    t.l = static_cast<int>(row % lay.L) + 1;
    axial_split(lay, row / lay.L, t.i, t.j, t.k);
    return t;
}

std::size_t encode_trion_index(const BasisSpec& basis, const TrionIndex& t)
{
    const Layout lay = layout(basis);
    return ((t.i * lay.n2 + t.j) * lay.n3 + t.k) * lay.L + static_cast<std::size_t>(t.l - 1);
}

double mixed_weight(double sigma, Charge charge)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("mass fraction must be non-negative");
    if (charge == Charge::Positive) {
        if (sigma == 0.0) throw DomainError("positive trion needs sigma > 0 (1/sigma undefined)");
        sigma = 1.0 / sigma;
    }
    return 2.0 * sigma / (1.0 + sigma);
}

Matrix assemble_overlap(const BasisSpec& basis)
{
    basis.validate();
    const auto n = static_cast<Eigen::Index>(basis.size());
    Matrix S(n, n);
    if (!basis.two_particle()) {
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = 0; q < n; ++q) S(p, q) = one_particle_overlap(basis, p, q);
        return S;
    }
    const Layout lay = layout(basis);
    for (std::size_t p = 0; p < lay.nax; ++p)
        for (std::size_t q = 0; q < lay.nax; ++q) {
            const AxialPair ap = axial_pair(basis, lay, p, q);
            const double st = pi / std::sqrt(ap.det);
            for (int l = 1; l <= lay.L; ++l)
                for (int lp = 1; lp <= lay.L; ++lp)
                    S(p * lay.L + l - 1, q * lay.L + lp - 1) = st * basis::angular_kernels(l, lp).overlap;
        }
    return S;
}

KineticParts assemble_kinetic_parts(const BasisSpec& basis, double r)
{
    require_two_particle(basis);
    require_radius(r);
    const Layout lay = layout(basis);
    const auto n = static_cast<Eigen::Index>(basis.size());
    KineticParts out{Matrix(n, n), Matrix(n, n)};
    const double inv_r2 = 1.0 / (r * r);
    const auto& ax = basis.axial;
    for (std::size_t p = 0; p < lay.nax; ++p) {
        std::size_t i, j, k;
        axial_split(lay, p, i, j, k);
        for (std::size_t q = 0; q < lay.nax; ++q) {
            std::size_t ip, jp, kp;
            axial_split(lay, q, ip, jp, kp);
            const double ai = ax.alphas_i[i], aip = ax.alphas_i[ip];
            const double aj = ax.alphas_j[j], ajp = ax.alphas_j[jp];
            const double ak = ax.alphas_k[k], akp = ax.alphas_k[kp];
            const auto kijk = basis::axial_kernels(ai, aip, aj, ajp, ak, akp);
            const auto kjik = basis::axial_kernels(aj, ajp, ai, aip, ak, akp);
            for (int l = 1; l <= lay.L; ++l)
                for (int lp = 1; lp <= lay.L; ++lp) {
                    const auto ang = basis::angular_kernels(l, lp);
                    const Eigen::Index row = p * lay.L + l - 1, col = q * lay.L + lp - 1;
                    out.base(row, col) =
                        kijk.overlap * ang.kinetic * inv_r2 + (kijk.kinetic + kjik.kinetic) * ang.overlap;
                    out.mixed(row, col) =
                        kijk.overlap * ang.kinetic_mixed * inv_r2 + kijk.kinetic_mixed * ang.overlap;
                }
        }
    }
    return out;
}

Matrix assemble_kinetic(const BasisSpec& basis, double sigma, double r, Charge charge)
{
    const double c = mixed_weight(sigma, charge);
    KineticParts parts = assemble_kinetic_parts(basis, r);
    if (c == 0.0) return parts.base;
    return parts.base + c * parts.mixed;
}

double potential_element(PotentialKind kind, std::size_t row, std::size_t col, const BasisSpec& basis,
                         double r, const QuadratureSpec& quad)
{
    basis.validate();
    require_radius(r);
    quad.validate();
    if (row >= basis.size() || col >= basis.size()) throw DomainError("basis index out of range");
    if (!basis.two_particle()) {
        if (kind == PotentialKind::Repulsion) throw DomainError("a one-particle basis has no repulsion");
        const int L = basis.angular_count();
        const double a = basis.axial.alphas_i[row / L] + basis.axial.alphas_i[col / L];
        const ProfileVector bv = cached_profile_integrals(r * r * a, quad);
        return -2.0 * bv[product_degree(basis, row, col)];
    }
    const Layout lay = layout(basis);
    const AxialPair ap = axial_pair(basis, lay, row / lay.L, col / lay.L);
    const Widths wd = widths(ap, r);
    std::array<ProfileVector, 3> bv{};
    const bool att = kind == PotentialKind::Attraction;
    for (int t = 0; t < 3; ++t)
        if ((t < 2) == att) bv[t] = cached_profile_integrals(wd.rho2[t], quad);
    return trion_potential(wd, bv, static_cast<int>(row % lay.L) + 1, static_cast<int>(col % lay.L) + 1,
                           att, !att);
}

Matrix assemble_potential(const BasisSpec& basis, double r, const QuadratureSpec& quad)
{
    basis.validate();
    require_radius(r);
    quad.validate();
    const auto n = static_cast<Eigen::Index>(basis.size());
    Matrix U(n, n);

    if (!basis.two_particle()) {
        std::vector<double> keys;
        for (double a : basis.axial.alphas_i)
            for (double b : basis.axial.alphas_i) keys.push_back(r * r * (a + b));
        prefetch_profile_integrals(keys, quad);
        fill_upper_parallel(U, [&](long p, long q) {
            try {
                return potential_element(PotentialKind::Attraction, p, q, basis, r, quad);
            } catch (const QuadratureError& e) {
                throw QuadratureError(std::string(e.what()) + " at element " + index_text(basis, p) + " x " +
                                          index_text(basis, q),
                                      e.worst_estimate());
            }
        });
        return U;
    }

    const Layout lay = layout(basis);
    const std::size_t nax = lay.nax;
    std::vector<Widths> wd(nax * nax);
    std::vector<double> keys;
    keys.reserve(3 * nax * nax);
    for (std::size_t p = 0; p < nax; ++p)
        for (std::size_t q = 0; q < nax; ++q) {
            wd[p * nax + q] = widths(axial_pair(basis, lay, p, q), r);
            for (double k : wd[p * nax + q].rho2) keys.push_back(k);
        }
    prefetch_profile_integrals(keys, quad);

    std::vector<std::array<ProfileVector, 3>> bv(nax * nax);
    for (std::size_t pq = 0; pq < nax * nax; ++pq)
        for (int t = 0; t < 3; ++t) bv[pq][t] = cached_profile_integrals(wd[pq].rho2[t], quad);

    fill_upper_parallel(U, [&](long row, long col) {
        const std::size_t pq = (row / lay.L) * nax + col / lay.L;
        return trion_potential(wd[pq], bv[pq], static_cast<int>(row % lay.L) + 1,
                               static_cast<int>(col % lay.L) + 1, true, true);
    });
    return U;
}

MatrixTriple assemble_trion(const BasisSpec& basis, double sigma, double r, Charge charge,
                            const QuadratureSpec& quad)
{
    return {assemble_overlap(basis), assemble_kinetic(basis, sigma, r, charge),
            assemble_potential(basis, r, quad)};
}

MatrixTriple assemble_exciton(const BasisSpec& basis, double r, const QuadratureSpec& quad)
{
    require_one_particle(basis);
    require_radius(r);
    const auto n = static_cast<Eigen::Index>(basis.size());
    const int L = basis.angular_count();
    MatrixTriple out{assemble_overlap(basis), Matrix(n, n), Matrix()};
    const double inv_r2 = 1.0 / (r * r);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) {
            const double a = basis.axial.alphas_i[p / L], ap = basis.axial.alphas_i[q / L];
            const int l = static_cast<int>(p % L) + 1, lp = static_cast<int>(q % L) + 1;
            out.K(p, q) = basis::gaussian_kinetic_1d(a, ap) * basis::exciton_angular_overlap(l, lp) +
                          basis::gaussian_overlap_1d(a, ap) * basis::exciton_angular_kinetic(l, lp) * inv_r2;
        }
    out.U = assemble_potential(basis, r, quad);
    return out;
}

RepulsionTensor assemble_repulsion_tensor(const BasisSpec& basis, double r, const QuadratureSpec& quad)
{
    require_one_particle(basis);
    require_radius(r);
    quad.validate();
    const std::size_t n = basis.size();
    const int L = basis.angular_count();
    auto expo = [&](std::size_t p) { return basis.axial.alphas_i[p / L]; };

    std::vector<double> keys;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    const double A = expo(a) + expo(b), B = expo(c) + expo(d);
                    keys.push_back(r * r * A * B / (A + B));
                }
    prefetch_profile_integrals(keys, quad);

    RepulsionTensor t;
    t.n = n;
    const auto nn = static_cast<Eigen::Index>(n * n);
    t.values.resize(nn, nn);
    for (Eigen::Index row = 0; row < nn; ++row) {
        const std::size_t a = row / n, b = row % n;
        const double A = expo(a) + expo(b);
        const int d1 = product_degree(basis, a, b);
        for (Eigen::Index col = 0; col < nn; ++col) {
            const std::size_t c = col / n, d = col % n;
            const double B = expo(c) + expo(d);
            const double w = A + B;
            const ProfileVector bv = cached_profile_integrals(r * r * A * B / w, quad);
            t.values(row, col) =
                2.0 * std::sqrt(pi) / std::sqrt(w) * dot(hartree_coeffs(d1, product_degree(basis, c, d)), bv);
        }
    }
    return t;
}

void write_matrix(std::ostream& out, const Matrix& m)
{
    if (m.rows() != m.cols()) throw DomainError("only square matrices can be written");
    out << m.rows() << " rows symmetric\n";
    char buf[40];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << (j ? " " : "") << buf;
        }
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw DomainError("empty matrix stream");
    std::istringstream head(line);
    long n = -1;
    std::string w1, w2;
    head >> n >> w1 >> w2;
    if (n < 0 || w1 != "rows" || w2 != "symmetric") throw DomainError("bad matrix header: " + line);
    Matrix m(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= i; ++j) {
            if (!(in >> m(i, j))) throw DomainError("truncated matrix data");
            m(j, i) = m(i, j);
        }
    return m;
}

} // namespace trionlab::assembly
