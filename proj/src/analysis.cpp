#include "trionlab/analysis.hpp"
#include "trionlab/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace trionlab::analysis {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> theta_axis(int n)
{
    if (n < 3) throw DomainError("probability grid needs at least 3 points");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = -pi + 2.0 * pi * i / (n - 1);
    return t;
}

double trapz_weight(int i, int n, double h) { return (i == 0 || i == n - 1) ? 0.5 * h : h; }

double trapz(const ProbabilityGrid& g)
{
    const int n = static_cast<int>(g.theta.size());
    const double h = 2.0 * pi / (n - 1);
    double s = 0.0;
    if (g.values.cols() == 1) {
        for (int i = 0; i < n; ++i) s += trapz_weight(i, n, h) * g.values(i, 0);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += trapz_weight(i, n, h) * trapz_weight(j, n, h) * g.values(i, j);
    }
    return s;
}

void require_normalized(const Eigen::VectorXd& c, const Eigen::MatrixXd& S)
{
    if (c.size() != S.rows()) throw DomainError("coefficient vector does not match the basis");
    const double norm = c.dot(S * c);
    if (std::abs(norm - 1.0) > 1e-8) throw DomainError("state is not normalized (c^T S c != 1)");
}

void finish(ProbabilityGrid& g)
{
    g.raw_integral = trapz(g);
    if (!(g.raw_integral > 0.0)) throw NumericalError("probability grid integrates to zero");
    g.values /= g.raw_integral;
    g.values = g.values.cwiseMax(0.0);
}

// Angular density of one particle: rho(theta) = psi^T M psi, psi = {1, |sin(theta/2)|}.
Eigen::MatrixXd one_particle_moments(const Eigen::VectorXd& c, const BasisSpec& b)
{
    const int L = b.angular_count();
    const auto n = static_cast<Eigen::Index>(b.axial.alphas_i.size());
    Eigen::MatrixXd C(n, L), Sx(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (int l = 0; l < L; ++l) C(p, l) = c(p * L + l);
        for (Eigen::Index q = 0; q < n; ++q)
            Sx(p, q) = basis::gaussian_overlap_1d(b.axial.alphas_i[p], b.axial.alphas_i[q]);
    }
    return C.transpose() * Sx * C;
}

double one_particle_density(const Eigen::MatrixXd& M, double theta)
{
    const double s = std::abs(std::sin(theta / 2.0));
    if (M.rows() == 1) return M(0, 0);
    return M(0, 0) + 2.0 * M(0, 1) * s + M(1, 1) * s * s;
}

} // namespace

double ProbabilityGrid::integral() const { return trapz(*this); }

ProbabilityGrid trion_probability(const Eigen::VectorXd& coeffs, const BasisSpec& b, double r, int grid_size)
{
    b.validate();
    if (!b.two_particle()) throw DomainError("trion probability needs a two-particle basis");
    const Eigen::MatrixXd S = assembly::assemble_overlap(b);
    require_normalized(coeffs, S);

    const int L = b.angular_count();
    const auto nax = static_cast<Eigen::Index>(b.axial_count());
    Eigen::MatrixXd C(nax, L), ST(nax, nax);
    for (Eigen::Index p = 0; p < nax; ++p)
        for (int l = 0; l < L; ++l) C(p, l) = coeffs(p * L + l);
    for (Eigen::Index p = 0; p < nax; ++p)
        for (Eigen::Index q = 0; q < nax; ++q) ST(p, q) = S(p * L, q * L);  // S^C(1,1) = 1
    const Eigen::MatrixXd M = C.transpose() * ST * C;

    ProbabilityGrid g;
    g.theta = theta_axis(grid_size);
    g.r = r;
    g.model = b.model;
    g.method = "full";
    const int n = grid_size;
    g.values.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double t1 = g.theta[i], t2 = g.theta[j];
            const double phi[4] = {1.0, std::abs(std::sin(t1 / 2.0)), std::abs(std::sin(t2 / 2.0)),
                                   std::abs(std::sin((t1 - t2) / 2.0))};
            double v = 0.0;
            for (int l = 0; l < L; ++l)
                for (int lp = 0; lp < L; ++lp) v += phi[l] * phi[lp] * M(l, lp);
            g.values(i, j) = v / (4.0 * pi * pi);
        }
    finish(g);
    return g;
}

ProbabilityGrid exciton_probability(const Eigen::VectorXd& coeffs, const BasisSpec& b, double r, int grid_size)
{
    b.validate();
    if (b.two_particle()) throw DomainError("exciton probability needs a one-particle basis");
    require_normalized(coeffs, assembly::assemble_overlap(b));
    const Eigen::MatrixXd M = one_particle_moments(coeffs, b);

    ProbabilityGrid g;
    g.theta = theta_axis(grid_size);
    g.r = r;
    g.model = b.model;
    g.method = "exciton";
    g.values.resize(grid_size, 1);
    for (int i = 0; i < grid_size; ++i) g.values(i, 0) = one_particle_density(M, g.theta[i]);
    finish(g);
    return g;
}

ProbabilityGrid hf_probability(const Eigen::VectorXd& orbital, const BasisSpec& b, double r, int grid_size)
{
    b.validate();
    if (b.two_particle()) throw DomainError("the Hartree-Fock orbital lives in a one-particle basis");
    require_normalized(orbital, assembly::assemble_overlap(b));
    const Eigen::MatrixXd M = one_particle_moments(orbital, b);

    ProbabilityGrid g;
    g.theta = theta_axis(grid_size);
    g.r = r;
    g.model = b.model;
    g.method = "hf";
    std::vector<double> rho(grid_size);
    for (int i = 0; i < grid_size; ++i) rho[i] = one_particle_density(M, g.theta[i]);
    g.values.resize(grid_size, grid_size);
    for (int i = 0; i < grid_size; ++i)
        for (int j = 0; j < grid_size; ++j) g.values(i, j) = rho[i] * rho[j];
    finish(g);
    return g;
}

Eigen::MatrixXd hf_difference(const ProbabilityGrid& full, const ProbabilityGrid& hf)
{
    if (full.values.rows() != hf.values.rows() || full.values.cols() != hf.values.cols())
        throw DomainError("probability grids differ in size");
    Eigen::MatrixXd d(full.values.rows(), full.values.cols());
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < d.cols(); ++j) {
            const double pf = full.values(i, j);
            d(i, j) = pf < 1e-12 ? nan : 100.0 * (hf.values(i, j) - pf) / pf;
        }
    return d;
}

std::vector<double> linspace(double from, double to, int points)
{
    if (points < 1) throw DomainError("a grid needs at least one point");
    if (points == 1) return {from};
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = from + (to - from) * i / (points - 1);
    v.back() = to;
    return v;
}

std::vector<ModelRow> sweep_model_comparison(const ModelSweep& sw)
{
    for (double r : sw.radii)
        if (!(r > 0.0 && r <= 0.35)) throw DomainError("sweep radii must lie in (0, 0.35]");
    for (double s : sw.sigmas)
        if (!(s >= 0.0 && s <= 1.0)) throw DomainError("mass fractions must lie in [0, 1]");
    for (const auto& m : sw.methods)
        if (m != "full" && m != "hf") throw DomainError("unknown method '" + m + "'");

    const long nr = static_cast<long>(sw.radii.size());
    std::vector<std::vector<ModelRow>> per_r(nr);
#pragma omp parallel for schedule(dynamic)
    for (long ir = 0; ir < nr; ++ir) {
        const double r = sw.radii[ir];
        auto& out = per_r[ir];
        for (Model model : sw.models) {
            const auto bases = solver::ModelBases::presets(model);
            double ex = nan;
            std::string ex_err;
            try {
                ex = solver::exciton_energy(r, model, bases.exciton, sw.quad);
            } catch (const std::exception& e) {
                ex_err = e.what();
            }
            for (const auto& method : sw.methods) {
                if (method == "hf") {
                    ModelRow row{r, 0.0, model, "hf", Charge::Negative, ex, nan, nan, "ok"};
                    try {
                        if (!ex_err.empty()) throw NumericalError(ex_err);
                        const auto st = hf::scf(basis::preset_basis(basis::hf_preset(model)), r, {}, sw.quad);
                        row.E_T = st.E_T_HF;
                        row.E_B = ex - st.E_T_HF;
                        if (!st.converged) row.status = "scf not converged";
                    } catch (const std::exception& e) {
                        row.status = e.what();
                    }
                    out.push_back(row);
                    continue;
                }
                std::optional<solver::TrionProblem> problem;
                std::string perr = ex_err;
                if (perr.empty()) {
                    try {
                        problem.emplace(bases.trion, r, sw.quad);
                    } catch (const std::exception& e) {
                        perr = e.what();
                    }
                }
                for (double sigma : sw.sigmas)
                    for (Charge ch : sw.charges) {
                        ModelRow row{r, sigma, model, "full", ch, ex, nan, nan, "ok"};
                        try {
                            if (!perr.empty()) throw NumericalError(perr);
                            row.E_T = problem->ground_energy(sigma, ch);
                            row.E_B = ex - row.E_T;
                        } catch (const std::exception& e) {
                            row.status = e.what();
                        }
                        out.push_back(row);
                    }
            }
        }
    }
    std::vector<ModelRow> rows;
    for (auto& v : per_r) rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

EpsilonSweep sweep_epsilon(const tb::ChiralIndex& ch, const std::vector<double>& eps,
                           const tb::TightBindingParams& params, const tb::MassOptions& mass_opt,
                           const QuadratureSpec& quad)
{
    for (double e : eps)
        if (!(e >= 1.0)) throw DomainError("dielectric constants must be at least 1");
    EpsilonSweep out;
    out.masses = tb::effective_masses(ch, params, mass_opt);
    out.radius_A = tb::radius(ch, params.a);
    const auto bases = solver::ModelBases::presets(Model::TwoD);

    const long n = static_cast<long>(eps.size());
    out.rows.resize(n);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        EpsilonRow& row = out.rows[i];
        row.epsilon = eps[i];
        try {
            const auto u = units::effective_units(out.masses.mu, units::Environment{eps[i]});
            row.rydberg_eV = u.rydberg;
            row.bohr_A = u.bohr;
            row.r_aB = units::dimensionless_radius(out.radius_A, u);
            const auto res = solver::binding_energy(row.r_aB, 0.0, Charge::Negative, Model::TwoD, bases, quad);
            row.E_X = res.E_X;
            row.E_T = res.E_T;
            row.E_B = res.E_B;
            row.E_X_meV = 1000.0 * std::abs(units::to_physical_energy(res.E_X, u));
            row.E_B_meV = 1000.0 * units::to_physical_energy(res.E_B, u);
        } catch (const std::exception& e) {
            row.status = e.what();
            row.E_X = row.E_T = row.E_B = row.E_X_meV = row.E_B_meV = nan;
        }
    }

    std::vector<double> x, yb, yx;
    for (const auto& row : out.rows)
        if (row.status == "ok") {
            x.push_back(row.epsilon);
            yb.push_back(row.E_B_meV / 1000.0);
            yx.push_back(row.E_X_meV / 1000.0);
        }
    try {
        const auto f = fit::fit_power_law(x, yb);
        if (f.ok) out.trion_fit = f;
    } catch (const std::exception&) {
    }
    try {
        out.exciton_fit = fit::fit_log_log(x, yx);
    } catch (const std::exception&) {
    }
    return out;
}

SpeciesSweep sweep_species(double r_min_A, double r_max_A, const units::Environment& env,
                           const std::vector<Model>& models, const tb::TightBindingParams& params,
                           const tb::MassOptions& mass_opt, const QuadratureSpec& quad)
{
    env.validate();
    if (models.empty()) throw DomainError("at least one model is required");
    const auto species = tb::enumerate_species(r_min_A, r_max_A, params);
    SpeciesSweep out;
    const long n = static_cast<long>(species.size());
    out.rows.resize(n);

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        SpeciesRow& row = out.rows[i];
        row.chirality = species[i].chirality;
        row.radius_A = species[i].radius;
        for (auto& m : row.E_B_meV) m[0] = m[1] = nan;
        row.gap_pct[0] = row.gap_pct[1] = nan;
        try {
            row.masses = tb::effective_masses(row.chirality, params, mass_opt);
            const auto u = units::effective_units(row.masses.mu, env);
            row.rydberg_eV = u.rydberg;
            row.bohr_A = u.bohr;
            row.r_aB = units::dimensionless_radius(row.radius_A, u);
            for (Model model : models) {
                const int mi = model == Model::OneD ? 0 : 1;
                const auto bases = solver::ModelBases::presets(model);
                const double ex = solver::exciton_energy(row.r_aB, model, bases.exciton, quad);
                const solver::TrionProblem problem(bases.trion, row.r_aB, quad);
                const Charge charges[2] = {Charge::Negative, Charge::Positive};
                for (int c = 0; c < 2; ++c) {
                    const double eb = ex - problem.ground_energy(row.masses.sigma, charges[c]);
                    row.E_B_meV[mi][c] = 1000.0 * units::to_physical_energy(eb, u);
                }
                row.has_model[mi] = true;
            }
            if (row.has_model[0] && row.has_model[1])
                for (int c = 0; c < 2; ++c)
                    row.gap_pct[c] = 100.0 * (row.E_B_meV[1][c] - row.E_B_meV[0][c]) / row.E_B_meV[1][c];
            const int best = row.has_model[1] ? 1 : 0;
            row.detectable = row.E_B_meV[best][0] > detectability_meV;
        } catch (const std::exception& e) {
            row.status = e.what();
        }
    }

    double sum = 0.0;
    int count = 0;
    std::vector<double> rr, eb;
    for (const auto& row : out.rows) {
        if (row.status != "ok") continue;
        for (double g : row.gap_pct)
            if (std::isfinite(g)) {
                out.max_gap_pct = std::max(out.max_gap_pct, g);
                sum += g;
                ++count;
            }
        const int best = row.has_model[1] ? 1 : 0;
        if (std::isfinite(row.E_B_meV[best][0]) && row.E_B_meV[best][0] > 0.0) {
            rr.push_back(row.radius_A);
            eb.push_back(row.E_B_meV[best][0]);
        }
    }
    out.mean_gap_pct = count ? sum / count : nan;
    out.boundary_A = nan;
    if (rr.size() >= 2) {
        const auto f = fit::fit_log_log(rr, eb);
        if (f.slope != 0.0) out.boundary_A = std::exp((std::log(detectability_meV) - f.intercept) / f.slope);
    }
    return out;
}

} // namespace trionlab::analysis
