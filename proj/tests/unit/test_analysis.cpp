#include "trionlab/analysis.hpp"
#include "trionlab/cylinder_basis.hpp"
#include "trionlab/errors.hpp"
#include "trionlab/hartree_fock.hpp"
#include "trionlab/power_law_fit.hpp"
#include "trionlab/variational_solver.hpp"

#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <numbers>

using namespace trionlab;
using namespace trionlab::analysis;
using basis::PresetKind;

namespace {

constexpr double pi = std::numbers::pi;

struct TrionState {
    basis::BasisSpec basis;
    Eigen::VectorXd c;
};

TrionState ground_state(double r, double sigma = 0.0)
{
    const auto b = basis::at_radius(solver::ModelBases::presets(Model::TwoD).trion, r);
    const solver::TrionProblem prob(b, r, {});
    return {b, prob.solve(sigma, Charge::Negative).coefficients.col(0)};
}

double flatness(const ProbabilityGrid& g) { return g.values.maxCoeff() / g.values.minCoeff(); }

bool same_rows(const std::vector<ModelRow>& a, const std::vector<ModelRow>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const auto &x = a[n], &y = b[n];
        if (x.r != y.r || x.sigma != y.sigma || x.model != y.model || x.method != y.method || x.charge != y.charge ||
            x.E_X != y.E_X || x.E_T != y.E_T || x.E_B != y.E_B || x.status != y.status)
            return false;
    }
    return true;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("trion probability normalization and symmetry")
{
    const auto st = ground_state(0.1);
    const auto g = trion_probability(st.c, st.basis, 0.1, 101);
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.values.minCoeff() >= 0.0);
    const Eigen::Index n = g.values.rows();
    double asym = 0.0, inv = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            asym = std::max(asym, std::abs(g.values(i, j) - g.values(j, i)));
            inv = std::max(inv, std::abs(g.values(i, j) - g.values(n - 1 - i, n - 1 - j)));
        }
    CHECK(asym <= 1e-12 * g.values.maxCoeff());
    CHECK(inv <= 1e-12 * g.values.maxCoeff());
    CHECK(g.theta.front() == -pi);
    CHECK(g.theta.back() == pi);
}

TEST_CASE("smaller cylinders are more delocalised")
{
    const auto a = ground_state(0.05);
    const auto b = ground_state(0.25);
    CHECK(flatness(trion_probability(a.c, a.basis, 0.05, 61)) < flatness(trion_probability(b.c, b.basis, 0.25, 61)));
}

TEST_CASE("exciton probability")
{
    const double r = 0.1;
    const auto b = basis::at_radius(basis::preset_basis(PresetKind::Exciton2D), r);
    const auto m = assembly::assemble_exciton(b, r, {});
    const auto sp = solver::solve_generalized(m.K + m.U, m.S);
    const auto g = exciton_probability(sp.coefficients.col(0), b, r);
    CHECK(g.values.cols() == 1);
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.values.minCoeff() >= 0.0);
    CHECK_THROWS_AS(exciton_probability(2.0 * sp.coefficients.col(0), b, r), DomainError);
}

TEST_CASE("Hartree-Fock difference map")
{
    const double r = 0.1;
    const auto st = ground_state(r);
    const auto hs = hf::scf(basis::preset_basis(PresetKind::HF2D), r, {}, {});
    REQUIRE(hs.converged);
    const auto hb = basis::at_radius(basis::preset_basis(PresetKind::HF2D), r);
    const auto full = trion_probability(st.c, st.basis, r);
    const auto hfg = hf_probability(hs.orbital_coeffs, hb, r);
    CHECK(hfg.integral() == doctest::Approx(1.0).epsilon(1e-6));
    const Eigen::MatrixXd d = hf_difference(full, hfg);
    CHECK(d.minCoeff() >= -4.0);
    CHECK(d.maxCoeff() <= 6.0);
    Eigen::Index bi = 0, bj = 0;
    d.cwiseAbs().maxCoeff(&bi, &bj);
    double gap = std::abs(full.theta[bi] - full.theta[bj]);
    gap = std::min(gap, 2.0 * pi - gap);
    CHECK(gap <= pi / 8.0);
}

TEST_CASE("difference guard")
{
    ProbabilityGrid a, b;
    a.values = Eigen::MatrixXd::Zero(2, 2);
    b.values = Eigen::MatrixXd::Ones(2, 2);
    CHECK(std::isnan(hf_difference(a, b)(0, 0)));
    ProbabilityGrid c;
    c.values = Eigen::MatrixXd::Ones(3, 3);
    CHECK_THROWS_AS(hf_difference(a, c), DomainError);
}

TEST_CASE("model sweep")
{
    ModelSweep sw;
    sw.radii = {0.1, 0.3};
    sw.sigmas = {0.0, 0.8, 1.0};
    sw.methods = {"full", "hf"};
    const auto rows = sweep_model_comparison(sw);
    double full01[2] = {0, 0}, full03[2] = {0, 0}, s08 = 0, s10 = 0;
    int hf_rows = 0;
    for (const auto& row : rows) {
        CHECK(row.status == "ok");
        const int m = row.model == Model::TwoD ? 1 : 0;
        if (row.method == "full" && row.sigma == 0.0) (row.r == 0.1 ? full01 : full03)[m] = row.E_B;
        if (row.method == "full" && row.r == 0.1 && m == 1 && row.sigma == 0.8) s08 = row.E_B;
        if (row.method == "full" && row.r == 0.1 && m == 1 && row.sigma == 1.0) s10 = row.E_B;
    }
    for (const auto& row : rows)
        if (row.method == "hf") {
            ++hf_rows;
            CHECK(row.sigma == 0.0);
            const int m = row.model == Model::TwoD ? 1 : 0;
            CHECK(row.E_B < (row.r == 0.1 ? full01 : full03)[m]);
        }
    CHECK(hf_rows == 4);
    CHECK(std::abs(100.0 * (full01[1] - full01[0]) / full01[1] - 13.0) <= 2.0);
    CHECK(std::abs(100.0 * (full03[1] - full03[0]) / full03[1] - 42.0) <= 3.0);
    CHECK(std::abs(s08 - s10) / s10 < 0.10);
    ModelSweep bad;
    bad.radii = {0.5};
    CHECK_THROWS_AS(sweep_model_comparison(bad), DomainError);
}

TEST_CASE("sweeps identical across thread counts")
{
    ModelSweep sw;
    sw.radii = linspace(0.05, 0.3, 4);
    sw.methods = {"full", "hf"};
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = sweep_model_comparison(sw);
    omp_set_num_threads(3);
    const auto three = sweep_model_comparison(sw);
    omp_set_num_threads(saved);
    CHECK(same_rows(one, three));
    CHECK(same_rows(one, sweep_model_comparison(sw)));
}

TEST_CASE("epsilon sweep for (6,5)")
{
    const auto sw = sweep_epsilon({6, 5}, linspace(2.0, 5.0, 13), {}, {}, {});
    REQUIRE(sw.rows.size() == 13);
    CHECK(std::abs(sw.rows.front().E_B_meV - 132.0) <= 13.2);
    CHECK(std::abs(sw.rows.back().E_B_meV - 36.0) <= 3.6);
    REQUIRE(sw.trion_fit.has_value());
    CHECK(std::abs(sw.trion_fit->p + 1.56) <= 0.08);
    CHECK(std::abs((*sw.trion_fit)(3.5) * 1000.0 - 59.0) <= 0.05 * 59.0);
    REQUIRE(sw.exciton_fit.has_value());
    CHECK(std::abs(sw.exciton_fit->slope + 1.4) <= 0.1);
    CHECK_THROWS_AS(sweep_epsilon({6, 6}, {3.5}, {}, {}, {}), DomainError);
}

TEST_CASE("species sweep over a narrow window")
{
    const auto sw = sweep_species(3.6, 4.2, {3.5}, {Model::OneD, Model::TwoD}, {}, {}, {});
    bool found = false;
    for (const auto& row : sw.rows) {
        CHECK(row.status == "ok");
        CHECK(row.E_B_meV[1][0] > row.E_B_meV[0][0]);
        if (row.chirality == tb::ChiralIndex{6, 5}) {
            found = true;
            CHECK(row.detectable);
            CHECK(std::abs(row.E_B_meV[1][0] - 59.0) <= 3.0);
        }
    }
    CHECK(found);
}

TEST_CASE("linspace")
{
    const auto v = linspace(0.02, 0.3, 30);
    CHECK(v.size() == 30);
    CHECK(v.front() == 0.02);
    CHECK(v.back() == 0.3);
    CHECK(linspace(1.0, 2.0, 1) == std::vector<double>{1.0});
}

}

TEST_SUITE("power-law-fit") {

TEST_CASE("recovers exact power laws")
{
    std::vector<double> x, y;
    for (int n = 0; n < 13; ++n) {
        x.push_back(2.0 + 0.25 * n);
        y.push_back(0.372 * std::pow(x.back(), -1.56) + 0.00608);
    }
    const auto f = fit::fit_power_law(x, y);
    CHECK(f.ok);
    CHECK(f.A == doctest::Approx(0.372).epsilon(1e-6));
    CHECK(f.p == doctest::Approx(-1.56).epsilon(1e-6));
    CHECK(f.C == doctest::Approx(0.00608).epsilon(1e-5));
    CHECK(f.residual_norm < 1e-10);
    std::vector<double> yl;
    for (double v : x) yl.push_back(3.0 * std::pow(v, -1.4));
    const auto l = fit::fit_log_log(x, yl);
    CHECK(l.slope == doctest::Approx(-1.4).epsilon(1e-12));
    CHECK(std::exp(l.intercept) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fit input errors")
{
    CHECK_THROWS_AS(fit::fit_power_law({1.0, 2.0}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(fit::fit_log_log({1.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(fit::fit_log_log({-1.0, 2.0}, {1.0, 2.0}), DomainError);
}

}
