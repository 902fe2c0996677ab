// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exit status is the number of failed criteria.

#include "oracles.hpp"

#include "trionlab/analysis.hpp"
#include "trionlab/cylinder_basis.hpp"
#include "trionlab/effective_units.hpp"
#include "trionlab/hartree_fock.hpp"
#include "trionlab/matrix_assembly.hpp"
#include "trionlab/tb_bands.hpp"
#include "trionlab/variational_solver.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace trionlab;
using assembly::Charge;
using basis::Model;
using basis::PresetKind;

namespace {

struct Report {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const char* fmt, double a = 0, double b = 0, double c = 0)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, fmt, a, b, c);
        details.push_back(std::string(ok ? "ok   " : "MISS ") + buf);
        pass = pass && ok;
    }
};

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

double binding(double r, Model model)
{
    return solver::binding_energy(r, 0.0, Charge::Negative, model, solver::ModelBases::presets(model), {}).E_B;
}

Report criterion1()
{
    Report rep;
    const auto m = tb::effective_masses({6, 5}, {});
    const auto u = units::effective_units(m.mu, {3.5});
    const double r = units::dimensionless_radius(tb::radius({6, 5}), u);
    const double EB = binding(r, Model::TwoD);
    const double meV = 1000.0 * units::to_physical_energy(EB, u);
    rep.check(within(m.m_e, 0.0803, 0.002), "m_e = %.5f (0.0803 +- 0.002)", m.m_e);
    rep.check(within(m.m_h, 0.0866, 0.002), "m_h = %.5f (0.0866 +- 0.002)", m.m_h);
    rep.check(within(m.mu, 0.0417, 0.001), "mu = %.5f (0.0417 +- 0.001)", m.mu);
    rep.check(within(u.rydberg, 0.0462, 0.0005), "Ry* = %.5f eV (0.0462 +- 0.0005)", u.rydberg);
    rep.check(within(u.bohr, 44.5, 0.5), "a_B* = %.3f A (44.5 +- 0.5)", u.bohr);
    rep.check(within(r, 0.084, 0.001), "r = %.5f a_B* (0.084 +- 0.001)", r);
    rep.check(within(EB, 1.28, 0.03), "E_B = %.4f Ry* (1.28 +- 0.03)", EB);
    rep.check(within(meV, 59.0, 3.0), "E_B = %.2f meV (59 +- 3)", meV);
    return rep;
}

Report criterion2()
{
    Report rep;
    for (auto [r, target, tol] : {std::tuple{0.1, 13.0, 2.0}, std::tuple{0.3, 42.0, 3.0}}) {
        const double e1 = binding(r, Model::OneD), e2 = binding(r, Model::TwoD);
        const double gap = 100.0 * (e2 - e1) / e2;
        char fmt[96];
        std::snprintf(fmt, sizeof fmt, "r = %.1f: gap = %%.2f %%%% (%.0f +- %.0f pp)", r, target, tol);
        rep.check(within(gap, target, tol), fmt, gap);
    }
    return rep;
}

Report criterion3()
{
    Report rep;
    const double r = 0.1;
    const auto b = solver::ModelBases::presets(Model::TwoD);
    const double EX = solver::exciton_energy(r, Model::TwoD, b.exciton, {});
    const solver::TrionProblem prob(basis::at_radius(b.trion, r), r, {});
    const double E0 = EX - prob.ground_energy(0.0, Charge::Negative);
    double worst = 0.0, at = 0.0;
    for (int n = 1; n <= 20; ++n) {
        const double s = 0.05 * n;
        const double dev = 100.0 * std::abs(EX - prob.ground_energy(s, Charge::Negative) - E0) / E0;
        if (dev > worst) {
            worst = dev;
            at = s;
        }
    }
    rep.check(worst <= 4.2, "max |E_B(sigma) - E_B(0)| / E_B(0) = %.3f %% at sigma = %.2f (<= 4.2 %%)", worst, at);
    return rep;
}

Report criterion4()
{
    Report rep;
    const auto bases = solver::ModelBases::presets(Model::TwoD);
    const auto hfb = basis::preset_basis(PresetKind::HF2D);
    std::vector<double> ratios;
    bool converged = true;
    for (int n = 0; n < 6; ++n) {
        const double r = 0.05 + 0.05 * n;
        const auto hf = hf::hf_binding_energy(r, Model::TwoD, bases.exciton, hfb, {});
        converged = converged && hf.converged;
        ratios.push_back(hf.E_B / binding(r, Model::TwoD));
        rep.details.push_back("     r = " + std::to_string(r).substr(0, 4) + ": E_B^HF / E_B = " + std::to_string(ratios.back()));
    }
    bool monotone = true;
    for (std::size_t n = 1; n < ratios.size(); ++n) monotone = monotone && ratios[n] > ratios[n - 1];
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    rep.check(converged, "all SCF runs converged");
    rep.check(within(ratios.back(), 0.60, 0.05), "ratio at r = 0.3: %.4f (0.60 +- 0.05)", ratios.back());
    rep.check(monotone, "ratio increases with r on [0.05, 0.3]");
    rep.check(lo >= 0.4 - 0.1, "minimum ratio %.4f (>= 0.4 within 0.1)", lo);
    return rep;
}

Report criterion5()
{
    Report rep;
    const auto sw = analysis::sweep_epsilon({6, 5}, analysis::linspace(2.0, 5.0, 13), {}, {}, {});
    rep.check(within(sw.rows.front().E_B_meV, 132.0, 13.0), "E_B(eps = 2) = %.2f meV (132 +- 13)", sw.rows.front().E_B_meV);
    rep.check(within(sw.rows.back().E_B_meV, 36.0, 4.0), "E_B(eps = 5) = %.2f meV (36 +- 4)", sw.rows.back().E_B_meV);
    rep.check(sw.trion_fit && within(sw.trion_fit->p, -1.56, 0.08), "trion fit p = %.4f (-1.56 +- 0.08)",
              sw.trion_fit ? sw.trion_fit->p : NAN);
    rep.check(sw.exciton_fit && within(sw.exciton_fit->slope, -1.4, 0.1), "exciton fit exponent = %.4f (-1.4 +- 0.1)",
              sw.exciton_fit ? sw.exciton_fit->slope : NAN);
    return rep;
}

const analysis::SpeciesSweep& species_sweep()
{
    static const auto sw =
        analysis::sweep_species(3.0, 15.0, {3.5}, {Model::OneD, Model::TwoD}, {}, {}, {});
    return sw;
}

Report criterion6()
{
    Report rep;
    const auto& sw = species_sweep();
    int failed = 0;
    bool six_five = false;
    for (const auto& row : sw.rows) {
        if (row.status != "ok") ++failed;
        if (row.chirality == tb::ChiralIndex{6, 5}) six_five = row.detectable;
    }
    rep.check(failed == 0, "%.0f species, %.0f failed", static_cast<double>(sw.rows.size()), failed);
    rep.check(within(sw.max_gap_pct, 15.0, 2.0), "max 2D-vs-1D improvement = %.2f %% (15 +- 2)", sw.max_gap_pct);
    rep.check(within(sw.mean_gap_pct, 11.0, 2.0), "mean 2D-vs-1D improvement = %.2f %% (11 +- 2)", sw.mean_gap_pct);
    rep.check(within(sw.boundary_A, 8.0, 1.0), "26 meV boundary at %.3f A (8 +- 1)", sw.boundary_A);
    rep.check(six_five, "(6,5) detectable");
    return rep;
}

Report criterion7()
{
    Report rep;
    double lo = 10.0, hi = 0.0;
    for (const auto& s : tb::enumerate_species(3.0, 15.0, {})) {
        const auto m = tb::effective_masses(s.chirality, {});
        lo = std::min(lo, m.sigma);
        hi = std::max(hi, m.sigma);
    }
    rep.check(lo >= 0.86 && hi <= 1.02, "sigma in [%.4f, %.4f] (within [0.86, 1.02])", lo, hi);
    const double vF = tb::fermi_velocity({});
    rep.check(within(vF, 9.6e5, 9.6e3), "v_F = %.5g m/s (9.6e5 +- 1 %%)", vF);
    return rep;
}

double potential_oracle(const basis::BasisSpec& b, std::size_t row, std::size_t col, double r)
{
    const auto p = assembly::decode_trion_index(b, row), q = assembly::decode_trion_index(b, col);
    const double a = b.axial.alphas_i[p.i] + b.axial.alphas_i[q.i];
    const double bb = b.axial.alphas_j[p.j] + b.axial.alphas_j[q.j];
    const double c = b.axial.alphas_k[p.k] + b.axial.alphas_k[q.k];
    return oracle::potential_term(oracle::Term::Repulsion, a, bb, c, p.l, q.l, r) -
           oracle::potential_term(oracle::Term::Attraction1, a, bb, c, p.l, q.l, r) -
           oracle::potential_term(oracle::Term::Attraction2, a, bb, c, p.l, q.l, r);
}

Report criterion8()
{
    Report rep;

    double table = 0.0;
    for (int l = 1; l <= 4; ++l)
        for (int lp = 1; lp <= 4; ++lp)
            table = std::max(table, std::abs(basis::angular_kernels(l, lp).overlap - oracle::angular_overlap(l, lp)));
    rep.check(table <= 1e-10, "Table of angular overlaps by quadrature: max error %.2e (<= 1e-10)", table);

    const double r = 0.1;
    const auto b = basis::at_radius(basis::preset_basis(PresetKind::Trion2D), r);
    const assembly::Matrix U = assembly::assemble_potential(b, r, {});
    std::mt19937 rng(20240901);
    std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
        const std::size_t p = pick(rng), q = pick(rng);
        const double ref = potential_oracle(b, p, q, r);
        worst = std::max(worst, std::abs(U(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) - ref) / std::abs(ref));
    }
    rep.check(worst <= 1e-6, "20 random U entries vs brute-force quadrature: max rel error %.2e (<= 1e-6)", worst);

    const solver::TrionProblem prob(b, r, {});
    const assembly::Matrix H = prob.hamiltonian(0.0, Charge::Negative);
    const auto full = solver::solve_generalized(H, prob.overlap());
    const double E = full.energies(0);
    double lowest_sub = INFINITY;
    for (Eigen::Index k = 0; k < H.rows(); k += 17) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < H.rows(); ++i)
            if (i != k) keep.push_back(i);
        const assembly::Matrix Hs = H(keep, keep), Ss = prob.overlap()(keep, keep);
        lowest_sub = std::min(lowest_sub, solver::solve_generalized(Hs, Ss).energies(0));
    }
    rep.check(lowest_sub >= E - 1e-9 * std::abs(E), "basis removal never lowers E_T: min sub-basis E = %.10f vs %.10f",
              lowest_sub, E);

    const Eigen::VectorXd c = full.coefficients.col(0);
    const auto grid = analysis::trion_probability(c, b, r);
    rep.check(std::abs(grid.integral() - 1.0) <= 1e-6, "probability integral = %.12f (1 +- 1e-6)", grid.integral());

    double asym = 0.0;
    for (std::size_t p = 0; p < b.size(); ++p) {
        auto t = assembly::decode_trion_index(b, p);
        std::swap(t.i, t.j);
        if (t.l == 2) t.l = 3;
        else if (t.l == 3) t.l = 2;
        const auto q = assembly::encode_trion_index(b, t);
        asym = std::max(asym, std::abs(c(static_cast<Eigen::Index>(p)) - c(static_cast<Eigen::Index>(q))) / c.norm());
    }
    rep.check(asym <= 1e-6, "ground-state exchange asymmetry %.2e (<= 1e-6)", asym);

    std::mt19937 g(9);
    std::normal_distribution<double> nd;
    assembly::Matrix B(4, 4), A(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) {
            B(i, j) = nd(g);
            A(i, j) = nd(g);
        }
    const assembly::Matrix S0 = B * B.transpose() + assembly::Matrix::Identity(4, 4), H0 = A + A.transpose();
    assembly::Matrix M = assembly::Matrix::Zero(4, 6);
    M.leftCols(4).setIdentity();
    M(1, 4) = 1.0;
    M(2, 5) = 1.0;
    M(3, 5) = 1.0;
    const auto def = solver::solve_generalized(M.transpose() * H0 * M, M.transpose() * S0 * M);
    const auto red = solver::solve_generalized(H0, S0);
    const double eig_err = def.retained_dim == 4 ? (def.energies - red.energies).cwiseAbs().maxCoeff() : INFINITY;
    rep.check(eig_err <= 1e-10, "rank-deficient solve vs reduced reference: max error %.2e, retained %.0f of 6", eig_err,
              def.retained_dim);

    const auto setup = hf::prepare(basis::preset_basis(PresetKind::HF2D), r, {});
    const hf::ScfOptions opt;
    const auto st = hf::scf(setup, opt);
    const double eps =
        solver::solve_generalized(setup.h + hf::hartree_matrix(st.orbital_coeffs, setup.eri), setup.S).energies(0);
    rep.check(st.converged && std::abs(eps - st.epsilon0) < opt.tol, "SCF residual %.2e (< 1e-8)",
              std::abs(eps - st.epsilon0));

    analysis::ModelSweep sw;
    sw.radii = analysis::linspace(0.05, 0.3, 6);
    sw.sigmas = {0.0, 1.0};
    sw.methods = {"full", "hf"};
    const int saved = omp_get_max_threads();
    auto key = [](const std::vector<analysis::ModelRow>& rows) {
        std::string s;
        char buf[200];
        for (const auto& x : rows) {
            std::snprintf(buf, sizeof buf, "%a %a %d %s %d %a %a %a %s\n", x.r, x.sigma, static_cast<int>(x.model),
                          x.method.c_str(), static_cast<int>(x.charge), x.E_X, x.E_T, x.E_B, x.status.c_str());
            s += buf;
        }
        return s;
    };
    omp_set_num_threads(1);
    const std::string one = key(analysis::sweep_model_comparison(sw));
    omp_set_num_threads(4);
    const std::string four = key(analysis::sweep_model_comparison(sw));
    omp_set_num_threads(saved);
    rep.check(one == four, "sweep output byte-identical for 1 and 4 threads");
    return rep;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Report()>>> criteria{
        {"(6,5) pipeline", criterion1},
        {"model gap at r = 0.1 and 0.3", criterion2},
        {"sigma insensitivity at r = 0.1", criterion3},
        {"Hartree-Fock ratio", criterion4},
        {"dielectric sweep for (6,5)", criterion5},
        {"species sweep 3-15 A", criterion6},
        {"sigma range and Fermi velocity", criterion7},
        {"property suites", criterion8},
    };
    int failed = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        Report rep;
        try {
            rep = criteria[n].second();
        } catch (const std::exception& e) {
            rep.check(false, "exception");
            rep.details.push_back(std::string("     ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %zu: %s (%.1f s)\n", rep.pass ? "PASS" : "FAIL", n + 1, criteria[n].first, secs);
        for (const auto& d : rep.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        if (!rep.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
