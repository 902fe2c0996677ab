#include "trionlab/exponent_optimizer.hpp"
#include "trionlab/errors.hpp"

#include <cmath>
#include <limits>

namespace trionlab::optimizer {

namespace {

// Free parameters: one log-exponent list per distinct group of tied lists.
struct Parametrization {
    std::vector<int> group_of;  // list index (i, j, k) -> group
    std::vector<std::size_t> sizes;

    explicit Parametrization(const BasisSpec& b)
    {
        const auto& ax = b.axial;
        const std::vector<const std::vector<double>*> lists = {&ax.alphas_i, &ax.alphas_j, &ax.alphas_k};
        for (std::size_t t = 0; t < lists.size(); ++t) {
            if (lists[t]->empty()) {
                group_of.push_back(-1);
                continue;
            }
            int g = -1;
            for (std::size_t u = 0; u < t; ++u)
                if (group_of[u] >= 0 && *lists[u] == *lists[t]) g = group_of[u];
            if (g < 0) {
                g = static_cast<int>(sizes.size());
                sizes.push_back(lists[t]->size());
            }
            group_of.push_back(g);
        }
    }

    std::vector<double> pack(const BasisSpec& b) const
    {
        std::vector<double> x;
        const std::vector<const std::vector<double>*> lists = {&b.axial.alphas_i, &b.axial.alphas_j,
                                                               &b.axial.alphas_k};
        for (std::size_t g = 0; g < sizes.size(); ++g)
            for (std::size_t t = 0; t < 3; ++t)
                if (group_of[t] == static_cast<int>(g)) {
                    for (double a : *lists[t]) x.push_back(std::log(a));
                    break;
                }
        return x;
    }

    BasisSpec unpack(const BasisSpec& templ, const std::vector<double>& x) const
    {
        BasisSpec b = templ;
        std::vector<std::vector<double>*> lists = {&b.axial.alphas_i, &b.axial.alphas_j, &b.axial.alphas_k};
        std::vector<std::size_t> offset(sizes.size(), 0);
        for (std::size_t g = 1; g < sizes.size(); ++g) offset[g] = offset[g - 1] + sizes[g - 1];
        for (std::size_t t = 0; t < 3; ++t) {
            if (group_of[t] < 0) continue;
            const std::size_t g = static_cast<std::size_t>(group_of[t]);
            for (std::size_t m = 0; m < sizes[g]; ++m) (*lists[t])[m] = std::exp(x[offset[g] + m]);
        }
        return b;
    }
};

} // namespace

double objective(Problem problem, const BasisSpec& basis, double r0, const Settings& settings)
{
    BasisSpec b = basis;
    b.r0 = r0;
    switch (problem) {
    case Problem::Exciton: return solver::exciton_energy(r0, b.model, b, settings.quad);
    case Problem::Trion:
        return solver::trion_energy(r0, settings.sigma, settings.charge, b.model, b, settings.quad);
    case Problem::HartreeFock: {
        const auto st = hf::scf(b, r0, hf::ScfOptions{}, settings.quad);
        if (!st.converged) throw NumericalError("SCF did not converge during optimization");
        return st.E_T_HF;
    }
    }
    return 0.0;
}

OptimizationRun optimize(Problem problem, const BasisSpec& initial, double r0, const Settings& s)
{
    initial.validate();
    if (!(r0 > 0.0)) throw DomainError("reference radius must be positive");
    if (!(s.rel_step > 0.0) || !(s.energy_tol > 0.0) || s.max_steps < 1 || !(s.shrink > 0.0 && s.shrink < 1.0))
        throw DomainError("invalid optimizer settings");
    if ((problem == Problem::Trion) != initial.two_particle())
        throw DomainError("basis shape does not fit the optimization problem");

    OptimizationRun run;
    run.initial = initial;
    run.initial.r0 = r0;
    run.final = run.initial;

    const Parametrization par(initial);
    std::vector<double> x = par.pack(initial);
    const std::size_t n = x.size();
    auto eval = [&](const std::vector<double>& p) { return objective(problem, par.unpack(run.initial, p), r0, s); };

    try {
        double e = eval(x);
        run.history.push_back(e);
        double step = s.initial_step;
        for (int it = 0; it < s.max_steps; ++it) {
            std::vector<double> grad(n, 0.0);
            std::vector<std::string> errors(n);
            const long nl = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
            for (long m = 0; m < nl; ++m) {
                try {
                    std::vector<double> xp = x, xm = x;
                    xp[m] += s.rel_step;
                    xm[m] -= s.rel_step;
                    grad[m] = (eval(xp) - eval(xm)) / (2.0 * s.rel_step);
                } catch (const std::exception& ex) {
                    errors[m] = ex.what();
                }
            }
            for (const auto& msg : errors)
                if (!msg.empty()) throw NumericalError(msg);

            double gnorm = 0.0;
            for (double g : grad) gnorm += g * g;
            gnorm = std::sqrt(gnorm);
            if (gnorm == 0.0) {
                run.converged = true;
                break;
            }

            bool accepted = false;
            double t = step;
            for (int bt = 0; bt < s.max_backtracks; ++bt) {
                std::vector<double> trial = x;
                for (std::size_t m = 0; m < n; ++m) trial[m] -= t * grad[m] / gnorm;
                double et;
                try {
                    et = eval(trial);
                } catch (const NumericalError&) {
                    et = std::numeric_limits<double>::infinity();
                }
                // Armijo condition along the normalized descent direction
                if (et <= e - 1e-4 * t * gnorm) {
                    const double de = e - et;
                    x = trial;
                    e = et;
                    run.history.push_back(e);
                    ++run.accepted;
                    accepted = true;
                    step = std::min(2.0 * t, 4.0 * s.initial_step);
                    if (de < s.energy_tol) run.converged = true;
                    break;
                }
                ++run.rejected;
                t *= s.shrink;
            }
            if (!accepted) {
                // no decrease along the gradient within the step floor: stationary to resolution
                run.converged = true;
            }
            if (run.converged) break;
        }
    } catch (const std::exception& ex) {
        run.error = ex.what();
        run.converged = false;
    }
    run.final = par.unpack(run.initial, x);
    return run;
}

Problem parse_problem(const std::string& text)
{
    if (text == "exciton") return Problem::Exciton;
    if (text == "trion") return Problem::Trion;
    if (text == "hf") return Problem::HartreeFock;
    throw DomainError("unknown problem '" + text + "' (expected exciton, trion or hf)");
}

std::string to_string(Problem problem)
{
    switch (problem) {
    case Problem::Exciton: return "exciton";
    case Problem::Trion: return "trion";
    case Problem::HartreeFock: return "hf";
    }
    return "?";
}

} // namespace trionlab::optimizer
