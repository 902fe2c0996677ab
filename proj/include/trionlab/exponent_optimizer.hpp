#pragma once

#include "trionlab/hartree_fock.hpp"
#include "trionlab/variational_solver.hpp"

#include <string>
#include <vector>

namespace trionlab::optimizer {

using basis::BasisSpec;

enum class Problem { Exciton, Trion, HartreeFock };

struct Settings {
    double rel_step = 1e-3;      ///< central-difference step in log-exponent space
    double energy_tol = 1e-6;    ///< stop when an accepted step lowers E by less (Ry*)
    int max_steps = 1000;
    double initial_step = 0.25;  ///< first trial step length in log space
    double shrink = 0.5;
    int max_backtracks = 30;
    double sigma = 0.0;
    assembly::Charge charge = assembly::Charge::Negative;
    assembly::QuadratureSpec quad;
};

struct OptimizationRun {
    BasisSpec initial;
    BasisSpec final;
    std::vector<double> history;  ///< objective after each accepted step, starting with the initial value
    int accepted = 0;
    int rejected = 0;
    bool converged = false;
    std::string error;  ///< set when an objective evaluation failed
};

/// Ground-state energy of the problem with the exponents of `basis` taken at radius r0.
double objective(Problem problem, const BasisSpec& basis, double r0, const Settings& settings);

/// Steepest descent on log exponents. Exponent lists that are equal on entry stay tied.
OptimizationRun optimize(Problem problem, const BasisSpec& initial, double r0, const Settings& settings = {});

Problem parse_problem(const std::string& text);
std::string to_string(Problem problem);

} // namespace trionlab::optimizer
