#pragma once

#include "trionlab/effective_units.hpp"
#include "trionlab/hartree_fock.hpp"
#include "trionlab/power_law_fit.hpp"
#include "trionlab/tb_bands.hpp"
#include "trionlab/variational_solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace trionlab::analysis {

using assembly::Charge;
using assembly::QuadratureSpec;
using basis::BasisSpec;
using basis::Model;

/// Room-temperature thermal energy used as the detectability threshold, meV.
inline constexpr double detectability_meV = 26.0;

/// Angular probability on a uniform grid over [-pi, pi] (inclusive ends).
/// Trion grids are 2D (values(i, j) at theta[i], theta[j]); exciton grids have one column.
struct ProbabilityGrid {
    std::vector<double> theta;
    Eigen::MatrixXd values;
    double raw_integral = 0.0;  ///< trapezoid integral before renormalization
    double r = 0.0;
    Model model = Model::TwoD;
    std::string method;

    double integral() const;
};

ProbabilityGrid trion_probability(const Eigen::VectorXd& coeffs, const BasisSpec& basis_at_r, double r,
                                  int grid_size = 201);
ProbabilityGrid exciton_probability(const Eigen::VectorXd& coeffs, const BasisSpec& basis_at_r, double r,
                                    int grid_size = 201);
/// Product density of the doubly occupied orbital.
ProbabilityGrid hf_probability(const Eigen::VectorXd& orbital, const BasisSpec& basis_at_r, double r,
                               int grid_size = 201);

/// 100 (P_hf - P_full) / P_full; NaN where P_full < 1e-12.
Eigen::MatrixXd hf_difference(const ProbabilityGrid& full, const ProbabilityGrid& hf);

struct ModelRow {
    double r = 0.0;
    double sigma = 0.0;
    Model model = Model::OneD;
    std::string method;  ///< "full" or "hf"
    Charge charge = Charge::Negative;
    double E_X = 0.0, E_T = 0.0, E_B = 0.0;
    std::string status = "ok";
};

struct ModelSweep {
    std::vector<double> radii;
    std::vector<double> sigmas{0.0};
    std::vector<Model> models{Model::OneD, Model::TwoD};
    std::vector<std::string> methods{"full"};
    std::vector<Charge> charges{Charge::Negative};
    QuadratureSpec quad;
};

std::vector<double> linspace(double from, double to, int points);

/// Rows ordered by (r, model, method, sigma, charge). HF rows exist only for sigma = 0, S-.
std::vector<ModelRow> sweep_model_comparison(const ModelSweep& sweep);

struct EpsilonRow {
    double epsilon = 0.0;
    double rydberg_eV = 0.0, bohr_A = 0.0, r_aB = 0.0;
    double E_X = 0.0, E_T = 0.0, E_B = 0.0;  ///< Ry*
    double E_X_meV = 0.0, E_B_meV = 0.0;     ///< |E_X| and E_B in meV
    std::string status = "ok";
};

struct EpsilonSweep {
    std::vector<EpsilonRow> rows;
    tb::EffectiveMasses masses;
    double radius_A = 0.0;
    std::optional<fit::PowerLawFit> trion_fit;  ///< eV
    std::optional<fit::LogLogFit> exciton_fit;  ///< slope of log |E_X| in eV
};

EpsilonSweep sweep_epsilon(const tb::ChiralIndex& ch, const std::vector<double>& eps,
                           const tb::TightBindingParams& params, const tb::MassOptions& mass_opt,
                           const QuadratureSpec& quad);

struct SpeciesRow {
    tb::ChiralIndex chirality;
    double radius_A = 0.0;
    tb::EffectiveMasses masses;
    double rydberg_eV = 0.0, bohr_A = 0.0, r_aB = 0.0;
    /// E_B in meV, [model][charge] with model 0 = 1D, 1 = 2D and charge 0 = S-, 1 = S+.
    double E_B_meV[2][2] = {{0, 0}, {0, 0}};
    bool has_model[2] = {false, false};
    double gap_pct[2] = {0, 0};  ///< 100 (E_B2D - E_B1D) / E_B2D per charge
    bool detectable = false;     ///< 2D S- above the thermal threshold
    std::string status = "ok";
};

struct SpeciesSweep {
    std::vector<SpeciesRow> rows;
    double max_gap_pct = 0.0;   ///< over species and both charges
    double mean_gap_pct = 0.0;
    double boundary_A = 0.0;    ///< radius where the 2D S- trend crosses the threshold
};

SpeciesSweep sweep_species(double r_min_A, double r_max_A, const units::Environment& env,
                           const std::vector<Model>& models, const tb::TightBindingParams& params,
                           const tb::MassOptions& mass_opt, const QuadratureSpec& quad);

} // namespace trionlab::analysis
