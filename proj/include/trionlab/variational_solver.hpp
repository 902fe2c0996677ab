#pragma once

#include "trionlab/matrix_assembly.hpp"

#include <Eigen/Dense>

#include <string>

namespace trionlab::solver {

using assembly::Charge;
using assembly::Matrix;
using assembly::QuadratureSpec;
using basis::BasisSpec;
using basis::Model;

struct Spectrum {
    Eigen::VectorXd energies;  ///< ascending, Ry*
    Matrix coefficients;       ///< columns normalized to c^T S c = 1
    int retained_dim = 0;
};

/// Canonical orthogonalization: modes of S below drop_tol * max eigenvalue are discarded.
Spectrum solve_generalized(const Matrix& H, const Matrix& S, double drop_tol = 1e-15);

/// Bases given at their reference radius; exponents are rescaled to r before use.
struct ModelBases {
    BasisSpec exciton;
    BasisSpec trion;
    static ModelBases presets(Model model);
};

/// Signed ground-state energies (negative for bound states).
double exciton_energy(double r, Model model, const BasisSpec& basis, const QuadratureSpec& quad);
double trion_energy(double r, double sigma, Charge charge, Model model, const BasisSpec& basis,
                    const QuadratureSpec& quad);

struct TrionResult {
    double E_T = 0.0;
    double E_X = 0.0;
    double E_B = 0.0;  ///< E_X - E_T
    Model model = Model::OneD;
    double sigma = 0.0;
    Charge charge = Charge::Negative;
    double r = 0.0;
    bool stable() const { return E_B > 0.0; }
};

TrionResult binding_energy(double r, double sigma, Charge charge, Model model, const ModelBases& bases,
                           const QuadratureSpec& quad);

/// Trion problem at fixed radius with S, U and both kinetic parts assembled once,
/// so that many mass fractions can be solved cheaply.
class TrionProblem {
public:
    TrionProblem(const BasisSpec& basis, double r, const QuadratureSpec& quad);

    Spectrum solve(double sigma, Charge charge) const;
    double ground_energy(double sigma, Charge charge) const;

    const BasisSpec& basis() const { return basis_; }
    const Matrix& overlap() const { return S_; }
    const Matrix& potential() const { return U_; }
    Matrix hamiltonian(double sigma, Charge charge) const;

private:
    BasisSpec basis_;
    Matrix S_, U_;
    assembly::KineticParts K_;
};

Charge parse_charge(const std::string& text);
std::string to_string(Charge charge);

} // namespace trionlab::solver
