#pragma once

#include "trionlab/matrix_assembly.hpp"
#include "trionlab/variational_solver.hpp"

#include <Eigen/Dense>

#include <vector>

namespace trionlab::hf {

using assembly::Matrix;
using assembly::QuadratureSpec;
using basis::BasisSpec;
using basis::Model;

struct ScfOptions {
    double mixing = 0.5;
    double tol = 1e-8;
    int max_iter = 200;
    bool hartree = true;  ///< false drops V_H (Fock operator reduces to h)

    void validate() const;
};

struct HFState {
    Eigen::VectorXd orbital_coeffs;
    double epsilon0 = 0.0;
    double E_T_HF = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

/// One-particle matrices and two-electron tensor of the Fock problem at radius r.
struct FockSetup {
    BasisSpec basis;  ///< exponents already at r
    double r = 0.0;
    Matrix S, h;
    assembly::RepulsionTensor eri;
};

FockSetup prepare(const BasisSpec& basis, double r, const QuadratureSpec& quad);

/// <a|V_H[chi]|b> = sum_cd chi_c chi_d (ab|cd); the kernel of (ab|cd) is 2/distance.
Matrix hartree_matrix(const Eigen::VectorXd& orbital, const assembly::RepulsionTensor& eri);

HFState scf(const FockSetup& setup, const ScfOptions& options);
HFState scf(const BasisSpec& basis, double r, const ScfOptions& options, const QuadratureSpec& quad);

struct HFResult {
    double E_X = 0.0;
    double E_T_HF = 0.0;
    double E_B = 0.0;
    Model model = Model::OneD;
    double r = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Uses the exact variational exciton energy in the same model as the reference.
HFResult hf_binding_energy(double r, Model model, const BasisSpec& exciton_basis, const BasisSpec& hf_basis,
                           const QuadratureSpec& quad, const ScfOptions& options = {});

} // namespace trionlab::hf
