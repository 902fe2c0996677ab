#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace trionlab::basis {

enum class Model { OneD, TwoD };

/// Angular part of the basis.
///
/// Constant is the single function 1/(2pi) (the 1D model); ExcitonPair is {1, |sin(theta/2)|}
/// for one particle; Full4 is the two-electron set 1/(2pi) * {1, |sin(theta1/2)|,
/// |sin(theta2/2)|, |sin((theta1-theta2)/2)|}.
enum class AngularSet { Constant, ExcitonPair, Full4 };

enum class PresetKind { Exciton1D, Exciton2D, Trion1D, Trion2D, HF1D, HF2D };

/// Gaussian exponents (units a_B*^-2) for e^{-a_i x1^2}, e^{-a_j x2^2}, e^{-a_k (x1-x2)^2}.
/// One-particle bases only use alphas_i.
struct AxialBasis {
    std::vector<double> alphas_i;
    std::vector<double> alphas_j;
    std::vector<double> alphas_k;
};

struct BasisSpec {
    AxialBasis axial;
    AngularSet angular = AngularSet::Constant;
    Model model = Model::OneD;
    double r0 = 0.1;  ///< radius (a_B*) at which the exponents apply

    bool two_particle() const { return !axial.alphas_j.empty(); }
    int angular_count() const;
    std::size_t axial_count() const;
    std::size_t size() const { return axial_count() * static_cast<std::size_t>(angular_count()); }
    void validate() const;
};

/// Cylinder Coulomb potential 2/sqrt(x^2 + 4 r^2 sin^2(theta/2)) in Ry*, lengths in a_B*.
double coulomb_potential(double x, double theta, double r);

/// Closed-form axial integrals for one pair of three-Gaussian products.
struct AxialKernels {
    double overlap;        ///< <Phi|Phi'>
    double kinetic;        ///< <d/dx1 Phi | d/dx1 Phi'>
    double kinetic_mixed;  ///< <d/dx1 Phi | d/dx2 Phi'>
};

AxialKernels axial_kernels(double ai, double aip, double aj, double ajp, double ak, double akp);

/// Angular kernels for labels l, l' in 1..4 (theta integrals, before the 1/r^2 factor).
struct AngularKernels {
    double overlap;        ///< <phi_l|phi_l'>
    double kinetic;        ///< <d1 phi_l|d1 phi_l'> + <d2 phi_l|d2 phi_l'>
    double kinetic_mixed;  ///< <d1 phi_l|d2 phi_l'>
};

AngularKernels angular_kernels(int l, int lp);

/// One-particle kernels for e^{-a x^2} and the {1, |sin(theta/2)|} pair (labels 1, 2).
double gaussian_overlap_1d(double a, double ap);
double gaussian_kinetic_1d(double a, double ap);
double exciton_angular_overlap(int l, int lp);
double exciton_angular_kinetic(int l, int lp);

BasisSpec scale_exponents(const BasisSpec& basis, double r0, double r);
/// Exponents of `basis` rescaled from its tagged r0 to radius r.
BasisSpec at_radius(const BasisSpec& basis, double r);

BasisSpec preset_basis(PresetKind kind);
/// Exciton, trion and Hartree-Fock presets for a model.
PresetKind exciton_preset(Model model);
PresetKind trion_preset(Model model);
PresetKind hf_preset(Model model);

std::string to_string(Model model);
std::string to_string(PresetKind kind);
Model parse_model(const std::string& text);
PresetKind parse_preset(const std::string& text);

} // namespace trionlab::basis
