#pragma once

#include "trionlab/angular_integrals.hpp"
#include "trionlab/cylinder_basis.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <iosfwd>

namespace trionlab::assembly {

using Matrix = Eigen::MatrixXd;

enum class Charge { Negative, Positive };
enum class PotentialKind { Attraction, Repulsion };

struct MatrixTriple {
    Matrix S;
    Matrix K;
    Matrix U;
};

/// Position of a two-particle basis function: axial indices and angular label (1-based).
struct TrionIndex {
    std::size_t i, j, k;
    int l;
};

TrionIndex decode_trion_index(const basis::BasisSpec& basis, std::size_t row);
std::size_t encode_trion_index(const basis::BasisSpec& basis, const TrionIndex& idx);

/// Weight of the mixed derivative terms, 2 sigma/(1 + sigma), after the charge swap.
double mixed_weight(double sigma, Charge charge);

Matrix assemble_overlap(const basis::BasisSpec& basis);

/// K split into the sigma-independent part and the part multiplying mixed_weight.
struct KineticParts {
    Matrix base;
    Matrix mixed;
};

KineticParts assemble_kinetic_parts(const basis::BasisSpec& basis, double r);
Matrix assemble_kinetic(const basis::BasisSpec& basis, double sigma, double r, Charge charge);

double potential_element(PotentialKind kind, std::size_t row, std::size_t col,
                         const basis::BasisSpec& basis, double r, const QuadratureSpec& quad);
Matrix assemble_potential(const basis::BasisSpec& basis, double r, const QuadratureSpec& quad);

MatrixTriple assemble_trion(const basis::BasisSpec& basis, double sigma, double r, Charge charge,
                            const QuadratureSpec& quad);

/// Single-particle problem: Gaussians e^{-a x^2} times {1, |sin(theta/2)|} (or the constant only).
MatrixTriple assemble_exciton(const basis::BasisSpec& basis, double r, const QuadratureSpec& quad);

/// Two-electron repulsion integrals (ab|cd) over the one-particle basis; element
/// (a*N + b, c*N + d) holds the integral of phi_a phi_b (particle 1) phi_c phi_d (particle 2) V.
struct RepulsionTensor {
    std::size_t n = 0;
    Matrix values;

    double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const
    {
        return values(static_cast<Eigen::Index>(a * n + b), static_cast<Eigen::Index>(c * n + d));
    }
};

RepulsionTensor assemble_repulsion_tensor(const basis::BasisSpec& basis, double r,
                                          const QuadratureSpec& quad);

/// Text dump: "N rows symmetric", then the lower triangle row by row at 17 significant digits.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

} // namespace trionlab::assembly
