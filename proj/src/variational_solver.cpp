#include "trionlab/variational_solver.hpp"
#include "trionlab/errors.hpp"

#include <cmath>
#include <vector>

namespace trionlab::solver {

namespace {

void check_symmetric(const Matrix& m, const char* name)
{
    const double scale = m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300))
        throw DomainError(std::string(name) + " is not symmetric");
}

} // namespace

Spectrum solve_generalized(const Matrix& H, const Matrix& S, double drop_tol)
{
    if (H.rows() != H.cols() || S.rows() != S.cols() || H.rows() != S.rows())
        throw DomainError("H and S must be square and of the same size");
    if (H.rows() == 0) throw DomainError("empty problem");
    if (!(drop_tol >= 0.0)) throw DomainError("drop tolerance must be non-negative");
    check_symmetric(H, "H");
    check_symmetric(S, "S");

    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success) throw NumericalError("overlap diagonalization failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double cut = drop_tol * lam.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > cut && lam(i) > 0.0) keep.push_back(i);
    if (keep.empty()) throw NumericalError("overlap matrix has no retained modes");

    Matrix X(S.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        X.col(c) = es.eigenvectors().col(keep[c]) / std::sqrt(lam(keep[c]));

    Matrix Hp = X.transpose() * H * X;
    Hp = 0.5 * (Hp + Hp.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> hs(Hp);
    if (hs.info() != Eigen::Success) throw NumericalError("reduced eigenproblem failed");

    Spectrum out;
    out.energies = hs.eigenvalues();
    out.coefficients = X * hs.eigenvectors();
    out.retained_dim = static_cast<int>(keep.size());
    // sign convention: largest-magnitude component positive
    for (Eigen::Index c = 0; c < out.coefficients.cols(); ++c) {
        Eigen::Index idx;
        out.coefficients.col(c).cwiseAbs().maxCoeff(&idx);
        if (out.coefficients(idx, c) < 0.0) out.coefficients.col(c) *= -1.0;
    }
    return out;
}

ModelBases ModelBases::presets(Model model)
{
    return {basis::preset_basis(basis::exciton_preset(model)), basis::preset_basis(basis::trion_preset(model))};
}

namespace {

void check_model(const BasisSpec& b, Model model)
{
    if (b.model != model) throw DomainError("basis model does not match the requested model");
}

} // namespace

double exciton_energy(double r, Model model, const BasisSpec& basis, const QuadratureSpec& quad)
{
    check_model(basis, model);
    const BasisSpec b = basis::at_radius(basis, r);
    const auto m = assembly::assemble_exciton(b, r, quad);
    return solve_generalized(m.K + m.U, m.S).energies(0);
}

double trion_energy(double r, double sigma, Charge charge, Model model, const BasisSpec& basis,
                    const QuadratureSpec& quad)
{
    check_model(basis, model);
    if (sigma > 1.0) throw DomainError("mass fraction must lie in [0, 1]");
    assembly::mixed_weight(sigma, charge);
    return TrionProblem(basis, r, quad).ground_energy(sigma, charge);
}

TrionResult binding_energy(double r, double sigma, Charge charge, Model model, const ModelBases& bases,
                           const QuadratureSpec& quad)
{
    TrionResult res;
    res.model = model;
    res.sigma = sigma;
    res.charge = charge;
    res.r = r;
    res.E_T = trion_energy(r, sigma, charge, model, bases.trion, quad);
    res.E_X = exciton_energy(r, model, bases.exciton, quad);
    res.E_B = res.E_X - res.E_T;
    return res;
}

TrionProblem::TrionProblem(const BasisSpec& basis, double r, const QuadratureSpec& quad)
    : basis_(basis::at_radius(basis, r)),
      S_(assembly::assemble_overlap(basis_)),
      U_(assembly::assemble_potential(basis_, r, quad)),
      K_(assembly::assemble_kinetic_parts(basis_, r))
{
}

Matrix TrionProblem::hamiltonian(double sigma, Charge charge) const
{
    const double c = assembly::mixed_weight(sigma, charge);
    if (c == 0.0) return K_.base + U_;
    return K_.base + c * K_.mixed + U_;
}

Spectrum TrionProblem::solve(double sigma, Charge charge) const
{
    return solve_generalized(hamiltonian(sigma, charge), S_);
}

double TrionProblem::ground_energy(double sigma, Charge charge) const
{
    return solve(sigma, charge).energies(0);
}

Charge parse_charge(const std::string& text)
{
    if (text == "-" || text == "minus" || text == "negative" || text == "neg") return Charge::Negative;
    if (text == "+" || text == "plus" || text == "positive" || text == "pos") return Charge::Positive;
    throw DomainError("unknown charge '" + text + "' (expected - or +)");
}

std::string to_string(Charge charge) { return charge == Charge::Negative ? "-" : "+"; }

} // namespace trionlab::solver
