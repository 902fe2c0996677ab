#include "trionlab/hartree_fock.hpp"
#include "trionlab/errors.hpp"

#include <cmath>

namespace trionlab::hf {

void ScfOptions::validate() const
{
    if (!(mixing > 0.0 && mixing <= 1.0)) throw DomainError("mixing must lie in (0, 1]");
    if (!(tol > 0.0)) throw DomainError("SCF tolerance must be positive");
    if (max_iter < 1) throw DomainError("max_iter must be at least 1");
}

FockSetup prepare(const BasisSpec& basis, double r, const QuadratureSpec& quad)
{
    FockSetup s;
    s.basis = basis::at_radius(basis, r);
    s.r = r;
    const auto m = assembly::assemble_exciton(s.basis, r, quad);
    s.S = m.S;
    s.h = m.K + m.U;
    s.eri = assembly::assemble_repulsion_tensor(s.basis, r, quad);
    return s;
}

Matrix hartree_matrix(const Eigen::VectorXd& orbital, const assembly::RepulsionTensor& eri)
{
    const auto n = static_cast<Eigen::Index>(eri.n);
    if (orbital.size() != n) throw DomainError("orbital size does not match the basis");
    const Matrix P = orbital * orbital.transpose();
    const Eigen::Map<const Eigen::VectorXd> pvec(P.data(), n * n);
    // column-major P: pvec(c + d n) = P(c, d); symmetric so the index order is immaterial
    const Eigen::VectorXd jv = eri.values * pvec;
    Matrix J(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) J(a, b) = jv(a * n + b);
    return 0.5 * (J + J.transpose());
}

namespace {

struct Eig {
    double eps;
    Eigen::VectorXd vec;
};

Eig lowest(const Matrix& F, const Matrix& S, const Eigen::VectorXd* align)
{
    const auto sp = solver::solve_generalized(0.5 * (F + F.transpose()), S);
    Eigen::VectorXd v = sp.coefficients.col(0);
    if (align && v.dot(S * *align) < 0.0) v = -v;
    return {sp.energies(0), v};
}

} // namespace

HFState scf(const FockSetup& setup, const ScfOptions& options)
{
    options.validate();
    HFState st;
    const Matrix& S = setup.S;
    auto fock = [&](const Eigen::VectorXd& c) {
        return options.hartree ? Matrix(setup.h + hartree_matrix(c, setup.eri)) : setup.h;
    };

    Eig cur = lowest(setup.h, S, nullptr);
    Eigen::VectorXd c = cur.vec;
    double eps_prev = cur.eps;
    Eigen::VectorXd chi = c;
    double eps = cur.eps;

    for (int it = 1; it <= options.max_iter; ++it) {
        const Eig next = lowest(fock(c), S, &c);
        st.history.push_back(next.eps);
        st.iterations = it;
        eps = next.eps;
        chi = next.vec;
        if (std::abs(next.eps - eps_prev) < options.tol) {
            // rebuilding F from the new orbital must reproduce epsilon0 as well
            const Eig check = lowest(fock(chi), S, &chi);
            if (std::abs(check.eps - next.eps) < options.tol) {
                st.converged = true;
                break;
            }
        }
        eps_prev = next.eps;
        c = (1.0 - options.mixing) * c + options.mixing * next.vec;
        c /= std::sqrt(c.dot(S * c));
    }

    st.orbital_coeffs = chi;
    st.epsilon0 = eps;
    const Matrix J = options.hartree ? hartree_matrix(chi, setup.eri) : Matrix::Zero(S.rows(), S.cols());
    st.E_T_HF = 2.0 * eps - chi.dot(J * chi);
    return st;
}

HFState scf(const BasisSpec& basis, double r, const ScfOptions& options, const QuadratureSpec& quad)
{
    options.validate();
    return scf(prepare(basis, r, quad), options);
}

HFResult hf_binding_energy(double r, Model model, const BasisSpec& exciton_basis, const BasisSpec& hf_basis,
                           const QuadratureSpec& quad, const ScfOptions& options)
{
    if (hf_basis.model != model) throw DomainError("basis model does not match the requested model");
    HFResult out;
    out.model = model;
    out.r = r;
    const HFState st = scf(hf_basis, r, options, quad);
    out.E_T_HF = st.E_T_HF;
    out.converged = st.converged;
    out.iterations = st.iterations;
    out.E_X = solver::exciton_energy(r, model, exciton_basis, quad);
    out.E_B = out.E_X - out.E_T_HF;
    return out;
}

} // namespace trionlab::hf
