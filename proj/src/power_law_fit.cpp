#include "trionlab/power_law_fit.hpp"
#include "trionlab/errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include <cmath>

namespace trionlab::fit {

namespace {

struct Residuals {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const std::vector<double>& x;
    const std::vector<double>& y;

    int inputs() const { return 3; }
    int values() const { return static_cast<int>(x.size()); }

    int operator()(const Eigen::VectorXd& q, Eigen::VectorXd& f) const
    {
        for (std::size_t i = 0; i < x.size(); ++i) f(i) = q(0) * std::pow(x[i], q(1)) + q(2) - y[i];
        return 0;
    }

    int df(const Eigen::VectorXd& q, Eigen::MatrixXd& j) const
    {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xp = std::pow(x[i], q(1));
            j(i, 0) = xp;
            j(i, 1) = q(0) * xp * std::log(x[i]);
            j(i, 2) = 1.0;
        }
        return 0;
    }
};

} // namespace

double PowerLawFit::operator()(double x) const { return A * std::pow(x, p) + C; }

LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw DomainError("log-log fit needs at least two points");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd M(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || y[i] == 0.0) throw DomainError("log-log fit needs positive x and non-zero y");
        M(i, 0) = std::log(x[i]);
        M(i, 1) = 1.0;
        b(i) = std::log(std::abs(y[i]));
    }
    const Eigen::Vector2d s = M.colPivHouseholderQr().solve(b);
    return {s(0), s(1)};
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 3) throw DomainError("power-law fit needs at least three points");
    const LogLogFit guess = fit_log_log(x, y);
    Eigen::VectorXd q(3);
    q << std::exp(guess.intercept), guess.slope, 0.0;

    Residuals fn{x, y};
    Eigen::LevenbergMarquardt<Residuals> lm(fn);
    lm.parameters.xtol = 1e-14;
    lm.parameters.ftol = 1e-14;
    lm.parameters.maxfev = 4000;
    const auto status = lm.minimize(q);

    PowerLawFit out;
    out.A = q(0);
    out.p = q(1);
    out.C = q(2);
    Eigen::VectorXd f(x.size());
    fn(q, f);
    out.residual_norm = f.norm();
    out.ok = std::isfinite(out.residual_norm) &&
             status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters &&
             status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation;
    return out;
}

} // namespace trionlab::fit
