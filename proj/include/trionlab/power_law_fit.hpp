#pragma once

#include <vector>

namespace trionlab::fit {

/// y = A x^p + C fitted by Levenberg-Marquardt from a log-log initial guess.
struct PowerLawFit {
    double A = 0.0;
    double p = 0.0;
    double C = 0.0;
    double residual_norm = 0.0;
    bool ok = false;

    double operator()(double x) const;
};

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Slope and intercept of log|y| against log x (least squares).
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

} // namespace trionlab::fit
