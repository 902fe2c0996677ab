#include "trionlab/cylinder_basis.hpp"
#include "trionlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trionlab::basis {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(const std::vector<double>& alphas, const char* name)
{
    if (alphas.empty()) throw DomainError(std::string("exponent list ") + name + " is empty");
    for (double a : alphas)
        if (!(a > 0.0) || !std::isfinite(a))
            throw DomainError(std::string("exponent list ") + name + " has a non-positive entry");
}

void require_label(int l, int max_label)
{
    if (l < 1 || l > max_label) throw DomainError("angular label out of range");
}

} // namespace

int BasisSpec::angular_count() const
{
    switch (angular) {
    case AngularSet::Constant: return 1;
    case AngularSet::ExcitonPair: return 2;
    case AngularSet::Full4: return 4;
    }
    return 1;
}

std::size_t BasisSpec::axial_count() const
{
    if (!two_particle()) return axial.alphas_i.size();
    return axial.alphas_i.size() * axial.alphas_j.size() * axial.alphas_k.size();
}

void BasisSpec::validate() const
{
    require_positive(axial.alphas_i, "alpha_i");
    if (two_particle()) {
        require_positive(axial.alphas_j, "alpha_j");
        require_positive(axial.alphas_k, "alpha_k");
        if (angular == AngularSet::ExcitonPair)
            throw DomainError("the exciton angular pair is a one-particle set");
    } else {
        if (!axial.alphas_k.empty()) throw DomainError("alpha_k given without alpha_j");
        if (angular == AngularSet::Full4)
            throw DomainError("the four-function angular set needs a two-particle basis");
    }
    if ((model == Model::OneD) != (angular == AngularSet::Constant))
        throw DomainError("the 1D model is exactly the constant angular set");
    if (!(r0 > 0.0)) throw DomainError("reference radius must be positive");
}

double coulomb_potential(double x, double theta, double r)
{
    if (!(r > 0.0)) throw DomainError("cylinder radius must be positive");
    // Reduce the angle first so that theta = 2 pi k hits the singular point exactly.
    const double s = std::sin(std::remainder(theta, 2.0 * std::numbers::pi) / 2.0);
    const double d2 = x * x + 4.0 * r * r * s * s;
    if (!(d2 > 0.0)) throw DomainError("Coulomb potential is singular at x = 0, theta = 0 mod 2pi");
    return 2.0 / std::sqrt(d2);
}

AxialKernels axial_kernels(double ai, double aip, double aj, double ajp, double ak, double akp)
{
    const double a = ai + aip;
    const double b = aj + ajp;
    const double c = ak + akp;
    // determinant of the 2x2 Gaussian form [[a+c, -c], [-c, b+c]]
    const double det = a * b + b * c + c * a;
    const double det32 = det * std::sqrt(det);

    AxialKernels out{};
    out.overlap = pi / std::sqrt(det);
    out.kinetic = 2.0 * pi * (akp * ak * (b + a) + aip * ai * c) / det32 +
                  2.0 * pi * b * (akp * ai + aip * ak + ai * aip) / det32;
    out.kinetic_mixed = -2.0 * pi * (ak * akp * (a + b) + ai * aj * akp + aip * ajp * ak) / det32;
    return out;
}

AngularKernels angular_kernels(int l, int lp)
{
    require_label(l, 4);
    require_label(lp, 4);
    const double two_over_pi = 2.0 / pi;
    const double four_over_pi2 = 4.0 / (pi * pi);

    AngularKernels out{};
    if (l == lp) {
        out.overlap = l == 1 ? 1.0 : 0.5;
    } else if (l == 1 || lp == 1) {
        out.overlap = two_over_pi;
    } else {
        out.overlap = four_over_pi2;
    }
    if (l == lp) {
        // |sin| labels 2 and 3 depend on one angle; label 4 on both, so both derivatives count.
        if (l == 2 || l == 3) out.kinetic = 1.0 / 8.0;
        if (l == 4) {
            out.kinetic = 1.0 / 4.0;
            out.kinetic_mixed = -1.0 / 8.0;
        }
    }
    return out;
}

double gaussian_overlap_1d(double a, double ap) { return std::sqrt(pi / (a + ap)); }

double gaussian_kinetic_1d(double a, double ap)
{
    const double s = a + ap;
    return 2.0 * a * ap * std::sqrt(pi) / (s * std::sqrt(s));
}

double exciton_angular_overlap(int l, int lp)
{
    require_label(l, 2);
    require_label(lp, 2);
    if (l == 1 && lp == 1) return 2.0 * pi;
    if (l == 2 && lp == 2) return pi;
    return 4.0;
}

double exciton_angular_kinetic(int l, int lp)
{
    require_label(l, 2);
    require_label(lp, 2);
    return (l == 2 && lp == 2) ? pi / 4.0 : 0.0;
}

BasisSpec scale_exponents(const BasisSpec& basis, double r0, double r)
{
    if (!(r0 > 0.0) || !(r > 0.0)) throw DomainError("radii must be positive");
    BasisSpec out = basis;
    const double f = (r0 * r0) / (r * r);
    for (auto* list : {&out.axial.alphas_i, &out.axial.alphas_j, &out.axial.alphas_k})
        for (double& a : *list) a *= f;
    out.r0 = r;
    return out;
}

BasisSpec at_radius(const BasisSpec& basis, double r) { return scale_exponents(basis, basis.r0, r); }

BasisSpec preset_basis(PresetKind kind)
{
    static const std::vector<double> exciton{0.143, 1.16, 4.98, 29.0, 250.0};
    static const std::vector<double> trion1d{0.0651, 0.145, 1.68, 9.65, 48.7};
    static const std::vector<double> trion2d_ij{0.165, 1.68, 9.65, 48.7};
    static const std::vector<double> trion2d_k{0.0000171, 1.68, 9.98, 48.7};
    static const std::vector<double> hf{0.0648, 0.195, 1.04, 5.28, 27.5, 99.3, 250.0};

    BasisSpec b;
    b.r0 = 0.1;
    switch (kind) {
    case PresetKind::Exciton1D:
        b.axial.alphas_i = exciton;
        break;
    case PresetKind::Exciton2D:
        b.axial.alphas_i = exciton;
        b.angular = AngularSet::ExcitonPair;
        b.model = Model::TwoD;
        break;
    case PresetKind::Trion1D:
        b.axial = {trion1d, trion1d, trion1d};
        break;
    case PresetKind::Trion2D:
        b.axial = {trion2d_ij, trion2d_ij, trion2d_k};
        b.angular = AngularSet::Full4;
        b.model = Model::TwoD;
        break;
    case PresetKind::HF1D:
        b.axial.alphas_i = hf;
        break;
    case PresetKind::HF2D:
        b.axial.alphas_i = hf;
        b.angular = AngularSet::ExcitonPair;
        b.model = Model::TwoD;
        break;
    }
    return b;
}

PresetKind exciton_preset(Model model)
{
    return model == Model::OneD ? PresetKind::Exciton1D : PresetKind::Exciton2D;
}
PresetKind trion_preset(Model model)
{
    return model == Model::OneD ? PresetKind::Trion1D : PresetKind::Trion2D;
}
PresetKind hf_preset(Model model) { return model == Model::OneD ? PresetKind::HF1D : PresetKind::HF2D; }

std::string to_string(Model model) { return model == Model::OneD ? "1d" : "2d"; }

std::string to_string(PresetKind kind)
{
    switch (kind) {
    case PresetKind::Exciton1D: return "exciton1d";
    case PresetKind::Exciton2D: return "exciton2d";
    case PresetKind::Trion1D: return "trion1d";
    case PresetKind::Trion2D: return "trion2d";
    case PresetKind::HF1D: return "hf1d";
    case PresetKind::HF2D: return "hf2d";
    }
    return "?";
}

Model parse_model(const std::string& text)
{
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (t == "1d") return Model::OneD;
    if (t == "2d") return Model::TwoD;
    throw DomainError("unknown model '" + text + "' (expected 1d or 2d)");
}

PresetKind parse_preset(const std::string& text)
{
    for (auto k : {PresetKind::Exciton1D, PresetKind::Exciton2D, PresetKind::Trion1D,
                   PresetKind::Trion2D, PresetKind::HF1D, PresetKind::HF2D})
        if (to_string(k) == text) return k;
    throw DomainError("unknown preset '" + text + "'");
}

} // namespace trionlab::basis
