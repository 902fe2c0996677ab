#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace trionlab::tb {

/// Carbon nanotube wrapping indices. Canonical form n >= m >= 0, (n,m) != (0,0).
struct ChiralIndex {
    int n = 0;
    int m = 0;

    /// Throws DomainError unless the pair is already canonical.
    void validate() const;
    /// Maps (m,n) and equivalent representatives onto n >= m >= 0.
    static ChiralIndex canonical(int n, int m);
    std::string to_string() const;

    friend bool operator==(const ChiralIndex&, const ChiralIndex&) = default;
};

struct TightBindingParams {
    double t = -2.89;   ///< transfer integral, eV
    double s = 0.1;     ///< nearest-neighbour overlap
    double a = 2.46;    ///< graphene lattice constant, Angstrom
    double e2p = 0.0;   ///< on-site energy, eV

    void validate() const;
};

enum class Branch { Valence, Conduction };

/// Which wavevector coordinate the band curvature is taken against.
///
/// TubeAxis differentiates along the allowed line, i.e. along the tube axis.
/// ZigzagReference differentiates against the wavevector component along the
/// axis of the (n,0) reference tube while staying on the allowed line. The two
/// differ by cos^2 of the chiral angle; ZigzagReference is the convention the
/// published (6,5) masses and the species-level binding energies correspond to.
enum class MassAxis { TubeAxis, ZigzagReference };

struct EffectiveMasses {
    double m_e = 0.0;    ///< electron mass, m0
    double m_h = 0.0;    ///< hole mass, m0
    double mu = 0.0;     ///< reduced mass, m0
    double sigma = 0.0;  ///< m_e / m_h
};

struct BandEdge {
    EffectiveMasses masses;
    double gap = 0.0;              ///< eV
    double conduction_min = 0.0;   ///< eV
    double valence_max = 0.0;      ///< eV
    Eigen::Vector2d k_edge;        ///< 1/Angstrom, graphene Cartesian frame
    int subband = 0;               ///< index of the allowed line k.C = 2 pi * subband
    double chiral_angle = 0.0;     ///< rad, measured from the zigzag direction
};

struct MassOptions {
    double step = 1e-3;            ///< finite-difference step, 1/Angstrom
    int samples_per_line = 2001;
    MassAxis axis = MassAxis::ZigzagReference;
};

struct Species {
    ChiralIndex chirality;
    double radius = 0.0;  ///< Angstrom
};

double radius(const ChiralIndex& ch, double a = 2.46);
double chiral_angle(const ChiralIndex& ch);
bool is_semiconducting(const ChiralIndex& ch);

/// |f(k)| with f the nearest-neighbour phase sum of graphene.
double structure_factor(const Eigen::Vector2d& k, double a);
double graphene_band(const Eigen::Vector2d& k, const TightBindingParams& p, Branch branch);

/// Graphene K point (1/Angstrom) in the frame a1 = a(sqrt3/2, 1/2), a2 = a(sqrt3/2, -1/2).
Eigen::Vector2d k_point(double a);

/// Primitive translation vector of the tube in units of (a1, a2).
std::pair<int, int> translation_indices(const ChiralIndex& ch);

BandEdge band_edge(const ChiralIndex& ch, const TightBindingParams& p, const MassOptions& opt = {});
EffectiveMasses effective_masses(const ChiralIndex& ch, const TightBindingParams& p,
                                 const MassOptions& opt = {});

/// Converged Dirac-cone slope of the conduction band at K divided by hbar, m/s.
double fermi_velocity(const TightBindingParams& p);

std::vector<Species> enumerate_species(double r_min, double r_max, const TightBindingParams& p);

} // namespace trionlab::tb

namespace trionlab::tb {

struct DispersionPoint {
    double k_axial;     ///< 1/Angstrom, measured from the projection of K onto the line
    double valence;     ///< eV
    double conduction;  ///< eV
};

/// Conduction and valence bands along allowed line `subband`, sampled over
/// [-half_width, half_width] around the foot of K.
std::vector<DispersionPoint> line_dispersion(const ChiralIndex& ch, const TightBindingParams& p,
                                             int subband, double half_width, int points);

} // namespace trionlab::tb
