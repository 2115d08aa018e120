#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "errors.hpp"

namespace diracgh {

// Natural units throughout: hbar = c = 1 and all energies carry the scale of
// the fermion rest mass. Angles are radians unless a name says degrees.

enum class Regime {
    Transmitting,    // V >= E + gamma, propagating wave on the barrier side
    TotalReflection, // E - gamma < V < E + gamma, evanescent barrier side
    OutsideValidity, // V <= E - gamma, the matching ansatz does not apply
};

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Transmitting: return "transmitting";
        case Regime::TotalReflection: return "total_reflection";
        default: return "outside_validity";
    }
}

inline void require_inputs(double E, double m, double phi) {
    if (!(m > 0.0)) throw std::invalid_argument("mass must be positive");
    if (!(E > m)) throw std::invalid_argument("energy must exceed the rest mass");
    if (!(phi >= 0.0) || !(phi < 1.5707963267948966))
        throw std::invalid_argument("incidence angle must lie in [0, pi/2)");
}

// Moduli of the plane-wave momenta on both sides of the step. px2p keeps the
// sign of the squared normal momentum on the barrier side; exactly one of
// pxp / qx is nonzero away from the regime boundary.
struct Momenta {
    double p;    // incident momentum magnitude
    double px;   // incident component normal to the step
    double pz;   // conserved component along the interface
    double px2p; // squared normal component past the step, may be negative
    double pxp;  // propagating normal component, sqrt(max(px2p, 0))
    double qx;   // evanescent decay constant, sqrt(max(-px2p, 0))
};

inline Momenta derive_momenta(double E, double m, double V, double phi) {
    require_inputs(E, m, phi);
    Momenta k{};
    k.p = std::sqrt(E * E - m * m);
    k.px = k.p * std::cos(phi);
    k.pz = k.p * std::sin(phi);
    k.px2p = (E - V) * (E - V) - k.pz * k.pz - m * m;
    k.pxp = std::sqrt(std::max(k.px2p, 0.0));
    k.qx = std::sqrt(std::max(-k.px2p, 0.0));
    return k;
}

// Same quantities parameterized by the conserved transverse momentum instead
// of the angle. Requires |pz| < p.
inline Momenta derive_momenta_pz(double E, double m, double V, double pz) {
    if (!(m > 0.0) || !(E > m)) throw std::invalid_argument("need E > m > 0");
    const double p2 = E * E - m * m;
    if (!(pz * pz < p2)) throw regime_error("transverse momentum exceeds the incident momentum");
    Momenta k{};
    k.p = std::sqrt(p2);
    k.pz = pz;
    k.px = std::sqrt(p2 - pz * pz);
    k.px2p = (E - V) * (E - V) - pz * pz - m * m;
    k.pxp = std::sqrt(std::max(k.px2p, 0.0));
    k.qx = std::sqrt(std::max(-k.px2p, 0.0));
    return k;
}

// gamma = sqrt(E^2 sin^2 phi + m^2 cos^2 phi) = sqrt(m^2 + pz^2); the critical
// step heights sit at V = E -+ gamma.
inline double gamma_scale(double E, double m, double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    return std::sqrt(E * E * s * s + m * m * c * c);
}

inline Regime classify_regime(double E, double m, double V, double phi) {
    require_inputs(E, m, phi);
    const double g = gamma_scale(E, m, phi);
    if (V >= E + g) return Regime::Transmitting;
    if (V > E - g) return Regime::TotalReflection;
    return Regime::OutsideValidity;
}

// Relative tolerance for detecting the singular barrier V = E - m.
inline constexpr double kSingularBarrierTol = 1e-12;

inline bool is_singular_barrier(double E, double m, double V) {
    return std::abs(V - E + m) < kSingularBarrierTol * (E + m);
}

// Ratio (E + m) / (V - E + m) that plays the role of a relative refractive
// index in the matching amplitudes. Negative for E - gamma < V < E - m, which
// is allowed; only the pole at V = E - m is rejected.
inline double index_ratio(double E, double m, double V) {
    if (is_singular_barrier(E, m, V))
        throw singular_barrier_error("step height V = E - m makes the transmitted normalization vanish");
    return (E + m) / (V - E + m);
}

} // namespace diracgh
