#pragma once

#include <cmath>
#include <limits>

#include "kinematics.hpp"
#include "matching.hpp"

namespace diracgh {

// Lateral displacement of the reflected beam along the interface, defined as
// the transverse-momentum derivative of the reflection phase at fixed energy.
// All closed forms are evaluated in extended precision: their numerators
// cancel almost completely near the sign-change threshold, and 64-bit
// mantissas keep the three algebraically equal arrangements within 1e-12 of
// each other even there.

// Shared sign predicate: the displacement has the sign of
// (m^2 - E^2) cos^2 phi + E V for phi > 0.
inline long double gh_sign_argument(double E, double m, double V, double phi) {
    const long double c = std::cos(static_cast<long double>(phi));
    return (static_cast<long double>(m) * m - static_cast<long double>(E) * E) * c * c +
           static_cast<long double>(E) * V;
}

struct GhResult {
    double delta_z = 0.0;     // beam displacement along the interface
    double theta = 0.0;       // reflection phase at the central momentum, NaN at V = E - m
    double delta_phase = 0.0;     // pz * delta_z
    bool near_edge = false;       // within 1e-9 (relative) of a regime boundary
    bool singular_barrier = false; // V = E - m up to tolerance: theta is undefined there
};

namespace detail {

inline long double gh_gamma2(double E, double m, double phi) {
    const long double s = std::sin(static_cast<long double>(phi));
    const long double c = std::cos(static_cast<long double>(phi));
    return static_cast<long double>(E) * E * s * s + static_cast<long double>(m) * m * c * c;
}

inline long double gh_qx2(double E, double m, double V, double phi) {
    const long double d = static_cast<long double>(E) - V;
    return gh_gamma2(E, m, phi) - d * d;
}

inline void require_total_reflection(double E, double m, double V, double phi) {
    if (classify_regime(E, m, V, phi) != Regime::TotalReflection)
        throw regime_error("beam displacement is defined only under total reflection");
}

} // namespace detail

inline bool gh_near_edge(double E, double m, double V, double phi) {
    const long double g2 = detail::gh_gamma2(E, m, phi);
    return detail::gh_qx2(E, m, V, phi) < 1e-9L * g2;
}

inline GhResult gh_shift_analytic(double E, double m, double V, double phi) {
    detail::require_total_reflection(E, m, V, phi);
    const long double g2 = detail::gh_gamma2(E, m, phi);
    const long double qx2 = detail::gh_qx2(E, m, V, phi);
    const long double t = std::tan(static_cast<long double>(phi));

    GhResult out;
    out.near_edge = qx2 < 1e-9L * g2;
    out.delta_z = static_cast<double>(gh_sign_argument(E, m, V, phi) * t / (g2 * std::sqrt(qx2)));
    const Momenta k = derive_momenta(E, m, V, phi);
    out.delta_phase = k.pz * out.delta_z;
    if (is_singular_barrier(E, m, V)) {
        // The displacement itself never involves the index ratio, so it stays
        // finite; only the phase convention loses meaning here.
        out.singular_barrier = true;
        out.theta = std::numeric_limits<double>::quiet_NaN();
    } else {
        out.theta = detail::reflection_phase_tr(index_ratio(E, m, V), k);
    }
    return out;
}

// Equivalent arrangement built on the double-angle form of the incident
// momentum components.
inline double gh_shift_alt_doubleangle(double E, double m, double V, double phi) {
    detail::require_total_reflection(E, m, V, phi);
    const long double El = E, ml = m, Vl = V, ph = phi;
    const long double p2 = El * El - ml * ml;
    const long double num = (El * El - ml * ml - 2.0L * El * Vl + p2 * std::cos(2.0L * ph)) * std::tan(ph);
    const long double den = (-(El * El + ml * ml) + p2 * std::cos(2.0L * ph)) *
                            std::sqrt(ml * ml - (El - Vl) * (El - Vl) + p2 * std::sin(ph) * std::sin(ph));
    return static_cast<double>(num / den);
}

// Equivalent arrangement that groups the step height with the evanescent
// depth instead of the incident angle.
inline double gh_shift_alt_potential(double E, double m, double V, double phi) {
    detail::require_total_reflection(E, m, V, phi);
    const long double g2 = detail::gh_gamma2(E, m, phi);
    const long double qx2 = detail::gh_qx2(E, m, V, phi);
    const long double Vl = V, El = E;
    return static_cast<double>((qx2 + (Vl - El) * Vl) * std::tan(static_cast<long double>(phi)) /
                               (g2 * std::sqrt(qx2)));
}

// Reflection phase as a function of the conserved transverse momentum at
// fixed energy and step height. This is the object the displacement
// differentiates, so the probe below and the packet synthesis share it.
class ReflectionPhase {
  public:
    ReflectionPhase(double E, double m, double V) : E_(E), m_(m), V_(V), n_(index_ratio(E, m, V)) {
        if (!(m > 0.0) || !(E > m)) throw std::invalid_argument("need E > m > 0");
    }

    double operator()(double pz) const {
        const double p2 = E_ * E_ - m_ * m_;
        const double px2 = p2 - pz * pz;
        const double qx2 = pz * pz + m_ * m_ - (V_ - E_) * (V_ - E_);
        if (!(px2 > 0.0) || !(qx2 > 0.0))
            throw regime_error("transverse momentum left the total-reflection band");
        const double px = std::sqrt(px2);
        const double qx = std::sqrt(qx2);
        const double omn = 1.0 - n_;
        return std::atan2(2.0 * n_ * px * qx, px2 - n_ * n_ * qx2 + omn * omn * pz * pz);
    }

    double energy() const { return E_; }
    double mass() const { return m_; }
    double step() const { return V_; }

  private:
    double E_, m_, V_, n_;
};

struct FdResult {
    double value = 0.0; // displacement from the differentiated phase
    double h = 0.0;     // outer step actually used
};

// Finite-difference probe of the phase derivative. Central differences at h
// and h/2 are combined by one Richardson step; the phase difference is
// unwrapped so a branch crossing cannot corrupt the quotient. h defaults to
// 1e-4 * max(1, pz): small enough for the h^4 term to vanish, large enough
// to keep rounding noise near 1e-11 in absolute terms.
inline FdResult gh_shift_fd(double E, double m, double V, double phi, double h = 0.0) {
    detail::require_total_reflection(E, m, V, phi);
    const ReflectionPhase theta(E, m, V);
    const Momenta k = derive_momenta(E, m, V, phi);
    const double pz0 = k.pz;
    if (h <= 0.0) h = 1e-4 * std::max(1.0, pz0);

    const double p2 = E * E - m * m;
    const auto inside = [&](double pz) {
        return pz * pz < p2 && pz * pz + m * m - (V - E) * (V - E) > 0.0;
    };
    if (!inside(pz0 + h) || !inside(pz0 - h))
        throw step_error("finite-difference stencil leaves the total-reflection band");

    const auto central = [&](double step) {
        double d = theta(pz0 + step) - theta(pz0 - step);
        if (d > 3.141592653589793) d -= 2.0 * 3.141592653589793;
        if (d < -3.141592653589793) d += 2.0 * 3.141592653589793;
        return d / (2.0 * step);
    };
    const double coarse = central(h);
    const double fine = central(0.5 * h);
    return FdResult{(4.0 * fine - coarse) / 3.0, h};
}

// Zero crossings of the displacement. Each threshold is returned with an
// existence flag instead of an error: a missing crossing is an answer, not a
// failure.
struct Threshold {
    double value = 0.0;
    bool exists = false;
};

// Step height where the displacement changes sign at fixed E and phi.
inline Threshold threshold_potential(double E, double m, double phi) {
    require_inputs(E, m, phi);
    const double c = std::cos(phi);
    return Threshold{(E - m * m / E) * c * c, true};
}

// Incidence angle where the displacement changes sign at fixed E and V.
inline Threshold threshold_angle(double E, double m, double V) {
    if (!(m > 0.0) || !(E > m)) throw std::invalid_argument("need E > m > 0");
    const double r = E * V / (E * E - m * m);
    if (!(r < 1.0)) return Threshold{0.0, false};
    return Threshold{std::acos(std::sqrt(r)), true};
}

// Energy where the displacement changes sign at fixed V and phi.
inline Threshold threshold_energy(double m, double V, double phi) {
    if (!(m > 0.0) || !(V > 0.0)) throw std::invalid_argument("need V > 0 and m > 0");
    if (!(phi >= 0.0) || !(phi < 1.5707963267948966))
        throw std::invalid_argument("incidence angle must lie in [0, pi/2)");
    const double c2 = std::cos(phi) * std::cos(phi);
    const double half = V / (2.0 * c2);
    return Threshold{half + std::sqrt(half * half + m * m), true};
}

} // namespace diracgh
