#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "kinematics.hpp"

namespace diracgh {

using cplx = std::complex<double>;
using Vec4 = std::array<cplx, 4>;
using Mat4 = std::array<std::array<cplx, 4>, 4>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
    return out;
}

inline const Mat2& pauli_x() {
    static const Mat2 s{{{cplx(0), cplx(1)}, {cplx(1), cplx(0)}}};
    return s;
}
inline const Mat2& pauli_z() {
    static const Mat2 s{{{cplx(1), cplx(0)}, {cplx(0), cplx(-1)}}};
    return s;
}
inline const Mat2& unit2() {
    static const Mat2 s{{{cplx(1), cplx(0)}, {cplx(0), cplx(1)}}};
    return s;
}

// Velocity and mass matrices in the block convention used by all solutions
// below: alpha_i = sigma_x (x) sigma_i, beta = sigma_z (x) 1.
inline const Mat4& alpha_x() {
    static const Mat4 a = kron(pauli_x(), pauli_x());
    return a;
}
inline const Mat4& alpha_z() {
    static const Mat4 a = kron(pauli_x(), pauli_z());
    return a;
}
inline const Mat4& beta_mat() {
    static const Mat4 b = kron(pauli_z(), unit2());
    return b;
}

// Stationary bulk operator W - kx alpha_x - kz alpha_z - m beta. A plane wave
// with energy slot W and wave vector (kx, kz) solves M psi = 0.
inline Mat4 dirac_matrix(double W, double m, cplx kx, cplx kz) {
    Mat4 M{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            M[i][j] = (i == j ? cplx(W) : cplx(0)) - kx * alpha_x()[i][j] - kz * alpha_z()[i][j] -
                      cplx(m) * beta_mat()[i][j];
    return M;
}

inline Vec4 mat_vec(const Mat4& M, const Vec4& v) {
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out[i] += M[i][j] * v[j];
    return out;
}

inline double max_abs(const Vec4& v) {
    double s = 0.0;
    for (const auto& c : v) s = std::max(s, std::abs(c));
    return s;
}

// Largest residual component of M v, for checking that a spinor solves its
// bulk equation.
inline double dirac_residual(const Mat4& M, const Vec4& v) {
    return max_abs(mat_vec(M, v));
}

// x component of the probability current, psi^dag alpha_x psi. Real by
// construction, so the two cross terms are folded together.
inline double current_x(const Vec4& v) {
    return 2.0 * (std::conj(v[0]) * v[3]).real() + 2.0 * (std::conj(v[1]) * v[2]).real();
}

// Incident positive-energy spinor with momentum (px, pz) and spin mixing ell
// between the two transverse-spin channels. Unnormalized on purpose: every
// observable below divides the normalization out.
inline Vec4 incident_spinor(double E, double m, const Momenta& k, double ell) {
    return Vec4{cplx(E + m), cplx(ell * (E + m)), cplx(k.pz + ell * k.px), cplx(k.px - ell * k.pz)};
}

// Spin basis of the reflected wave, momentum (-px, pz).
inline std::pair<Vec4, Vec4> reflected_basis(double E, double m, const Momenta& k) {
    Vec4 r1{cplx(E + m), cplx(0), cplx(k.pz), cplx(-k.px)};
    Vec4 r2{cplx(0), cplx(E + m), cplx(-k.px), cplx(-k.pz)};
    return {r1, r2};
}

// Normal momentum on the barrier side: real and propagating when the step is
// high enough, i qx (decaying for x > 0) under total reflection.
inline cplx transmitted_kx(const Momenta& k, Regime regime) {
    return regime == Regime::Transmitting ? cplx(k.pxp, 0.0) : cplx(0.0, k.qx);
}

// Spin basis of the transmitted wave. These are the solutions of the barrier
// bulk equation with energy slot V - E, the assignment that keeps the step
// free of the spurious amplified-transmission artifact.
inline std::pair<Vec4, Vec4> transmitted_basis(double E, double m, double V, const Momenta& k,
                                               Regime regime) {
    if (is_singular_barrier(E, m, V))
        throw singular_barrier_error("transmitted basis undefined at V = E - m");
    const cplx pxp = transmitted_kx(k, regime);
    Vec4 t1{cplx(V - E + m), cplx(0), cplx(k.pz), pxp};
    Vec4 t2{cplx(0), cplx(V - E + m), pxp, cplx(-k.pz)};
    return {t1, t2};
}

} // namespace diracgh
