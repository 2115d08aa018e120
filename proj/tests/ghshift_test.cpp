#include <gtest/gtest.h>

#include <diracgh/ghshift.hpp>

#include <cmath>
#include <random>

using namespace diracgh;

namespace {
constexpr double kPi = 3.141592653589793;

double deg(double d) { return d * kPi / 180.0; }
} // namespace

TEST(GhShift, ReferenceValues) {
    const GhResult r1 = gh_shift_analytic(10.0, 1.0, 10.0, kPi / 4);
    EXPECT_NEAR(r1.delta_z, 0.14071950894605837, 1e-15);
    EXPECT_NEAR(r1.delta_z, 1.0 / std::sqrt(50.5), 1e-16);
    EXPECT_NEAR(r1.delta_phase, 0.9900495037128094, 1e-14);
    EXPECT_FALSE(r1.near_edge);

    const GhResult r2 = gh_shift_analytic(10.0, 1.0, 9.7, deg(5.0));
    EXPECT_NEAR(r2.delta_z, -0.048339813160354243, 1e-15);
    EXPECT_NEAR(r2.delta_phase, -0.041919739300427071, 1e-15);

    const GhResult r3 = gh_shift_analytic(10.0, 1.0, 10.4, deg(30.0));
    EXPECT_NEAR(r3.delta_z, 0.13186027173195823, 1e-15);
}

TEST(GhShift, ShiftCurvesSpreadAndOrdering) {
    // shifts at two angles for three step heights around E
    const double vs[] = {9.7, 10.0, 10.4};
    const double at20[] = {0.078426756905420441, 0.10261520991796748, 0.13610945799934323};
    const double at80[] = {0.55824139583434836, 0.57578754563011697, 0.60002273633721072};
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(gh_shift_analytic(10.0, 1.0, vs[i], deg(20.0)).delta_z, at20[i], 1e-14);
        EXPECT_NEAR(gh_shift_analytic(10.0, 1.0, vs[i], deg(80.0)).delta_z, at80[i], 1e-14);
    }
    // the three curves approach each other at grazing incidence
    for (int i = 0; i + 1 < 3; ++i) {
        EXPECT_LT(at80[i + 1] - at80[i], at20[i + 1] - at20[i]);
    }
}

TEST(GhShift, ThreeClosedFormsAgree) {
    const double a = gh_shift_analytic(37.25, 1.0, 36.9, 1.1).delta_z;
    const double b = gh_shift_alt_doubleangle(37.25, 1.0, 36.9, 1.1);
    const double c = gh_shift_alt_potential(37.25, 1.0, 36.9, 1.1);
    EXPECT_NEAR(a, 0.058481786310116206, 1e-13 * a);
    EXPECT_NEAR(b, 0.058481786310116206, 1e-13 * b);
    EXPECT_NEAR(c, 0.058481786310116206, 1e-13 * c);

    std::mt19937_64 rng(9001);
    std::uniform_real_distribution<double> uE(1.1, 50.0), uPhi(0.01, 1.55), uF(-0.999, 0.999);
    int seen = 0;
    while (seen < 500) {
        const double E = uE(rng), phi = uPhi(rng);
        const double g = gamma_scale(E, 1.0, phi);
        const double V = E + uF(rng) * g; // anywhere inside the reflecting window
        if (V <= 0.0 || is_singular_barrier(E, 1.0, V)) continue;
        if (classify_regime(E, 1.0, V, phi) != Regime::TotalReflection) continue;
        ++seen;
        const double d1 = gh_shift_analytic(E, 1.0, V, phi).delta_z;
        const double d2 = gh_shift_alt_doubleangle(E, 1.0, V, phi);
        const double d3 = gh_shift_alt_potential(E, 1.0, V, phi);
        const double scale = std::max({std::abs(d1), std::abs(d2), std::abs(d3)});
        EXPECT_LE(std::abs(d1 - d2), 1e-12 * scale);
        EXPECT_LE(std::abs(d1 - d3), 1e-12 * scale);
    }
}

TEST(GhShift, PhaseDerivativeOracleMatches) {
    const FdResult f1 = gh_shift_fd(10.0, 1.0, 10.0, kPi / 4);
    EXPECT_NEAR(f1.value, 0.14071950894605837, 1e-8 * 0.14071950894605837);
    EXPECT_GT(f1.h, 0.0);

    const FdResult f2 = gh_shift_fd(10.0, 1.0, 9.7, deg(5.0));
    EXPECT_NEAR(f2.value, -0.048339813160354243, 1e-8 * 0.048339813160354243);

    const FdResult f3 = gh_shift_fd(30.0, 1.0, 29.3, 0.9);
    EXPECT_NEAR(f3.value, 0.051591298218606949, 1e-8 * 0.051591298218606949);
}

TEST(GhShift, ReflectionPhaseEvaluator) {
    ReflectionPhase phase(10.0, 1.0, 9.7);
    const double pz = derive_momenta(10.0, 1.0, 9.7, deg(5.0)).pz;
    EXPECT_NEAR(phase(pz), 1.9268255726559387, 1e-12);
    const double p = std::sqrt(99.0);
    EXPECT_THROW(phase(p + 1.0), regime_error);
    EXPECT_THROW((ReflectionPhase{10.0, 1.0, 9.0}), singular_barrier_error);
}

TEST(GhShift, PhaseContinuousAcrossTheBand) {
    ReflectionPhase phase(10.0, 1.0, 9.7);
    const double p = std::sqrt(99.0);
    double prev = phase(1e-3 * p);
    for (int i = 1; i <= 2000; ++i) {
        const double pz = (1e-3 + (0.999 - 1e-3) * i / 2000.0) * p;
        const double cur = phase(pz);
        EXPECT_GT(cur, 0.0);
        EXPECT_LT(cur, kPi);
        EXPECT_LT(std::abs(cur - prev), 0.05);
        prev = cur;
    }
}

TEST(GhShift, SignTracksTheClosedFormPredicate) {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> uE(1.1, 50.0), uPhi(0.05, 1.5), uF(-0.99, 0.99);
    int seen = 0;
    while (seen < 2000) {
        const double E = uE(rng), phi = uPhi(rng);
        const double g = gamma_scale(E, 1.0, phi);
        const double V = E + uF(rng) * g;
        if (V <= 0.0 || is_singular_barrier(E, 1.0, V)) continue;
        if (classify_regime(E, 1.0, V, phi) != Regime::TotalReflection) continue;
        const long double pred = gh_sign_argument(E, 1.0, V, phi);
        if (std::abs(static_cast<double>(pred)) < 1e-6) continue; // too close to the boundary to call
        ++seen;
        const double dz = gh_shift_analytic(E, 1.0, V, phi).delta_z;
        EXPECT_EQ(dz > 0.0, pred > 0.0L);
    }
}

TEST(GhShift, NormalIncidenceHasNoShift) {
    EXPECT_EQ(gh_shift_analytic(10.0, 1.0, 9.7, 0.0).delta_z, 0.0);
}

TEST(GhShift, ThresholdSolutions) {
    const Threshold vc = threshold_potential(10.0, 1.0, 0.0);
    ASSERT_TRUE(vc.exists);
    EXPECT_NEAR(vc.value, 9.9, 1e-13);

    const Threshold pc = threshold_angle(10.0, 1.0, 9.7);
    ASSERT_TRUE(pc.exists);
    EXPECT_NEAR(pc.value, 0.14261677956075887, 1e-15);

    const Threshold ec = threshold_energy(1.0, 9.0, 0.0);
    ASSERT_TRUE(ec.exists);
    EXPECT_NEAR(ec.value, 9.1097722286464437, 1e-13);

    EXPECT_FALSE(threshold_angle(10.0, 1.0, 15.0).exists);

    // the predicate flips sign across each solved threshold
    EXPECT_LT(gh_sign_argument(10.0, 1.0, 9.9 - 1e-6, 0.0), 0.0L);
    EXPECT_GT(gh_sign_argument(10.0, 1.0, 9.9 + 1e-6, 0.0), 0.0L);
    EXPECT_LT(gh_sign_argument(10.0, 1.0, 9.7, pc.value - 1e-6), 0.0L);
    EXPECT_GT(gh_sign_argument(10.0, 1.0, 9.7, pc.value + 1e-6), 0.0L);
    // in E the predicate is a concave parabola: positive below the root
    EXPECT_GT(gh_sign_argument(ec.value - 1e-6, 1.0, 9.0, 0.0), 0.0L);
    EXPECT_LT(gh_sign_argument(ec.value + 1e-6, 1.0, 9.0, 0.0), 0.0L);
}

TEST(GhShift, GrazingExitFlagged) {
    const double g = gamma_scale(10.0, 1.0, deg(30.0));
    const GhResult r = gh_shift_analytic(10.0, 1.0, 10.0 + g * (1.0 - 1e-10), deg(30.0));
    EXPECT_TRUE(r.near_edge);
    EXPECT_TRUE(std::isfinite(r.delta_z));
}

TEST(GhShift, StepTooCloseToBandEdgeForDifferencing) {
    const double g2 = 50.5; // squared transverse scale at E=10, 45 degrees
    const double V = 10.0 - std::sqrt(g2 - 0.005);
    ASSERT_EQ(classify_regime(10.0, 1.0, V, kPi / 4), Regime::TotalReflection);
    EXPECT_THROW(gh_shift_fd(10.0, 1.0, V, kPi / 4), step_error);
}

TEST(GhShift, WrongRegimeRejected) {
    EXPECT_THROW(gh_shift_analytic(10.0, 1.0, 25.0, kPi / 6), regime_error);
    EXPECT_THROW(gh_shift_analytic(10.0, 1.0, 1.0, kPi / 6), regime_error);
    EXPECT_THROW(gh_shift_fd(10.0, 1.0, 25.0, kPi / 6), regime_error);
}

TEST(GhShift, SingularBarrierKeepsTheShiftOnly) {
    const GhResult r = gh_shift_analytic(10.0, 1.0, 9.0, deg(30.0));
    EXPECT_TRUE(r.singular_barrier);
    EXPECT_TRUE(std::isnan(r.theta));
    EXPECT_TRUE(std::isfinite(r.delta_z));
    EXPECT_GT(r.delta_z, 0.0);
}
