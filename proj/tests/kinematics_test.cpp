#include <gtest/gtest.h>

#include <diracgh/kinematics.hpp>

#include <cmath>
#include <random>

using namespace diracgh;

namespace {
constexpr double kPi = 3.141592653589793;
}

// Reference values below were produced with 40-digit arithmetic and frozen.

TEST(Kinematics, MomentaAtReferencePoints) {
    const Momenta k = derive_momenta(10.0, 1.0, 10.0, kPi / 4);
    EXPECT_NEAR(k.p, 9.9498743710661995, 1e-13);
    EXPECT_NEAR(k.px, 7.0356236397351443, 1e-13);
    EXPECT_NEAR(k.pz, 7.0356236397351443, 1e-13);
    EXPECT_NEAR(k.px2p, -50.5, 1e-12);
    EXPECT_DOUBLE_EQ(k.pxp, 0.0);
    EXPECT_NEAR(k.qx, 7.1063352017759477, 1e-13);

    const Momenta t = derive_momenta(10.0, 1.0, 25.0, kPi / 6);
    EXPECT_NEAR(t.pz, 4.9749371855330998, 1e-13);
    EXPECT_NEAR(t.px2p, 199.25, 1e-11);
    EXPECT_NEAR(t.pxp, 14.115594213493104, 1e-13);
    EXPECT_DOUBLE_EQ(t.qx, 0.0);
}

TEST(Kinematics, GammaAtReferencePoints) {
    EXPECT_NEAR(gamma_scale(10.0, 1.0, kPi / 6), 5.0744457825461097, 1e-13);
    EXPECT_NEAR(gamma_scale(10.0, 1.0, kPi / 4), 7.1063352017759477, 1e-13);
    EXPECT_DOUBLE_EQ(gamma_scale(10.0, 1.0, 0.0), 1.0);
}

TEST(Kinematics, RegimeExamples) {
    EXPECT_EQ(classify_regime(10.0, 1.0, 25.0, kPi / 6), Regime::Transmitting);
    EXPECT_EQ(classify_regime(10.0, 1.0, 10.0, kPi / 4), Regime::TotalReflection);
    EXPECT_EQ(classify_regime(10.0, 1.0, 1.0, kPi / 6), Regime::OutsideValidity);
}

TEST(Kinematics, RegimeBoundariesBelongOutsideTheBand) {
    const double E = 10.0, m = 1.0, phi = 0.3;
    const double g = gamma_scale(E, m, phi);
    EXPECT_EQ(classify_regime(E, m, E + g, phi), Regime::Transmitting);
    EXPECT_EQ(classify_regime(E, m, E - g, phi), Regime::OutsideValidity);
    EXPECT_EQ(classify_regime(E, m, E + g * (1 - 1e-12), phi), Regime::TotalReflection);
    EXPECT_EQ(classify_regime(E, m, E - g * (1 - 1e-12), phi), Regime::TotalReflection);
}

TEST(Kinematics, RandomIdentities) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uE(1.1, 50.0), uV(0.01, 100.0), uPhi(0.0, 1.55);
    for (int i = 0; i < 2000; ++i) {
        const double E = uE(rng), V = uV(rng), phi = uPhi(rng);
        const Momenta k = derive_momenta(E, 1.0, V, phi);
        const double g = gamma_scale(E, 1.0, phi);
        EXPECT_NEAR(g * g, 1.0 + k.pz * k.pz, 1e-9 * g * g);
        EXPECT_NEAR(k.px * k.px + k.pz * k.pz, k.p * k.p, 1e-12 * k.p * k.p);
        // exactly one of the two barrier-side momenta is nonzero (both vanish
        // only on the regime boundary itself)
        EXPECT_TRUE(k.pxp == 0.0 || k.qx == 0.0);

        const Regime r = classify_regime(E, 1.0, V, phi);
        if (r == Regime::TotalReflection) {
            EXPECT_LT(k.px2p, 0.0);
        } else {
            EXPECT_GE(k.px2p, 0.0);
        }

        const Momenta kp = derive_momenta_pz(E, 1.0, V, k.pz);
        EXPECT_NEAR(kp.px, k.px, 1e-12 * std::max(1.0, k.px));
    }
}

TEST(Kinematics, IndexRatio) {
    EXPECT_NEAR(index_ratio(10.0, 1.0, 25.0), 0.6875, 1e-15);
    EXPECT_LT(index_ratio(10.0, 1.0, 8.5), 0.0); // below V = E - m the ratio flips sign
    EXPECT_THROW(index_ratio(10.0, 1.0, 9.0), singular_barrier_error);
    EXPECT_TRUE(is_singular_barrier(10.0, 1.0, 9.0));
    EXPECT_FALSE(is_singular_barrier(10.0, 1.0, 9.001));
}

TEST(Kinematics, InputValidation) {
    EXPECT_THROW(derive_momenta(0.5, 1.0, 1.0, 0.1), std::invalid_argument);
    EXPECT_THROW(derive_momenta(10.0, 1.0, 1.0, kPi / 2), std::invalid_argument);
    EXPECT_THROW(derive_momenta(10.0, -1.0, 1.0, 0.1), std::invalid_argument);
    EXPECT_THROW(derive_momenta_pz(10.0, 1.0, 5.0, 9.95), regime_error);
}
