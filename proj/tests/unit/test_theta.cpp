#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "loggas/theta.hpp"

using namespace loggas;
using namespace loggas::theta;

namespace {

constexpr double pi = std::numbers::pi;

// d/dtau via d/dt: tau = i t so d/dtau = -i d/dt. Central differences in t
// refined by a four-level Richardson table.
cplx tau_derivative_fd(int k, cplx z, double t) {
  auto val = [&](double tt) { return theta_k(k, z, ThetaParams::make(tt)).value; };
  const int L = 4;
  cplx T[L][L];
  double h = 0.02;
  for (int i = 0; i < L; ++i, h *= 0.5) {
    T[i][0] = (val(t + h) - val(t - h)) / (2.0 * h);
    double f = 4.0;
    for (int j = 1; j <= i; ++j, f *= 4.0) T[i][j] = T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (f - 1.0);
  }
  return cplx(0.0, -1.0) * T[L - 1][L - 1];
}

}  // namespace

TEST(Theta, ParamsValidation) {
  EXPECT_THROW(ThetaParams::make(0.0), InvalidArgument);
  EXPECT_THROW(ThetaParams::make(-1.0), InvalidArgument);
  const auto p = ThetaParams::make(1.0);
  EXPECT_GE(p.k_max, 1);
  EXPECT_LT(std::pow(p.q, p.k_max * p.k_max), 1e-18);
  EXPECT_THROW(theta_k(4, 0.0, p), InvalidArgument);
}

TEST(Theta, Theta1VanishesAtOrigin) {
  for (double t : {0.3, 1.0, 4.0}) EXPECT_EQ(theta_k(1, 0.0, ThetaParams::make(t)).value, cplx(0.0));
}

TEST(Theta, Theta3AtTwoI) {
  const double q = std::exp(-2.0 * pi);
  const double expect = 1.0 + 2.0 * q + 2.0 * std::pow(q, 4) + 2.0 * std::pow(q, 9);
  EXPECT_NEAR(theta_k(3, 0.0, ThetaParams::make(2.0)).value.real(), expect, 1e-16);
  EXPECT_NEAR(theta_k(3, 0.0, ThetaParams::make(2.0).doubled()).value.real(), expect, 1e-16);
}

TEST(Theta, ShiftByHalfConnectsTheta0AndTheta3) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto p = ThetaParams::make(0.8);
  for (int i = 0; i < 50; ++i) {
    const cplx z(U(rng), 0.5 * U(rng));
    EXPECT_LT(std::abs(theta_k(0, z + 0.5, p).value - theta_k(3, z, p).value), 1e-13);
  }
}

TEST(Theta, RealOnRealAxisAndConjugateSymmetric) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const auto p = ThetaParams::make(0.3 + 2.0 * std::abs(U(rng)));
    const double x = 3.0 * U(rng);
    const cplx z(U(rng), p.t * U(rng));
    for (int k = 0; k < 4; ++k) {
      const auto r = theta_k(k, x, p);
      EXPECT_EQ(r.value.imag(), 0.0);
      EXPECT_EQ(r.d1.imag(), 0.0);
      EXPECT_EQ(r.d2.imag(), 0.0);
      const auto a = theta_k(k, std::conj(z), p), b = theta_k(k, z, p);
      EXPECT_LT(std::abs(a.value - std::conj(b.value)), 1e-14 * std::max(1.0, std::abs(b.value)));
      EXPECT_LT(std::abs(a.d2 - std::conj(b.d2)), 1e-13 * std::max(1.0, std::abs(b.d2)));
    }
  }
}

TEST(Theta, Parity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto p = ThetaParams::make(1.1);
  for (int i = 0; i < 40; ++i) {
    const cplx z(U(rng), p.t * U(rng));
    for (int k = 0; k < 4; ++k) {
      const cplx a = theta_k(k, z, p).value, b = theta_k(k, -z, p).value;
      const cplx d = (k == 1) ? a + b : a - b;
      EXPECT_LT(std::abs(d), 1e-14 * std::max(1.0, std::abs(a))) << k;
    }
  }
}

TEST(Theta, ZeroLocations) {
  for (double t : {0.4, 1.0, 2.5}) {
    const auto p = ThetaParams::make(t);
    const cplx tau(0.0, t);
    EXPECT_LT(std::abs(theta_k(3, 0.5 + 0.5 * tau, p).value), 1e-12);
    EXPECT_LT(std::abs(theta_k(0, 0.5 * tau, p).value), 1e-12);
    EXPECT_LT(std::abs(theta_k(2, 0.5, p).value), 1e-12);
  }
}

TEST(Theta, DerivativesMatchFiniteDifferences) {
  const auto p = ThetaParams::make(0.9);
  const cplx z(0.31, 0.2);
  const double h = 1e-4;
  for (int k = 0; k < 4; ++k) {
    const auto c = theta_k(k, z, p);
    const cplx fd1 = (theta_k(k, z + h, p).value - theta_k(k, z - h, p).value) / (2 * h);
    const cplx fd2 = (theta_k(k, z + h, p).value - 2.0 * c.value + theta_k(k, z - h, p).value) / (h * h);
    EXPECT_LT(std::abs(fd1 - c.d1), 1e-7 * std::max(1.0, std::abs(c.d1)));
    EXPECT_LT(std::abs(fd2 - c.d2), 1e-5 * std::max(1.0, std::abs(c.d2)));
  }
}

TEST(Theta, HeatEquation) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double t = 0.6 + 1.5 * std::abs(U(rng));
    const auto p = ThetaParams::make(t);
    const cplx z(U(rng), 0.5 * t * U(rng));
    for (int k = 0; k < 4; ++k) {
      const cplx heat = theta_tau_derivative(k, z, p);
      const cplx series = theta_tau_derivative_series(k, z, p);
      const double scale = std::max(1.0, std::abs(series));
      EXPECT_LT(std::abs(heat - series) / scale, 1e-12);
      EXPECT_LT(std::abs(tau_derivative_fd(k, z, t) - series) / scale, 1e-10) << k << " t=" << t;
    }
  }
  EXPECT_EQ(theta_tau_derivative(1, 0.0, ThetaParams::make(1.0)), cplx(0.0));
}

TEST(Theta, TruncationStability) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const auto p = ThetaParams::make(0.2 + 2.0 * std::abs(U(rng)));
    const cplx z(U(rng), p.t * U(rng));
    for (int k = 0; k < 4; ++k) {
      const cplx a = theta_k(k, z, p).value, b = theta_k(k, z, p.doubled()).value;
      EXPECT_LT(std::abs(a - b), 1e-15 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST(Theta, WindowFlag) {
  const auto p = ThetaParams::make(0.5);
  EXPECT_FALSE(theta_k(3, cplx(0.1, 0.4), p).out_of_window);
  // still evaluates: quasi-periodicity theta3(z + tau) = e^{pi t - 2 pi i z} theta3(z)
  const cplx z(0.1, 0.5);
  const auto r = theta_k(3, z + cplx(0.0, 0.5), p);
  EXPECT_TRUE(r.out_of_window);
  const cplx expect = std::exp(pi * 0.5 - cplx(0.0, 2.0 * pi) * z) * theta_k(3, z, p).value;
  EXPECT_LT(std::abs(r.value - expect) / std::abs(expect), 1e-13);
}

TEST(ThetaIdentities, AtOrigin) {
  const auto rep = verify_theta_identities(0.0, 0.0, ThetaParams::make(1.0));
  for (const auto& r : rep.residuals) EXPECT_LT(r.residual, 1e-14) << r.name;
}

TEST(ThetaIdentities, GenericPoint) {
  const auto rep = verify_theta_identities(cplx(0.2, 0.1), 0.35, ThetaParams::make(1.0));
  EXPECT_GE(rep.residuals.size(), 11u);
  for (const auto& r : rep.residuals) EXPECT_LT(r.residual, 1e-12) << r.name;
}

TEST(ThetaIdentities, RandomSamples) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = 0.3 + 2.7 * std::abs(U(rng));
    const cplx z(U(rng), 0.25 * t * U(rng)), w(U(rng), 0.25 * t * U(rng));
    const auto rep = verify_theta_identities(z, w, ThetaParams::make(t));
    EXPECT_LT(rep.max_residual(), 1e-12) << "t=" << t << " z=" << z << " w=" << w;
  }
}

TEST(ThetaIdentities, Periodicity) {
  const auto p = ThetaParams::make(0.7);
  const cplx z(0.123, 0.05);
  EXPECT_LT(std::abs(theta_k(3, z + 1.0, p).value - theta_k(3, z, p).value), 1e-14);
}
