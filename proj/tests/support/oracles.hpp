#pragma once

// Reference computations that avoid the library's own code paths.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using cd = std::complex<double>;

// Horner on raw coefficients, lowest degree first.
inline cd horner(const std::vector<double>& c, cd s) {
  cd acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

// c (sI - A)^-1 b + d by a dense complex solve.
inline cd resolvent(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::RowVectorXd& c, double d,
                    cd s) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<cd>();
  Eigen::VectorXcd x = M.partialPivLu().solve(b.cast<cd>());
  return (c.cast<cd>() * x)(0) + d;
}

// exp(A t) through a complex eigendecomposition; A must be diagonalizable.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& A, double t) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::MatrixXcd V = es.eigenvectors();
  Eigen::VectorXcd e = es.eigenvalues();
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = std::exp(e(i) * t);
  return (V * e.asDiagonal() * V.inverse()).real();
}

// Classic RK4 for x' = f(t, x).
inline Eigen::VectorXd rk4(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                           Eigen::VectorXd x, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = f(t, x);
    const Eigen::VectorXd k2 = f(t + h / 2, x + h / 2 * k1);
    const Eigen::VectorXd k3 = f(t + h / 2, x + h / 2 * k2);
    const Eigen::VectorXd k4 = f(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return x;
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3;
}

// Maxwell-Boltzmann speed density at unit mass, and its logarithm.
inline double mb_log_pdf(double T, double v) {
  return std::log(4 * M_PI) - 1.5 * std::log(2 * M_PI * T) + 2 * std::log(v) - v * v / (2 * T);
}
inline double mb_pdf(double T, double v) { return std::exp(mb_log_pdf(T, v)); }

// Chain of n sites, fixed ends: q'' = -V2 q. Returns (q(t), p(t)).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> chain_modes(const Eigen::MatrixXd& V2, const Eigen::VectorXd& q0,
                                                               const Eigen::VectorXd& p0, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(V2);
  const Eigen::MatrixXd& U = es.eigenvectors();
  const Eigen::VectorXd w = es.eigenvalues().cwiseSqrt();
  const Eigen::VectorXd a = U.transpose() * q0, b = U.transpose() * p0;
  Eigen::VectorXd qa(w.size()), pa(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    qa(i) = a(i) * std::cos(w(i) * t) + b(i) / w(i) * std::sin(w(i) * t);
    pa(i) = -a(i) * w(i) * std::sin(w(i) * t) + b(i) * std::cos(w(i) * t);
  }
  return {U * qa, U * pa};
}

}  // namespace oracle
