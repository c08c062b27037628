#pragma once

// Test-only reference computations. Nothing here calls into eqone: the
// matrices come from the textbook matrix-element formulas, the propagator
// from a Taylor series with scaling and squaring, eigenvectors from the
// general (non-Hermitian) complex eigensolver, and the Born probabilities
// additionally from the closed-form Wigner-d binomial.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using C = std::complex<double>;

struct SpinMatrices {
  Mat jx, jy, jz;
};

// Basis index k <-> m = J - k. Matrix elements of Jx and Jy written directly:
//   <m+1|Jx|m> = sqrt((J-m)(J+m+1))/2,     <m-1|Jx|m> = sqrt((J+m)(J-m+1))/2
//   <m+1|Jy|m> = -i sqrt((J-m)(J+m+1))/2,  <m-1|Jy|m> = +i sqrt((J+m)(J-m+1))/2
inline SpinMatrices textbook(int two_j) {
  const int n = two_j + 1;
  SpinMatrices s{Mat::Zero(n, n), Mat::Zero(n, n), Mat::Zero(n, n)};
  for (int k = 0; k < n; ++k) {
    const int two_m = two_j - 2 * k;
    s.jz(k, k) = 0.5 * two_m;
    if (k > 0) {  // raise: row k-1
      const double a = 0.5 * std::sqrt(0.25 * (two_j - two_m) * (two_j + two_m + 2));
      s.jx(k - 1, k) = a;
      s.jy(k - 1, k) = C(0.0, -a);
    }
    if (k < n - 1) {  // lower: row k+1
      const double b = 0.5 * std::sqrt(0.25 * (two_j + two_m) * (two_j - two_m + 2));
      s.jx(k + 1, k) = b;
      s.jy(k + 1, k) = C(0.0, b);
    }
  }
  return s;
}

inline Mat expm(const Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Mat scaled = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// Eigenvectors of a (Hermitian) matrix via the general solver, sorted by
// descending real eigenvalue.
inline std::vector<std::pair<double, Vec>> eig_desc(const Mat& h) {
  Eigen::ComplexEigenSolver<Mat> solver(h);
  std::vector<std::pair<double, Vec>> out;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    out.emplace_back(solver.eigenvalues()[i].real(), solver.eigenvectors().col(i).normalized());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

// Dense route: |J,J>_x, precess by exp(-i phi Jz), project on Jy eigenvectors.
inline std::vector<double> born_dense(int two_j, double phi) {
  const auto s = textbook(two_j);
  const Vec psi0 = eig_desc(s.jx).front().second;
  const Vec psi = expm(C(0.0, -phi) * s.jz) * psi0;
  std::vector<double> p;
  for (const auto& [value, v] : eig_desc(s.jy)) p.push_back(std::norm(v.dot(psi)));
  return p;
}

// Closed form: a coherent state at angle theta from y, cos(theta) = sin(phi),
// gives P(m) = C(2J, J+m) ((1 + sin phi)/2)^(J+m) ((1 - sin phi)/2)^(J-m).
inline std::vector<double> born_binomial(int two_j, double phi) {
  const double up = 0.5 * (1.0 + std::sin(phi));
  const double down = 0.5 * (1.0 - std::sin(phi));
  std::vector<double> p;
  for (int k = 0; k <= two_j; ++k) {
    const int j_plus_m = two_j - k;
    const double binom = std::exp(std::lgamma(two_j + 1.0) - std::lgamma(j_plus_m + 1.0) - std::lgamma(k + 1.0));
    p.push_back(binom * std::pow(up, j_plus_m) * std::pow(down, k));
  }
  return p;
}

// Per-shot Bernoulli/delta-method sensitivity: for the coherent state the
// estimator variance per shot is Var(m) / (J cos phi)^2 = 1 / (2J), so
// d omega = 1 / (t1 sqrt(2J shots)).
inline double delta_omega_delta_method(double j, double t1, double shots) {
  return 1.0 / (t1 * std::sqrt(2.0 * j * shots));
}

}  // namespace oracle
