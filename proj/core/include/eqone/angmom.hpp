#pragma once

// Finite-dimensional angular-momentum algebra.
//
// Operators are dimensionless (hbar factored out) and expressed in the Jz
// eigenbasis with the basis ordered m = J, J-1, ..., -J.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace eqone::angmom {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using Axis = std::array<double, 3>;

/// Stores 2J so that half-integer spins are exact.
class SpinQuantumNumber {
 public:
  constexpr SpinQuantumNumber() = default;
  constexpr explicit SpinQuantumNumber(int two_j) : two_j_(two_j) {}

  /// Accepts 0, 0.5, 1, ... ; throws InputError otherwise.
  static SpinQuantumNumber from_real(double j);

  constexpr int two_j() const { return two_j_; }
  constexpr double value() const { return 0.5 * two_j_; }
  constexpr std::size_t dim() const { return static_cast<std::size_t>(two_j_) + 1; }
  constexpr bool is_half_integer() const { return two_j_ % 2 == 1; }

  friend constexpr bool operator==(SpinQuantumNumber, SpinQuantumNumber) = default;

 private:
  int two_j_ = 1;
};

inline constexpr int kDefaultMaxTwoJ = 2000;

/// Tolerance used for eigen-decomposition residuals: 1e-12 up to J = 10,
/// 1e-9 above.
double eigen_tolerance(SpinQuantumNumber j);

/// The Jx, Jy, Jz, J+ and J- matrices for one spin, plus a cached
/// eigenbasis of Jy (the measured component).
class SpinSystem {
 public:
  SpinQuantumNumber spin() const { return spin_; }
  double j() const { return spin_.value(); }
  std::size_t dim() const { return spin_.dim(); }

  const OperatorMatrix& jx() const { return jx_; }
  const OperatorMatrix& jy() const { return jy_; }
  const OperatorMatrix& jz() const { return jz_; }
  const OperatorMatrix& jplus() const { return jplus_; }
  const OperatorMatrix& jminus() const { return jminus_; }

  /// Column k is the Jy eigenvector with eigenvalue m = J - k.
  const OperatorMatrix& jy_eigenvectors() const { return jy_vectors_; }

  /// The m value (times two) carried by basis index k: 2J - 2k.
  int two_m_at(std::size_t k) const { return spin_.two_j() - 2 * static_cast<int>(k); }

 private:
  friend SpinSystem build_spin_system(SpinQuantumNumber, int);

  SpinQuantumNumber spin_;
  OperatorMatrix jx_, jy_, jz_, jplus_, jminus_;
  OperatorMatrix jy_vectors_;
};

/// Ladder-operator construction; rejects two_j above `max_two_j`.
SpinSystem build_spin_system(SpinQuantumNumber j, int max_two_j = kDefaultMaxTwoJ);

/// Normalized pure state. The norm invariant is checked on construction.
class StateVector {
 public:
  /// Normalizes `amplitudes`; throws InputError for a zero vector.
  static StateVector normalized(Eigen::VectorXcd amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

  Complex inner(const StateVector& other) const;

 private:
  explicit StateVector(Eigen::VectorXcd a) : amplitudes_(std::move(a)) {}
  Eigen::VectorXcd amplitudes_;
};

/// axis . J for a unit axis.
OperatorMatrix axis_operator(const SpinSystem& system, const Axis& axis);

/// Eigenvector of (axis . J) with eigenvalue m = J - k, for k = 0..2J.
/// The global phase makes the largest-magnitude amplitude real positive.
StateVector axis_eigenstate(const SpinSystem& system, const Axis& axis, std::size_t k);

/// |J, J> along `axis`.
StateVector max_projection_state(const SpinSystem& system, const Axis& axis);

/// exp(-i * angle * generator) |state>. The generator must be Hermitian.
StateVector evolve(const StateVector& state, const OperatorMatrix& generator, double angle);

/// <state| op |state>; op is expected to be Hermitian.
double expectation(const StateVector& state, const OperatorMatrix& op);

/// <op^2> - <op>^2, clamped to zero when within -1e-12 of it.
double variance(const StateVector& state, const OperatorMatrix& op);

/// Max elementwise |A - A^dagger|.
double hermiticity_defect(const OperatorMatrix& op);

/// Born probabilities of measuring Jy = J - k, k = 0..2J.
std::vector<double> jy_outcome_probabilities(const SpinSystem& system, const StateVector& state);

}  // namespace eqone::angmom
