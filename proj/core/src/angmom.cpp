#include "eqone/angmom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eqone/errors.hpp"

namespace eqone::angmom {
namespace {

constexpr double kAxisNormTolerance = 1e-9;
constexpr double kHermitianTolerance = 1e-10;

// Makes the first largest-magnitude amplitude real and positive.
void fix_global_phase(Eigen::VectorXcd& v) {
  double largest = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v[i]));
  if (largest == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= largest * (1.0 - 1e-9)) {
      const Complex phase = std::conj(v[i]) / std::abs(v[i]);
      v *= phase;
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

// Eigenvectors of a Hermitian matrix, ordered by descending eigenvalue, each
// with the global phase convention applied.
OperatorMatrix descending_eigenvectors(const OperatorMatrix& h) {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericError("eigen-decomposition failed");
  const auto n = h.rows();
  OperatorMatrix out(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXcd col = solver.eigenvectors().col(n - 1 - k);
    col.normalize();
    fix_global_phase(col);
    out.col(k) = col;
  }
  return out;
}

void require_unit_axis(const Axis& axis) {
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(std::abs(norm - 1.0) <= kAxisNormTolerance)) {
    throw InputError("axis must be a unit vector (|n| = " + std::to_string(norm) + ")");
  }
}

bool is_diagonal(const OperatorMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != c && m(r, c) != Complex(0.0, 0.0)) return false;
  return true;
}

}  // namespace

SpinQuantumNumber SpinQuantumNumber::from_real(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || j < 0.0 || std::abs(twice - rounded) > 1e-9 || rounded > 1e6) {
    throw InputError("spin J must be a non-negative multiple of 1/2, got " + std::to_string(j));
  }
  return SpinQuantumNumber(static_cast<int>(rounded));
}

double eigen_tolerance(SpinQuantumNumber j) { return j.two_j() <= 20 ? 1e-12 : 1e-9; }

SpinSystem build_spin_system(SpinQuantumNumber j, int max_two_j) {
  if (j.two_j() < 0) throw InputError("two_j must be non-negative");
  if (j.two_j() > max_two_j) {
    throw InputError("two_j = " + std::to_string(j.two_j()) + " exceeds the dimension cap " +
                     std::to_string(max_two_j));
  }
  const auto n = static_cast<Eigen::Index>(j.dim());
  const double jj = j.value();
  const double casimir = jj * (jj + 1.0);

  SpinSystem s;
  s.spin_ = j;
  s.jz_ = OperatorMatrix::Zero(n, n);
  s.jplus_ = OperatorMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = jj - static_cast<double>(k);
    s.jz_(k, k) = m;
    // <m+1| J+ |m> sits one row above the diagonal in descending order.
    if (k > 0) s.jplus_(k - 1, k) = std::sqrt(casimir - m * (m + 1.0));
  }
  s.jminus_ = s.jplus_.adjoint();
  s.jx_ = 0.5 * (s.jplus_ + s.jminus_);
  s.jy_ = Complex(0.0, -0.5) * (s.jplus_ - s.jminus_);
  s.jy_vectors_ = descending_eigenvectors(s.jy_);
  return s;
}

StateVector StateVector::normalized(Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InputError("state vector has zero or non-finite norm");
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw InputError("inner product of states with different dimensions");
  return amplitudes_.dot(other.amplitudes_);
}

OperatorMatrix axis_operator(const SpinSystem& system, const Axis& axis) {
  require_unit_axis(axis);
  return axis[0] * system.jx() + axis[1] * system.jy() + axis[2] * system.jz();
}

StateVector axis_eigenstate(const SpinSystem& system, const Axis& axis, std::size_t k) {
  if (k >= system.dim()) throw InputError("eigenstate index out of range");
  const OperatorMatrix h = axis_operator(system, axis);
  const OperatorMatrix vectors = descending_eigenvectors(h);
  return StateVector::normalized(vectors.col(static_cast<Eigen::Index>(k)));
}

StateVector max_projection_state(const SpinSystem& system, const Axis& axis) {
  return axis_eigenstate(system, axis, 0);
}

double hermiticity_defect(const OperatorMatrix& op) {
  if (op.rows() != op.cols()) throw InputError("operator is not square");
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

StateVector evolve(const StateVector& state, const OperatorMatrix& generator, double angle) {
  const auto n = static_cast<Eigen::Index>(state.dim());
  if (generator.rows() != n || generator.cols() != n) throw InputError("generator dimension mismatch");
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  if (hermiticity_defect(generator) > kHermitianTolerance * scale) {
    throw InputError("evolution generator is not Hermitian");
  }
  if (!std::isfinite(angle)) throw InputError("evolution angle must be finite");
  if (angle == 0.0) return state;

  if (is_diagonal(generator)) {
    Eigen::VectorXcd out = state.amplitudes();
    for (Eigen::Index k = 0; k < n; ++k) out[k] *= std::polar(1.0, -angle * generator(k, k).real());
    return StateVector::normalized(std::move(out));
  }

  Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(generator);
  if (solver.info() != Eigen::Success) throw NumericError("eigen-decomposition failed");
  const OperatorMatrix& v = solver.eigenvectors();
  Eigen::VectorXcd coeffs = v.adjoint() * state.amplitudes();
  for (Eigen::Index k = 0; k < n; ++k) coeffs[k] *= std::polar(1.0, -angle * solver.eigenvalues()[k]);
  return StateVector::normalized(v * coeffs);
}

double expectation(const StateVector& state, const OperatorMatrix& op) {
  const auto n = static_cast<Eigen::Index>(state.dim());
  if (op.rows() != n || op.cols() != n) throw InputError("operator/state dimension mismatch");
  const Complex value = state.amplitudes().dot(op * state.amplitudes());
  if (std::abs(value.imag()) >= 1e-10 * std::max(1.0, std::abs(value.real()))) {
    throw NumericError("expectation value has a non-negligible imaginary part");
  }
  return value.real();
}

double variance(const StateVector& state, const OperatorMatrix& op) {
  const auto n = static_cast<Eigen::Index>(state.dim());
  if (op.rows() != n || op.cols() != n) throw InputError("operator/state dimension mismatch");
  const Eigen::VectorXcd applied = op * state.amplitudes();
  const double mean = expectation(state, op);
  const double second = applied.squaredNorm();  // <op^2> for Hermitian op
  double v = second - mean * mean;
  if (v < 0.0 && v >= -1e-12) v = 0.0;
  if (v < 0.0) throw NumericError("negative variance");
  return v;
}

std::vector<double> jy_outcome_probabilities(const SpinSystem& system, const StateVector& state) {
  if (state.dim() != system.dim()) throw InputError("state/system dimension mismatch");
  const Eigen::VectorXcd amps = system.jy_eigenvectors().adjoint() * state.amplitudes();
  std::vector<double> p(system.dim());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(amps[static_cast<Eigen::Index>(k)]);
  return p;
}

}  // namespace eqone::angmom
