#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Shared numerical tolerances.
inline constexpr double kHermitianTol = 1e-10;   // max element-wise deviation
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;
inline constexpr double kStateNormTol = 1e-12;

/// Kronecker product, row-major block convention:
/// (a (x) b)[i*db+k, j*db+l] = a(i,j) * b(k,l).
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);

Matrix adjoint(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
Complex trace(const Matrix& m);
double frobenius_distance(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& m);

/// Number of qutrit subsystems for a dimension in {3, 9, 27}.
int subsystem_count(int dim);

/// Trace out every qutrit subsystem not listed in `keep`.
/// `keep` must be a nonempty proper subset of {0..subsystems-1}, ascending.
Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep);

struct DensityCheck {
  bool ok = true;
  std::string violation;  // name of the failed invariant, empty when ok
  double magnitude = 0.0; // size of the violation
};

/// Checks Hermiticity, unit trace and positivity (smallest eigenvalue).
DensityCheck check_density(const Matrix& m);

class DensityMatrix {
 public:
  /// Validates all three invariants; throws std::invalid_argument naming the
  /// violated invariant and its magnitude otherwise.
  static DensityMatrix validated(Matrix m);

  const Matrix& matrix() const { return mat_; }
  int subsystems() const { return subsystems_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  DensityMatrix(Matrix m, int subsystems)
      : mat_(std::move(m)), subsystems_(subsystems) {}
  Matrix mat_;
  int subsystems_;
};

}  // namespace qtel
