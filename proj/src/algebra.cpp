#include "qtel/algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtel {

Matrix tensor(const Matrix& a, const Matrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols();
  const Eigen::Index rb = b.rows(), cb = b.cols();
  Matrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix adjoint(const Matrix& m) { return m.adjoint(); }

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: inner dimensions do not match");
  return a * b;
}

Complex trace(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("trace: matrix is not square");
  return m.trace();
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frobenius_distance: shape mismatch");
  return (a - b).norm();
}

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

int subsystem_count(int dim) {
  switch (dim) {
    case 3: return 1;
    case 9: return 2;
    case 27: return 3;
    default:
      throw std::invalid_argument("subsystem_count: dimension must be 3, 9 or 27, got " +
                                  std::to_string(dim));
  }
}

namespace {

// Flat index of a multi-qutrit basis label: |x0 x1 ... | -> sum 3^(n-1-k) * xk.
int flat_index(const std::vector<int>& digits) {
  int idx = 0;
  for (int d : digits) idx = idx * 3 + d;
  return idx;
}

}  // namespace

Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep) {
  const int n = subsystem_count(static_cast<int>(rho.rows()));
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("partial_trace: matrix is not square");
  if (n < 2) throw std::invalid_argument("partial_trace: need at least 2 subsystems");
  if (keep.empty() || static_cast<int>(keep.size()) >= n)
    throw std::invalid_argument("partial_trace: keep must be a nonempty proper subset");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n)
      throw std::invalid_argument("partial_trace: subsystem index " +
                                  std::to_string(keep[i]) + " out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep must be strictly ascending");
  }

  std::vector<int> traced;
  for (int s = 0; s < n; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  const int nk = static_cast<int>(keep.size());
  const int nt = static_cast<int>(traced.size());
  const int dk = static_cast<int>(std::pow(3, nk));
  const int dt = static_cast<int>(std::pow(3, nt));

  Matrix out = Matrix::Zero(dk, dk);
  std::vector<int> row(n), col(n);
  for (int rk = 0; rk < dk; ++rk) {
    for (int ck = 0; ck < dk; ++ck) {
      int v = rk;
      for (int i = nk - 1; i >= 0; --i) { row[keep[i]] = v % 3; v /= 3; }
      v = ck;
      for (int i = nk - 1; i >= 0; --i) { col[keep[i]] = v % 3; v /= 3; }
      Complex acc = 0.0;
      for (int t = 0; t < dt; ++t) {
        v = t;
        for (int i = nt - 1; i >= 0; --i) { row[traced[i]] = col[traced[i]] = v % 3; v /= 3; }
        acc += rho(flat_index(row), flat_index(col));
      }
      out(rk, ck) = acc;
    }
  }
  return out;
}

DensityCheck check_density(const Matrix& m) {
  DensityCheck r;
  if (m.rows() != m.cols()) {
    r.ok = false;
    r.violation = "not square";
    return r;
  }
  subsystem_count(static_cast<int>(m.rows()));  // throws on bad dimension
  if (!all_finite(m)) {
    r.ok = false;
    r.violation = "non-finite entries";
    return r;
  }
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    r.ok = false;
    r.violation = "not Hermitian";
    r.magnitude = herm;
    return r;
  }
  const double tr_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_dev > kTraceTol) {
    r.ok = false;
    r.violation = "trace differs from 1";
    r.magnitude = tr_dev;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigenvalueFloor) {
    r.ok = false;
    r.violation = "negative eigenvalue";
    r.magnitude = min_eig;
    return r;
  }
  return r;
}

DensityMatrix DensityMatrix::validated(Matrix m) {
  const DensityCheck c = check_density(m);
  if (!c.ok) {
    std::ostringstream os;
    os << "invalid density matrix: " << c.violation;
    if (c.magnitude != 0.0) os << " (magnitude " << c.magnitude << ")";
    throw std::invalid_argument(os.str());
  }
  const int n = subsystem_count(static_cast<int>(m.rows()));
  return DensityMatrix(std::move(m), n);
}

}  // namespace qtel
