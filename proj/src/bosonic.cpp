#include "hqom/bosonic.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace hqom::bosonic {

CVector coherent_amplitudes(Complex alpha, Index dim) {
  if (dim < 1) throw ValidationError("coherent state needs dim >= 1", "dim");
  CVector c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (Index n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

double poisson_tail(double mean, Index dim) {
  if (mean <= 0.0) return dim > 0 ? 0.0 : 1.0;
  double n = static_cast<double>(dim);
  double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
  double sum = 0.0;
  for (int guard = 0; guard < 100000; ++guard) {
    sum += term;
    term *= mean / (n + 1.0);
    n += 1.0;
    if (n > mean && term < 1e-18 * sum) break;
    if (term == 0.0) break;
  }
  return sum;
}

double thermal_tail(double nbar, Index dim) {
  if (nbar <= 0.0) return 0.0;
  return std::pow(nbar / (1.0 + nbar), static_cast<double>(dim));
}

double laguerre(int n, double a, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// Walks one diagonal of the displacement matrix. Each element is
// sqrt(lo!/hi!) * |x|^d * e^{-X/2} * L_lo^{(d)}(X) times a unit phase, where
// lo runs along the diagonal. The Laguerre recurrence is carried with a
// running log scale so large |x| cannot overflow.
template <typename Store>
void walk_diagonal(int d, Index count, double X, double log_abs_x, Complex phase_d, Store store) {
  constexpr double kBig = 1e150;
  double prev = 0.0;
  double cur = 1.0;
  double log_scale = 0.0;
  for (Index lo = 0; lo < count; ++lo) {
    if (lo == 1) {
      prev = cur;
      cur = 1.0 + d - X;
    } else if (lo > 1) {
      const double k = static_cast<double>(lo - 1);
      const double next = ((2.0 * k + 1.0 + d - X) * cur - (k + d) * prev) / (k + 1.0);
      prev = cur;
      cur = next;
    }
    if (std::abs(cur) > kBig) {
      cur /= kBig;
      prev /= kBig;
      log_scale += std::log(kBig);
    }
    const double lo_d = static_cast<double>(lo);
    const double log_pref = 0.5 * (std::lgamma(lo_d + 1.0) - std::lgamma(lo_d + d + 1.0)) +
                            (d > 0 ? d * log_abs_x : 0.0) - 0.5 * X + log_scale;
    const double mag = cur == 0.0 ? 0.0 : std::copysign(std::exp(log_pref + std::log(std::abs(cur))), cur);
    store(lo, phase_d * mag);
  }
}

}  // namespace

CMatrix displacement_elements(Complex x, Index rows, Index cols) {
  CMatrix D = CMatrix::Zero(rows, cols);
  const double r = std::abs(x);
  if (r == 0.0) {
    for (Index i = 0; i < std::min(rows, cols); ++i) D(i, i) = 1.0;
    return D;
  }
  const double X = r * r;
  const double log_r = std::log(r);
  const Complex u = x / r;         // phase for m > k
  const Complex v = -std::conj(u); // phase for m < k
  // m >= k: element sqrt(k!/m!) x^{m-k} e^{-X/2} L_k^{(m-k)}(X)
  for (Index d = 0; d < rows; ++d) {
    const Index count = std::min(cols, rows - d);
    if (count <= 0) break;
    const Complex ph = std::pow(u, static_cast<int>(d));
    walk_diagonal(static_cast<int>(d), count, X, log_r, ph, [&](Index k, Complex val) { D(k + d, k) = val; });
  }
  // m < k: element sqrt(m!/k!) (-x^*)^{k-m} e^{-X/2} L_m^{(k-m)}(X)
  for (Index d = 1; d < cols; ++d) {
    const Index count = std::min(rows, cols - d);
    if (count <= 0) break;
    const Complex ph = std::pow(v, static_cast<int>(d));
    walk_diagonal(static_cast<int>(d), count, X, log_r, ph, [&](Index m, Complex val) { D(m, m + d) = val; });
  }
  return D;
}

CMatrix truncated_displacement(Complex x, Index dim) {
  // exp(G) with G = x b^dag - x^* b anti-Hermitian; iG is Hermitian.
  CMatrix herm = CMatrix::Zero(dim, dim);
  for (Index n = 0; n + 1 < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    herm(n + 1, n) = kI * x * s;
    herm(n, n + 1) = -kI * std::conj(x) * s;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const CVector phases = (-kI * eig.eigenvalues().cast<Complex>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

SparseMatrix annihilation(Index dim) {
  SparseMatrix a(dim, dim);
  a.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (Index n = 1; n < dim; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  a.makeCompressed();
  return a;
}

SparseMatrix creation(Index dim) { return SparseMatrix(annihilation(dim).adjoint()); }

SparseMatrix number(Index dim) {
  SparseMatrix n(dim, dim);
  for (Index k = 1; k < dim; ++k) n.insert(k, k) = static_cast<double>(k);
  n.makeCompressed();
  return n;
}

SparseMatrix identity(Index dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

}  // namespace hqom::bosonic
