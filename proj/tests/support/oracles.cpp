#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace oracle {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index k = 0; k < b.size(); ++k) out(i * b.size() + k) = a(i) * b(k);
  return out;
}

ComplexVector basis_vector(int d, int i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

ComplexMatrix permutation_operator(const std::vector<int>& sigma, int d, int t) {
  int n = 1;
  for (int i = 0; i < t; ++i) n *= d;
  std::vector<int> inverse(static_cast<std::size_t>(t));
  for (int m = 0; m < t; ++m) inverse[static_cast<std::size_t>(sigma[static_cast<std::size_t>(m)])] = m;
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    std::vector<int> digits(static_cast<std::size_t>(t));
    int rest = col;
    for (int m = t - 1; m >= 0; --m) {
      digits[static_cast<std::size_t>(m)] = rest % d;
      rest /= d;
    }
    // column `col` is the image of e_{digits[0]} ⊗ ... ⊗ e_{digits[t-1]}
    ComplexVector out = basis_vector(d, digits[static_cast<std::size_t>(inverse[0])]);
    for (int m = 1; m < t; ++m) {
      out = kron(out, basis_vector(d, digits[static_cast<std::size_t>(inverse[static_cast<std::size_t>(m)])]));
    }
    w.col(col) = out;
  }
  return w;
}

ComplexMatrix symmetric_projector(int d, int t) {
  std::vector<int> sigma(static_cast<std::size_t>(t));
  std::iota(sigma.begin(), sigma.end(), 0);
  int n = 1;
  for (int i = 0; i < t; ++i) n *= d;
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  int count = 0;
  do {
    p += permutation_operator(sigma, d, t);
    ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return p / static_cast<double>(count);
}

ComplexMatrix partial_trace_leading(const ComplexMatrix& m, int lead, int kept) {
  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (int a = 0; a < kept; ++a)
    for (int b = 0; b < kept; ++b)
      for (int i = 0; i < lead; ++i) out(a, b) += m(i * kept + a, i * kept + b);
  return out;
}

ComplexMatrix q_operator(const ComplexMatrix& effect, int copies, int d) {
  const ComplexMatrix p = symmetric_projector(d, copies + 1);
  const ComplexMatrix product = p * kron(effect, ComplexMatrix::Identity(d, d));
  double fact = 1.0;
  for (int i = 2; i <= copies + 1; ++i) fact *= i;
  return fact * partial_trace_leading(product, static_cast<int>(effect.rows()), d);
}

double largest_eigenvalue(const ComplexMatrix& h) {
  // shift makes the spectrum non-negative so the dominant eigenvalue is the largest
  const double shift = h.cwiseAbs().rowwise().sum().maxCoeff();
  const ComplexMatrix s = h + shift * ComplexMatrix::Identity(h.rows(), h.cols());
  ComplexVector v = ComplexVector::Ones(h.rows()) + random_unit_vector(static_cast<int>(h.rows()), 99);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    ComplexVector w = s * v;
    const double next = v.dot(w).real();
    v = w.normalized();
    if (it > 50 && std::abs(next - lambda) < 1e-15 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda - shift;
}

double frame_potential(const ComplexMatrix& columns, int t) {
  const auto k = columns.cols();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index l = 0; l < k; ++l) {
      const double o = std::norm(columns.col(j).dot(columns.col(l)));
      sum += std::pow(o, t);
    }
  }
  return sum / static_cast<double>(k * k);
}

ComplexMatrix finite_difference_gradient(const ComplexMatrix& columns, int t, double h) {
  ComplexMatrix g(columns.rows(), columns.cols());
  for (Eigen::Index i = 0; i < columns.rows(); ++i) {
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
      ComplexMatrix plus = columns;
      ComplexMatrix minus = columns;
      plus(i, j) += h;
      minus(i, j) -= h;
      const double d_re = (frame_potential(plus, t) - frame_potential(minus, t)) / (2 * h);
      plus = columns;
      minus = columns;
      plus(i, j) += std::complex<double>(0.0, h);
      minus(i, j) -= std::complex<double>(0.0, h);
      const double d_im = (frame_potential(plus, t) - frame_potential(minus, t)) / (2 * h);
      g(i, j) = 0.5 * std::complex<double>(d_re, d_im);
    }
  }
  return g;
}

ComplexMatrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937 gen(static_cast<std::uint32_t>(seed * 2654435761u + 17));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = std::complex<double>(u(gen), u(gen));
  return m;
}

ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
  const ComplexMatrix a = random_matrix(n, n, seed);
  return 0.5 * (a + a.adjoint());
}

ComplexVector random_unit_vector(int d, std::uint64_t seed) {
  ComplexVector v = random_matrix(d, 1, seed).col(0);
  return v.normalized();
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace oracle
