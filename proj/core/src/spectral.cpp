#include "ctxsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctxsim/error.hpp"

namespace ctxsim {
namespace {

double frobenius_sq(const DenseMatrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return sum;
}

double off_diagonal_sq(const DenseMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return sum;
}

// Zeroes a(p, q) with one plane rotation and accumulates it into v.
void rotate(DenseMatrix& a, DenseMatrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const double g = a(r, p);
    const double h = a(r, q);
    const double rp = g - s * (h + g * tau);
    const double rq = h + s * (g - h * tau);
    a(r, p) = rp;
    a(p, r) = rp;
    a(r, q) = rq;
    a(q, r) = rq;
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double g = v(r, p);
    const double h = v(r, q);
    v(r, p) = g - s * (h + g * tau);
    v(r, q) = h + s * (g - h * tau);
  }
}

}  // namespace

Spectrum eigendecompose(const DenseMatrix& input, const JacobiOptions& options) {
  require(input.rows() == input.cols(), "eigendecompose: matrix must be square");
  const std::size_t n = input.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      require(std::abs(input(i, j) - input(j, i)) <= 1e-12,
              "eigendecompose: matrix is not symmetric at (" + std::to_string(i) + ", " +
                  std::to_string(j) + ")");

  DenseMatrix a = input;
  DenseMatrix v = DenseMatrix::identity(n);
  const double limit = options.tolerance * std::sqrt(frobenius_sq(input));

  // After the tolerance is met one more sweep is run; convergence is
  // quadratic, so it takes the off-diagonal mass down to rounding level.
  int sweep = 0;
  bool polishing = false;
  for (;; ++sweep) {
    const double off = std::sqrt(off_diagonal_sq(a));
    if (polishing || off == 0.0) break;
    if (off <= limit) {
      polishing = true;
    } else if (sweep >= options.max_sweeps) {
      throw DataError("eigendecompose: no convergence after " + std::to_string(options.max_sweeps) +
                      " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Once an element is negligible next to both diagonals it is dropped.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  Spectrum spec;
  spec.sweeps = sweep;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = order[k];
    spec.eigenvalues[k] = a(col, col);
    std::size_t pivot = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(v(r, col)) > std::abs(v(pivot, col))) pivot = r;
    const double sign = v(pivot, col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) spec.eigenvectors(k, r) = sign * v(r, col);
  }
  return spec;
}

Spectrum eigendecompose(const SimilarityMatrix& s, const JacobiOptions& options) {
  return eigendecompose(s.values(), options);
}

std::vector<double> PrincipalCoordinates::column_means() const {
  std::vector<double> means(dimension, 0.0);
  if (coords.rows() == 0) return means;
  for (std::size_t i = 0; i < coords.rows(); ++i)
    for (std::size_t a = 0; a < dimension; ++a) means[a] += coords(i, a);
  for (double& m : means) m /= static_cast<double>(coords.rows());
  return means;
}

PrincipalCoordinates principal_coordinates(const Spectrum& spectrum, std::size_t m) {
  const std::size_t n = spectrum.size();
  require(m >= 1 && m <= n, "principal_coordinates: dimension " + std::to_string(m) +
                                " outside [1, " + std::to_string(n) + "]");
  const double floor = -1e-6 * spectrum.eigenvalues.front();
  PrincipalCoordinates pc;
  pc.dimension = m;
  pc.coords = DenseMatrix(n, m);
  for (std::size_t a = 0; a < m; ++a) {
    const double lambda = spectrum.eigenvalues[a];
    if (lambda < 0.0) {
      require(lambda >= floor, "principal_coordinates: eigenvalue " + std::to_string(a + 1) + " = " +
                                   std::to_string(lambda) +
                                   " is too negative; the matrix is not a Gram matrix");
      ++pc.clamped;
    }
    const double scale = std::sqrt(std::max(lambda, 0.0));
    for (std::size_t i = 0; i < n; ++i) pc.coords(i, a) = scale * spectrum.eigenvectors(a, i);
  }
  return pc;
}

DenseMatrix reconstruct(const Spectrum& spectrum, std::size_t m) {
  const std::size_t n = spectrum.size();
  require(m >= 1 && m <= n, "reconstruct: rank " + std::to_string(m) + " outside [1, " +
                                std::to_string(n) + "]");
  DenseMatrix out(n, n);
  for (std::size_t a = 0; a < m; ++a) {
    const double lambda = spectrum.eigenvalues[a];
    const auto u = spectrum.eigenvectors.row(a);
    for (std::size_t i = 0; i < n; ++i) {
      const double li = lambda * u[i];
      for (std::size_t j = 0; j < n; ++j) out(i, j) += li * u[j];
    }
  }
  return out;
}

double stress(const DenseMatrix& s, const Spectrum& spectrum, std::size_t m) {
  require(s.rows() == spectrum.size() && s.cols() == spectrum.size(),
          "stress: matrix and spectrum sizes differ");
  const double denom = frobenius_sq(s);
  require(denom > 0.0, "stress: zero matrix");
  const auto approx = reconstruct(spectrum, m);
  double num = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) {
      const double d = s(i, j) - approx(i, j);
      num += d * d;
    }
  return std::sqrt(num / denom);
}

double stress(const SimilarityMatrix& s, const Spectrum& spectrum, std::size_t m) {
  return stress(s.values(), spectrum, m);
}

StressReport elbow_curve(const DenseMatrix& s, const Spectrum& spectrum,
                         std::optional<TailRange> tail) {
  const std::size_t n = spectrum.size();
  require(s.rows() == n && s.cols() == n, "elbow_curve: matrix and spectrum sizes differ");
  const double denom = frobenius_sq(s);
  require(denom > 0.0, "elbow_curve: zero matrix");

  // With orthonormal eigenvectors, |S - S*_m|_F^2 = sum_{a>m} lambda_a^2 + |E|_F^2,
  // where E = S - S*_n is the measured full-rank reconstruction error. Summing
  // the tail keeps Q nonincreasing even past the numerical rank, where the
  // entrywise residual is pure rounding noise.
  const auto full = reconstruct(spectrum, n);
  double error_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) error_sq += (s(i, j) - full(i, j)) * (s(i, j) - full(i, j));

  std::vector<double> tail_sq(n + 1, 0.0);
  for (std::size_t a = n; a-- > 0;)
    tail_sq[a] = tail_sq[a + 1] + spectrum.eigenvalues[a] * spectrum.eigenvalues[a];

  StressReport report;
  report.points.reserve(n);
  for (std::size_t m = 1; m <= n; ++m)
    report.points.push_back({m, std::sqrt((tail_sq[m] + error_sq) / denom)});
  for (std::size_t k = 0; k + 1 < n; ++k)
    report.first_differences.push_back(report.points[k + 1].q - report.points[k].q);
  for (std::size_t k = 1; k + 1 < n; ++k)
    report.curvature.push_back(report.points[k - 1].q - 2.0 * report.points[k].q +
                               report.points[k + 1].q);

  if (tail) {
    require(tail->lo >= 1 && tail->lo < tail->hi && tail->hi <= n,
            "elbow tail range [" + std::to_string(tail->lo) + ", " + std::to_string(tail->hi) +
                "] is invalid for n = " + std::to_string(n));
    std::vector<double> x, y;
    for (std::size_t m = tail->lo; m <= tail->hi; ++m) {
      x.push_back(static_cast<double>(m));
      y.push_back(report.points[m - 1].q);
    }
    report.tail_fit = fit_line(x, y);
    report.tail_lo = tail->lo;
    report.tail_hi = tail->hi;
  }
  return report;
}

StressReport elbow_curve(const SimilarityMatrix& s, std::optional<TailRange> tail) {
  return elbow_curve(s.values(), eigendecompose(s), tail);
}

}  // namespace ctxsim
