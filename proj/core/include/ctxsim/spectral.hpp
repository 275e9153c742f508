#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ctxsim/matrix.hpp"
#include "ctxsim/rank_stats.hpp"
#include "ctxsim/similarity.hpp"

namespace ctxsim {

// Eigenpairs of a symmetric matrix, eigenvalues in descending order.
// Row a of `eigenvectors` is the unit eigenvector for eigenvalues[a]. Each
// eigenvector is signed so that its largest-magnitude component (first one
// on ties) is positive; within degenerate eigenspaces the basis is arbitrary.
struct Spectrum {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
  int sweeps = 0;

  std::size_t size() const { return eigenvalues.size(); }
};

struct JacobiOptions {
  int max_sweeps = 100;
  // Converged once the off-diagonal Frobenius norm is at most
  // tolerance * ||A||_F.
  double tolerance = 1e-12;
};

// Cyclic Jacobi rotations. Throws DataError if the input is not square, is
// asymmetric by more than 1e-12, or fails to converge within max_sweeps.
Spectrum eigendecompose(const DenseMatrix& a, const JacobiOptions& options = {});
Spectrum eigendecompose(const SimilarityMatrix& s, const JacobiOptions& options = {});

// coords(i, a) = sqrt(lambda^a) * u^a_i for the first `dimension` eigenpairs.
struct PrincipalCoordinates {
  std::size_t dimension = 0;
  DenseMatrix coords;       // n x dimension
  std::size_t clamped = 0;  // small negative eigenvalues treated as zero

  std::vector<double> column_means() const;
};

// Throws DataError if m is outside [1, n] or an eigenvalue among the first m
// is below -1e-6 * lambda^1.
PrincipalCoordinates principal_coordinates(const Spectrum& spectrum, std::size_t m);

// Rank-m expansion S*_ij = sum_{a<=m} lambda^a u^a_i u^a_j.
DenseMatrix reconstruct(const Spectrum& spectrum, std::size_t m);

// Q = sqrt(sum_ij (S_ij - S*_ij)^2 / sum_ij S_ij^2) over all n^2 entries.
double stress(const DenseMatrix& s, const Spectrum& spectrum, std::size_t m);
double stress(const SimilarityMatrix& s, const Spectrum& spectrum, std::size_t m);

struct StressPoint {
  std::size_t m = 0;
  double q = 0.0;
};

struct StressReport {
  std::vector<StressPoint> points;  // m = 1..n
  // Q(m+1) - Q(m), indexed by m - 1; size n - 1.
  std::vector<double> first_differences;
  // Q(m-1) - 2 Q(m) + Q(m+1) for m = 2..n-1, indexed by m - 2.
  std::vector<double> curvature;
  // Least-squares line through (m, Q(m)) over the requested tail range.
  std::optional<LinearFit> tail_fit;
  std::size_t tail_lo = 0;
  std::size_t tail_hi = 0;
};

struct TailRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

StressReport elbow_curve(const DenseMatrix& s, const Spectrum& spectrum,
                         std::optional<TailRange> tail = std::nullopt);
StressReport elbow_curve(const SimilarityMatrix& s, std::optional<TailRange> tail = std::nullopt);

}  // namespace ctxsim
