#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "combqmc/comb_graph.hpp"

namespace combqmc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenvalueTol = 1e-10;

Matrix2 identity2();
Matrix2 pauli_z();

/// Dense operator on an ordered list of qubit sites. Site 0 of the support is
/// the most significant tensor factor, so tensor(a, b) is kron(a, b).
class LocalOperator {
 public:
  LocalOperator() = default;
  LocalOperator(Support support, Matrix entries);

  static LocalOperator identity(Support support);
  static LocalOperator site(const Vertex& v, const Matrix2& m);

  const Support& support() const { return support_; }
  const Matrix& matrix() const { return entries_; }
  std::size_t num_sites() const { return support_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }

  bool contains(const Vertex& v) const;

 private:
  Support support_;
  Matrix entries_ = Matrix::Identity(1, 1);
};

Matrix kron(const Matrix& a, const Matrix& b);

/// Reorders tensor factors: site j of the result is site order[j] of m.
Matrix permute_sites(const Matrix& m, std::span<const std::size_t> order);

/// Product on the concatenated support. Throws on overlapping supports.
LocalOperator tensor(const LocalOperator& a, const LocalOperator& b);

/// Pads with identity on target sites missing from a and reorders to target.
LocalOperator embed(const LocalOperator& a, const Support& target);

/// Operator product after embedding both factors into the union support
/// (a's sites first, then b's new sites).
LocalOperator multiply(const LocalOperator& a, const LocalOperator& b);

Complex raw_trace(const Matrix& m);

/// Trace divided by the dimension, so the identity has trace one on any support.
Complex normalized_trace(const Matrix& m);
Complex normalized_trace(const LocalOperator& a);

/// Normalized partial trace (factor 1/2 per traced site) leaving the sites in
/// keep, in the order given.
LocalOperator partial_trace_onto(const LocalOperator& a, const Support& keep);

/// k* a k. Supports must hold the same sites; a is reordered to k's order.
LocalOperator sandwich(const LocalOperator& k, const LocalOperator& a);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);

/// True iff every eigenvalue is >= -tol. Throws on non-Hermitian input.
bool is_positive(const Matrix& m, double tol = kEigenvalueTol);
bool is_positive(const LocalOperator& a, double tol = kEigenvalueTol);

/// Principal square root of a Hermitian positive semidefinite matrix.
Matrix psd_sqrt(const Matrix& m);

/// partial_trace_onto(sandwich(embed(kernel, z.support()), z), z.support() minus
/// the traced sites), where the traced sites are kernel sites not in keep.
/// Works block-wise so the kernel is never expanded to the full support.
/// Result support is z's support with the traced sites removed, order kept.
LocalOperator local_transition(const LocalOperator& z, const LocalOperator& kernel,
                               const Support& keep);

/// Largest absolute entry of a - b (same shape required).
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace combqmc
