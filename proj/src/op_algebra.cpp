#include "combqmc/op_algebra.hpp"

#include <algorithm>
#include <optional>

#include <Eigen/Eigenvalues>

#include "combqmc/error.hpp"

namespace combqmc {
namespace {

std::optional<std::size_t> position(const Support& s, const Vertex& v) {
  const auto it = std::find(s.begin(), s.end(), v);
  if (it == s.end()) return std::nullopt;
  return static_cast<std::size_t>(it - s.begin());
}

void require_distinct(const Support& s) {
  Support sorted = s;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("support has repeated sites");
  }
}

std::size_t dim_of(std::size_t sites) { return std::size_t{1} << sites; }

// Positions in `from` of each site of `to`; throws if any is missing.
std::vector<std::size_t> positions_of(const Support& from, const Support& to,
                                      const char* what) {
  std::vector<std::size_t> out;
  out.reserve(to.size());
  for (const auto& v : to) {
    const auto p = position(from, v);
    if (!p) throw Error(std::string(what) + ": site " + to_string(v) + " not in support");
    out.push_back(*p);
  }
  return out;
}

}  // namespace

Matrix2 identity2() { return Matrix2::Identity(); }

Matrix2 pauli_z() {
  Matrix2 z = Matrix2::Zero();
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

LocalOperator::LocalOperator(Support support, Matrix entries)
    : support_(std::move(support)), entries_(std::move(entries)) {
  if (support_.size() > 30) throw VolumeTooLarge("volume too large");
  const auto d = static_cast<Eigen::Index>(dim_of(support_.size()));
  if (entries_.rows() != d || entries_.cols() != d) {
    throw Error("operator dimension does not match 2^|support|");
  }
  require_distinct(support_);
}

LocalOperator LocalOperator::identity(Support support) {
  const auto d = static_cast<Eigen::Index>(dim_of(support.size()));
  return LocalOperator(std::move(support), Matrix::Identity(d, d));
}

LocalOperator LocalOperator::site(const Vertex& v, const Matrix2& m) {
  return LocalOperator({v}, Matrix(m));
}

bool LocalOperator::contains(const Vertex& v) const {
  return position(support_, v).has_value();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix permute_sites(const Matrix& m, std::span<const std::size_t> order) {
  const std::size_t s = order.size();
  const std::size_t d = dim_of(s);
  if (static_cast<std::size_t>(m.rows()) != d) {
    throw Error("permutation size does not match operator");
  }
  bool identity = true;
  for (std::size_t j = 0; j < s; ++j) identity = identity && order[j] == j;
  if (identity) return m;

  std::vector<Eigen::Index> old_of_new(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t old = 0;
    for (std::size_t j = 0; j < s; ++j) {
      const std::size_t bit = (i >> (s - 1 - j)) & 1U;
      old |= bit << (s - 1 - order[j]);
    }
    old_of_new[i] = static_cast<Eigen::Index>(old);
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < d; ++c) {
    const auto oc = old_of_new[c];
    for (std::size_t r = 0; r < d; ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(old_of_new[r], oc);
    }
  }
  return out;
}

LocalOperator tensor(const LocalOperator& a, const LocalOperator& b) {
  for (const auto& v : b.support()) {
    if (a.contains(v)) throw Error("support collision");
  }
  Support s = a.support();
  s.insert(s.end(), b.support().begin(), b.support().end());
  return LocalOperator(std::move(s), kron(a.matrix(), b.matrix()));
}

LocalOperator embed(const LocalOperator& a, const Support& target) {
  require_distinct(target);
  Support missing;
  for (const auto& v : target) {
    if (!a.contains(v)) missing.push_back(v);
  }
  for (const auto& v : a.support()) {
    if (!position(target, v)) throw Error("embed: support not contained in target");
  }
  const LocalOperator padded =
      missing.empty() ? a : tensor(a, LocalOperator::identity(missing));
  const auto order = positions_of(padded.support(), target, "embed");
  return LocalOperator(target, permute_sites(padded.matrix(), order));
}

LocalOperator multiply(const LocalOperator& a, const LocalOperator& b) {
  Support u = a.support();
  for (const auto& v : b.support()) {
    if (!a.contains(v)) u.push_back(v);
  }
  return LocalOperator(u, embed(a, u).matrix() * embed(b, u).matrix());
}

Complex raw_trace(const Matrix& m) { return m.trace(); }

Complex normalized_trace(const Matrix& m) {
  return m.trace() / static_cast<double>(m.rows());
}

Complex normalized_trace(const LocalOperator& a) { return normalized_trace(a.matrix()); }

LocalOperator partial_trace_onto(const LocalOperator& a, const Support& keep) {
  require_distinct(keep);
  auto order = positions_of(a.support(), keep, "partial trace");
  Support traced;
  for (std::size_t j = 0; j < a.num_sites(); ++j) {
    if (std::find(order.begin(), order.end(), j) == order.end()) {
      order.push_back(j);
      traced.push_back(a.support()[j]);
    }
  }
  const Matrix p = permute_sites(a.matrix(), order);
  const auto dk = static_cast<Eigen::Index>(dim_of(keep.size()));
  const auto dt = static_cast<Eigen::Index>(dim_of(traced.size()));
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index t = 0; t < dt; ++t) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      for (Eigen::Index i = 0; i < dk; ++i) {
        out(i, j) += p(i * dt + t, j * dt + t);
      }
    }
  }
  out /= static_cast<double>(dt);
  return LocalOperator(keep, std::move(out));
}

LocalOperator sandwich(const LocalOperator& k, const LocalOperator& a) {
  if (k.num_sites() != a.num_sites()) throw Error("sandwich: support mismatch");
  for (const auto& v : a.support()) {
    if (!k.contains(v)) throw Error("sandwich: support mismatch");
  }
  const Matrix aa = embed(a, k.support()).matrix();
  return LocalOperator(k.support(), k.matrix().adjoint() * aa * k.matrix());
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_positive(const Matrix& m, double tol) {
  if (!is_hermitian(m, kHermitianTol)) throw Error("positivity check on non-Hermitian operator");
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool is_positive(const LocalOperator& a, double tol) { return is_positive(a.matrix(), tol); }

Matrix psd_sqrt(const Matrix& m) {
  if (!is_hermitian(m, kHermitianTol)) throw Error("square root of non-Hermitian operator");
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -kEigenvalueTol) throw Error("square root of non-positive operator");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

LocalOperator local_transition(const LocalOperator& z, const LocalOperator& kernel,
                               const Support& keep) {
  const Support& ks = kernel.support();
  for (const auto& v : keep) {
    if (!kernel.contains(v)) throw Error("local transition: kept site outside kernel");
  }
  // Kernel reordered to (keep, traced).
  auto korder = positions_of(ks, keep, "local transition");
  Support traced;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (std::find(korder.begin(), korder.end(), j) == korder.end()) {
      korder.push_back(j);
      traced.push_back(ks[j]);
    }
  }
  const Matrix k = permute_sites(kernel.matrix(), korder);
  Support kernel_sites = keep;
  kernel_sites.insert(kernel_sites.end(), traced.begin(), traced.end());

  // z reordered to (keep, traced, rest).
  auto zorder = positions_of(z.support(), kernel_sites, "local transition");
  Support rest;
  for (std::size_t j = 0; j < z.num_sites(); ++j) {
    if (std::find(zorder.begin(), zorder.end(), j) == zorder.end()) {
      zorder.push_back(j);
      rest.push_back(z.support()[j]);
    }
  }
  const Matrix zp = permute_sites(z.matrix(), zorder);

  const auto d_loc = static_cast<Eigen::Index>(dim_of(kernel_sites.size()));
  const auto d_keep = static_cast<Eigen::Index>(dim_of(keep.size()));
  const auto d_tr = static_cast<Eigen::Index>(dim_of(traced.size()));
  const auto d_rest = static_cast<Eigen::Index>(dim_of(rest.size()));

  Matrix out = Matrix::Zero(d_keep * d_rest, d_keep * d_rest);
  for (Eigen::Index a = 0; a < d_keep; ++a) {
    for (Eigen::Index b = 0; b < d_keep; ++b) {
      auto block = out.block(a * d_rest, b * d_rest, d_rest, d_rest);
      for (Eigen::Index p = 0; p < d_loc; ++p) {
        for (Eigen::Index q = 0; q < d_loc; ++q) {
          Complex c = 0.0;
          for (Eigen::Index t = 0; t < d_tr; ++t) {
            c += std::conj(k(p, a * d_tr + t)) * k(q, b * d_tr + t);
          }
          if (c == Complex(0.0)) continue;
          block += (c / static_cast<double>(d_tr)) *
                   zp.block(p * d_rest, q * d_rest, d_rest, d_rest);
        }
      }
    }
  }

  Support out_support = keep;
  out_support.insert(out_support.end(), rest.begin(), rest.end());
  Support target;
  for (const auto& v : z.support()) {
    if (!position(traced, v)) target.push_back(v);
  }
  const auto order = positions_of(out_support, target, "local transition");
  return LocalOperator(target, permute_sites(out, order));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace combqmc
