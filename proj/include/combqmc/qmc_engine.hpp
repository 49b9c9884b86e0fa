#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "combqmc/boundary_solver.hpp"
#include "combqmc/ising_kernels.hpp"
#include "combqmc/op_algebra.hpp"

namespace combqmc {

/// Finite product of single-site factors, identity elsewhere.
class Observable {
 public:
  using Factor = std::pair<Vertex, Matrix2>;

  Observable() = default;
  explicit Observable(std::vector<Factor> factors);

  static Observable single(const Vertex& v, const Matrix2& m);

  Observable& add(const Vertex& v, const Matrix2& m);

  const std::vector<Factor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  /// Smallest n with every factor in the volume of radius n.
  unsigned depth() const;

  /// a* a, factor by factor.
  Observable adjoint_times_self() const;

  /// Spine translation of every factor.
  Observable translated(unsigned n) const;

  /// Dense operator on the given support (identity on sites without a factor).
  LocalOperator to_operator(const Support& support) const;

 private:
  std::vector<Factor> factors_;
};

/// Layer caps: the localized path works with one layer at a time, the product
/// formula with the whole volume.
struct EngineLimits {
  unsigned max_layer = kDefaultMaxLayer;
  std::size_t max_volume_sites = 15;
};

/// phi_n(a) = rho0(E_0(E_1(... E_n(h_{n+1}^{1/2} a h_{n+1}^{1/2})))), sweeping
/// levels n -> 0 with the localized transition expectations.
Complex evaluate_iterative(const Observable& a, unsigned n, const ModelParams& p,
                           const BoundaryField& field, const EngineLimits& limits = {});

enum class ProductPath {
  Auto,   // diagonal fast path when every layer kernel is diagonal
  Dense,  // full dense matrices on the volume (small n only)
};

/// alpha^n Tr(a prod_{i<n} K_[i,i+1] K_[i,i+1]*), normalized trace over the
/// volume of radius n. Requires n >= 1.
Complex evaluate_product(const Observable& a, unsigned n, const ModelParams& p,
                         const EngineLimits& limits = {}, ProductPath path = ProductPath::Auto);

/// |phi_{n+1}(a) - phi_n(a)|.
double check_compatibility(const Observable& a, unsigned n, const ModelParams& p,
                           const BoundaryField& field, const EngineLimits& limits = {});

/// phi(a0 at u, b0 at v) in the disordered state, evaluated on the smallest
/// volume containing both sites.
Complex two_point(const Matrix2& a0, const Matrix2& b0, const Vertex& u, const Vertex& v,
                  const ModelParams& p, const EngineLimits& limits = {});

enum class RateMatch { None, Paper, Direct, Both };

const char* to_string(RateMatch m);

struct ClusteringRow {
  unsigned d = 0;
  double correlation = 0.0;
  double defect = 0.0;
  std::optional<double> ratio;  // defect(d) / defect(d-1)
};

struct ClusteringReport {
  std::vector<ClusteringRow> rows;
  double magnetization = 0.0;
  bool undefined_zero = false;  // every defect below 1e-14
  double lambda = 0.0;          // mean consecutive ratio over d = 2..d_max
  double spread = 0.0;          // max - min of those ratios
  double rate_paper = 0.0;
  double rate_direct = 0.0;
  RateMatch match = RateMatch::None;
  bool clustering = false;  // lambda < 1
};

inline constexpr double kRateMatchTol = 1e-8;

/// defect(d) = |phi(Z(0,0) Z(d,0)) - phi(Z)^2| for d = 1..d_max and the
/// geometric decay rate fitted by consecutive ratios.
ClusteringReport clustering_report(const ModelParams& p, unsigned d_max,
                                   const EngineLimits& limits = {});

}  // namespace combqmc
