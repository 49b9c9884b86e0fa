#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "combqmc/boundary_solver.hpp"
#include "combqmc/ising_kernels.hpp"
#include "combqmc/qmc_engine.hpp"

namespace combqmc {

inline constexpr std::size_t kDefaultOracleMaxSites = 15;

/// Cap on |Lambda_{n+1}| for the brute-force path; COMB_QMC_MAX_SITES overrides.
std::size_t oracle_max_sites();

/// Reference evaluation of phi_n with no localization: every layer uses the
/// full layer kernel and a single global partial trace, and each E_k is applied
/// as an explicit matrix acting on the vectorized operator of the whole volume.
///
/// The outermost step acts on h_{n+1}^{1/2} (a x 1) h_{n+1}^{1/2} = a x G with
/// G = h_{n+1}^{1/2} h_{n+1}^{1/2}; it is represented as the linear map
/// b -> E_[n,n+1](b x G) on level-n operators, which avoids materializing the
/// 2^{|Lambda_{n+1}|}-dimensional operator.
class BruteForceOracle {
 public:
  BruteForceOracle(const ModelParams& p, const BoundaryField& field,
                   std::size_t max_sites = oracle_max_sites());

  /// a must be supported inside the volume of radius n.
  Complex phi(const LocalOperator& a, unsigned n) const;
  Complex phi(const Observable& a, unsigned n) const;

  /// Same as phi for each entry, building the layer maps once.
  std::vector<Complex> phi_batch(std::span<const Observable> a, unsigned n) const;

  /// Superoperator of E_[k,k+1] from operators on W_k u W_{k+1} (level order)
  /// to operators on W_k; column (l, l') holds E(|l><l'|), row (w, w').
  Matrix layer_map(unsigned k) const;

  /// Matrix of b -> E_[n,n+1](b x G) on level-n operators.
  Matrix top_map(unsigned n) const;

 private:
  void check_cap(unsigned n) const;
  Complex run(const Matrix& a_on_volume, unsigned n, const Matrix& top,
              const std::vector<Matrix>& layers) const;

  ModelParams params_;
  BoundaryField field_;
  std::size_t max_sites_;
};

Complex brute_force_phi(const Observable& a, unsigned n, const ModelParams& p,
                        const BoundaryField& field);

/// Max entrywise difference between the transition expectation computed with
/// the full layer kernel and one global partial trace, and the vertex-by-vertex
/// localized map, over random dense layer operators. n <= 2.
double verify_localization(unsigned n, const ModelParams& p, unsigned trials = 8,
                           std::uint64_t seed = 20240611);

inline constexpr double kRouteTol = 1e-10;

struct EvalReport {
  Complex value_iterative = 0.0;
  std::optional<Complex> value_product;
  std::optional<Complex> value_oracle;
  unsigned volume_n = 0;
  /// max |x - value_iterative| / (1 + |value_iterative|) over the other routes.
  double max_cross_residual = 0.0;

  bool consistent(double tol = kRouteTol) const { return max_cross_residual <= tol; }
};

EvalReport evaluate_report(const Observable& a, unsigned n, const ModelParams& p,
                           const BoundaryField& field, bool with_oracle);

}  // namespace combqmc
