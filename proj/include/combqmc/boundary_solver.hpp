#pragma once

#include <optional>
#include <string>
#include <vector>

#include "combqmc/ising_kernels.hpp"
#include "combqmc/op_algebra.hpp"

namespace combqmc {

/// Residual tolerance, relative to max|h_ij| when testing a branch.
inline constexpr double kAdmissibilityTol = 1e-10;

/// Translation-invariant boundary matrix h and the weight of the initial
/// functional rho0(a) = Tr(omega0 a) (normalized trace) on the root.
struct BoundaryField {
  Matrix2 h = Matrix2::Identity();
  Matrix2 omega0 = Matrix2::Identity();
};

/// h = (1/tau1) 1, omega0 = tau1 1.
BoundaryField disordered_field(const ModelParams& p);

Complex initial_functional(const BoundaryField& f, const Matrix& a);

/// Tr_{S(u)}(K~ (1 x h) K~) for the tooth kernel, from explicit 4x4 matrices.
Matrix2 tooth_map(const Matrix2& h, double beta);
/// The same map in closed form: (Tr h - s Tr(Zh)) e11 + (Tr h + s Tr(Zh)) e22,
/// s = sin(2 beta).
Matrix2 tooth_map_closed_form(const Matrix2& h, double beta);

/// Tr_{S(u)}(K* (1 x h x h) K) for the spine kernel, from explicit 8x8 matrices.
Matrix2 spine_map(const Matrix2& h, const ModelParams& p);
/// (tau1 Tr(h)^2 + tau2 Tr(Zh)^2) 1 + tau3 Tr(h) Tr(Zh) Z.
Matrix2 spine_map_closed_form(const Matrix2& h, const ModelParams& p);

/// tooth_map(h) - h. Throws on non-Hermitian h.
Matrix2 residual_l1(const Matrix2& h, double beta);

/// spine_map(h) - h, after asserting the matrix and closed-form maps agree to
/// 1e-12 entrywise (relative). Throws on non-Hermitian h.
Matrix2 residual_l2(const Matrix2& h, const ModelParams& p);

double max_abs(const Matrix2& m);

enum class BranchTag { Disordered, OrderedCandidate };

std::string to_string(BranchTag t);

struct SolutionBranch {
  Matrix2 h = Matrix2::Zero();
  BranchTag tag = BranchTag::Disordered;
  bool satisfies_l1 = false;
  bool satisfies_l2 = false;
  bool positive = false;
  double residual_norm = 0.0;

  bool admissible() const { return satisfies_l1 && satisfies_l2 && positive; }
};

/// Diagonal translation-invariant solutions of the spine system, each tested
/// against both residual maps and positivity. When tau2 or tau3 vanishes only
/// the disordered branch is produced. Ordered candidates come as a +/- pair in
/// Tr(Zh).
std::vector<SolutionBranch> enumerate_branches(const ModelParams& p);

/// Damped Newton iteration on the diagonal spine system in the coordinates
/// (Tr h, Tr Zh), stopping when the step falls below 1e-12. Used only to
/// cross-check the algebraic branches.
std::optional<Matrix2> refine_spine_fixed_point(const Matrix2& start, const ModelParams& p,
                                                int max_iter = 200);

struct LayerCompatibilityReport {
  bool passed = false;
  double rho0_h0 = 0.0;
  bool normalization_ok = false;
  std::vector<double> residuals;  // per n: max |E_[n,n+1](h_{n+1}) - h_n|
  std::optional<unsigned> failed_at;
  double failed_residual = 0.0;
  double tolerance = kAdmissibilityTol;
};

/// Builds h_n = (x)_{x in W_n} h, applies the localized layer transition to
/// h_{n+1} and compares with h_n for n = 0..n_max. Also checks rho0(h) = 1.
LayerCompatibilityReport check_layer_compatibility(const ModelParams& p, const BoundaryField& field,
                                unsigned n_max, double tol = kAdmissibilityTol);

/// (x)_{x in W_n} h as an operator on level n.
LocalOperator level_product(unsigned n, const Matrix2& h);

}  // namespace combqmc
