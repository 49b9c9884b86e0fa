#include "combqmc/boundary_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "combqmc/error.hpp"

namespace combqmc {
namespace {

void require_hermitian(const Matrix2& h) {
  if (!is_hermitian(Matrix(h))) throw Error("boundary matrix is not Hermitian");
}

Complex tr(const Matrix2& m) { return 0.5 * m.trace(); }
Complex tr_z(const Matrix2& m) { return 0.5 * (m(0, 0) - m(1, 1)); }

Matrix2 to2(const Matrix& m) { return Matrix2(m); }

SolutionBranch make_branch(const Matrix2& h, BranchTag tag, const ModelParams& p) {
  SolutionBranch b;
  b.h = h;
  b.tag = tag;
  const double r1 = max_abs(residual_l1(h, p.beta));
  const double r2 = max_abs(residual_l2(h, p));
  // Relative to |h|: at large theta, h = 1/tau1 itself falls below any absolute tolerance.
  const double scale = std::max(max_abs(h), std::numeric_limits<double>::min());
  b.satisfies_l1 = r1 <= kAdmissibilityTol * scale;
  b.satisfies_l2 = r2 <= kAdmissibilityTol * scale;
  b.positive = is_positive(Matrix(h), kEigenvalueTol);
  b.residual_norm = std::max(r1, r2);
  return b;
}

}  // namespace

BoundaryField disordered_field(const ModelParams& p) {
  BoundaryField f;
  f.h = p.alpha * Matrix2::Identity();
  f.omega0 = p.tau1 * Matrix2::Identity();
  return f;
}

Complex initial_functional(const BoundaryField& f, const Matrix& a) {
  if (a.rows() != 2) throw Error("initial functional acts on the root site only");
  return normalized_trace(Matrix(f.omega0 * Matrix2(a)));
}

Matrix2 tooth_map(const Matrix2& h, double beta) {
  const Vertex u{0, 1};
  const auto k = kernel_l1(beta, u);
  const auto arg = tensor(LocalOperator::identity({u}), LocalOperator::site(Vertex{0, 2}, h));
  return to2(partial_trace_onto(sandwich(k, arg), {u}).matrix());
}

Matrix2 tooth_map_closed_form(const Matrix2& h, double beta) {
  const double s = std::sin(2.0 * beta);
  Matrix2 out = Matrix2::Zero();
  out(0, 0) = tr(h) - s * tr_z(h);
  out(1, 1) = tr(h) + s * tr_z(h);
  return out;
}

Matrix2 spine_map(const Matrix2& h, const ModelParams& p) {
  const Vertex u{0, 0};
  const auto k = kernel_l2(p, u);
  const auto arg = tensor(LocalOperator::identity({u}),
                          tensor(LocalOperator::site(Vertex{1, 0}, h),
                                 LocalOperator::site(Vertex{0, 1}, h)));
  return to2(partial_trace_onto(sandwich(k, arg), {u}).matrix());
}

Matrix2 spine_map_closed_form(const Matrix2& h, const ModelParams& p) {
  const Complex t = tr(h);
  const Complex m = tr_z(h);
  return (p.tau1 * t * t + p.tau2 * m * m) * identity2() + p.tau3 * t * m * pauli_z();
}

Matrix2 residual_l1(const Matrix2& h, double beta) {
  require_hermitian(h);
  return tooth_map(h, beta) - h;
}

Matrix2 residual_l2(const Matrix2& h, const ModelParams& p) {
  require_hermitian(h);
  const Matrix2 direct = spine_map(h, p);
  const Matrix2 closed = spine_map_closed_form(h, p);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (std::abs(direct(i, j) - closed(i, j)) > 1e-12 * (1.0 + std::abs(closed(i, j)))) {
        throw Error("spine boundary map routes disagree");
      }
    }
  }
  return direct - h;
}

double max_abs(const Matrix2& m) { return m.cwiseAbs().maxCoeff(); }

std::string to_string(BranchTag t) {
  return t == BranchTag::Disordered ? "Disordered" : "OrderedCandidate";
}

std::vector<SolutionBranch> enumerate_branches(const ModelParams& p) {
  std::vector<SolutionBranch> out;
  // Tr(Zh) = 0: Tr h = tau1 Tr(h)^2 with Tr h > 0.
  out.push_back(make_branch(p.alpha * Matrix2::Identity(), BranchTag::Disordered, p));

  if (p.tau2 == 0.0 || p.tau3 == 0.0) return out;

  // Tr h = 1/tau3, Tr(Zh)^2 = (Tr h - tau1 Tr(h)^2) / tau2.
  const double t = 1.0 / p.tau3;
  const double m2 = (t - p.tau1 * t * t) / p.tau2;
  if (m2 <= 1e-15 * t * t) return out;  // absent, or coincides with the disordered branch
  const double m = std::sqrt(m2);
  for (const double sign : {1.0, -1.0}) {
    Matrix2 h = Matrix2::Zero();
    h(0, 0) = t + sign * m;
    h(1, 1) = t - sign * m;
    out.push_back(make_branch(h, BranchTag::OrderedCandidate, p));
  }
  return out;
}

std::optional<Matrix2> refine_spine_fixed_point(const Matrix2& start, const ModelParams& p,
                                                int max_iter) {
  double t = 0.5 * (start(0, 0) + start(1, 1)).real();
  double m = 0.5 * (start(0, 0) - start(1, 1)).real();
  for (int it = 0; it < max_iter; ++it) {
    const double f1 = p.tau1 * t * t + p.tau2 * m * m - t;
    const double f2 = p.tau3 * t * m - m;
    const double j11 = 2.0 * p.tau1 * t - 1.0, j12 = 2.0 * p.tau2 * m;
    const double j21 = p.tau3 * m, j22 = p.tau3 * t - 1.0;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) return std::nullopt;
    double dt = (f1 * j22 - f2 * j12) / det;
    double dm = (j11 * f2 - j21 * f1) / det;
    // Damping: cap the step at half the current scale.
    const double scale = std::max(std::abs(t), 1e-300);
    const double len = std::hypot(dt, dm);
    if (len > 0.5 * scale) {
      dt *= 0.5 * scale / len;
      dm *= 0.5 * scale / len;
    }
    t -= dt;
    m -= dm;
    if (std::hypot(dt, dm) < 1e-12 * std::max(1.0, std::abs(t))) {
      Matrix2 h = Matrix2::Zero();
      h(0, 0) = t + m;
      h(1, 1) = t - m;
      return h;
    }
  }
  return std::nullopt;
}

LocalOperator level_product(unsigned n, const Matrix2& h) {
  LocalOperator out;
  for (const auto& x : level(n).vertices) out = tensor(out, LocalOperator::site(x, h));
  return out;
}

LayerCompatibilityReport check_layer_compatibility(const ModelParams& p, const BoundaryField& field,
                                unsigned n_max, double tol) {
  LayerCompatibilityReport r;
  r.tolerance = tol;
  r.rho0_h0 = initial_functional(field, Matrix(field.h)).real();
  r.normalization_ok = std::abs(initial_functional(field, Matrix(field.h)) - 1.0) <= tol;
  for (unsigned n = 0; n <= n_max; ++n) {
    const auto pulled = layer_transition(n, p, level_product(n + 1, field.h));
    const auto expected = level_product(n, field.h);
    const double res = max_abs_diff(embed(pulled, expected.support()).matrix(), expected.matrix());
    r.residuals.push_back(res);
    if (res > tol && !r.failed_at) {
      r.failed_at = n;
      r.failed_residual = res;
    }
  }
  r.passed = r.normalization_ok && !r.failed_at;
  return r;
}

}  // namespace combqmc
