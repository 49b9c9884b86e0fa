#include "combqmc/ising_kernels.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "combqmc/error.hpp"

namespace combqmc {
namespace {

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// 1/2 (11 + ZZ) on the factor pair (i, j) of a three-site register.
Matrix edge_projection(int i, int j) {
  Matrix h = Matrix::Zero(8, 8);
  for (int s = 0; s < 8; ++s) {
    const int zi = ((s >> (2 - i)) & 1) ? -1 : 1;
    const int zj = ((s >> (2 - j)) & 1) ? -1 : 1;
    h(s, s) = 0.5 * (1.0 + zi * zj);
  }
  return h;
}

}  // namespace

TauTriple tau_closed_form(double theta, double J) {
  const double tj = std::pow(theta, J);
  return {
      0.25 * (tj * (theta * theta + 1.0) + 2.0 * theta),
      0.25 * (tj * (theta * theta + 1.0) - 2.0 * theta),
      0.5 * tj * (theta * theta - 1.0),
  };
}

ModelParams model_params(double beta, double J) {
  if (!(beta >= 0.0) || !(J >= 0.0) || !std::isfinite(beta) || !std::isfinite(J)) {
    throw Error("parameters out of model range");
  }
  ModelParams p;
  p.beta = beta;
  p.J = J;
  p.theta = std::exp(2.0 * beta);
  const double eb = std::exp(beta);
  const double ejb = std::exp(J * beta);
  p.K0 = (eb + 1.0) / 2.0;
  p.K3 = (eb - 1.0) / 2.0;
  p.R0 = (ejb + 1.0) / 2.0;
  p.R3 = (ejb - 1.0) / 2.0;
  p.A = p.K0 * p.K0 * p.R0 + p.K3 * p.K3 * p.R3;
  p.B = p.K0 * p.K3 * (p.R0 + p.R3);
  p.C = p.K0 * p.K0 * p.R3 + p.K3 * p.K3 * p.R0;
  p.tau1 = p.A * p.A + 2.0 * p.B * p.B + p.C * p.C;
  p.tau2 = 2.0 * (p.A * p.C + p.B * p.B);
  p.tau3 = 4.0 * p.B * (p.A + p.C);

  const auto closed = tau_closed_form(p.theta, J);
  if (!close_rel(p.tau1, closed.tau1, 1e-12) || !close_rel(p.tau2, closed.tau2, 1e-12) ||
      !close_rel(p.tau3, closed.tau3, 1e-12)) {
    throw Error("tau coefficients disagree between routes");
  }

  p.alpha = 1.0 / p.tau1;
  p.rate_paper = p.tau3 / (4.0 * p.tau1);
  p.rate_direct = p.tau3 / (2.0 * p.tau1);
  p.tooth_rate = -std::sin(2.0 * beta);
  return p;
}

ModelParams model_params_theta(double theta, double J) {
  if (!(theta >= 1.0)) throw Error("parameters out of model range");
  return model_params(0.5 * std::log(theta), J);
}

bool tooth_degenerate(double beta, double tol) {
  return std::abs(std::sin(2.0 * beta) + 1.0) <= tol;
}

Matrix kernel_l1_matrix(double beta) {
  const Matrix id = Matrix::Identity(4, 4);
  const Matrix zz = kron(Matrix(pauli_z()), Matrix(pauli_z()));
  return std::cos(beta) * id - std::sin(beta) * zz;
}

Matrix kernel_l2_exponential(const ModelParams& p) {
  const Matrix k01 = (p.beta * edge_projection(0, 1)).exp();
  const Matrix k02 = (p.beta * edge_projection(0, 2)).exp();
  const Matrix l12 = (p.J * p.beta * edge_projection(1, 2)).exp();
  return k01 * k02 * l12;
}

Matrix kernel_l2_closed_form(const ModelParams& p) {
  const Matrix id(identity2());
  const Matrix z(pauli_z());
  return p.A * kron(kron(id, id), id) + p.B * kron(kron(z, z), id) +
         p.B * kron(kron(z, id), z) + p.C * kron(kron(id, z), z);
}

LocalOperator kernel_l1(double beta, const Vertex& v) {
  return LocalOperator({v, Vertex{v.k, v.l + 1}}, kernel_l1_matrix(beta));
}

LocalOperator kernel_l2(const ModelParams& p, const Vertex& v) {
  const Matrix ex = kernel_l2_exponential(p);
  const Matrix cf = kernel_l2_closed_form(p);
  for (Eigen::Index i = 0; i < 8; ++i) {
    for (Eigen::Index j = 0; j < 8; ++j) {
      if (std::abs(ex(i, j) - cf(i, j)) > 1e-12 * (1.0 + std::abs(cf(i, j)))) {
        throw Error("spine kernel routes disagree");
      }
    }
  }
  return LocalOperator({v, Vertex{v.k + 1, v.l}, Vertex{v.k, v.l + 1}}, cf);
}

LocalOperator vertex_kernel(const ModelParams& p, const Vertex& x) {
  return classify(x) == VertexClass::L2 ? kernel_l2(p, x) : kernel_l1(p.beta, x);
}

LocalOperator layer_kernel(unsigned n, const ModelParams& p, unsigned max_layer) {
  if (n > max_layer) throw VolumeTooLarge("volume too large");
  LocalOperator out;
  for (const auto& x : level(n).vertices) out = tensor(out, vertex_kernel(p, x));
  return out;
}

LocalOperator layer_transition(unsigned n, const ModelParams& p, LocalOperator upper,
                               const SiteFactors& lower) {
  for (const auto& x : level(n).vertices) {
    if (const auto it = lower.find(x); it != lower.end()) {
      if (upper.contains(x)) throw Error("support collision");
      upper = tensor(LocalOperator::site(x, it->second), upper);
    }
    const LocalOperator k = vertex_kernel(p, x);
    Support missing;
    for (const auto& v : k.support()) {
      if (!upper.contains(v)) missing.push_back(v);
    }
    if (!missing.empty()) upper = tensor(upper, LocalOperator::identity(missing));
    upper = local_transition(upper, k, {x});
  }
  return upper;
}

}  // namespace combqmc
