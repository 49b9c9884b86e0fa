#pragma once

#include <map>

#include "combqmc/comb_graph.hpp"
#include "combqmc/op_algebra.hpp"

namespace combqmc {

/// Inverse temperature, coupling and every scalar derived from them.
struct ModelParams {
  double beta = 0.0;
  double J = 0.0;
  double theta = 1.0;  // exp(2 beta)
  double K0 = 1.0, K3 = 0.0, R0 = 1.0, R3 = 0.0;
  double A = 1.0, B = 0.0, C = 0.0;
  double tau1 = 1.0, tau2 = 0.0, tau3 = 0.0;
  double alpha = 1.0;        // 1 / tau1
  double rate_paper = 0.0;   // tau3 / (4 tau1)
  double rate_direct = 0.0;  // tau3 / (2 tau1)
  double tooth_rate = 0.0;   // -sin(2 beta)
};

struct TauTriple {
  double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0;
};

/// tau1, tau2, tau3 written directly in theta = exp(2 beta) and J.
TauTriple tau_closed_form(double theta, double J);

/// Throws Error("parameters out of model range") for beta < 0 or J < 0. The
/// A,B,C route and the theta route to the taus are cross-checked to 1e-12.
ModelParams model_params(double beta, double J);

/// beta = ln(theta) / 2.
ModelParams model_params_theta(double theta, double J);

/// sin(2 beta) = -1: the tooth equation no longer forces h11 = h22.
bool tooth_degenerate(double beta, double tol = 1e-12);

/// cos(b) 1x1 - sin(b) ZxZ as a 4x4 matrix.
Matrix kernel_l1_matrix(double beta);

/// Spine kernel K<v,v+e1> K<v,v+e2> L>v+e1,v+e2< from matrix exponentials of
/// the edge projections, factor order (v, v+e1, v+e2).
Matrix kernel_l2_exponential(const ModelParams& p);

/// A 111 + B ZZ1 + B Z1Z + C 1ZZ.
Matrix kernel_l2_closed_form(const ModelParams& p);

/// Tooth kernel on {v, v+e2}.
LocalOperator kernel_l1(double beta, const Vertex& v);

/// Spine kernel on {v, v+e1, v+e2}. Both construction routes are evaluated and
/// must agree entrywise to 1e-12 (relative to entry size).
LocalOperator kernel_l2(const ModelParams& p, const Vertex& v);

/// K_{{x} u S(x)}: the tooth or spine kernel, depending on the class of x.
LocalOperator vertex_kernel(const ModelParams& p, const Vertex& x);

inline constexpr unsigned kDefaultMaxLayer = 6;

/// Tensor product over x in level n of vertex_kernel(x), in level order.
/// Throws VolumeTooLarge("volume too large") for n > max_layer.
LocalOperator layer_kernel(unsigned n, const ModelParams& p,
                           unsigned max_layer = kDefaultMaxLayer);

using SiteFactors = std::map<Vertex, Matrix2>;

/// Localized transition expectation of layer [n, n+1], applied vertex by vertex
/// as E_x(.) = Tr_{S(x)}(K* . K). `upper` is an operator on (part of) levels n
/// and n+1, identity elsewhere. `lower` optionally supplies single-site factors
/// on level n that multiply `upper` from outside (they must not overlap its
/// support). They are attached one vertex at a time, so the working operator
/// stays within about one level's worth of sites. The result lives on level n
/// plus any sites of `upper` outside the layer.
LocalOperator layer_transition(unsigned n, const ModelParams& p, LocalOperator upper,
                               const SiteFactors& lower = {});

}  // namespace combqmc
