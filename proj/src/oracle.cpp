#include "combqmc/oracle.hpp"

#include <cstdlib>
#include <random>
#include <string>

#include "combqmc/error.hpp"

namespace combqmc {
namespace {

Support layer_support(unsigned k) {
  Support s = level(k).vertices;
  const auto up = level(k + 1).vertices;
  s.insert(s.end(), up.begin(), up.end());
  return s;
}

// Full layer kernel with factors reordered to (W_k, W_{k+1}).
Matrix ordered_layer_kernel(unsigned k, const ModelParams& p) {
  return embed(layer_kernel(k, p, k), layer_support(k)).matrix();
}

// Y on (C, L) sites -> (id_C x E)(Y) on (C, W), with E given as a matrix
// from vec(L-operators) to vec(W-operators).
Matrix apply_on_tail(const Matrix& y, Eigen::Index dc, const Matrix& e) {
  const Eigen::Index dl = y.rows() / dc;
  const auto dw = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(e.rows()))));
  Matrix my(dc * dc, dl * dl);
  for (Eigen::Index c = 0; c < dc; ++c) {
    for (Eigen::Index c2 = 0; c2 < dc; ++c2) {
      for (Eigen::Index l = 0; l < dl; ++l) {
        for (Eigen::Index l2 = 0; l2 < dl; ++l2) {
          my(c * dc + c2, l * dl + l2) = y(c * dl + l, c2 * dl + l2);
        }
      }
    }
  }
  const Matrix out = my * e.transpose();
  Matrix res(dc * dw, dc * dw);
  for (Eigen::Index c = 0; c < dc; ++c) {
    for (Eigen::Index c2 = 0; c2 < dc; ++c2) {
      for (Eigen::Index w = 0; w < dw; ++w) {
        for (Eigen::Index w2 = 0; w2 < dw; ++w2) {
          res(c * dw + w, c2 * dw + w2) = out(c * dc + c2, w * dw + w2);
        }
      }
    }
  }
  return res;
}

Eigen::Index pow2(std::size_t s) { return Eigen::Index{1} << s; }

}  // namespace

std::size_t oracle_max_sites() {
  if (const char* env = std::getenv("COMB_QMC_MAX_SITES")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw Error("COMB_QMC_MAX_SITES must be a positive integer");
  }
  return kDefaultOracleMaxSites;
}

BruteForceOracle::BruteForceOracle(const ModelParams& p, const BoundaryField& field,
                                   std::size_t max_sites)
    : params_(p), field_(field), max_sites_(max_sites) {}

void BruteForceOracle::check_cap(unsigned n) const {
  if (volume_size(n + 1) > max_sites_) throw VolumeTooLarge("oracle volume too large");
}

Matrix BruteForceOracle::layer_map(unsigned k) const {
  const Matrix kk = ordered_layer_kernel(k, params_);
  const Eigen::Index dw = pow2(k + 1);
  const Eigen::Index dt = pow2(k + 2);
  const Eigen::Index dl = dw * dt;
  Matrix e(dw * dw, dl * dl);
  // (K* |l><l'| K)_{ij} = conj(K_{l i}) K_{l' j}; trace over the W_{k+1} index.
  for (Eigen::Index l = 0; l < dl; ++l) {
    const Eigen::RowVectorXcd row_l = kk.row(l).conjugate();
    const Matrix rl = row_l.reshaped<Eigen::RowMajor>(dw, dt);
    for (Eigen::Index l2 = 0; l2 < dl; ++l2) {
      const Eigen::RowVectorXcd row_l2 = kk.row(l2);
      const Matrix rl2 = row_l2.reshaped<Eigen::RowMajor>(dw, dt);
      const Matrix out = rl * rl2.transpose() / static_cast<double>(dt);
      e.col(l * dl + l2) = out.reshaped<Eigen::RowMajor>();
    }
  }
  return e;
}

Matrix BruteForceOracle::top_map(unsigned n) const {
  const Matrix kk = ordered_layer_kernel(n, params_);
  const Eigen::Index dw = pow2(n + 1);
  const Eigen::Index ds = pow2(n + 2);
  const Matrix h_up = level_product(n + 1, field_.h).matrix();
  const Matrix root = psd_sqrt(h_up);
  const Matrix g = root * root;

  Matrix t(dw * dw, dw * dw);
  for (Eigen::Index u = 0; u < dw; ++u) {
    // rows (u, s) of K: K* (|u><u'| x G) K = P_u^* G P_u'
    const Matrix pg = kk.middleRows(u * ds, ds).adjoint() * g;  // dl x ds
    for (Eigen::Index u2 = 0; u2 < dw; ++u2) {
      const Matrix pu2 = kk.middleRows(u2 * ds, ds);  // ds x dl
      Matrix out = Matrix::Zero(dw, dw);
      // Only the blocks diagonal in the traced W_{n+1} index contribute.
      for (Eigen::Index s = 0; s < ds; ++s) {
        const Matrix left = pg(Eigen::seqN(s, dw, ds), Eigen::all);
        const Matrix right = pu2(Eigen::all, Eigen::seqN(s, dw, ds));
        out.noalias() += left * right;
      }
      out /= static_cast<double>(ds);
      t.col(u * dw + u2) = out.reshaped<Eigen::RowMajor>();
    }
  }
  return t;
}

Complex BruteForceOracle::run(const Matrix& a, unsigned n, const Matrix& top,
                              const std::vector<Matrix>& layers) const {
  // Volume order is (Lambda_{n-1}, W_n): the top map acts on the W_n tail.
  const Eigen::Index dc_top = n == 0 ? 1 : pow2(volume_size(n - 1));
  Matrix y = apply_on_tail(a, dc_top, top);
  for (unsigned k = n; k-- > 0;) {
    const Eigen::Index dc = k == 0 ? 1 : pow2(volume_size(k - 1));
    y = apply_on_tail(y, dc, layers[k]);
  }
  return initial_functional(field_, y);
}

Complex BruteForceOracle::phi(const LocalOperator& a, unsigned n) const {
  check_cap(n);
  for (const auto& v : a.support()) {
    if (v.level() > n) throw Error("observable support exceeds the volume");
  }
  std::vector<Matrix> layers;
  for (unsigned k = 0; k < n; ++k) layers.push_back(layer_map(k));
  return run(embed(a, volume(n)).matrix(), n, top_map(n), layers);
}

Complex BruteForceOracle::phi(const Observable& a, unsigned n) const {
  const Observable one[] = {a};
  return phi_batch(one, n).front();
}

std::vector<Complex> BruteForceOracle::phi_batch(std::span<const Observable> a, unsigned n) const {
  check_cap(n);
  for (const auto& o : a) {
    if (o.depth() > n) throw Error("observable support exceeds the volume");
  }
  std::vector<Matrix> layers;
  for (unsigned k = 0; k < n; ++k) layers.push_back(layer_map(k));
  const Matrix top = top_map(n);
  const Support vol = volume(n);
  std::vector<Complex> out;
  out.reserve(a.size());
  for (const auto& o : a) out.push_back(run(o.to_operator(vol).matrix(), n, top, layers));
  return out;
}

Complex brute_force_phi(const Observable& a, unsigned n, const ModelParams& p,
                        const BoundaryField& field) {
  return BruteForceOracle(p, field).phi(a, n);
}

double verify_localization(unsigned n, const ModelParams& p, unsigned trials,
                           std::uint64_t seed) {
  if (n > 2) throw VolumeTooLarge("volume too large");
  const Support sup = layer_support(n);
  const LocalOperator k(sup, ordered_layer_kernel(n, p));
  const Support lower = level(n).vertices;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const auto d = pow2(sup.size());
  double worst = 0.0;
  for (unsigned t = 0; t < trials; ++t) {
    Matrix z(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) z(i, j) = Complex(gauss(rng), gauss(rng));
    }
    const LocalOperator zop(sup, z);
    const auto global = partial_trace_onto(sandwich(k, zop), lower);
    const auto local = layer_transition(n, p, zop);
    worst = std::max(worst, max_abs_diff(global.matrix(), embed(local, lower).matrix()));
  }
  return worst;
}

EvalReport evaluate_report(const Observable& a, unsigned n, const ModelParams& p,
                           const BoundaryField& field, bool with_oracle) {
  EvalReport r;
  r.volume_n = n;
  r.value_iterative = evaluate_iterative(a, n, p, field);
  const double scale = 1.0 + std::abs(r.value_iterative);
  if (n >= 1) {
    r.value_product = evaluate_product(a, n, p);
    r.max_cross_residual =
        std::max(r.max_cross_residual, std::abs(*r.value_product - r.value_iterative) / scale);
  }
  if (with_oracle) {
    r.value_oracle = brute_force_phi(a, n, p, field);
    r.max_cross_residual =
        std::max(r.max_cross_residual, std::abs(*r.value_oracle - r.value_iterative) / scale);
  }
  return r;
}

}  // namespace combqmc
