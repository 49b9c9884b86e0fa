#include "combqmc/qmc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "combqmc/error.hpp"

namespace combqmc {
namespace {

void require_within(const Observable& a, unsigned n) {
  if (a.depth() > n) throw Error("observable support exceeds the volume");
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

// Index of a site in the canonical volume ordering.
std::size_t volume_index(const Vertex& v) {
  const unsigned n = v.level();
  return volume_size(n) - (n + 1) + v.l;
}

Complex product_dense(const Observable& a, unsigned n, const std::vector<LocalOperator>& layers) {
  const Support vol = volume(n);
  Matrix prod = Matrix::Identity(1LL << vol.size(), 1LL << vol.size());
  for (const auto& k : layers) {
    const LocalOperator kk(k.support(), k.matrix() * k.matrix().adjoint());
    prod = prod * embed(kk, vol).matrix();
  }
  return normalized_trace(Matrix(a.to_operator(vol).matrix() * prod));
}

Complex product_diagonal(const Observable& a, unsigned n, const std::vector<LocalOperator>& layers) {
  const std::size_t sites = volume_size(n);
  const std::size_t dim = std::size_t{1} << sites;

  struct LayerDiag {
    std::vector<std::size_t> shifts;  // bit shift in the global index, per kernel site
    Eigen::VectorXcd diag;            // diagonal of K K*
  };
  std::vector<LayerDiag> diags;
  for (const auto& k : layers) {
    LayerDiag ld;
    for (const auto& v : k.support()) ld.shifts.push_back(sites - 1 - volume_index(v));
    ld.diag = (k.matrix() * k.matrix().adjoint()).diagonal();
    diags.push_back(std::move(ld));
  }
  std::vector<std::pair<std::size_t, Matrix2>> obs;
  for (const auto& [v, m] : a.factors()) obs.emplace_back(sites - 1 - volume_index(v), m);

  Complex sum = 0.0;
  for (std::size_t g = 0; g < dim; ++g) {
    Complex term = 1.0;
    for (const auto& [shift, m] : obs) {
      const auto b = static_cast<Eigen::Index>((g >> shift) & 1U);
      term *= m(b, b);
    }
    if (term == Complex(0.0)) continue;
    for (const auto& ld : diags) {
      std::size_t idx = 0;
      for (const auto s : ld.shifts) idx = (idx << 1) | ((g >> s) & 1U);
      term *= ld.diag(static_cast<Eigen::Index>(idx));
    }
    sum += term;
  }
  return sum / static_cast<double>(dim);
}

}  // namespace

Observable::Observable(std::vector<Factor> factors) {
  for (auto& [v, m] : factors) add(v, m);
}

Observable Observable::single(const Vertex& v, const Matrix2& m) {
  Observable o;
  o.add(v, m);
  return o;
}

Observable& Observable::add(const Vertex& v, const Matrix2& m) {
  for (const auto& f : factors_) {
    if (f.first == v) throw Error("observable has repeated site " + to_string(v));
  }
  factors_.emplace_back(v, m);
  return *this;
}

unsigned Observable::depth() const {
  unsigned d = 0;
  for (const auto& f : factors_) d = std::max(d, f.first.level());
  return d;
}

Observable Observable::adjoint_times_self() const {
  Observable o;
  for (const auto& [v, m] : factors_) o.add(v, m.adjoint() * m);
  return o;
}

Observable Observable::translated(unsigned n) const {
  Observable o;
  for (const auto& [v, m] : factors_) o.add(translate(v, n), m);
  return o;
}

LocalOperator Observable::to_operator(const Support& support) const {
  LocalOperator out;
  for (const auto& [v, m] : factors_) out = tensor(out, LocalOperator::site(v, m));
  return embed(out, support);
}

Complex evaluate_iterative(const Observable& a, unsigned n, const ModelParams& p,
                           const BoundaryField& field, const EngineLimits& limits) {
  require_within(a, n);
  if (n > limits.max_layer) throw VolumeTooLarge("volume too large");

  std::map<unsigned, SiteFactors> by_level;
  for (const auto& [v, m] : a.factors()) by_level[v.level()][v] = m;

  const Matrix2 root = Matrix2(psd_sqrt(Matrix(field.h)));
  LocalOperator y = level_product(n + 1, root * root);
  for (unsigned k = n + 1; k-- > 0;) {
    const auto it = by_level.find(k);
    y = layer_transition(k, p, std::move(y), it == by_level.end() ? SiteFactors{} : it->second);
  }
  return initial_functional(field, y.matrix());
}

Complex evaluate_product(const Observable& a, unsigned n, const ModelParams& p,
                         const EngineLimits& limits, ProductPath path) {
  if (n < 1) throw Error("product formula needs n >= 1");
  require_within(a, n);
  if (volume_size(n) > limits.max_volume_sites) throw VolumeTooLarge("volume too large");
  // alpha enters once per level beyond the root: |W_n| - 1 = n.
  if (level(n).vertices.size() - 1 != n) throw Error("level size invariant violated");

  std::vector<LocalOperator> layers;
  bool diagonal = true;
  for (unsigned i = 0; i < n; ++i) {
    layers.push_back(layer_kernel(i, p, std::max(limits.max_layer, n)));
    diagonal = diagonal && is_diagonal(layers.back().matrix());
  }
  Complex tr;
  if (path == ProductPath::Auto && diagonal) {
    tr = product_diagonal(a, n, layers);
  } else {
    if (volume_size(n) > 12) throw VolumeTooLarge("volume too large");
    tr = product_dense(a, n, layers);
  }
  return std::pow(p.alpha, static_cast<double>(n)) * tr;
}

double check_compatibility(const Observable& a, unsigned n, const ModelParams& p,
                           const BoundaryField& field, const EngineLimits& limits) {
  return std::abs(evaluate_iterative(a, n + 1, p, field, limits) -
                  evaluate_iterative(a, n, p, field, limits));
}

Complex two_point(const Matrix2& a0, const Matrix2& b0, const Vertex& u, const Vertex& v,
                  const ModelParams& p, const EngineLimits& limits) {
  if (u == v) throw Error("two-point sites must differ");
  Observable o;
  o.add(u, a0).add(v, b0);
  return evaluate_iterative(o, o.depth(), p, disordered_field(p), limits);
}

const char* to_string(RateMatch m) {
  switch (m) {
    case RateMatch::Paper:
      return "tau3/(4tau1)";
    case RateMatch::Direct:
      return "tau3/(2tau1)";
    case RateMatch::Both:
      return "both";
    case RateMatch::None:
      break;
  }
  return "none";
}

ClusteringReport clustering_report(const ModelParams& p, unsigned d_max,
                                   const EngineLimits& limits) {
  if (d_max < 3) throw Error("d_max must be at least 3");
  if (d_max > limits.max_layer) throw VolumeTooLarge("volume too large");

  ClusteringReport r;
  r.rate_paper = p.rate_paper;
  r.rate_direct = p.rate_direct;
  const Matrix2 z = pauli_z();
  const auto field = disordered_field(p);
  r.magnetization = evaluate_iterative(Observable::single({0, 0}, z), 0, p, field, limits).real();
  const double base = r.magnetization * r.magnetization;

  bool all_zero = true;
  for (unsigned d = 1; d <= d_max; ++d) {
    ClusteringRow row;
    row.d = d;
    row.correlation = two_point(z, z, {0, 0}, {d, 0}, p, limits).real();
    row.defect = std::abs(row.correlation - base);
    all_zero = all_zero && row.defect < 1e-14;
    r.rows.push_back(row);
  }
  if (all_zero) {
    r.undefined_zero = true;
    r.clustering = true;
    return r;
  }

  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const double ratio = r.rows[i].defect / r.rows[i - 1].defect;
    r.rows[i].ratio = ratio;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    sum += ratio;
  }
  r.lambda = sum / static_cast<double>(r.rows.size() - 1);
  r.spread = hi - lo;
  const bool paper = std::abs(r.lambda - p.rate_paper) <= kRateMatchTol;
  const bool direct = std::abs(r.lambda - p.rate_direct) <= kRateMatchTol;
  r.match = paper && direct ? RateMatch::Both
            : paper         ? RateMatch::Paper
            : direct        ? RateMatch::Direct
                            : RateMatch::None;
  r.clustering = r.lambda < 1.0;
  return r;
}

}  // namespace combqmc
