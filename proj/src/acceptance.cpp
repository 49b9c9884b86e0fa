#include "combqmc/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "combqmc/boundary_solver.hpp"
#include "combqmc/error.hpp"
#include "combqmc/ising_kernels.hpp"
#include "combqmc/oracle.hpp"

namespace combqmc {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double rel(Complex a, Complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

Outcome coefficient_identities() {
  double worst = 0.0;
  for (const auto& [beta, J] : acceptance_grid()) {
    const auto p = model_params(beta, J);
    const double a = p.A, b = p.B, c = p.C;
    const auto cf = tau_closed_form(std::exp(2.0 * beta), J);
    worst = std::max({worst, rel(a * a + 2 * b * b + c * c, cf.tau1), rel(2 * (a * c + b * b), cf.tau2),
                      rel(4 * b * (a + c), cf.tau3)});
  }
  return {worst <= 1e-12, "max relative deviation " + fmt(worst)};
}

Outcome kernel_consistency() {
  double worst_l2 = 0.0, worst_l1 = 0.0;
  for (const auto& [beta, J] : acceptance_grid()) {
    const auto p = model_params(beta, J);
    const Matrix ex = kernel_l2_exponential(p);
    const Matrix cf = kernel_l2_closed_form(p);
    for (Eigen::Index i = 0; i < 8; ++i) {
      for (Eigen::Index j = 0; j < 8; ++j) {
        worst_l2 = std::max(worst_l2, std::abs(ex(i, j) - cf(i, j)) / (1.0 + std::abs(cf(i, j))));
      }
    }
    const auto k = kernel_l1(beta, Vertex{0, 1});
    const LocalOperator kk(k.support(), k.matrix().adjoint() * k.matrix());
    const auto reduced = partial_trace_onto(kk, {Vertex{0, 1}});
    worst_l1 = std::max(worst_l1, max_abs_diff(reduced.matrix(), Matrix::Identity(2, 2)));
  }
  return {worst_l2 <= 1e-12 && worst_l1 <= 1e-12,
          "spine kernel routes " + fmt(worst_l2) + ", tooth conditional density " + fmt(worst_l1)};
}

Outcome fixed_point() {
  double worst = 0.0;
  std::size_t bad_sets = 0;
  for (const auto& [beta, J] : acceptance_grid()) {
    const auto p = model_params(beta, J);
    const Matrix2 h = p.alpha * Matrix2::Identity();
    worst = std::max({worst, max_abs(residual_l1(h, beta)), max_abs(residual_l2(h, p))});
    std::size_t admissible = 0;
    for (const auto& b : enumerate_branches(p)) admissible += b.admissible() ? 1 : 0;
    if (admissible != 1) ++bad_sets;
  }
  return {worst <= 1e-12 && bad_sets == 0,
          "max residual " + fmt(worst) + ", grid points without a unique admissible branch: " +
              std::to_string(bad_sets)};
}

Outcome ordered_candidates() {
  const auto p3 = model_params_theta(3.0, 1.0);
  bool ok3 = false;
  std::string d3;
  for (const auto& b : enumerate_branches(p3)) {
    if (b.tag != BranchTag::OrderedCandidate) continue;
    const double r1 = max_abs(residual_l1(b.h, p3.beta));
    const double r2 = max_abs(residual_l2(b.h, p3));
    const bool pos = is_positive(Matrix(b.h));
    ok3 = (d3.empty() || ok3) && pos && r2 <= kAdmissibilityTol && r1 > kAdmissibilityTol;
    d3 += " [h11=" + fmt(b.h(0, 0).real()) + " h22=" + fmt(b.h(1, 1).real()) + " l1 res " + fmt(r1) +
          " l2 res " + fmt(r2) + (pos ? " positive" : " not positive") + "]";
  }
  if (d3.empty()) d3 = " none found";
  std::size_t ordered2 = 0;
  for (const auto& b : enumerate_branches(model_params_theta(2.0, 1.0))) {
    ordered2 += b.tag == BranchTag::OrderedCandidate ? 1 : 0;
  }
  return {ok3 && ordered2 == 0,
          "theta=3:" + d3 + "; theta=2 ordered candidates: " + std::to_string(ordered2)};
}

Outcome layer_compatibility() {
  const std::pair<double, double> pts[] = {
      {0.1, 0.25}, {0.5, 1.0}, {0.5 * std::numbers::ln2, 1.0}, {1.0, 2.0}, {2.0, 4.0}};
  double worst = 0.0;
  bool ok = true;
  for (const auto& [beta, J] : pts) {
    const auto p = model_params(beta, J);
    const auto r = check_layer_compatibility(p, disordered_field(p), 3);
    ok = ok && r.passed;
    for (const double x : r.residuals) worst = std::max(worst, x);
  }
  return {ok && worst <= 1e-10, "max residual " + fmt(worst)};
}

struct Battery {
  ModelParams params;
  std::vector<Observable> lambda2_diag, lambda2_general, lambda3;
};

std::vector<Battery> make_batteries(std::uint64_t seed, unsigned max_n) {
  std::vector<Battery> out;
  std::mt19937_64 rng(seed);
  for (const auto& [theta, J] : {std::pair{2.0, 1.0}, std::pair{3.0, 2.0}}) {
    Battery b;
    b.params = model_params_theta(theta, J);
    for (int i = 0; i < 50; ++i) b.lambda2_diag.push_back(random_observable(rng, 2, true));
    for (int i = 0; i < 20; ++i) b.lambda2_general.push_back(random_observable(rng, 2, false));
    if (max_n >= 3) {
      for (int i = 0; i < 12; ++i) b.lambda3.push_back(random_observable(rng, 3, i % 2 == 0));
    }
    out.push_back(std::move(b));
  }
  return out;
}

Outcome route_equivalence(const std::vector<Battery>& batteries, unsigned max_n) {
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto& b : batteries) {
    const auto field = disordered_field(b.params);
    const BruteForceOracle oracle(b.params, field);
    auto check = [&](const std::vector<Observable>& obs, unsigned n) {
      const auto ref = oracle.phi_batch(obs, n);
      for (std::size_t i = 0; i < obs.size(); ++i) {
        const Complex it = evaluate_iterative(obs[i], n, b.params, field);
        const Complex pr = evaluate_product(obs[i], n, b.params);
        worst = std::max({worst, rel(pr, it), rel(ref[i], it)});
        ++count;
      }
    };
    check(b.lambda2_diag, 2);
    check(b.lambda2_general, 2);
    if (!b.lambda3.empty()) check(b.lambda3, 3);
  }
  const bool full = max_n >= 3;
  return {full && worst <= kRouteTol,
          std::to_string(count) + " observables, max relative deviation " + fmt(worst) +
              (full ? "" : " (Lambda_3 battery not run: n < 3)")};
}

Outcome state_properties(const std::vector<Battery>& batteries) {
  double norm_dev = 0.0, min_pos = INFINITY, max_mag = 0.0;
  for (const auto& b : batteries) {
    const auto field = disordered_field(b.params);
    for (unsigned n = 0; n <= 3; ++n) {
      norm_dev = std::max(norm_dev, std::abs(evaluate_iterative(Observable{}, n, b.params, field) - 1.0));
    }
    auto scan = [&](const std::vector<Observable>& obs, unsigned n) {
      for (const auto& o : obs) {
        const Complex v = evaluate_iterative(o.adjoint_times_self(), n, b.params, field);
        min_pos = std::min(min_pos, v.real() - std::abs(v.imag()));
      }
    };
    scan(b.lambda2_diag, 2);
    scan(b.lambda2_general, 2);
    scan(b.lambda3, 3);
    for (const auto& u : volume(3)) {
      max_mag = std::max(max_mag,
                         std::abs(evaluate_iterative(Observable::single(u, pauli_z()), 3, b.params, field)));
    }
  }
  return {norm_dev <= 1e-12 && min_pos >= -1e-10 && max_mag <= 1e-10,
          "|phi(1)-1| " + fmt(norm_dev) + ", min phi(a*a) " + fmt(min_pos) + ", max |phi(Z_u)| " +
              fmt(max_mag)};
}

Outcome compatibility(const std::vector<Battery>& batteries) {
  double worst = 0.0;
  for (const auto& b : batteries) {
    const auto field = disordered_field(b.params);
    for (const auto* obs : {&b.lambda2_diag, &b.lambda2_general}) {
      for (const auto& o : *obs) worst = std::max(worst, check_compatibility(o, 2, b.params, field));
    }
    for (const auto& o : b.lambda3) worst = std::max(worst, check_compatibility(o, 3, b.params, field));
  }
  const auto p = model_params_theta(2.0, 1.0);
  BoundaryField wrong = disordered_field(p);
  wrong.h = Matrix2::Identity();
  const double broken = check_compatibility(Observable{}, 1, p, wrong);
  return {worst <= 1e-10 && broken > 1e-2,
          "max battery deviation " + fmt(worst) + ", with h=1: " + fmt(broken)};
}

Outcome clustering() {
  std::set<RateMatch> matches;
  double worst_spread = 0.0, worst_lambda = 0.0;
  std::string detail;
  for (const double theta : {1.5, 2.0, 3.0}) {
    for (const double J : {0.5, 1.0, 2.0}) {
      const auto p = model_params_theta(theta, J);
      const auto r = clustering_report(p, kDefaultMaxLayer);
      matches.insert(r.match);
      worst_spread = std::max(worst_spread, r.spread);
      worst_lambda = std::max(worst_lambda, r.lambda);
      if (r.undefined_zero) matches.insert(RateMatch::None);
    }
  }
  const bool one = matches.size() == 1 && *matches.begin() != RateMatch::None &&
                   *matches.begin() != RateMatch::Both;
  detail = "max ratio spread " + fmt(worst_spread) + ", max lambda " + fmt(worst_lambda) +
           ", rate matched: ";
  for (auto m : matches) detail += std::string(to_string(m)) + " ";
  return {one && worst_spread <= 1e-8 && worst_lambda < 1.0, detail};
}

Outcome tooth_decay() {
  double worst_ratio = 0.0, worst_oracle = 0.0;
  for (const auto& [theta, J] : {std::pair{2.0, 1.0}, std::pair{3.0, 2.0}}) {
    const auto p = model_params_theta(theta, J);
    const auto field = disordered_field(p);
    const BruteForceOracle oracle(p, field);
    const Matrix2 z = pauli_z();
    for (const unsigned k : {0U, 1U}) {
      std::vector<Complex> values;
      for (unsigned l = 1; l <= 3; ++l) {
        const Vertex base{k, 0}, tip{k, l};
        values.push_back(two_point(z, z, base, tip, p));
        if (base.level() + l <= 3) {
          Observable o;
          o.add(base, z).add(tip, z);
          worst_oracle = std::max(worst_oracle, rel(oracle.phi(o, tip.level()), values.back()));
        }
      }
      for (std::size_t i = 1; i < values.size(); ++i) {
        worst_ratio = std::max(worst_ratio, std::abs(values[i].real() / values[i - 1].real() - p.tooth_rate));
      }
      // value(l) / (-sin 2 beta)^l is constant.
      const double c1 = values[0].real() / p.tooth_rate;
      for (std::size_t i = 1; i < values.size(); ++i) {
        const double ci = values[i].real() / std::pow(p.tooth_rate, static_cast<double>(i + 1));
        worst_ratio = std::max(worst_ratio, std::abs(ci - c1) / std::max(1.0, std::abs(c1)));
      }
    }
  }
  return {worst_ratio <= 1e-8 && worst_oracle <= kRouteTol,
          "max ratio deviation " + fmt(worst_ratio) + ", oracle deviation " + fmt(worst_oracle)};
}

}  // namespace

std::vector<std::pair<double, double>> acceptance_grid() {
  std::vector<std::pair<double, double>> g;
  for (int i = 1; i <= 20; ++i) {
    for (int j = 1; j <= 16; ++j) g.emplace_back(0.1 * i, 0.25 * j);
  }
  return g;
}

Observable random_observable(std::mt19937_64& rng, unsigned n, bool diagonal) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution coin(0.5);
  const auto sites = volume(n);
  Observable o;
  while (o.empty()) {
    for (const auto& v : sites) {
      if (!coin(rng)) continue;
      Matrix2 m = Matrix2::Zero();
      if (diagonal) {
        m(0, 0) = uni(rng);
        m(1, 1) = uni(rng);
      } else {
        for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(gauss(rng), gauss(rng));
      }
      o.add(v, m);
    }
  }
  return o;
}

std::string format_result(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] AC%-2d %-28s %7.2fs ", r.passed ? "PASS" : "FAIL", r.id,
                r.title.c_str(), r.seconds);
  std::string out = head;
  if (r.limit_seconds > 0.0) out += "(limit " + fmt(r.limit_seconds) + "s) ";
  return out + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionResult> results;
  std::vector<Battery> batteries;

  auto run = [&](int id, const std::string& title, double limit, const std::function<Outcome()>& body) {
    CriterionResult r;
    r.id = id;
    r.title = title;
    r.limit_seconds = limit;
    const auto t0 = Clock::now();
    try {
      const Outcome o = body();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit > 0.0 && r.seconds > limit) {
      r.passed = false;
      r.detail += " (runtime over limit)";
    }
    if (opts.on_result) opts.on_result(r);
    results.push_back(r);
  };

  run(1, "coefficient identities", 1.0, coefficient_identities);
  run(2, "kernel consistency", 1.0, kernel_consistency);
  run(3, "fixed point uniqueness", 5.0, fixed_point);
  run(4, "ordered-candidate logic", 1.0, ordered_candidates);
  run(5, "layer compatibility of h_n", 30.0, layer_compatibility);
  batteries = make_batteries(opts.seed, opts.max_n);
  run(6, "route equivalence", 600.0, [&] { return route_equivalence(batteries, opts.max_n); });
  run(7, "state properties", 0.0, [&] { return state_properties(batteries); });
  run(8, "compatibility", 0.0, [&] { return compatibility(batteries); });
  run(9, "clustering", 300.0, clustering);
  run(10, "tooth decay", 0.0, tooth_decay);
  return results;
}

}  // namespace combqmc
