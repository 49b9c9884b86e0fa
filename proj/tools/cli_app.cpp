#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "combqmc/acceptance.hpp"
#include "combqmc/boundary_solver.hpp"
#include "combqmc/error.hpp"
#include "combqmc/io.hpp"
#include "combqmc/oracle.hpp"

namespace combqmc::cli {
namespace {

using nlohmann::json;
using io::format_number;

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output_path.empty()) {
    out << text;
  } else {
    io::write_file_atomic(cfg.output_path, text);
  }
}

std::string csv_complex(Complex z) { return format_number(z.real()) + ',' + format_number(z.imag()); }

std::size_t admissible_count(const std::vector<SolutionBranch>& bs) {
  std::size_t n = 0;
  for (const auto& b : bs) n += b.admissible() ? 1 : 0;
  return n;
}

int run_params(const RunConfig& cfg, std::ostream& out) {
  const auto p = model_params(cfg.beta, cfg.J);
  if (cfg.format == Format::Csv) {
    emit(cfg, out, io::params_csv_header() + "\n" + io::params_csv_row(p) + "\n");
  } else {
    emit(cfg, out, io::to_json(p).dump(2) + "\n");
  }
  return 0;
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
  const auto p = model_params(cfg.beta, cfg.J);
  const auto branches = enumerate_branches(p);
  if (cfg.format == Format::Csv) {
    std::string s = "tag,h11,h12,h21,h22,satisfies_l1,satisfies_l2,positive,admissible,residual_norm\n";
    for (const auto& b : branches) {
      s += to_string(b.tag);
      for (int i = 0; i < 4; ++i) s += ',' + format_number(b.h(i / 2, i % 2).real());
      s += std::string(",") + (b.satisfies_l1 ? "true" : "false") + ',' +
           (b.satisfies_l2 ? "true" : "false") + ',' + (b.positive ? "true" : "false") + ',' +
           (b.admissible() ? "true" : "false") + ',' + format_number(b.residual_norm) + '\n';
    }
    emit(cfg, out, s);
  } else {
    json j = io::branches_to_json(p, branches);
    j["tooth_degenerate"] = tooth_degenerate(p.beta);
    emit(cfg, out, j.dump(2) + "\n");
  }
  return admissible_count(branches) == 1 ? 0 : 1;
}

int run_evaluate(const RunConfig& cfg, std::ostream& out) {
  const auto p = model_params(cfg.beta, cfg.J);
  const auto r = evaluate_report(*cfg.observable, cfg.n, p, disordered_field(p), cfg.oracle);
  if (cfg.format == Format::Csv) {
    auto opt = [](const std::optional<Complex>& z) { return z ? csv_complex(*z) : std::string(","); };
    emit(cfg, out,
         "volume_n,iterative_re,iterative_im,product_re,product_im,oracle_re,oracle_im,max_cross_residual\n" +
             std::to_string(r.volume_n) + ',' + csv_complex(r.value_iterative) + ',' + opt(r.value_product) +
             ',' + opt(r.value_oracle) + ',' + format_number(r.max_cross_residual) + '\n');
  } else {
    emit(cfg, out, io::to_json(r).dump(2) + "\n");
  }
  return r.consistent() ? 0 : 1;
}

// phi(a b_d) for the second factor translated d steps along the spine.
int run_correlate_observable(const RunConfig& cfg, const ModelParams& p, std::ostream& out) {
  const auto& f = cfg.observable->factors();
  if (f.size() != 2) throw Error("correlate needs an observable with exactly two factors");
  const auto field = disordered_field(p);
  const Observable a = Observable::single(f[0].first, f[0].second);
  const Observable b = Observable::single(f[1].first, f[1].second);
  const Complex phi_a = evaluate_iterative(a, a.depth(), p, field);
  ClusteringReport r;
  r.rate_paper = p.rate_paper;
  r.rate_direct = p.rate_direct;
  for (unsigned d = 0; d <= cfg.d_max; ++d) {
    const Observable bd = b.translated(d);
    const unsigned depth = std::max(a.depth(), bd.depth());
    Observable ab;
    ab.add(f[0].first, f[0].second).add(bd.factors()[0].first, f[1].second);
    ClusteringRow row;
    row.d = d;
    const Complex corr = evaluate_iterative(ab, depth, p, field);
    const Complex phi_b = evaluate_iterative(bd, bd.depth(), p, field);
    row.correlation = corr.real();
    row.defect = std::abs(corr - phi_a * phi_b);
    if (!r.rows.empty() && r.rows.back().defect > 1e-14) row.ratio = row.defect / r.rows.back().defect;
    r.rows.push_back(row);
  }
  r.clustering = r.rows.back().defect <= r.rows.front().defect;
  emit(cfg, out, cfg.format == Format::Csv ? io::clustering_csv(r) : io::to_json(r).dump(2) + "\n");
  return r.clustering ? 0 : 1;
}

int run_correlate(const RunConfig& cfg, std::ostream& out) {
  const auto p = model_params(cfg.beta, cfg.J);
  if (cfg.observable) return run_correlate_observable(cfg, p, out);
  const auto r = clustering_report(p, cfg.d_max);
  emit(cfg, out, cfg.format == Format::Csv ? io::clustering_csv(r) : io::to_json(r).dump(2) + "\n");
  return r.clustering ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto betas = cfg.grid_beta ? cfg.grid_beta->values() : std::vector<double>{cfg.beta};
  const auto js = cfg.grid_J ? cfg.grid_J->values() : std::vector<double>{cfg.J};
  std::string csv =
      "beta,J,tau1,tau2,tau3,alpha,admissible_branches,unique_admissible,lambda,rate_paper,rate_direct,"
      "rate_match\n";
  json rows = json::array();
  bool ok = true;
  for (const double beta : betas) {
    for (const double J : js) {
      const auto p = model_params(beta, J);
      const auto count = admissible_count(enumerate_branches(p));
      const auto c = clustering_report(p, cfg.d_max);
      ok = ok && count == 1 && c.clustering;
      csv += format_number(beta) + ',' + format_number(J) + ',' + format_number(p.tau1) + ',' +
             format_number(p.tau2) + ',' + format_number(p.tau3) + ',' + format_number(p.alpha) + ',' +
             std::to_string(count) + ',' + (count == 1 ? "true" : "false") + ',' +
             format_number(c.lambda) + ',' + format_number(p.rate_paper) + ',' +
             format_number(p.rate_direct) + ',' + to_string(c.match) + '\n';
      rows.push_back({{"beta", beta},
                      {"J", J},
                      {"tau1", p.tau1},
                      {"tau2", p.tau2},
                      {"tau3", p.tau3},
                      {"alpha", p.alpha},
                      {"admissible_branches", count},
                      {"lambda", c.lambda},
                      {"rate_paper", p.rate_paper},
                      {"rate_direct", p.rate_direct},
                      {"rate_match", to_string(c.match)}});
    }
  }
  emit(cfg, out, cfg.format == Format::Csv ? csv : rows.dump(2) + "\n");
  return ok ? 0 : 1;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  AcceptanceOptions opts;
  opts.max_n = cfg.n;
  opts.on_result = [&](const CriterionResult& r) { out << format_result(r) << std::endl; };
  const auto results = run_acceptance(opts);
  bool ok = true;
  json arr = json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    arr.push_back({{"id", r.id},
                   {"title", r.title},
                   {"passed", r.passed},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
  }
  if (!cfg.output_path.empty()) io::write_file_atomic(cfg.output_path, arr.dump(2) + "\n");
  out << (ok ? "all criteria passed" : "some criteria FAILED") << std::endl;
  return ok ? 0 : 1;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "params") return Command::Params;
  if (name == "solve") return Command::Solve;
  if (name == "evaluate") return Command::Evaluate;
  if (name == "correlate") return Command::Correlate;
  if (name == "sweep") return Command::Sweep;
  if (name == "verify") return Command::Verify;
  return std::nullopt;
}

std::vector<double> Range::values() const {
  std::vector<double> v;
  for (long i = 0;; ++i) {
    const double x = start + static_cast<double>(i) * step;
    if (x > stop + 1e-9 * std::abs(step)) break;
    v.push_back(x);
  }
  return v;
}

Range parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("grid must look like start:stop:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3) throw Error("grid must look like start:stop:step, got '" + text + "'");
  if (!(parts[2] > 0.0) || parts[1] < parts[0]) throw Error("grid needs step > 0 and stop >= start");
  return {parts[0], parts[1], parts[2]};
}

Observable load_observable(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read observable file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error("observable file " + path + " is not valid JSON");
  }
  return io::observable_from_json(j);
}

RunConfig config_from_json(const json& j, RunConfig cfg) {
  try {
    if (j.contains("command")) {
      const auto c = parse_command(j.at("command").get<std::string>());
      if (!c) throw Error("unknown command in config");
      cfg.command = *c;
    }
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("J")) cfg.J = j.at("J").get<double>();
    if (j.contains("n")) cfg.n = j.at("n").get<unsigned>();
    if (j.contains("d_max")) cfg.d_max = j.at("d_max").get<unsigned>();
    if (j.contains("observable")) {
      const auto& o = j.at("observable");
      cfg.observable = o.is_string() ? load_observable(o.get<std::string>()) : io::observable_from_json(o);
    }
    if (j.contains("grid_beta")) cfg.grid_beta = parse_range(j.at("grid_beta").get<std::string>());
    if (j.contains("grid_J")) cfg.grid_J = parse_range(j.at("grid_J").get<std::string>());
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("format")) {
      const auto f = j.at("format").get<std::string>();
      if (f != "json" && f != "csv") throw Error("format must be json or csv");
      cfg.format = f == "csv" ? Format::Csv : Format::Json;
    }
    if (j.contains("oracle")) cfg.oracle = j.at("oracle").get<bool>();
  } catch (const json::exception& e) {
    throw Error(std::string("bad config: ") + e.what());
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.beta >= 0.0) || !(cfg.J >= 0.0)) throw Error("parameters out of model range");
  const bool grid = cfg.grid_beta || cfg.grid_J;
  if (grid && cfg.command != Command::Sweep) throw Error("--grid-beta/--grid-J are only valid for sweep");
  if (cfg.observable && cfg.command != Command::Evaluate && cfg.command != Command::Correlate) {
    throw Error("--observable is only valid for evaluate and correlate");
  }
  if (cfg.command == Command::Evaluate && !cfg.observable) throw Error("evaluate needs --observable");
  if ((cfg.command == Command::Correlate || cfg.command == Command::Sweep) && !cfg.observable &&
      cfg.d_max < 3) {
    throw Error("--d-max must be at least 3");
  }
  if (cfg.oracle && cfg.command != Command::Evaluate) throw Error("--oracle is only valid for evaluate");
}

int run(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  switch (cfg.command) {
    case Command::Params:
      return run_params(cfg, out);
    case Command::Solve:
      return run_solve(cfg, out);
    case Command::Evaluate:
      return run_evaluate(cfg, out);
    case Command::Correlate:
      return run_correlate(cfg, out);
    case Command::Sweep:
      return run_sweep(cfg, out);
    case Command::Verify:
      return run_verify(cfg, out);
  }
  return 2;
}

}  // namespace combqmc::cli
