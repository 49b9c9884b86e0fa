#include "combqmc/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "combqmc/error.hpp"

namespace combqmc::io {
namespace {

json complex_json(Complex c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

unsigned coordinate(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw Error("vertex coordinates must be nonnegative integers");
  }
  return j.get<unsigned>();
}

Matrix2 matrix2_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "id") return identity2();
    if (s == "sz") return pauli_z();
    throw Error("unknown site operator '" + s + "'");
  }
  if (!j.is_object() || !j.contains("re")) throw Error("site operator must be \"id\", \"sz\" or {re, im}");
  const auto& re = j.at("re");
  const json im = j.contains("im") ? j.at("im") : json::array({0, 0, 0, 0});
  if (re.size() != 4 || im.size() != 4) throw Error("site operator needs 4 entries");
  Matrix2 m;
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(re[i].get<double>(), im[i].get<double>());
  return m;
}

}  // namespace

json to_json(const Vertex& v) { return json::array({v.k, v.l}); }

Vertex vertex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("vertex must be a two-element array [k,l]");
  return Vertex{coordinate(j[0]), coordinate(j[1])};
}

json to_json(const LocalOperator& a) {
  json sup = json::array();
  for (const auto& v : a.support()) sup.push_back(to_json(v));
  json re = json::array(), im = json::array();
  const Matrix& m = a.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return {{"support", sup}, {"re", re}, {"im", im}};
}

LocalOperator operator_from_json(const json& j) {
  Support sup;
  for (const auto& v : j.at("support")) sup.push_back(vertex_from_json(v));
  const auto d = Eigen::Index{1} << sup.size();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != d * d || static_cast<Eigen::Index>(im.size()) != d * d) {
    throw Error("operator entry count does not match support");
  }
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) {
      m(i, c) = Complex(re[i * d + c].get<double>(), im[i * d + c].get<double>());
    }
  }
  return LocalOperator(std::move(sup), std::move(m));
}

json to_json(const ModelParams& p) {
  return {{"beta", p.beta},   {"J", p.J},       {"theta", p.theta},
          {"K0", p.K0},       {"K3", p.K3},     {"R0", p.R0},
          {"R3", p.R3},       {"A", p.A},       {"B", p.B},
          {"C", p.C},         {"tau1", p.tau1}, {"tau2", p.tau2},
          {"tau3", p.tau3},   {"alpha", p.alpha}, {"rate_paper", p.rate_paper},
          {"rate_direct", p.rate_direct}, {"tooth_rate", p.tooth_rate},
          {"tooth_degenerate", tooth_degenerate(p.beta)}};
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string params_csv_header() {
  return "beta,J,theta,K0,K3,R0,R3,A,B,C,tau1,tau2,tau3,alpha,rate_paper,rate_direct";
}

std::string params_csv_row(const ModelParams& p) {
  const double v[] = {p.beta, p.J,  p.theta, p.K0,   p.K3,   p.R0,    p.R3,         p.A,
                      p.B,    p.C,  p.tau1,  p.tau2, p.tau3, p.alpha, p.rate_paper, p.rate_direct};
  std::string out;
  for (std::size_t i = 0; i < std::size(v); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

json branches_to_json(const ModelParams& p, const std::vector<SolutionBranch>& branches) {
  json arr = json::array();
  for (const auto& b : branches) {
    arr.push_back({{"tag", to_string(b.tag)},
                   {"h", json::array({complex_json(b.h(0, 0)), complex_json(b.h(0, 1)),
                                      complex_json(b.h(1, 0)), complex_json(b.h(1, 1))})},
                   {"satisfies_l1", b.satisfies_l1},
                   {"satisfies_l2", b.satisfies_l2},
                   {"positive", b.positive},
                   {"admissible", b.admissible()},
                   {"residual_norm", b.residual_norm}});
  }
  return {{"beta", p.beta}, {"J", p.J}, {"branches", arr}};
}

Observable observable_from_json(const json& j) {
  if (!j.is_object() || !j.contains("factors") || !j.at("factors").is_array()) {
    throw Error("observable JSON needs a 'factors' array");
  }
  Observable o;
  for (const auto& f : j.at("factors")) {
    o.add(vertex_from_json(f.at("site")), matrix2_from_json(f.at("op")));
  }
  return o;
}

json to_json(const Observable& o) {
  json arr = json::array();
  for (const auto& [v, m] : o.factors()) {
    json op;
    if (m == identity2()) {
      op = "id";
    } else if (m == pauli_z()) {
      op = "sz";
    } else {
      json re = json::array(), im = json::array();
      for (int i = 0; i < 4; ++i) {
        re.push_back(m(i / 2, i % 2).real());
        im.push_back(m(i / 2, i % 2).imag());
      }
      op = {{"re", re}, {"im", im}};
    }
    arr.push_back({{"site", to_json(v)}, {"op", op}});
  }
  return {{"factors", arr}};
}

json to_json(const EvalReport& r) {
  auto c = [](Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; };
  json j = {{"volume_n", r.volume_n},
            {"value_iterative", c(r.value_iterative)},
            {"value_product", r.value_product ? c(*r.value_product) : json(nullptr)},
            {"value_oracle", r.value_oracle ? c(*r.value_oracle) : json(nullptr)},
            {"max_cross_residual", r.max_cross_residual},
            {"consistent", r.consistent()}};
  return j;
}

json to_json(const ClusteringReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"d", row.d},
                    {"correlation", row.correlation},
                    {"defect", row.defect},
                    {"ratio", row.ratio ? json(*row.ratio) : json(nullptr)}});
  }
  return {{"rows", rows},
          {"magnetization", r.magnetization},
          {"undefined_zero", r.undefined_zero},
          {"lambda", r.lambda},
          {"spread", r.spread},
          {"rate_paper", r.rate_paper},
          {"rate_direct", r.rate_direct},
          {"match", to_string(r.match)},
          {"clustering", r.clustering}};
}

json to_json(const LayerCompatibilityReport& r) {
  return {{"passed", r.passed},
          {"rho0_h0", r.rho0_h0},
          {"normalization_ok", r.normalization_ok},
          {"residuals", r.residuals},
          {"failed_at", r.failed_at ? json(*r.failed_at) : json(nullptr)},
          {"failed_residual", r.failed_residual},
          {"tolerance", r.tolerance}};
}

std::string clustering_csv(const ClusteringReport& r) {
  std::string out = "d,correlation,defect,ratio\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.d) + ',' + format_number(row.correlation) + ',' +
           format_number(row.defect) + ',' + (row.ratio ? format_number(*row.ratio) : "") + '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f.flush()) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename into " + path + ": " + ec.message());
  }
}

}  // namespace combqmc::io
