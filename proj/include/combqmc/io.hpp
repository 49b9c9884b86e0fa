#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "combqmc/boundary_solver.hpp"
#include "combqmc/oracle.hpp"
#include "combqmc/qmc_engine.hpp"

namespace combqmc::io {

using json = nlohmann::json;

json to_json(const Vertex& v);
Vertex vertex_from_json(const json& j);

/// {support: [[k,l],...], re: [...], im: [...]}, entries row-major.
json to_json(const LocalOperator& a);
LocalOperator operator_from_json(const json& j);

json to_json(const ModelParams& p);

/// beta,J,theta,K0,K3,R0,R3,A,B,C,tau1,tau2,tau3,alpha,rate_paper,rate_direct
std::string params_csv_header();
std::string params_csv_row(const ModelParams& p);

/// {beta, J, branches: [{tag, h: [h11,h12,h21,h22], satisfies_l1, ...}]}.
/// Complex entries of h are written as their real parts when the imaginary
/// parts vanish, otherwise as [re, im] pairs.
json branches_to_json(const ModelParams& p, const std::vector<SolutionBranch>& branches);

/// {factors: [{site: [k,l], op: "id" | "sz" | {re: [4], im: [4]}}]}.
Observable observable_from_json(const json& j);
json to_json(const Observable& o);

json to_json(const EvalReport& r);
json to_json(const ClusteringReport& r);
json to_json(const LayerCompatibilityReport& r);

/// d,correlation,defect,ratio
std::string clustering_csv(const ClusteringReport& r);

/// Shortest-round-trip formatting with 17 significant digits.
std::string format_number(double x);

/// Writes via a temporary file in the same directory and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace combqmc::io
