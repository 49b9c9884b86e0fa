#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "combqmc/acceptance.hpp"
#include "combqmc/error.hpp"
#include "combqmc/oracle.hpp"
#include "combqmc/qmc_engine.hpp"

namespace py = pybind11;
using namespace combqmc;

namespace {

// [((k, l), m), ...] with m a 2x2 array, "sz" or "id".
Observable to_observable(const py::list& factors) {
  Observable o;
  for (const auto& item : factors) {
    const auto pair = item.cast<py::tuple>();
    const auto site = pair[0].cast<std::pair<unsigned, unsigned>>();
    Matrix2 m;
    if (py::isinstance<py::str>(pair[1])) {
      const auto name = pair[1].cast<std::string>();
      if (name == "sz") {
        m = pauli_z();
      } else if (name == "id") {
        m = identity2();
      } else {
        throw Error("unknown operator name '" + name + "'");
      }
    } else {
      m = pair[1].cast<Matrix2>();
    }
    o.add(Vertex{site.first, site.second}, m);
  }
  return o;
}

py::dict params_dict(const ModelParams& p) {
  py::dict d;
  d["beta"] = p.beta;
  d["J"] = p.J;
  d["theta"] = p.theta;
  d["A"] = p.A;
  d["B"] = p.B;
  d["C"] = p.C;
  d["tau1"] = p.tau1;
  d["tau2"] = p.tau2;
  d["tau3"] = p.tau3;
  d["alpha"] = p.alpha;
  d["rate_paper"] = p.rate_paper;
  d["rate_direct"] = p.rate_direct;
  d["tooth_rate"] = p.tooth_rate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum Markov chains on the comb graph";

  const auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<VolumeTooLarge>(m, "VolumeTooLarge", error.ptr());

  m.def("model_params", [](double beta, double J) { return params_dict(model_params(beta, J)); },
        py::arg("beta"), py::arg("J"));

  m.def(
      "branches",
      [](double beta, double J) {
        py::list out;
        for (const auto& b : enumerate_branches(model_params(beta, J))) {
          py::dict d;
          d["tag"] = to_string(b.tag);
          d["h"] = Eigen::Matrix2cd(b.h);
          d["satisfies_l1"] = b.satisfies_l1;
          d["satisfies_l2"] = b.satisfies_l2;
          d["positive"] = b.positive;
          d["admissible"] = b.admissible();
          d["residual_norm"] = b.residual_norm;
          out.append(d);
        }
        return out;
      },
      py::arg("beta"), py::arg("J"));

  m.def(
      "evaluate",
      [](const py::list& factors, unsigned n, double beta, double J, const std::string& route) {
        const auto a = to_observable(factors);
        const auto p = model_params(beta, J);
        if (route == "iterative") return evaluate_iterative(a, n, p, disordered_field(p));
        if (route == "product") return evaluate_product(a, n, p);
        if (route == "oracle") return brute_force_phi(a, n, p, disordered_field(p));
        throw Error("route must be iterative, product or oracle");
      },
      py::arg("factors"), py::arg("n"), py::arg("beta"), py::arg("J"), py::arg("route") = "iterative",
      "phi_n of a product observable in the disordered state.");

  m.def(
      "clustering",
      [](double beta, double J, unsigned d_max) {
        const auto r = clustering_report(model_params(beta, J), d_max);
        py::dict d;
        std::vector<double> defects;
        for (const auto& row : r.rows) defects.push_back(row.defect);
        d["defects"] = defects;
        d["lambda"] = r.lambda;
        d["spread"] = r.spread;
        d["match"] = std::string(to_string(r.match));
        d["clustering"] = r.clustering;
        d["undefined_zero"] = r.undefined_zero;
        return d;
      },
      py::arg("beta"), py::arg("J"), py::arg("d_max") = 6);

  m.def(
      "acceptance",
      [](unsigned max_n) {
        AcceptanceOptions opts;
        opts.max_n = max_n;
        py::list out;
        for (const auto& r : run_acceptance(opts)) {
          out.append(py::make_tuple(r.id, r.title, r.passed, r.detail, r.seconds));
        }
        return out;
      },
      py::arg("max_n") = 3);
}
