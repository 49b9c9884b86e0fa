#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "combqmc/qmc_engine.hpp"

namespace combqmc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct AcceptanceOptions {
  /// Largest volume radius used for the route-equivalence battery (needs 3).
  unsigned max_n = 3;
  std::uint64_t seed = 20240611;
  /// Called after each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

std::string format_result(const CriterionResult& r);

/// beta in {0.1, ..., 2.0} x J in {0.25, ..., 4.0}.
std::vector<std::pair<double, double>> acceptance_grid();

/// Random product observable on the volume of radius n. Each site carries a
/// factor with probability 1/2 (at least one site does). Diagonal factors have
/// real entries in [-1, 1]; general factors have complex Gaussian entries.
Observable random_observable(std::mt19937_64& rng, unsigned n, bool diagonal);

}  // namespace combqmc
