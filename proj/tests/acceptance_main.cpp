#include <iostream>

#include "combqmc/acceptance.hpp"

int main() {
  combqmc::AcceptanceOptions opts;
  opts.on_result = [](const combqmc::CriterionResult& r) {
    std::cout << combqmc::format_result(r) << std::endl;
  };
  bool ok = true;
  for (const auto& r : combqmc::run_acceptance(opts)) ok = ok && r.passed;
  std::cout << (ok ? "ALL PASS" : "SOME FAILED") << std::endl;
  return ok ? 0 : 1;
}
