#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rvs/eos_state.hpp"

namespace rvs {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int scan_res = 400;
  double scan_tol_factor = 1.0;
  double scan_max_cells = 2.0;
  int samples = 200;  // random states / frequencies per property
  int frozen_samples = 50;
};

// Every module invariant that applies to cfg. Properties that throw are recorded as failures.
std::vector<PropertyResult> run_property_suite(const SheetConfig& cfg, const SuiteOptions& opt = {});

}  // namespace rvs
