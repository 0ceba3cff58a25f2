#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spreadsmith/setting.hpp"

namespace spreadsmith {

enum class SuiteStatus { pass, fail, skipped };
std::string to_string(SuiteStatus s);

struct SuiteResult {
  std::string id;
  std::string property;  // one line, what was checked
  SuiteStatus status = SuiteStatus::pass;
  std::uint64_t checks = 0;
  std::string scope;   // "exhaustive" or "sampled N"
  std::string detail;  // first failure, skip reason, or reported values
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::uint64_t samples = 10000;          // sampled pairs, subsets, points
  std::uint64_t parallelism_samples = 100;
  int jobs = 1;
};

struct SuiteInfo {
  std::string id;
  std::string property;
};
const std::vector<SuiteInfo>& suites();

// Throws std::invalid_argument for an unknown id. Results do not depend on
// opts.jobs.
SuiteResult run_suite(const Setting& S, std::string_view id, const SuiteOptions& opts);
std::vector<SuiteResult> run_selftest(const Setting& S, const SuiteOptions& opts,
                                      const std::vector<std::string>& only = {});

}  // namespace spreadsmith
