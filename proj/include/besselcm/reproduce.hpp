#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace besselcm {

struct ReproduceOptions {
  std::string data_dir = BESSELCM_DATA_DIR;  // f4.coeffs, f4_bk.txt
  unsigned threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;  // checks hold and the runtime limit was met
  bool checks_hold = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::vector<std::string> details;
};

/// Number of acceptance criteria.
constexpr int kCriteria = 11;

/// Runs criterion `id` (1..kCriteria). Exceptions are caught and reported as failures.
CriterionResult run_criterion(int id, const ReproduceOptions& options = {});

/// All criteria in order; `progress` sees each result as it completes.
std::vector<CriterionResult> reproduce_all(const ReproduceOptions& options = {},
                                           const std::function<void(const CriterionResult&)>& progress = {});

std::string summary_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

}  // namespace besselcm
