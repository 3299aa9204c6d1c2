// Copyright 2026 The ForgeSpark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGESPARK_COVERAGE_REPORT_HPP_
#define FORGESPARK_COVERAGE_REPORT_HPP_

#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "forgespark/coverage/coverage.hpp"

namespace forgespark::coverage {

inline constexpr int kReportSchema = 1;

// Source text and provenance of a report test, keyed by its id.
struct ReportTest {
  std::string id;
  std::string name;
  std::string code;
  std::string origin;  // "sbst" or "llm"
};

struct ReportHeader {
  std::string uut;
  std::string technique;
  std::string generated_at;  // the only time-dependent field
};

nlohmann::json metrics_json(const Totals& totals);

// Per-line rows keyed by decimal line number.
nlohmann::json lines_json(const CoverageReport& report);

// `tests` supplies code and origin for each run, matched by id.
nlohmann::json report_json(const ReportHeader& header, const CoverageReport& report,
                           const std::vector<ReportTest>& tests);

// Tests of a serialized report. Throws std::invalid_argument on a malformed
// document or a different schema.
std::vector<ReportTest> report_tests(const nlohmann::json& document);

}  // namespace forgespark::coverage

#endif  // FORGESPARK_COVERAGE_REPORT_HPP_
