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

#include "forgespark/coverage/report.hpp"

#include <map>
#include <stdexcept>

namespace forgespark::coverage {

using nlohmann::json;

json metrics_json(const Totals& t) {
  return json{{"line_coverage_pct", t.line_coverage_pct},
              {"branch_outcome_pct", t.branch_outcome_pct},
              {"mutation_score_pct", t.mutation_score_pct},
              {"covered_lines", t.covered_lines},
              {"total_lines", t.total_lines},
              {"covered_branches", t.covered_branches},
              {"total_branches", t.total_branches},
              {"killed_mutants", t.killed_mutants},
              {"total_mutants", t.total_mutants}};
}

json lines_json(const CoverageReport& report) {
  std::map<std::size_t, const MutantResult*> by_id;
  for (const auto& m : report.mutants()) by_id.emplace(m.id, &m);
  json lines = json::object();
  for (const auto& [ref, entry] : report.per_line()) {
    json mutants = json::array();
    for (std::size_t id : entry.mutants) {
      const MutantResult& m = *by_id.at(id);
      mutants.push_back({{"id", m.id},
                         {"operator", lang::to_string(m.op)},
                         {"original", m.original_fragment},
                         {"mutated", m.mutated_fragment},
                         {"killed_by", m.killed_by}});
    }
    lines[std::to_string(ref.line)] = {
        {"function", ref.function}, {"covering_tests", entry.covering_tests}, {"mutants", std::move(mutants)}};
  }
  return lines;
}

json report_json(const ReportHeader& header, const CoverageReport& report, const std::vector<ReportTest>& tests) {
  std::map<std::string, const ReportTest*> info;
  for (const auto& t : tests) info.emplace(t.id, &t);
  json out_tests = json::array();
  for (const auto& run : report.tests()) {
    auto it = info.find(run.id);
    if (it == info.end()) throw std::invalid_argument("no source for test '" + run.id + "'");
    std::vector<int> lines;
    for (const auto& l : run.covered) {
      if (report.executable_lines().count(l)) lines.push_back(l.line);
    }
    out_tests.push_back({{"id", run.id},
                         {"name", it->second->name},
                         {"code", it->second->code},
                         {"origin", it->second->origin},
                         {"status", run.passed ? "passing" : "failing"},
                         {"error", run.error},
                         {"covered_lines", std::set<int>(lines.begin(), lines.end())}});
  }
  return json{{"schema", kReportSchema},
              {"generated_at", header.generated_at},
              {"uut", header.uut},
              {"technique", header.technique},
              {"tests", std::move(out_tests)},
              {"lines", lines_json(report)},
              {"totals", metrics_json(report.totals())}};
}

std::vector<ReportTest> report_tests(const json& document) {
  try {
    if (document.at("schema").get<int>() != kReportSchema) {
      throw std::invalid_argument("unsupported report schema " + document.at("schema").dump());
    }
    std::vector<ReportTest> out;
    for (const auto& t : document.at("tests")) {
      out.push_back(ReportTest{t.at("id").get<std::string>(), t.at("name").get<std::string>(),
                               t.at("code").get<std::string>(), t.at("origin").get<std::string>()});
    }
    return out;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

}  // namespace forgespark::coverage
