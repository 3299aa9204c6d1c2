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

#ifndef FORGESPARK_LLM_REPAIR_HPP_
#define FORGESPARK_LLM_REPAIR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forgespark/llm/candidates.hpp"
#include "forgespark/llm/prompt.hpp"
#include "forgespark/llm/provider.hpp"

namespace forgespark::llm {

struct RepairLoopConfig {
  std::size_t max_iterations = 3;
  std::size_t token_budget = 4000;
  double temperature = 0.2;
  std::string model;

  void validate() const;
};

enum class Terminal { AllSaved, BudgetExhaustedWithSome, BudgetExhaustedWithNone };

const char* to_string(Terminal terminal);

struct FeedbackOutcome {
  std::vector<TestCandidate> saved;  // all Compiles, in the order they were first seen
  std::size_t iterations_used = 0;
  Terminal terminal = Terminal::BudgetExhaustedWithNone;
  std::string message;                // kSmallerUnitMessage for BudgetExhaustedWithNone
  std::optional<std::string> aborted;  // provider error that ended the loop early
  std::vector<ChatMessage> conversation;
  BuiltPrompt prompt;  // empty messages for a modification request
};

// The repair message for the failing candidates of one iteration.
std::string repair_message(const std::vector<TestCandidate>& failing, bool empty_response);

// Sends `conversation`, checks every returned candidate, and keeps asking for
// fixes of the failing ones until all compile or max_iterations replies have
// been consumed.
FeedbackOutcome run_feedback_loop(const lang::TypedProgram& program, std::vector<ChatMessage> conversation,
                                  const RepairLoopConfig& config, Provider& provider);

// Builds the prompt (shrinking depths as needed) and runs the loop.
// Throws PromptTooLarge.
FeedbackOutcome repair_loop(const lang::TypedProgram& program, const UnitRef& unit, const PromptDepths& depths,
                            const RepairLoopConfig& config, Provider& provider, const PromptSettings& settings = {});

class ModificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Asks for a changed version of `test` and returns it compile-checked. The
// input is never modified. Throws ModificationFailed (or ProviderError).
TestCandidate modification_request(const lang::TypedProgram& program, const TestCandidate& test,
                                   std::string_view instruction, Provider& provider,
                                   const RepairLoopConfig& config);

}  // namespace forgespark::llm

#endif  // FORGESPARK_LLM_REPAIR_HPP_
