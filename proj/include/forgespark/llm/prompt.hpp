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

#ifndef FORGESPARK_LLM_PROMPT_HPP_
#define FORGESPARK_LLM_PROMPT_HPP_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forgespark/llm/context.hpp"
#include "forgespark/llm/provider.hpp"

namespace forgespark::llm {

inline constexpr std::string_view kSmallerUnitMessage = "try generating tests for a smaller unit (function or line)";
inline constexpr std::string_view kSystemPrompt = "You are a unit-testing assistant for the MiniLang language.";

using Tokenizer = std::function<std::size_t(std::string_view)>;

// ceil(bytes / 4).
std::size_t default_token_count(std::string_view text);

// The user-message template. Placeholders: {{problem_description}},
// {{uut_code}}, {{dependency_signatures}}, {{subtype_relations}}.
std::string default_prompt_template();

struct PromptSettings {
  std::string template_text = default_prompt_template();
  Tokenizer tokenizer = default_token_count;
  int requested_tests = 5;
};

// Fills the template; empty lists render as "(none)". Unknown placeholders
// are left as they are.
std::string render_prompt(const std::string& template_text, const PromptContext& context);

struct PromptAttempt {
  PromptDepths depths;
  std::size_t tokens = 0;
};

struct BuiltPrompt {
  std::vector<ChatMessage> messages;  // system, user
  PromptDepths depths;
  std::size_t tokens = 0;
  std::vector<PromptAttempt> attempts;  // every rendering, in order; the last one fits
};

class PromptTooLarge : public std::runtime_error {
 public:
  PromptTooLarge(std::size_t tokens, std::size_t budget);
  std::size_t tokens() const { return tokens_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t tokens_;
  std::size_t budget_;
};

// The next depths to try: the larger depth goes down by one, polymorphism
// first on ties.
PromptDepths shrink(const PromptDepths& depths);

// Renders at `initial` and shrinks until system + user message fit `budget`
// tokens. Throws PromptTooLarge when even depths (0, 0) do not fit.
BuiltPrompt build_prompt(const lang::TypedProgram& program, const UnitRef& unit, const PromptDepths& initial,
                         std::size_t budget, const PromptSettings& settings = {});

}  // namespace forgespark::llm

#endif  // FORGESPARK_LLM_PROMPT_HPP_
