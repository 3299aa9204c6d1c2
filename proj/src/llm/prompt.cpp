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

#include "forgespark/llm/prompt.hpp"

namespace forgespark::llm {

std::size_t default_token_count(std::string_view text) { return (text.size() + 3) / 4; }

std::string default_prompt_template() {
  return "TASK\n"
         "{{problem_description}}\n"
         "\n"
         "CODE UNDER TEST\n"
         "{{uut_code}}\n"
         "\n"
         "DEPENDENCY SIGNATURES\n"
         "{{dependency_signatures}}\n"
         "\n"
         "SUBTYPE RELATIONS\n"
         "{{subtype_relations}}\n"
         "\n"
         "OUTPUT FORMAT\n"
         "Reply with a single fenced code block containing MiniLang test functions only.\n"
         "Declare each test as `test fn test_<name>() { ... }` and check results with `assert`.\n"
         "Use `expect_error <call>;` for calls that must fail. Helper functions are allowed.\n";
}

namespace {

void replace_all(std::string& text, std::string_view key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
}

}  // namespace

std::string render_prompt(const std::string& template_text, const PromptContext& context) {
  std::string deps, subs;
  for (const auto& s : context.dependency_signatures) deps += s.declaration + "\n";
  for (const auto& [super, sub] : context.subtype_relations) subs += sub + " extends " + super + "\n";
  if (!deps.empty()) deps.pop_back();
  if (!subs.empty()) subs.pop_back();
  std::string uut = context.uut_code;
  while (!uut.empty() && uut.back() == '\n') uut.pop_back();

  // Code last, so placeholder-like text inside it stays verbatim.
  std::string out = template_text;
  replace_all(out, "{{problem_description}}", context.problem_description);
  replace_all(out, "{{dependency_signatures}}", deps.empty() ? "(none)" : deps);
  replace_all(out, "{{subtype_relations}}", subs.empty() ? "(none)" : subs);
  replace_all(out, "{{uut_code}}", uut);
  return out;
}

PromptTooLarge::PromptTooLarge(std::size_t tokens, std::size_t budget)
    : std::runtime_error("prompt needs " + std::to_string(tokens) + " tokens but the budget is " +
                         std::to_string(budget) + "; " + std::string(kSmallerUnitMessage)),
      tokens_(tokens),
      budget_(budget) {}

PromptDepths shrink(const PromptDepths& depths) {
  PromptDepths next = depths;
  if (next.polymorphism_depth >= next.input_depth && next.polymorphism_depth > 0) {
    --next.polymorphism_depth;
  } else if (next.input_depth > 0) {
    --next.input_depth;
  }
  return next;
}

BuiltPrompt build_prompt(const lang::TypedProgram& program, const UnitRef& unit, const PromptDepths& initial,
                         std::size_t budget, const PromptSettings& settings) {
  if (budget == 0) throw std::invalid_argument("token budget must be positive");
  BuiltPrompt out;
  PromptDepths depths = initial;
  for (;;) {
    PromptContext ctx = gather_context(program, unit, depths, settings.requested_tests);
    std::string user = render_prompt(settings.template_text, ctx);
    std::size_t tokens = settings.tokenizer(kSystemPrompt) + settings.tokenizer(user);
    out.attempts.push_back({depths, tokens});
    if (tokens <= budget) {
      out.messages = {ChatMessage::system(std::string(kSystemPrompt)), ChatMessage::user(std::move(user))};
      out.depths = depths;
      out.tokens = tokens;
      return out;
    }
    if (depths.input_depth == 0 && depths.polymorphism_depth == 0) throw PromptTooLarge(tokens, budget);
    depths = shrink(depths);
  }
}

}  // namespace forgespark::llm
