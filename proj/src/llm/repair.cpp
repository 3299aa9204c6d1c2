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

#include "forgespark/llm/repair.hpp"

#include <set>

namespace forgespark::llm {

void RepairLoopConfig::validate() const {
  if (max_iterations == 0) throw std::invalid_argument("max_iterations must be at least 1");
  if (token_budget == 0) throw std::invalid_argument("token_budget must be positive");
}

const char* to_string(Terminal terminal) {
  switch (terminal) {
    case Terminal::AllSaved:
      return "AllSaved";
    case Terminal::BudgetExhaustedWithSome:
      return "BudgetExhaustedWithSome";
    case Terminal::BudgetExhaustedWithNone:
      return "BudgetExhaustedWithNone";
  }
  return "?";
}

std::string repair_message(const std::vector<TestCandidate>& failing, bool empty_response) {
  std::string out;
  if (empty_response) {
    out += "Your reply contained no MiniLang test functions.\n";
  } else {
    out += "These tests do not compile:\n";
    for (const auto& c : failing) {
      out += "\n```\n" + c.code;
      if (!c.code.empty() && c.code.back() != '\n') out += "\n";
      out += "```\nErrors:\n";
      for (const auto& e : c.status.errors) out += "- " + e + "\n";
    }
    out += "\n";
  }
  out += "Reply with the corrected tests in a single fenced code block.";
  return out;
}

FeedbackOutcome run_feedback_loop(const lang::TypedProgram& program, std::vector<ChatMessage> conversation,
                                  const RepairLoopConfig& config, Provider& provider) {
  config.validate();
  FeedbackOutcome out;
  std::set<std::string> seen;
  bool last_clean = false;
  while (out.iterations_used < config.max_iterations) {
    ChatMessage reply;
    try {
      reply = provider.send(conversation);
    } catch (const ProviderError& e) {
      out.aborted = e.what();
      break;
    }
    ++out.iterations_used;
    conversation.push_back(reply);

    std::vector<TestCandidate> failing;
    bool empty = false;
    try {
      for (auto& candidate : parse_response(reply.content).candidates) {
        candidate = check_candidate(program, std::move(candidate));
        if (!candidate.status.compiles()) {
          failing.push_back(std::move(candidate));
        } else if (seen.insert(normalized_code(candidate.code)).second) {
          out.saved.push_back(std::move(candidate));
        }
      }
    } catch (const EmptyResponse&) {
      empty = true;
    }
    last_clean = failing.empty() && !empty;
    if (last_clean || out.iterations_used >= config.max_iterations) break;
    conversation.push_back(ChatMessage::user(repair_message(failing, empty)));
  }
  if (last_clean && !out.saved.empty()) {
    out.terminal = Terminal::AllSaved;
  } else if (!out.saved.empty()) {
    out.terminal = Terminal::BudgetExhaustedWithSome;
  } else {
    out.terminal = Terminal::BudgetExhaustedWithNone;
    out.message = std::string(kSmallerUnitMessage);
  }
  out.conversation = std::move(conversation);
  return out;
}

FeedbackOutcome repair_loop(const lang::TypedProgram& program, const UnitRef& unit, const PromptDepths& depths,
                            const RepairLoopConfig& config, Provider& provider, const PromptSettings& settings) {
  config.validate();
  BuiltPrompt prompt = build_prompt(program, unit, depths, config.token_budget, settings);
  FeedbackOutcome out = run_feedback_loop(program, prompt.messages, config, provider);
  out.prompt = std::move(prompt);
  return out;
}

TestCandidate modification_request(const lang::TypedProgram& program, const TestCandidate& test,
                                   std::string_view instruction, Provider& provider,
                                   const RepairLoopConfig& config) {
  std::string user = "Here is a MiniLang unit test:\n\n```\n" + test.code;
  if (!test.code.empty() && test.code.back() != '\n') user += "\n";
  user += "```\n\nChange it as follows: " + std::string(instruction) +
          "\n\nReply with the updated test in a single fenced code block. Keep it a `test fn`.";
  FeedbackOutcome out = run_feedback_loop(
      program, {ChatMessage::system(std::string(kSystemPrompt)), ChatMessage::user(std::move(user))}, config,
      provider);
  if (out.saved.empty()) {
    if (out.aborted) throw ProviderError(*out.aborted);
    throw ModificationFailed("the modified test does not compile; " + out.message);
  }
  return out.saved.front();
}

}  // namespace forgespark::llm
