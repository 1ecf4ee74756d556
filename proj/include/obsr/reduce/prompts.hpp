#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "obsr/reduce/providers.hpp"
#include "obsr/reduce/request.hpp"

namespace obsr::reduce {

inline constexpr std::string_view kPromptVersion = "v1";

// Raw template text by asset name; empty when unknown.
std::string_view prompt_asset(std::string_view name);

// Replaces each `{key}` with its value. Braces not naming a key are kept.
std::string render_template(std::string_view tmpl,
                            const std::vector<std::pair<std::string, std::string>>& values);

// "- Step <i>: <action>" lines; "None" for an empty history.
std::string format_history(const std::vector<std::string>& action_history);

CompletionRequest build_querygen_prompt(std::string_view goal, const std::vector<std::string>& history);
// Content of the first <query> block, trimmed. Throws MalformedResponse.
std::string parse_querygen_response(std::string_view response);

CompletionRequest build_focusagent_prompt(std::string_view goal, const std::vector<std::string>& history,
                                          std::string_view html, std::size_t k);
// Bids listed in the <answer> block, in order, first occurrence kept.
// Throws MalformedResponse.
std::vector<std::string> parse_focusagent_response(std::string_view response);

inline constexpr std::string_view kDefaultActionSpace =
    "Action space:\n"
    "- click(bid): click the element with the given bid\n"
    "- fill(bid, value): type value into the input element with the given bid\n"
    "- select_option(bid, option): select an option of a select element\n"
    "- scroll(dx, dy): scroll the page\n"
    "- go_back(): return to the previous page";

CompletionRequest build_planner_prompt(std::string_view goal, const std::vector<std::string>& history,
                                       std::string_view action_space = kDefaultActionSpace,
                                       std::optional<std::string> image_ref = std::nullopt);
// The filter receives the planner output verbatim.
CompletionRequest build_filter_prompt(std::string_view planner_output);
// `keyword_weights` object of the <answer> payload. Throws MalformedResponse.
KeywordWeights parse_filter_response(std::string_view response);

// Single-step action prompt used by the proxy oracle.
CompletionRequest build_agent_prompt(std::string_view goal, const std::vector<std::string>& history,
                                     std::string_view html);
// Content of the first <action> block, or the whole response without one.
std::string parse_agent_action(std::string_view response);

// Inner text of the first <tag>...</tag> block, if any.
std::optional<std::string> extract_block(std::string_view text, std::string_view tag);

}  // namespace obsr::reduce
