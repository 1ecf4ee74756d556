#include "obsr/reduce/prompts.hpp"

#include <algorithm>

#include "json.hpp"
#include "obsr/dom/node.hpp"
#include "obsr/error.hpp"

namespace obsr::reduce {

std::string render_template(std::string_view tmpl,
                            const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      bool replaced = false;
      for (const auto& [key, value] : values) {
        if (tmpl.compare(i + 1, key.size(), key) == 0 && i + 1 + key.size() < tmpl.size() &&
            tmpl[i + 1 + key.size()] == '}') {
          out += value;
          i += key.size() + 2;
          replaced = true;
          break;
        }
      }
      if (replaced) continue;
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::string format_history(const std::vector<std::string>& action_history) {
  if (action_history.empty()) return "None";
  std::string out;
  for (std::size_t i = 0; i < action_history.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += "- Step " + std::to_string(i) + ": " + action_history[i];
  }
  return out;
}

std::optional<std::string> extract_block(std::string_view text, std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  auto b = text.find(open);
  if (b == std::string_view::npos) return std::nullopt;
  b += open.size();
  auto e = text.find(close, b);
  if (e == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(b, e - b));
}

CompletionRequest build_querygen_prompt(std::string_view goal, const std::vector<std::string>& history) {
  return {std::string(prompt_asset("querygen_system")),
          render_template(prompt_asset("querygen_user"),
                          {{"goal", std::string(goal)}, {"action_history", format_history(history)}}),
          std::nullopt};
}

std::string parse_querygen_response(std::string_view response) {
  auto q = extract_block(response, "query");
  if (!q) throw MalformedResponse("query generator response has no <query> block");
  return std::string(dom::trim(*q));
}

CompletionRequest build_focusagent_prompt(std::string_view goal, const std::vector<std::string>& history,
                                          std::string_view html, std::size_t k) {
  return {std::string(prompt_asset("focusagent_system")),
          render_template(prompt_asset("focusagent_user"), {{"k", std::to_string(k)},
                                                            {"goal", std::string(goal)},
                                                            {"history", format_history(history)},
                                                            {"html_txt", std::string(html)}}),
          std::nullopt};
}

std::vector<std::string> parse_focusagent_response(std::string_view response) {
  auto answer = extract_block(response, "answer");
  if (!answer) throw MalformedResponse("response has no <answer> block");
  auto lb = answer->find('[');
  auto rb = answer->find(']', lb == std::string::npos ? 0 : lb);
  if (lb == std::string::npos || rb == std::string::npos) {
    throw MalformedResponse("answer block holds no bracketed bid list");
  }
  std::vector<std::string> bids;
  std::string_view list = std::string_view(*answer).substr(lb + 1, rb - lb - 1);
  std::size_t b = 0;
  while (b <= list.size()) {
    auto e = list.find(',', b);
    if (e == std::string_view::npos) e = list.size();
    auto tok = dom::trim(list.substr(b, e - b));
    if (tok.size() >= 2 && (tok.front() == '\'' || tok.front() == '"') && tok.back() == tok.front()) {
      tok = dom::trim(tok.substr(1, tok.size() - 2));
    }
    if (!tok.empty() && std::find(bids.begin(), bids.end(), tok) == bids.end()) bids.emplace_back(tok);
    b = e + 1;
  }
  return bids;
}

CompletionRequest build_planner_prompt(std::string_view goal, const std::vector<std::string>& history,
                                       std::string_view action_space, std::optional<std::string> image_ref) {
  return {render_template(prompt_asset("prune4web_planner_system"), {{"action_space", std::string(action_space)}}),
          render_template(prompt_asset("prune4web_planner_user"),
                          {{"goal", std::string(goal)}, {"action_history", format_history(history)}}),
          std::move(image_ref)};
}

CompletionRequest build_filter_prompt(std::string_view planner_output) {
  return {std::string(prompt_asset("prune4web_filter_system")), std::string(planner_output), std::nullopt};
}

KeywordWeights parse_filter_response(std::string_view response) {
  auto answer = extract_block(response, "answer");
  if (!answer) throw MalformedResponse("filter response has no <answer> block");
  auto lb = answer->find('{');
  auto rb = answer->rfind('}');
  if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
    throw MalformedResponse("answer block holds no JSON object");
  }
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(answer->substr(lb, rb - lb + 1));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponse(std::string("unparseable filter payload: ") + e.what());
  }
  if (!j.is_object() || !j.contains("keyword_weights") || !j["keyword_weights"].is_object()) {
    throw MalformedResponse("filter payload lacks a keyword_weights object");
  }
  KeywordWeights weights;
  for (const auto& [kw, w] : j["keyword_weights"].items()) {
    if (!w.is_number()) throw MalformedResponse("weight of keyword '" + kw + "' is not a number");
    double v = w.get<double>();
    if (!(v > 0.0)) throw MalformedResponse("weight of keyword '" + kw + "' is not positive");
    weights.emplace_back(kw, v);
  }
  return weights;
}

CompletionRequest build_agent_prompt(std::string_view goal, const std::vector<std::string>& history,
                                     std::string_view html) {
  return {std::string(prompt_asset("agent_system")),
          render_template(prompt_asset("agent_user"), {{"goal", std::string(goal)},
                                                       {"history", format_history(history)},
                                                       {"html_txt", std::string(html)}}),
          std::nullopt};
}

std::string parse_agent_action(std::string_view response) {
  if (auto a = extract_block(response, "action")) return *a;
  return std::string(response);
}

}  // namespace obsr::reduce
