#include "obsr/mine/oracles.hpp"

#include <algorithm>

#include "obsr/error.hpp"
#include "obsr/reduce/prompts.hpp"

namespace obsr::mine {

bool contains_set(const dom::RefList& removed, const dom::RefList& set) {
  return std::all_of(set.begin(), set.end(), [&](const dom::ElementRef& r) {
    return std::find(removed.begin(), removed.end(), r) != removed.end();
  });
}

SimulationOracle::SimulationOracle(dom::RefList ground_truth) : truth_(std::move(ground_truth)) {
  if (truth_.empty()) throw PreconditionViolated("simulation oracle needs a non-empty ground-truth set");
  dom::canonicalize(truth_);
}

Verdict SimulationOracle::evaluate(const dom::RefList& removed) {
  return contains_set(removed, truth_) ? Verdict::Fail : Verdict::Pass;
}

ProxyOracle::ProxyOracle(const dom::DomDocument& doc, std::string goal, std::vector<std::string> history,
                         const reduce::TextCompletionProvider& agent, std::string erroneous_action)
    : doc_(doc),
      goal_(std::move(goal)),
      history_(std::move(history)),
      agent_(agent),
      erroneous_(normalize_action(erroneous_action)) {}

Verdict ProxyOracle::evaluate(const dom::RefList& removed) {
  const auto ablated = dom::ablate(doc_, removed);
  const auto prompt = reduce::build_agent_prompt(goal_, history_, dom::serialize(ablated));
  const auto action = reduce::parse_agent_action(agent_.complete(prompt));
  return normalize_action(action) == erroneous_ ? Verdict::Fail : Verdict::Pass;
}

std::string normalize_action(std::string_view action) { return dom::collapse_whitespace(action); }

}  // namespace obsr::mine
