#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "obsr/dom/ablation.hpp"
#include "obsr/dom/document.hpp"
#include "obsr/reduce/providers.hpp"

namespace obsr::mine {

enum class Verdict { Pass, Fail };

// test(S) = FAIL means that removing exactly S from the observation still
// induces the failure.
class Oracle {
 public:
  virtual ~Oracle() = default;
  Verdict test(const dom::RefList& removed) {
    ++calls_;
    return evaluate(removed);
  }
  std::size_t call_count() const noexcept { return calls_.load(); }

 protected:
  virtual Verdict evaluate(const dom::RefList& removed) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
};

// FAIL iff the ground-truth set is contained in the removed set.
class SimulationOracle final : public Oracle {
 public:
  // Throws PreconditionViolated for an empty ground truth.
  explicit SimulationOracle(dom::RefList ground_truth);
  const dom::RefList& ground_truth() const noexcept { return truth_; }

 protected:
  Verdict evaluate(const dom::RefList& removed) override;

 private:
  dom::RefList truth_;
};

// Asks the agent for one action on the ablated observation; FAIL iff it
// repeats the recorded erroneous action (whitespace-normalized).
class ProxyOracle final : public Oracle {
 public:
  ProxyOracle(const dom::DomDocument& doc, std::string goal, std::vector<std::string> history,
              const reduce::TextCompletionProvider& agent, std::string erroneous_action);

 protected:
  Verdict evaluate(const dom::RefList& removed) override;

 private:
  const dom::DomDocument& doc_;
  std::string goal_;
  std::vector<std::string> history_;
  const reduce::TextCompletionProvider& agent_;
  std::string erroneous_;
};

class FunctionOracle final : public Oracle {
 public:
  using Fn = std::function<Verdict(const dom::RefList&)>;
  explicit FunctionOracle(Fn fn) : fn_(std::move(fn)) {}

 protected:
  Verdict evaluate(const dom::RefList& removed) override { return fn_(removed); }

 private:
  Fn fn_;
};

// Trim and collapse internal whitespace.
std::string normalize_action(std::string_view action);

// FAIL iff `removed` contains every ref of `set`.
bool contains_set(const dom::RefList& removed, const dom::RefList& set);

}  // namespace obsr::mine
