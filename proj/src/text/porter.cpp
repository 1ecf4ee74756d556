#include "obsr/text/porter.hpp"

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace obsr::text {

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
  char c = w[i];
  if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
  if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
  return true;
}

// Number of VC sequences in the stem.
int measure(const std::string& stem) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    bool cons = is_consonant(stem, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

bool contains_vowel(const std::string& stem) {
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (!is_consonant(stem, i)) return true;
  }
  return false;
}

bool ends_double_consonant(const std::string& w) {
  auto n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

bool ends_cvc(const std::string& w) {
  auto n = w.size();
  if (n >= 3 && is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
      w[n - 1] != 'w' && w[n - 1] != 'x' && w[n - 1] != 'y') {
    return true;
  }
  return n == 2 && !is_consonant(w, 0) && is_consonant(w, 1);
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string drop(const std::string& w, std::size_t n) { return w.substr(0, w.size() - n); }

using Condition = std::function<bool(const std::string&)>;

struct Rule {
  std::string suffix;  // "*d" = any double consonant
  std::string replacement;
  Condition condition;
};

// The first rule whose suffix matches decides the outcome, whether or not its
// condition holds.
std::string apply_rules(const std::string& word, const std::vector<Rule>& rules) {
  for (const auto& r : rules) {
    if (r.suffix == "*d" && ends_double_consonant(word)) {
      auto stem = drop(word, 2);
      if (!r.condition || r.condition(stem)) return stem + r.replacement;
      return word;
    }
    if (ends_with(word, r.suffix)) {
      auto stem = drop(word, r.suffix.size());
      if (!r.condition || r.condition(stem)) return stem + r.replacement;
      return word;
    }
  }
  return word;
}

bool positive_measure(const std::string& s) { return measure(s) > 0; }

std::string step1a(const std::string& w) {
  if (ends_with(w, "ies") && w.size() == 4) return drop(w, 3) + "ie";
  static const std::vector<Rule> rules = {
      {"sses", "ss", {}}, {"ies", "i", {}}, {"ss", "ss", {}}, {"s", "", {}}};
  return apply_rules(w, rules);
}

std::string step1b(const std::string& w) {
  if (ends_with(w, "ied")) return w.size() == 4 ? drop(w, 3) + "ie" : drop(w, 3) + "i";
  if (ends_with(w, "eed")) {
    auto stem = drop(w, 3);
    return measure(stem) > 0 ? stem + "ee" : w;
  }
  std::optional<std::string> inter;
  for (std::string_view suffix : {"ed", "ing"}) {
    if (ends_with(w, suffix)) {
      auto stem = drop(w, suffix.size());
      if (contains_vowel(stem)) {
        inter = stem;
        break;
      }
    }
  }
  if (!inter) return w;
  const std::string& s = *inter;
  const char last = s.empty() ? '\0' : s.back();
  const std::vector<Rule> rules = {
      {"at", "ate", {}},
      {"bl", "ble", {}},
      {"iz", "ize", {}},
      {"*d", std::string(1, last), [last](const std::string&) { return last != 'l' && last != 's' && last != 'z'; }},
      {"", "e", [](const std::string& stem) { return measure(stem) == 1 && ends_cvc(stem); }},
  };
  return apply_rules(s, rules);
}

std::string step1c(const std::string& w) {
  static const std::vector<Rule> rules = {
      {"y", "i", [](const std::string& stem) { return stem.size() > 1 && is_consonant(stem, stem.size() - 1); }}};
  return apply_rules(w, rules);
}

std::string step2(const std::string& w) {
  if (ends_with(w, "alli") && positive_measure(drop(w, 4))) return step2(drop(w, 4) + "al");
  const std::vector<Rule> rules = {
      {"ational", "ate", positive_measure}, {"tional", "tion", positive_measure},
      {"enci", "ence", positive_measure},   {"anci", "ance", positive_measure},
      {"izer", "ize", positive_measure},    {"bli", "ble", positive_measure},
      {"alli", "al", positive_measure},     {"entli", "ent", positive_measure},
      {"eli", "e", positive_measure},       {"ousli", "ous", positive_measure},
      {"ization", "ize", positive_measure}, {"ation", "ate", positive_measure},
      {"ator", "ate", positive_measure},    {"alism", "al", positive_measure},
      {"iveness", "ive", positive_measure}, {"fulness", "ful", positive_measure},
      {"ousness", "ous", positive_measure}, {"aliti", "al", positive_measure},
      {"iviti", "ive", positive_measure},   {"biliti", "ble", positive_measure},
      {"fulli", "ful", positive_measure},
      {"logi", "log", [&w](const std::string&) { return positive_measure(drop(w, 3)); }},
  };
  return apply_rules(w, rules);
}

std::string step3(const std::string& w) {
  static const std::vector<Rule> rules = {
      {"icate", "ic", positive_measure}, {"ative", "", positive_measure}, {"alize", "al", positive_measure},
      {"iciti", "ic", positive_measure}, {"ical", "ic", positive_measure}, {"ful", "", positive_measure},
      {"ness", "", positive_measure}};
  return apply_rules(w, rules);
}

std::string step4(const std::string& w) {
  static const Condition gt1 = [](const std::string& s) { return measure(s) > 1; };
  static const std::vector<Rule> rules = {
      {"al", "", gt1},    {"ance", "", gt1}, {"ence", "", gt1}, {"er", "", gt1},   {"ic", "", gt1},
      {"able", "", gt1},  {"ible", "", gt1}, {"ant", "", gt1},  {"ement", "", gt1}, {"ment", "", gt1},
      {"ent", "", gt1},
      {"ion", "", [](const std::string& s) { return measure(s) > 1 && !s.empty() && (s.back() == 's' || s.back() == 't'); }},
      {"ou", "", gt1},    {"ism", "", gt1},  {"ate", "", gt1},  {"iti", "", gt1},  {"ous", "", gt1},
      {"ive", "", gt1},   {"ize", "", gt1}};
  return apply_rules(w, rules);
}

std::string step5a(const std::string& w) {
  if (ends_with(w, "e")) {
    auto stem = drop(w, 1);
    int m = measure(stem);
    if (m > 1) return stem;
    if (m == 1 && !ends_cvc(stem)) return stem;
  }
  return w;
}

std::string step5b(const std::string& w) {
  if (ends_with(w, "ll") && measure(drop(w, 1)) > 1) return drop(w, 1);
  return w;
}

const std::unordered_map<std::string, std::string>& irregular_forms() {
  static const std::unordered_map<std::string, std::string> pool = {
      {"sky", "sky"},         {"skies", "sky"},      {"dying", "die"},      {"lying", "lie"},
      {"tying", "tie"},       {"news", "news"},      {"innings", "inning"}, {"inning", "inning"},
      {"outings", "outing"},  {"outing", "outing"},  {"cannings", "canning"}, {"canning", "canning"},
      {"howe", "howe"},       {"proceed", "proceed"}, {"exceed", "exceed"}, {"succeed", "succeed"},
  };
  return pool;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  for (auto& c : w) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (auto it = irregular_forms().find(w); it != irregular_forms().end()) return it->second;
  if (w.size() <= 2) return w;
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace obsr::text
