#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obsr/dom/document.hpp"

namespace obsr::dom {

// Declarative normalization rule. What `pattern` means depends on the kind:
//   remove-element   element selector ("script, style", "span.sr-only", "[aria-live]")
//   remove-attribute regex over attribute names (full match); `value_pattern`
//                    optionally restricts to values matching a regex
//   replace-pattern  regex applied to text and attribute values (`bid` excluded)
//   sort-css         element selector whose `style` declarations get sorted
//   font-to-span     unused
//   whitespace       unused
struct NormalizationRule {
  enum class Kind { RemoveElement, RemoveAttribute, ReplacePattern, SortCss, FontToSpan, Whitespace };
  enum class Scope { All, Text, Attributes };

  std::string id;
  Kind kind = Kind::ReplacePattern;
  std::string pattern;
  std::optional<std::string> replacement;
  std::string value_pattern;
  bool ignore_case = false;
  Scope scope = Scope::All;
};

std::string_view to_string(NormalizationRule::Kind kind) noexcept;

// The platform-independent ruleset: script/style removal, <font> conversion,
// span CSS sorting, UUID / 32-hex id / date / time / relative-time
// placeholders, and line-level whitespace cleanup.
std::vector<NormalizationRule> builtin_rules();

// One JSON object per line: {"id", "kind", "pattern", "replacement",
// "value_pattern", "flags", "scope"}. Blank lines and lines starting with '#'
// are skipped. Throws InvalidRule.
std::vector<NormalizationRule> parse_rules(std::string_view jsonl);
std::vector<NormalizationRule> load_rules(const std::string& path);
std::string dump_rules(std::span<const NormalizationRule> rules);

// Rules compiled once; applying them is thread-safe.
class Normalizer {
 public:
  // Throws InvalidRule on a malformed selector or regex.
  explicit Normalizer(std::span<const NormalizationRule> rules);
  ~Normalizer();
  Normalizer(Normalizer&&) noexcept;
  Normalizer& operator=(Normalizer&&) noexcept;

  DomDocument apply(const DomDocument& doc) const;

 private:
  struct Compiled;
  std::vector<std::unique_ptr<Compiled>> rules_;
};

DomDocument normalize(const DomDocument& doc, std::span<const NormalizationRule> rules);

// True iff both inputs serialize identically after normalization.
bool normalized_equal(std::string_view a, std::string_view b, std::span<const NormalizationRule> rules);

// Minimal element selector: comma-separated compounds of tag or `*`,
// `.class`, `#id`, `[attr]`, `[attr=value]`.
class Selector {
 public:
  // Throws InvalidRule.
  static Selector parse(std::string_view text);
  bool matches(const Node& el) const;

 private:
  struct Compound {
    std::string tag;  // empty = any
    std::vector<std::string> classes;
    std::string id;
    std::vector<std::pair<std::string, std::optional<std::string>>> attrs;
  };
  std::vector<Compound> alternatives_;
};

}  // namespace obsr::dom
