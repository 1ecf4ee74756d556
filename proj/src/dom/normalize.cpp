#include "obsr/dom/normalize.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace obsr::dom {

using json = nlohmann::json;

namespace {

struct KindName {
  NormalizationRule::Kind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {NormalizationRule::Kind::RemoveElement, "remove-element"},
    {NormalizationRule::Kind::RemoveAttribute, "remove-attribute"},
    {NormalizationRule::Kind::ReplacePattern, "replace-pattern"},
    {NormalizationRule::Kind::SortCss, "sort-css"},
    {NormalizationRule::Kind::FontToSpan, "font-to-span"},
    {NormalizationRule::Kind::Whitespace, "whitespace"},
};

NormalizationRule::Kind kind_from_string(std::string_view s) {
  for (const auto& k : kKindNames) {
    if (k.name == s) return k.kind;
  }
  throw InvalidRule("unknown rule kind '" + std::string(s) + "'");
}

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

std::vector<std::string> split_classes(std::string_view v) {
  std::vector<std::string> out;
  std::istringstream in{std::string(v)};
  std::string c;
  while (in >> c) out.push_back(c);
  return out;
}

}  // namespace

std::string_view to_string(NormalizationRule::Kind kind) noexcept {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Selector
// ---------------------------------------------------------------------------

Selector Selector::parse(std::string_view text) {
  Selector sel;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw InvalidRule("bad selector '" + std::string(text) + "': " + why);
  };
  auto ident = [&]() {
    std::size_t b = i;
    while (i < text.size() && is_ident_char(text[i])) ++i;
    if (i == b) fail("expected a name at offset " + std::to_string(b));
    return std::string(text.substr(b, i - b));
  };
  while (true) {
    while (i < text.size() && text[i] == ' ') ++i;
    Compound c;
    bool any = false;
    if (i < text.size() && text[i] == '*') {
      ++i;
      any = true;
    } else if (i < text.size() && is_ident_char(text[i])) {
      c.tag = to_lower(ident());
      any = true;
    }
    while (i < text.size() && (text[i] == '.' || text[i] == '#' || text[i] == '[')) {
      char k = text[i++];
      if (k == '.') {
        c.classes.push_back(ident());
      } else if (k == '#') {
        c.id = ident();
      } else {
        auto name = to_lower(ident());
        std::optional<std::string> value;
        if (i < text.size() && text[i] == '=') {
          ++i;
          if (i < text.size() && (text[i] == '"' || text[i] == '\'')) {
            char q = text[i++];
            auto end = text.find(q, i);
            if (end == std::string_view::npos) fail("unterminated quote");
            value = std::string(text.substr(i, end - i));
            i = end + 1;
          } else {
            value = ident();
          }
        }
        if (i >= text.size() || text[i] != ']') fail("expected ']'");
        ++i;
        c.attrs.emplace_back(std::move(name), std::move(value));
      }
      any = true;
    }
    if (!any) fail("empty compound");
    sel.alternatives_.push_back(std::move(c));
    while (i < text.size() && text[i] == ' ') ++i;
    if (i == text.size()) break;
    if (text[i] != ',') fail(std::string("unexpected '") + text[i] + "'");
    ++i;
  }
  return sel;
}

bool Selector::matches(const Node& el) const {
  if (!el.is_element()) return false;
  for (const auto& c : alternatives_) {
    if (!c.tag.empty() && c.tag != el.tag) continue;
    if (!c.id.empty()) {
      const auto* id = el.attr("id");
      if (id == nullptr || *id != c.id) continue;
    }
    bool ok = true;
    if (!c.classes.empty()) {
      const auto* cls = el.attr("class");
      auto have = cls == nullptr ? std::vector<std::string>{} : split_classes(*cls);
      for (const auto& want : c.classes) {
        if (std::find(have.begin(), have.end(), want) == have.end()) {
          ok = false;
          break;
        }
      }
    }
    for (const auto& [name, value] : c.attrs) {
      if (!ok) break;
      const auto* v = el.attr(name);
      ok = v != nullptr && (!value || *v == *value);
    }
    if (ok) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Rule application
// ---------------------------------------------------------------------------

namespace {

void remove_matching(Node& node, const Selector& sel) {
  std::erase_if(node.children, [&](const Node& c) { return sel.matches(c); });
  for (auto& c : node.children) remove_matching(c, sel);
}

template <typename Fn>
void for_each_element(Node& node, Fn&& fn) {
  if (node.is_element()) fn(node);
  for (auto& c : node.children) for_each_element(c, fn);
}

template <typename Fn>
void for_each_text(Node& node, Fn&& fn) {
  for (auto& c : node.children) {
    if (c.is_text()) {
      fn(c.text);
    } else {
      for_each_text(c, fn);
    }
  }
}

std::string font_size_to_css(std::string_view size) {
  static constexpr std::string_view kSizes[] = {"x-small", "small",    "medium",   "large",
                                                "x-large", "xx-large", "xxx-large"};
  auto s = trim(size);
  int level = 0;
  bool ok = !s.empty();
  int sign = 0;
  std::size_t i = 0;
  if (ok && (s[0] == '+' || s[0] == '-')) {
    sign = s[0] == '+' ? 1 : -1;
    i = 1;
  }
  if (i >= s.size()) ok = false;
  for (; ok && i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') {
      ok = false;
    } else {
      level = level * 10 + (s[i] - '0');
      if (level > 100) ok = false;
    }
  }
  if (!ok) return std::string(s);
  if (sign != 0) level = 3 + sign * level;
  level = std::clamp(level, 1, 7);
  return std::string(kSizes[level - 1]);
}

std::vector<std::pair<std::string, std::string>> parse_style(std::string_view style) {
  std::vector<std::pair<std::string, std::string>> decls;
  std::size_t b = 0;
  while (b <= style.size()) {
    auto e = style.find(';', b);
    if (e == std::string_view::npos) e = style.size();
    auto decl = trim(style.substr(b, e - b));
    if (!decl.empty()) {
      auto colon = decl.find(':');
      if (colon == std::string_view::npos) {
        decls.emplace_back(to_lower(decl), "");
      } else {
        decls.emplace_back(to_lower(trim(decl.substr(0, colon))), std::string(trim(decl.substr(colon + 1))));
      }
    }
    b = e + 1;
  }
  return decls;
}

std::string format_style(const std::vector<std::pair<std::string, std::string>>& decls) {
  std::string out;
  for (const auto& [prop, value] : decls) {
    if (!out.empty()) out += "; ";
    out += prop;
    if (!value.empty()) {
      out += ": ";
      out += value;
    }
  }
  return out;
}

void font_to_span(Node& el) {
  if (el.tag != "font") return;
  std::vector<std::pair<std::string, std::string>> decls;
  if (const auto* size = el.attr("size")) decls.emplace_back("font-size", font_size_to_css(*size));
  if (const auto* face = el.attr("face")) decls.emplace_back("font-family", std::string(trim(*face)));
  if (const auto* color = el.attr("color")) decls.emplace_back("color", std::string(trim(*color)));
  if (const auto* style = el.attr("style")) {
    for (auto& d : parse_style(*style)) decls.push_back(std::move(d));
  }
  el.remove_attr("size");
  el.remove_attr("face");
  el.remove_attr("color");
  el.tag = "span";
  if (!decls.empty()) el.set_attr("style", format_style(decls));
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string normalize_lines(std::string_view text) {
  std::string out;
  std::size_t b = 0;
  while (b <= text.size()) {
    auto e = text.find('\n', b);
    if (e == std::string_view::npos) e = text.size();
    auto line = text.substr(b, e - b);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r' ||
                             line.back() == '\f' || line.back() == '\v')) {
      line.remove_suffix(1);
    }
    if (!trim(line).empty()) {
      if (!out.empty()) out.push_back('\n');
      if (is_digits(trim(line))) {
        out += "[ROW_COUNT]";
      } else {
        out += line;
      }
    }
    b = e + 1;
  }
  return out;
}

}  // namespace

struct Normalizer::Compiled {
  NormalizationRule rule;
  std::optional<Selector> selector;
  std::optional<std::regex> regex;
  std::optional<std::regex> value_regex;

  void apply(Node& root) const {
    using K = NormalizationRule::Kind;
    switch (rule.kind) {
      case K::RemoveElement:
        remove_matching(root, *selector);
        break;
      case K::RemoveAttribute:
        for_each_element(root, [&](Node& el) {
          std::erase_if(el.attributes, [&](const Attribute& a) {
            if (a.name == "bid" || !std::regex_match(a.name, *regex)) return false;
            return !value_regex || std::regex_match(a.value, *value_regex);
          });
        });
        break;
      case K::ReplacePattern: {
        const std::string repl = rule.replacement.value_or("");
        if (rule.scope != NormalizationRule::Scope::Attributes) {
          for_each_text(root, [&](std::string& t) { t = std::regex_replace(t, *regex, repl); });
        }
        if (rule.scope != NormalizationRule::Scope::Text) {
          for_each_element(root, [&](Node& el) {
            for (auto& a : el.attributes) {
              if (a.name != "bid") a.value = std::regex_replace(a.value, *regex, repl);
            }
          });
        }
        break;
      }
      case K::SortCss:
        for_each_element(root, [&](Node& el) {
          if (!selector->matches(el)) return;
          const auto* style = el.attr("style");
          if (style == nullptr) return;
          auto decls = parse_style(*style);
          std::stable_sort(decls.begin(), decls.end(),
                           [](const auto& a, const auto& b) { return a.first < b.first; });
          el.set_attr("style", format_style(decls));
        });
        break;
      case K::FontToSpan:
        for_each_element(root, font_to_span);
        break;
      case K::Whitespace:
        for_each_text(root, [](std::string& t) { t = normalize_lines(t); });
        break;
    }
  }
};

Normalizer::Normalizer(std::span<const NormalizationRule> rules) {
  using K = NormalizationRule::Kind;
  for (const auto& r : rules) {
    auto c = std::make_unique<Compiled>();
    c->rule = r;
    auto flags = std::regex::ECMAScript | (r.ignore_case ? std::regex::icase : std::regex::flag_type{});
    auto compile = [&](const std::string& pattern) {
      try {
        return std::regex(pattern, flags);
      } catch (const std::regex_error& e) {
        throw InvalidRule("rule '" + r.id + "': bad regex '" + pattern + "': " + e.what());
      }
    };
    switch (r.kind) {
      case K::RemoveElement:
      case K::SortCss:
        if (r.pattern.empty()) throw InvalidRule("rule '" + r.id + "': selector required");
        c->selector = Selector::parse(r.pattern);
        break;
      case K::RemoveAttribute:
      case K::ReplacePattern:
        if (r.pattern.empty()) throw InvalidRule("rule '" + r.id + "': pattern required");
        c->regex = compile(r.pattern);
        if (!r.value_pattern.empty()) c->value_regex = compile(r.value_pattern);
        break;
      case K::FontToSpan:
      case K::Whitespace:
        break;
    }
    rules_.push_back(std::move(c));
  }
}

Normalizer::~Normalizer() = default;
Normalizer::Normalizer(Normalizer&&) noexcept = default;
Normalizer& Normalizer::operator=(Normalizer&&) noexcept = default;

DomDocument Normalizer::apply(const DomDocument& doc) const {
  Node root = doc.root();
  for (const auto& r : rules_) {
    r->apply(root);
    // Re-canonicalize so later rules see merged text nodes.
    root = DomDocument(std::move(root)).root();
  }
  return DomDocument(std::move(root));
}

DomDocument normalize(const DomDocument& doc, std::span<const NormalizationRule> rules) {
  return Normalizer(rules).apply(doc);
}

bool normalized_equal(std::string_view a, std::string_view b, std::span<const NormalizationRule> rules) {
  Normalizer n(rules);
  return serialize(n.apply(parse_html(a))) == serialize(n.apply(parse_html(b)));
}

// ---------------------------------------------------------------------------
// Built-ins and config files
// ---------------------------------------------------------------------------

std::vector<NormalizationRule> builtin_rules() {
  using K = NormalizationRule::Kind;
  std::vector<NormalizationRule> rules;
  rules.push_back({"strip-script-style", K::RemoveElement, "script, style", {}, {}, false, {}});
  rules.push_back({"font-to-span", K::FontToSpan, "", {}, {}, false, {}});
  rules.push_back({"sort-span-css", K::SortCss, "span", {}, {}, false, {}});
  rules.push_back({"uuid", K::ReplacePattern,
                   "[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}",
                   "[UUID]", {}, false, {}});
  rules.push_back({"sys-id", K::ReplacePattern, "\\b[0-9a-fA-F]{32}\\b", "[SYS_ID]", {}, false, {}});
  rules.push_back({"date", K::ReplacePattern, "\\b\\d{4}-\\d{2}-\\d{2}\\b", "[DATE]", {}, false, {}});
  rules.push_back({"time", K::ReplacePattern, "\\b\\d{1,2}:\\d{2}:\\d{2}\\b", "[TIME]", {}, false, {}});
  rules.push_back({"time-ago", K::ReplacePattern,
                   "\\b\\d+\\s*(?:seconds?|secs?|s|minutes?|mins?|m|hours?|hrs?|h|days?|d|weeks?|wks?|w|"
                   "months?|mos?|years?|yrs?|y)\\s+(?:ago|from now)\\b",
                   "[TIMEAGO]", {}, true, {}});
  rules.push_back({"whitespace", K::Whitespace, "", {}, {}, false, {}});
  return rules;
}

std::vector<NormalizationRule> parse_rules(std::string_view jsonl) {
  std::vector<NormalizationRule> rules;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    json j;
    try {
      j = json::parse(t);
    } catch (const json::exception& e) {
      throw InvalidRule("rule line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("kind")) {
      throw InvalidRule("rule line " + std::to_string(lineno) + ": 'id' and 'kind' are required");
    }
    try {
      NormalizationRule r;
      r.id = j.at("id").get<std::string>();
      r.kind = kind_from_string(j.at("kind").get<std::string>());
      r.pattern = j.value("pattern", "");
      if (j.contains("replacement") && !j["replacement"].is_null()) {
        r.replacement = j["replacement"].get<std::string>();
      }
      r.value_pattern = j.value("value_pattern", "");
      r.ignore_case = j.value("flags", "").find('i') != std::string::npos;
      auto scope = j.value("scope", "all");
      if (scope == "text") {
        r.scope = NormalizationRule::Scope::Text;
      } else if (scope == "attributes") {
        r.scope = NormalizationRule::Scope::Attributes;
      } else if (scope != "all") {
        throw InvalidRule("unknown scope '" + scope + "'");
      }
      rules.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw InvalidRule("rule line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  // Compile once to reject malformed patterns up front.
  Normalizer check(rules);
  return rules;
}

std::vector<NormalizationRule> load_rules(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidRule("cannot open rule file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_rules(ss.str());
}

std::string dump_rules(std::span<const NormalizationRule> rules) {
  std::string out;
  for (const auto& r : rules) {
    json j = {{"id", r.id}, {"kind", to_string(r.kind)}};
    if (!r.pattern.empty()) j["pattern"] = r.pattern;
    if (r.replacement) j["replacement"] = *r.replacement;
    if (!r.value_pattern.empty()) j["value_pattern"] = r.value_pattern;
    if (r.ignore_case) j["flags"] = "i";
    if (r.scope == NormalizationRule::Scope::Text) j["scope"] = "text";
    if (r.scope == NormalizationRule::Scope::Attributes) j["scope"] = "attributes";
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace obsr::dom
