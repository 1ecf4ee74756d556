#include "obsr/reduce/retrieval.hpp"

#include "obsr/error.hpp"
#include "obsr/text/bm25.hpp"
#include "obsr/text/tokenize.hpp"

namespace obsr::reduce {

using dom::Node;

std::string build_query(std::string_view goal, const std::vector<std::string>& action_history) {
  std::string q = "Goal: ";
  q += goal;
  q += "\n\nPrevious Actions:";
  for (std::size_t i = 0; i < action_history.size(); ++i) {
    q += "\n- Step " + std::to_string(i) + ": " + action_history[i];
  }
  return q;
}

std::string xpath_of(const dom::DomDocument& doc, const dom::NodePath& path) {
  std::string out;
  const Node* cur = &doc.root();
  for (auto i : path) {
    const Node& child = cur->children.at(i);
    std::size_t same = 0;
    std::size_t position = 0;
    for (std::size_t j = 0; j < cur->children.size(); ++j) {
      const Node& s = cur->children[j];
      if (!s.is_element() || s.tag != child.tag) continue;
      ++same;
      if (j == i) position = same;
    }
    out += "/" + child.tag;
    if (same > 1) out += "[" + std::to_string(position) + "]";
    cur = &child;
  }
  return out;
}

const std::vector<std::string>& repr_attributes() {
  static const std::vector<std::string> attrs = {
      "class", "id",   "name", "role", "aria-label", "placeholder", "value",
      "href",  "title", "type", "for",  "src",        "alt",         "data-testid"};
  return attrs;
}

std::string element_repr(const dom::DomDocument& doc, std::string_view bid) {
  const auto* path = doc.path_of(bid);
  if (path == nullptr) throw UnknownBid(std::string(bid));
  const Node& el = dom::node_at(doc.root(), *path);

  std::string out = "[[tag]] " + el.tag;
  out += "\n[[xpath]] " + xpath_of(doc, *path);
  out += "\n[[bid]] ";
  out += bid;
  auto txt = text::truncate_chars(dom::collapse_whitespace(el.direct_text()), kReprTextLimit);
  out += "\n[[text]]";
  if (!txt.empty()) out += " " + txt;
  out += "\n[[attributes]]";
  for (const auto& name : repr_attributes()) {
    const auto* v = el.attr(name);
    if (v == nullptr) continue;
    out += " " + name + "='" + text::truncate_chars(*v, kReprAttributeLimit) + "'";
  }
  out += "\n[[children]]";
  std::size_t listed = 0;
  for (const auto& c : el.children) {
    if (!c.is_element()) continue;
    if (listed++ == kReprChildLimit) break;
    out += " " + c.tag;
  }
  return out;
}

std::vector<ScoredBid> bm25_scores(const dom::DomDocument& doc, std::string_view query) {
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(doc.bids().size());
  for (const auto& bid : doc.bids()) corpus.push_back(text::lower_word_tokens(element_repr(doc, bid)));
  text::Bm25Index index(std::move(corpus), text::Bm25Params{1.5, 0.75});
  auto q = text::lower_word_tokens(query);
  auto scores = index.scores(q);
  std::vector<ScoredBid> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({doc.bids()[i], scores[i]});
  return out;
}

std::vector<ScoredBid> dense_scores(const dom::DomDocument& doc, std::string_view query,
                                    const EmbeddingProvider& embedder) {
  std::vector<std::string> texts;
  texts.reserve(doc.bids().size() + 1);
  texts.emplace_back(query);
  for (const auto& bid : doc.bids()) texts.push_back(element_repr(doc, bid));
  auto vecs = embedder.embed(texts);
  if (vecs.size() != texts.size()) {
    throw ProviderUnavailable("embedding provider returned " + std::to_string(vecs.size()) + " vectors for " +
                              std::to_string(texts.size()) + " texts");
  }
  std::vector<ScoredBid> out;
  out.reserve(doc.bids().size());
  for (std::size_t i = 0; i < doc.bids().size(); ++i) {
    if (vecs[i + 1].size() != vecs[0].size()) throw ProviderUnavailable("embedding dimensions differ");
    out.push_back({doc.bids()[i], cosine_similarity(vecs[0], vecs[i + 1])});
  }
  return out;
}

std::vector<std::string> top_k(const std::vector<ScoredBid>& scored, std::size_t k) {
  std::vector<double> s;
  s.reserve(scored.size());
  for (const auto& x : scored) s.push_back(x.score);
  std::vector<std::string> out;
  for (auto i : text::top_k_indices(s, k)) out.push_back(scored[i].bid);
  return out;
}

}  // namespace obsr::reduce
