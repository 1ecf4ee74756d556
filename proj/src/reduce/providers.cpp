#include "obsr/reduce/providers.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>

#include "httplib.h"
#include "json.hpp"
#include "obsr/error.hpp"
#include "obsr/text/tokenize.hpp"

namespace obsr::reduce {

using nlohmann::json;

namespace {
bool is_blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }
}  // namespace

std::vector<Embedding> HashingEmbedder::embed(std::span<const std::string> texts) const {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    Embedding v(dims_, 0.0);
    for (const auto& tok : text::lower_word_tokens(t)) {
      std::uint64_t h = 1469598103934665603ULL;
      for (unsigned char c : tok) {
        h ^= c;
        h *= 1099511628211ULL;
      }
      v[h % dims_] += 1.0;
    }
    out.push_back(std::move(v));
  }
  return out;
}

CannedCompletion CannedCompletion::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open canned responses file: " + path);
  std::vector<Entry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    try {
      auto j = json::parse(line);
      entries.push_back({j.value("match", std::string{}), j.at("response").get<std::string>()});
    } catch (const json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return CannedCompletion(std::move(entries));
}

std::string CannedCompletion::complete(const CompletionRequest& request) const {
  for (const auto& e : entries_) {
    if (e.match.empty() || request.user.find(e.match) != std::string::npos) return e.response;
  }
  throw ProviderUnavailable("no canned response matches the request");
}

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

json post_json(const HttpEndpoint& ep, const std::string& path, const json& body) {
  httplib::Client client(ep.base_url);
  client.set_connection_timeout(ep.timeout_seconds);
  client.set_read_timeout(ep.timeout_seconds);
  httplib::Headers headers;
  if (!ep.api_key.empty()) headers.emplace("Authorization", "Bearer " + ep.api_key);
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw ProviderUnavailable("request to " + ep.base_url + path + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw ProviderUnavailable("request to " + ep.base_url + path + " returned HTTP " + std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProviderUnavailable(std::string("unparseable provider response: ") + e.what());
  }
}

}  // namespace

HttpEndpoint HttpEndpoint::from_env() {
  HttpEndpoint ep;
  ep.base_url = env_or("OBSR_PROVIDER_ENDPOINT", "");
  if (ep.base_url.empty()) throw ConfigError("OBSR_PROVIDER_ENDPOINT is not set");
  while (!ep.base_url.empty() && ep.base_url.back() == '/') ep.base_url.pop_back();
  ep.api_key = env_or("OBSR_PROVIDER_API_KEY", "");
  ep.completion_model = env_or("OBSR_COMPLETION_MODEL", "gpt-4.1");
  ep.embedding_model = env_or("OBSR_EMBEDDING_MODEL", "text-embedding-3-small");
  return ep;
}

std::vector<Embedding> HttpEmbeddingProvider::embed(std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  json body{{"model", endpoint_.embedding_model}, {"input", json::array()}};
  for (const auto& t : texts) body["input"].push_back(t);
  auto res = post_json(endpoint_, "/v1/embeddings", body);
  try {
    std::vector<Embedding> out(texts.size());
    for (const auto& item : res.at("data")) {
      auto idx = item.at("index").get<std::size_t>();
      if (idx >= out.size()) throw ProviderUnavailable("embedding index out of range");
      out[idx] = item.at("embedding").get<Embedding>();
    }
    for (const auto& v : out) {
      if (v.empty() || v.size() != out.front().size()) throw ProviderUnavailable("incomplete embedding response");
    }
    return out;
  } catch (const json::exception& e) {
    throw ProviderUnavailable(std::string("malformed embedding response: ") + e.what());
  }
}

std::string HttpCompletionProvider::complete(const CompletionRequest& request) const {
  json user_content;
  if (request.image_ref) {
    user_content = json::array({json{{"type", "text"}, {"text", request.user}},
                                json{{"type", "image_url"}, {"image_url", {{"url", *request.image_ref}}}}});
  } else {
    user_content = request.user;
  }
  json body{{"model", endpoint_.completion_model},
            {"temperature", 0},
            {"messages", json::array({json{{"role", "system"}, {"content", request.system}},
                                      json{{"role", "user"}, {"content", user_content}}})}};
  auto res = post_json(endpoint_, "/v1/chat/completions", body);
  try {
    return res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderUnavailable(std::string("malformed completion response: ") + e.what());
  }
}

ProviderSet make_providers(const std::string& backend) {
  if (backend == "fake") return {std::make_shared<HashingEmbedder>(), nullptr};
  if (backend.starts_with("canned:")) {
    return {std::make_shared<HashingEmbedder>(),
            std::make_shared<CannedCompletion>(CannedCompletion::from_file(backend.substr(7)))};
  }
  if (backend == "http") {
    auto ep = HttpEndpoint::from_env();
    return {std::make_shared<HttpEmbeddingProvider>(ep), std::make_shared<HttpCompletionProvider>(ep)};
  }
  throw ConfigError("unknown provider backend '" + backend + "' (expected fake, canned:<file> or http)");
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace obsr::reduce
