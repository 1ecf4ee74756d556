#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace obsr::reduce {

using Embedding = std::vector<double>;

// Deterministic per text within a session; implementations must be safe to
// call from several threads.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // One vector per input text, all of equal length. Throws ProviderUnavailable.
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) const = 0;
};

struct CompletionRequest {
  std::string system;
  std::string user;
  std::optional<std::string> image_ref;
};

class TextCompletionProvider {
 public:
  virtual ~TextCompletionProvider() = default;
  // Throws ProviderUnavailable.
  virtual std::string complete(const CompletionRequest& request) const = 0;
};

// Bag-of-words vectors: each lowercase word token is hashed (FNV-1a) into one
// of `dims` buckets. Texts with the same token multiset embed identically.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dims = 256) : dims_(dims) {}
  std::vector<Embedding> embed(std::span<const std::string> texts) const override;

 private:
  std::size_t dims_;
};

// Replies from a fixed table: the first entry whose `match` occurs in the
// user message wins (an empty match always applies).
class CannedCompletion final : public TextCompletionProvider {
 public:
  struct Entry {
    std::string match;
    std::string response;
  };
  explicit CannedCompletion(std::vector<Entry> entries) : entries_(std::move(entries)) {}
  // JSON lines of {"match": ..., "response": ...}. Throws ConfigError.
  static CannedCompletion from_file(const std::string& path);

  std::string complete(const CompletionRequest& request) const override;

 private:
  std::vector<Entry> entries_;
};

class FunctionCompletion final : public TextCompletionProvider {
 public:
  using Fn = std::function<std::string(const CompletionRequest&)>;
  explicit FunctionCompletion(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const CompletionRequest& request) const override { return fn_(request); }

 private:
  Fn fn_;
};

// OpenAI-compatible HTTP backend (/v1/embeddings, /v1/chat/completions).
struct HttpEndpoint {
  std::string base_url;  // http://host:port
  std::string api_key;
  std::string completion_model;
  std::string embedding_model;
  int timeout_seconds = 120;

  // OBSR_PROVIDER_ENDPOINT, OBSR_PROVIDER_API_KEY, OBSR_COMPLETION_MODEL,
  // OBSR_EMBEDDING_MODEL. Throws ConfigError when the endpoint is unset.
  static HttpEndpoint from_env();
};

class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::vector<Embedding> embed(std::span<const std::string> texts) const override;

 private:
  HttpEndpoint endpoint_;
};

class HttpCompletionProvider final : public TextCompletionProvider {
 public:
  explicit HttpCompletionProvider(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string complete(const CompletionRequest& request) const override;

 private:
  HttpEndpoint endpoint_;
};

struct ProviderSet {
  std::shared_ptr<const EmbeddingProvider> embedder;
  std::shared_ptr<const TextCompletionProvider> completion;
};

// Backend names: "fake" (hashing embedder, no completion), "canned:<file>"
// (hashing embedder + canned completions), "http" (environment endpoint).
// Throws ConfigError.
ProviderSet make_providers(const std::string& backend);

double cosine_similarity(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace obsr::reduce
