#include "ragan/embed/embedding.hpp"

#include <cctype>
#include <cmath>

#include "ragan/core/rng.hpp"

namespace ragan::embed {

HashNgramBackend::HashNgramBackend(int dim, int ngram) : dim_(dim), ngram_(ngram) {
  if (dim < 2) throw Error("embedding dimension must be >= 2");
  if (ngram < 1) throw Error("ngram order must be >= 1");
}

std::string HashNgramBackend::backend_id() const {
  return "hash-ngram-" + std::to_string(ngram_) + "-d" + std::to_string(dim_);
}

std::vector<double> HashNgramBackend::hash_ngrams(std::string_view data,
                                                  bool fold_case) const {
  std::vector<double> v(dim_, 0.0);
  std::string folded;
  if (fold_case) {
    folded.reserve(data.size() + 2);
    folded.push_back('^');
    for (char c : data)
      folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    folded.push_back('$');
    data = folded;
  }
  if (static_cast<int>(data.size()) >= ngram_) {
    for (size_t i = 0; i + ngram_ <= data.size(); ++i) {
      const uint64_t h = core::fnv1a(data.substr(i, ngram_));
      const int bucket = static_cast<int>(h % static_cast<uint64_t>(dim_));
      const double sign = ((h >> 32) & 1u) ? 1.0 : -1.0;
      v[bucket] += sign;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm == 0.0) {
    v.assign(dim_, 0.0);
    v[0] = 1.0;  // canonical unit vector for featureless input
    return v;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::vector<double> HashNgramBackend::encode_text(std::string_view text) const {
  return hash_ngrams(text, true);
}

std::vector<double> HashNgramBackend::encode_image(std::string_view bytes) const {
  return hash_ngrams(bytes, false);
}

std::unique_ptr<EmbeddingBackend> make_backend(const std::string& id) {
  if (id.empty() || id == "hash" || id.rfind("hash-ngram", 0) == 0)
    return std::make_unique<HashNgramBackend>();
  throw ConfigError("unknown embedding backend: " + id);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> item_feature(const corpus::InteractionCorpus& corpus, int item,
                                 const corpus::MetadataStore& metadata,
                                 const EmbeddingBackend& backend) {
  const std::string& id = corpus.item_id(item);
  if (const auto* meta = metadata.find(id)) {
    if (meta->has_image) return backend.encode_image(meta->image_bytes);
    if (!meta->title.empty()) return backend.encode_text(meta->title);
    if (!meta->description.empty()) return backend.encode_text(meta->description);
  }
  return backend.encode_text(id);
}

}  // namespace ragan::embed
