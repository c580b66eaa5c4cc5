#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ragan/corpus/corpus.hpp"

namespace ragan::embed {

// Pluggable encoders producing unit-norm vectors of a fixed dimension.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<double> encode_text(std::string_view text) const = 0;
  virtual std::vector<double> encode_image(std::string_view bytes) const = 0;
  virtual int dim() const = 0;
  virtual std::string backend_id() const = 0;
};

// Offline default: signed character/byte n-gram hashing, L2-normalised.
// Fully deterministic, no model files.
class HashNgramBackend : public EmbeddingBackend {
 public:
  explicit HashNgramBackend(int dim = 64, int ngram = 3);

  std::vector<double> encode_text(std::string_view text) const override;
  std::vector<double> encode_image(std::string_view bytes) const override;
  int dim() const override { return dim_; }
  std::string backend_id() const override;

 private:
  std::vector<double> hash_ngrams(std::string_view data, bool fold_case) const;
  int dim_;
  int ngram_;
};

std::unique_ptr<EmbeddingBackend> make_backend(const std::string& id);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Feature of an item for similarity ranking: image bytes when present,
// else title, else description, else the item id itself.
std::vector<double> item_feature(const corpus::InteractionCorpus& corpus, int item,
                                 const corpus::MetadataStore& metadata,
                                 const EmbeddingBackend& backend);

}  // namespace ragan::embed
