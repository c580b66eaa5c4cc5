#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ragan/common.hpp"

namespace ragan::corpus {

struct RatingScale {
  double min = 1.0;
  double max = 5.0;
  double step = 1.0;

  bool valid() const { return step > 0.0 && max > min; }
  int level_count() const { return static_cast<int>((max - min) / step + 0.5) + 1; }
  bool on_scale(double r, double tol = 1e-9) const;
  // Half-up rounding to the nearest scale step, clipped to [min, max].
  double round_to_step(double r) const;
};

struct InteractionRecord {
  std::string user_id;
  std::string item_id;
  double rating = 0.0;
  std::string review_text;
  std::optional<int64_t> timestamp;
  int64_t seq = 0;  // ingest order; stands in for the timestamp when absent

  int64_t effective_time() const { return timestamp.value_or(seq); }
};

// Immutable once built. Users and items are indexed densely in sorted
// external-id order, so every downstream computation is order-stable.
class InteractionCorpus {
 public:
  InteractionCorpus() = default;

  // Deduplicates (user,item) pairs when requested: the record with the
  // larger effective time wins, ties going to the later ingest position.
  static InteractionCorpus from_records(std::vector<InteractionRecord> records,
                                        RatingScale scale, bool dedup = true);

  int user_count() const { return static_cast<int>(users_.size()); }
  int item_count() const { return static_cast<int>(items_.size()); }
  int64_t record_count() const { return static_cast<int64_t>(records_.size()); }
  bool empty() const { return records_.empty(); }

  const std::vector<InteractionRecord>& records() const { return records_; }
  const RatingScale& scale() const { return scale_; }

  const std::string& user_id(int u) const { return users_.at(u); }
  const std::string& item_id(int v) const { return items_.at(v); }
  const std::vector<std::string>& user_ids() const { return users_; }
  const std::vector<std::string>& item_ids() const { return items_; }

  int user_index(const std::string& id) const;  // throws if unknown
  int item_index(const std::string& id) const;
  std::optional<int> try_user_index(const std::string& id) const;
  std::optional<int> try_item_index(const std::string& id) const;

  const std::vector<int>& records_of_user(int u) const { return by_user_.at(u); }
  const std::vector<int>& records_of_item(int v) const { return by_item_.at(v); }

  int find_record(int u, int v) const;  // record index or -1
  bool has_interaction(int u, int v) const { return find_record(u, v) >= 0; }
  double rating_of(int u, int v) const;  // 0 when unrated

  // Dense user index of each record, parallel to records().
  int record_user(int rec) const { return rec_user_.at(rec); }
  int record_item(int rec) const { return rec_item_.at(rec); }

 private:
  std::vector<InteractionRecord> records_;
  std::vector<std::string> users_;
  std::vector<std::string> items_;
  std::map<std::string, int> user_idx_;
  std::map<std::string, int> item_idx_;
  std::vector<std::vector<int>> by_user_;
  std::vector<std::vector<int>> by_item_;
  std::vector<int> rec_user_;
  std::vector<int> rec_item_;
  RatingScale scale_;
};

struct CorpusStats {
  int users = 0;
  int items = 0;
  int64_t records = 0;
  double sparsity = 0.0;
  double mean_ratings_per_user = 0.0;
};

struct SplitPair {
  InteractionCorpus train;
  InteractionCorpus test;
};

struct ItemMeta {
  std::string title;
  std::string description;
  std::string image_path;
  std::string image_bytes;
  bool has_image = false;
};

class MetadataStore {
 public:
  static MetadataStore load(const std::string& path);

  void insert(const std::string& item_id, ItemMeta meta);
  const ItemMeta* find(const std::string& item_id) const;
  size_t size() const { return by_id_.size(); }
  const std::map<std::string, ItemMeta>& entries() const { return by_id_; }

 private:
  std::map<std::string, ItemMeta> by_id_;
};

InteractionCorpus load_reviews(const std::string& path, RatingScale scale);
void write_reviews(const InteractionCorpus& corpus, const std::string& path);

CorpusStats compute_stats(const InteractionCorpus& corpus);

// Per-user holdout: for users with at least two records the one with the
// largest effective time (ties: larger external item id) goes to test.
SplitPair split_leave_one_out(const InteractionCorpus& corpus);

InteractionCorpus sample_partial(const InteractionCorpus& corpus, double p,
                                 uint64_t seed);

}  // namespace ragan::corpus
