#include "ragan/corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ragan/core/rng.hpp"

namespace ragan::corpus {

using nlohmann::json;

bool RatingScale::on_scale(double r, double tol) const {
  if (r < min - tol || r > max + tol) return false;
  const double k = (r - min) / step;
  return std::abs(k - std::round(k)) <= tol;
}

double RatingScale::round_to_step(double r) const {
  const double k = std::floor((r - min) / step + 0.5);  // half-up
  const double v = min + k * step;
  return std::min(max, std::max(min, v));
}

InteractionCorpus InteractionCorpus::from_records(
    std::vector<InteractionRecord> records, RatingScale scale, bool dedup) {
  if (!scale.valid()) throw ValidationError("invalid rating scale");
  for (const auto& r : records) {
    if (!scale.on_scale(r.rating)) {
      std::ostringstream os;
      os << "rating " << r.rating << " for (" << r.user_id << ", " << r.item_id
         << ") is off the scale [" << scale.min << ", " << scale.max << "] step "
         << scale.step;
      throw ValidationError(os.str());
    }
  }

  if (dedup) {
    std::map<std::pair<std::string, std::string>, size_t> keep;
    for (size_t i = 0; i < records.size(); ++i) {
      auto key = std::make_pair(records[i].user_id, records[i].item_id);
      auto it = keep.find(key);
      if (it == keep.end()) {
        keep.emplace(std::move(key), i);
        continue;
      }
      const auto& old = records[it->second];
      const auto& cur = records[i];
      if (cur.effective_time() > old.effective_time() ||
          (cur.effective_time() == old.effective_time() && cur.seq >= old.seq))
        it->second = i;
    }
    std::vector<InteractionRecord> unique;
    unique.reserve(keep.size());
    std::vector<size_t> order;
    order.reserve(keep.size());
    for (const auto& [k, i] : keep) order.push_back(i);
    std::sort(order.begin(), order.end());
    for (size_t i : order) unique.push_back(std::move(records[i]));
    records = std::move(unique);
  }

  InteractionCorpus c;
  c.scale_ = scale;
  std::set<std::string> uset, iset;
  for (const auto& r : records) {
    uset.insert(r.user_id);
    iset.insert(r.item_id);
  }
  c.users_.assign(uset.begin(), uset.end());
  c.items_.assign(iset.begin(), iset.end());
  for (int i = 0; i < static_cast<int>(c.users_.size()); ++i) c.user_idx_[c.users_[i]] = i;
  for (int i = 0; i < static_cast<int>(c.items_.size()); ++i) c.item_idx_[c.items_[i]] = i;

  std::sort(records.begin(), records.end(),
            [&](const InteractionRecord& a, const InteractionRecord& b) {
              const int au = c.user_idx_.at(a.user_id), bu = c.user_idx_.at(b.user_id);
              if (au != bu) return au < bu;
              return c.item_idx_.at(a.item_id) < c.item_idx_.at(b.item_id);
            });
  c.records_ = std::move(records);

  c.by_user_.resize(c.users_.size());
  c.by_item_.resize(c.items_.size());
  c.rec_user_.resize(c.records_.size());
  c.rec_item_.resize(c.records_.size());
  for (int i = 0; i < static_cast<int>(c.records_.size()); ++i) {
    const int u = c.user_idx_.at(c.records_[i].user_id);
    const int v = c.item_idx_.at(c.records_[i].item_id);
    c.rec_user_[i] = u;
    c.rec_item_[i] = v;
    c.by_user_[u].push_back(i);
    c.by_item_[v].push_back(i);
  }
  return c;
}

int InteractionCorpus::user_index(const std::string& id) const {
  auto it = user_idx_.find(id);
  if (it == user_idx_.end()) throw ValidationError("unknown user id: " + id);
  return it->second;
}

int InteractionCorpus::item_index(const std::string& id) const {
  auto it = item_idx_.find(id);
  if (it == item_idx_.end()) throw ValidationError("unknown item id: " + id);
  return it->second;
}

std::optional<int> InteractionCorpus::try_user_index(const std::string& id) const {
  auto it = user_idx_.find(id);
  if (it == user_idx_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> InteractionCorpus::try_item_index(const std::string& id) const {
  auto it = item_idx_.find(id);
  if (it == item_idx_.end()) return std::nullopt;
  return it->second;
}

int InteractionCorpus::find_record(int u, int v) const {
  for (int rec : by_user_.at(u))
    if (rec_item_[rec] == v) return rec;
  return -1;
}

double InteractionCorpus::rating_of(int u, int v) const {
  const int rec = find_record(u, v);
  return rec < 0 ? 0.0 : records_[rec].rating;
}

InteractionCorpus load_reviews(const std::string& path, RatingScale scale) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open reviews file: " + path);
  std::vector<InteractionRecord> records;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    InteractionRecord r;
    try {
      r.user_id = j.at("user_id").get<std::string>();
      r.item_id = j.at("item_id").get<std::string>();
      r.rating = j.at("rating").get<double>();
      r.review_text = j.value("review_text", std::string());
      if (j.contains("timestamp") && !j["timestamp"].is_null())
        r.timestamp = j["timestamp"].get<int64_t>();
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!scale.on_scale(r.rating))
      throw ValidationError(path + ":" + std::to_string(line_no) + ": rating " +
                            std::to_string(r.rating) + " off scale");
    r.seq = line_no;
    records.push_back(std::move(r));
  }
  if (records.empty()) throw Error("no records in " + path);
  return InteractionCorpus::from_records(std::move(records), scale);
}

void write_reviews(const InteractionCorpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write reviews file: " + path);
  for (const auto& r : corpus.records()) {
    json j;
    j["user_id"] = r.user_id;
    j["item_id"] = r.item_id;
    j["rating"] = r.rating;
    j["review_text"] = r.review_text;
    if (r.timestamp) j["timestamp"] = *r.timestamp;
    out << j.dump() << "\n";
  }
}

MetadataStore MetadataStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open metadata file: " + path);
  const auto base = std::filesystem::path(path).parent_path();
  MetadataStore store;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::string item_id;
    ItemMeta meta;
    try {
      item_id = j.at("item_id").get<std::string>();
      meta.title = j.value("title", std::string());
      meta.description = j.value("description", std::string());
      meta.image_path = j.value("image_path", std::string());
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!meta.image_path.empty()) {
      auto img = base / meta.image_path;
      std::ifstream f(img, std::ios::binary);
      if (f) {
        std::ostringstream bytes;
        bytes << f.rdbuf();
        meta.image_bytes = bytes.str();
        meta.has_image = !meta.image_bytes.empty();
      }
    }
    store.insert(item_id, std::move(meta));  // duplicate ids: last entry wins
  }
  return store;
}

void MetadataStore::insert(const std::string& item_id, ItemMeta meta) {
  by_id_[item_id] = std::move(meta);
}

const ItemMeta* MetadataStore::find(const std::string& item_id) const {
  auto it = by_id_.find(item_id);
  return it == by_id_.end() ? nullptr : &it->second;
}

CorpusStats compute_stats(const InteractionCorpus& corpus) {
  if (corpus.empty()) throw Error("compute_stats: empty corpus");
  CorpusStats s;
  s.users = corpus.user_count();
  s.items = corpus.item_count();
  s.records = corpus.record_count();
  s.sparsity = 1.0 - static_cast<double>(s.records) /
                         (static_cast<double>(s.users) * s.items);
  s.mean_ratings_per_user = static_cast<double>(s.records) / s.users;
  return s;
}

SplitPair split_leave_one_out(const InteractionCorpus& corpus) {
  std::vector<InteractionRecord> train, test;
  for (int u = 0; u < corpus.user_count(); ++u) {
    const auto& recs = corpus.records_of_user(u);
    if (recs.size() < 2) {
      for (int r : recs) train.push_back(corpus.records()[r]);
      continue;
    }
    int held = recs[0];
    for (int r : recs) {
      const auto& cand = corpus.records()[r];
      const auto& best = corpus.records()[held];
      if (cand.effective_time() > best.effective_time() ||
          (cand.effective_time() == best.effective_time() &&
           cand.item_id > best.item_id))
        held = r;
    }
    for (int r : recs) {
      if (r == held)
        test.push_back(corpus.records()[r]);
      else
        train.push_back(corpus.records()[r]);
    }
  }
  SplitPair out;
  out.train = InteractionCorpus::from_records(std::move(train), corpus.scale(), false);
  out.test = InteractionCorpus::from_records(std::move(test), corpus.scale(), false);
  return out;
}

InteractionCorpus sample_partial(const InteractionCorpus& corpus, double p,
                                 uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("sample_partial: p must be in (0, 1]");
  const int64_t n = corpus.record_count();
  const int64_t keep = static_cast<int64_t>(std::floor(p * static_cast<double>(n)));
  if (keep == n) {
    return InteractionCorpus::from_records(corpus.records(), corpus.scale(), false);
  }
  std::vector<int64_t> idx(n);
  for (int64_t i = 0; i < n; ++i) idx[i] = i;
  auto rng = core::make_rng(seed, "sample_partial");
  // Partial Fisher-Yates: the first `keep` slots are a uniform sample.
  for (int64_t i = 0; i < keep; ++i) {
    std::uniform_int_distribution<int64_t> u(i, n - 1);
    std::swap(idx[i], idx[u(rng)]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  std::vector<InteractionRecord> kept;
  kept.reserve(keep);
  for (int64_t i : idx) kept.push_back(corpus.records()[i]);
  return InteractionCorpus::from_records(std::move(kept), corpus.scale(), false);
}

}  // namespace ragan::corpus
