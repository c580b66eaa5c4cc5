#include "ragan/forge/rating_forge.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ragan/core/rng.hpp"

namespace ragan::forge {

using corpus::InteractionCorpus;

ForgeParams ForgeParams::init(int item_count, int layers, double dropout_rate,
                              uint64_t seed) {
  if (layers < 2 || layers % 2 != 0)
    throw ValidationError("autoencoder layer count must be even and >= 2");
  ForgeParams p;
  p.item_count = item_count;
  p.layers = layers;
  p.dropout_rate = dropout_rate;
  auto rng = core::make_rng(seed, "forge_init");
  int dim = item_count;
  for (int j = 0; j < layers; ++j) {
    const int next = j < layers / 2 ? std::max(1, dim / 2) : std::min(item_count, dim * 2);
    p.w.emplace_back("forge.w" + std::to_string(j), ad::glorot(dim, next, rng));
    p.b.emplace_back("forge.b" + std::to_string(j), core::Mat(1, next));
    p.gamma.emplace_back("forge.gamma" + std::to_string(j), core::Mat(1, next, 1.0));
    p.beta.emplace_back("forge.beta" + std::to_string(j), core::Mat(1, next));
    dim = next;
  }
  p.wc = ad::Param("forge.wc", ad::glorot(dim, item_count, rng));
  p.bc = ad::Param("forge.bc", core::Mat(1, item_count));
  return p;
}

void ForgeParams::collect(ad::ParamSet& set) {
  for (auto& x : w) set.add(x);
  for (auto& x : b) set.add(x);
  for (auto& x : gamma) set.add(x);
  for (auto& x : beta) set.add(x);
  set.add(wc);
  set.add(bc);
}

std::vector<int> rank_templates(const InteractionCorpus& train, int target,
                                const corpus::MetadataStore& metadata,
                                const embed::EmbeddingBackend& backend,
                                int similar_set_size) {
  if (target < 0 || target >= train.item_count())
    throw ValidationError("rank_templates: target outside item universe");

  std::vector<int> eligible;
  for (int u = 0; u < train.user_count(); ++u)
    if (!train.has_interaction(u, target)) eligible.push_back(u);
  if (eligible.empty())
    throw Error("attack impossible: all users rated target");

  const auto qf = embed::item_feature(train, target, metadata, backend);
  std::vector<std::pair<double, int>> sim;  // (-cos, item)
  sim.reserve(train.item_count());
  for (int v = 0; v < train.item_count(); ++v) {
    if (v == target) continue;
    sim.emplace_back(-embed::cosine(qf, embed::item_feature(train, v, metadata, backend)), v);
  }
  std::sort(sim.begin(), sim.end());
  std::set<int> similar;
  for (int i = 0; i < std::min<int>(similar_set_size, static_cast<int>(sim.size())); ++i)
    similar.insert(sim[i].second);

  struct Key {
    int64_t overlap;
    int64_t total;
    int user;
  };
  std::vector<Key> keys;
  keys.reserve(eligible.size());
  for (int u : eligible) {
    int64_t overlap = 0;
    for (int rec : train.records_of_user(u))
      if (similar.count(train.record_item(rec))) overlap++;
    keys.push_back({overlap, static_cast<int64_t>(train.records_of_user(u).size()), u});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.total != b.total) return a.total > b.total;
    return a.user < b.user;
  });
  std::vector<int> perm;
  perm.reserve(keys.size());
  for (const auto& k : keys) perm.push_back(k.user);
  return perm;
}

TemplateBatch sample_templates(const std::vector<int>& permutation,
                               const InteractionCorpus& train, int n_fake) {
  if (n_fake <= 0) throw ValidationError("sample_templates: n_fake must be positive");
  if (permutation.empty()) throw Error("sample_templates: empty template pool");
  TemplateBatch batch;
  batch.permutation = permutation;
  batch.wrapped = n_fake > static_cast<int>(permutation.size());
  batch.rows = core::Mat(n_fake, train.item_count());
  batch.source_users.resize(n_fake);
  for (int i = 0; i < n_fake; ++i) {
    const int u = permutation[i % permutation.size()];
    batch.source_users[i] = u;
    for (int rec : train.records_of_user(u))
      batch.rows.at(i, train.record_item(rec)) = train.records()[rec].rating;
  }
  return batch;
}

ad::Value reconstruct(ad::Tape& tape, ad::Value input, ForgeParams& params,
                      const corpus::RatingScale& scale, bool training,
                      std::mt19937_64& rng, bool train_params) {
  if (tape.val(input).cols != params.item_count)
    throw ValidationError("reconstruct: input width differs from item count");
  auto take = [&](ad::Param& p) {
    return train_params ? tape.param(p) : tape.param_frozen(p);
  };
  ad::Value x = input;
  for (int j = 0; j < params.layers; ++j) {
    x = tape.add_rowvec(tape.matmul(x, take(params.w[j])), take(params.b[j]));
    x = tape.batchnorm(x, take(params.gamma[j]), take(params.beta[j]));
    x = tape.relu(x);
    if (training && params.dropout_rate > 0.0)
      x = tape.dropout(x, params.dropout_rate, rng);
  }
  x = tape.add_rowvec(tape.matmul(x, take(params.wc)), take(params.bc));
  x = tape.sigmoid(x);
  x = tape.scale(x, scale.max - scale.min);
  return tape.add_scalar(x, scale.min);
}

core::Mat reconstruct_value(const core::Mat& input, ForgeParams& params,
                            const corpus::RatingScale& scale) {
  ad::Tape tape;
  std::mt19937_64 rng(0);
  auto h = reconstruct(tape, tape.input(input), params, scale, false, rng,
                       /*train_params=*/false);
  return tape.val(h);
}

MaskContext make_mask_context(const InteractionCorpus& train,
                              const std::vector<int>& similar_items) {
  MaskContext ctx;
  ctx.similar_items = similar_items;
  ctx.item_popularity.assign(train.item_count(), 0);
  for (int v = 0; v < train.item_count(); ++v)
    ctx.item_popularity[v] = static_cast<int64_t>(train.records_of_item(v).size());

  std::map<double, int64_t> rating_counts;
  for (const auto& r : train.records()) rating_counts[r.rating]++;
  int64_t best = -1;
  for (const auto& [rating, n] : rating_counts) {
    if (n > best || (n == best && rating > ctx.modal_rating)) {
      best = n;
      ctx.modal_rating = rating;
    }
  }
  return ctx;
}

FakeRatingMatrix discretize_and_mask(const core::Mat& h, const TemplateBatch& batch,
                                     int profile_size, int target,
                                     const corpus::RatingScale& scale,
                                     const MaskContext& ctx) {
  if (profile_size < 1) throw ValidationError("profile size must be >= 1");
  if (!h.same_shape(batch.rows))
    throw ValidationError("discretize_and_mask: H and template shapes differ");

  const int n = h.rows, items = h.cols;
  FakeRatingMatrix out;
  out.discrete = core::Mat(n, items);
  out.mask = core::Mat(n, items);
  out.target_item = target;
  out.profile_size = profile_size;

  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> diffs;  // (|h - p|, item)
    for (int v = 0; v < items; ++v) {
      if (v == target || batch.rows.at(i, v) == 0.0) continue;
      diffs.emplace_back(std::abs(h.at(i, v) - batch.rows.at(i, v)), v);
    }
    std::sort(diffs.begin(), diffs.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });

    const int want = profile_size - 1;
    const int take = std::min<int>(want, static_cast<int>(diffs.size()));
    for (int k = 0; k < take; ++k) {
      const int v = diffs[k].second;
      out.discrete.at(i, v) = scale.round_to_step(h.at(i, v));
      out.mask.at(i, v) = 1.0;
    }

    if (take < want) {
      // Thin template: pad with popular items near the target, at the
      // corpus' modal rating.
      int needed = want - take;
      auto pad = [&](int v) {
        if (needed <= 0 || v == target || out.mask.at(i, v) != 0.0) return;
        out.discrete.at(i, v) = ctx.modal_rating;
        out.mask.at(i, v) = 1.0;
        --needed;
      };
      std::vector<int> by_pop = ctx.similar_items;
      std::stable_sort(by_pop.begin(), by_pop.end(), [&](int a, int b) {
        if (ctx.item_popularity[a] != ctx.item_popularity[b])
          return ctx.item_popularity[a] > ctx.item_popularity[b];
        return a < b;
      });
      for (int v : by_pop) pad(v);
      if (needed > 0) {
        std::vector<int> all(items);
        for (int v = 0; v < items; ++v) all[v] = v;
        std::stable_sort(all.begin(), all.end(), [&](int a, int b) {
          if (ctx.item_popularity[a] != ctx.item_popularity[b])
            return ctx.item_popularity[a] > ctx.item_popularity[b];
          return a < b;
        });
        for (int v : all) pad(v);
      }
    }

    out.discrete.at(i, target) = scale.max;
    out.mask.at(i, target) = 1.0;
  }
  return out;
}

ad::Value forge_gradient_surface(ad::Tape& tape, ad::Value h,
                                 const FakeRatingMatrix& fake) {
  return tape.straight_through(h, fake.discrete, fake.mask);
}

int n_fake_for(double attack_size, int population) {
  if (attack_size <= 0.0) throw ValidationError("attack size must be positive");
  return std::max(1, static_cast<int>(std::floor(attack_size * population)));
}

}  // namespace ragan::forge
