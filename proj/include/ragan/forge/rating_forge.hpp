#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ragan/ad/tape.hpp"
#include "ragan/corpus/corpus.hpp"
#include "ragan/embed/embedding.hpp"

namespace ragan::forge {

// Benign rating rows picked as seeds for fake profiles.
struct TemplateBatch {
  core::Mat rows;                 // n_fake x |V|, zero = unrated
  std::vector<int> source_users;  // row -> benign user index
  std::vector<int> permutation;   // full ranked ordering of eligible users
  bool wrapped = false;           // pool smaller than n_fake, reused with wraparound
};

struct FakeRatingMatrix {
  core::Mat discrete;  // n_fake x |V|, on-scale ratings, zero off profile
  core::Mat mask;      // n_fake x |V| in {0,1}
  int target_item = -1;
  int profile_size = 0;
};

// Autoencoder weights: `layers` MLP blocks (affine + batchnorm + relu +
// dropout), dimensions halving through the first half and doubling back
// through the second, then an affine rescale head squashed to the rating
// range.
struct ForgeParams {
  int item_count = 0;
  int layers = 0;
  double dropout_rate = 0.0;
  std::vector<ad::Param> w;
  std::vector<ad::Param> b;
  std::vector<ad::Param> gamma;
  std::vector<ad::Param> beta;
  ad::Param wc;
  ad::Param bc;

  static ForgeParams init(int item_count, int layers, double dropout_rate,
                          uint64_t seed);
  void collect(ad::ParamSet& set);
};

// Ranks benign users as template candidates. Users who rated the target are
// excluded; the rest sort by overlap with the `similar_set_size` items most
// similar to the target, then by interaction count, then by index.
std::vector<int> rank_templates(const corpus::InteractionCorpus& train, int target,
                                const corpus::MetadataStore& metadata,
                                const embed::EmbeddingBackend& backend,
                                int similar_set_size);

TemplateBatch sample_templates(const std::vector<int>& permutation,
                               const corpus::InteractionCorpus& train, int n_fake);

// Forward pass of the autoencoder on the tape. Dropout fires only when
// `training` is set; generation-time passes are deterministic.
ad::Value reconstruct(ad::Tape& tape, ad::Value input, ForgeParams& params,
                      const corpus::RatingScale& scale, bool training,
                      std::mt19937_64& rng, bool train_params = true);

// Convenience non-tape forward.
core::Mat reconstruct_value(const core::Mat& input, ForgeParams& params,
                            const corpus::RatingScale& scale);

// Popularity/rating context used to pad degenerate template rows.
struct MaskContext {
  std::vector<int> similar_items;       // ranked, target excluded
  std::vector<int64_t> item_popularity;  // interaction counts per item
  double modal_rating = 0.0;
};

MaskContext make_mask_context(const corpus::InteractionCorpus& train,
                              const std::vector<int>& similar_items);

// Keeps per row the F-1 fillers whose reconstruction stayed closest to the
// template, rounds them to the scale, pins the target at the maximum rating
// and zeroes the rest.
FakeRatingMatrix discretize_and_mask(const core::Mat& h, const TemplateBatch& batch,
                                     int profile_size, int target,
                                     const corpus::RatingScale& scale,
                                     const MaskContext& ctx);

// Straight-through view: emits the masked discrete ratings, routes gradients
// to the continuous entries under the mask.
ad::Value forge_gradient_surface(ad::Tape& tape, ad::Value h,
                                 const FakeRatingMatrix& fake);

int n_fake_for(double attack_size, int population);

}  // namespace ragan::forge
