#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ragan::text {

// Case-folded, punctuation-stripped, whitespace-split tokens.
std::vector<std::string> tokenize(std::string_view s);

size_t distinct_token_count(std::string_view s);

// Token-id mapping shared by the review towers. Id 0 is padding, id 1 is
// the unknown token; real tokens start at 2 in sorted order.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  static Vocabulary build(const std::vector<std::string>& documents,
                          size_t max_size = 20000);

  int id_of(const std::string& token) const;
  std::vector<int> encode(std::string_view s, int fixed_len) const;
  int size() const { return static_cast<int>(tokens_.size()) + 2; }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> ids_;
};

}  // namespace ragan::text
