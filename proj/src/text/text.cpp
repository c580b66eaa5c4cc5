#include "ragan/text/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ragan::text {

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c) || std::ispunct(c)) {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      // Non-ASCII bytes are kept verbatim so UTF-8 words survive intact.
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

size_t distinct_token_count(std::string_view s) {
  auto toks = tokenize(s);
  std::set<std::string> uniq(toks.begin(), toks.end());
  return uniq.size();
}

Vocabulary Vocabulary::build(const std::vector<std::string>& documents,
                             size_t max_size) {
  std::map<std::string, int64_t> counts;
  for (const auto& doc : documents)
    for (auto& t : tokenize(doc)) counts[t]++;
  // Most frequent first, ties by token, truncated to the cap, then stored
  // sorted so ids are independent of frequency noise.
  std::vector<std::pair<int64_t, std::string>> by_freq;
  by_freq.reserve(counts.size());
  for (auto& [tok, n] : counts) by_freq.emplace_back(-n, tok);
  std::sort(by_freq.begin(), by_freq.end());
  if (by_freq.size() > max_size) by_freq.resize(max_size);

  Vocabulary v;
  v.tokens_.reserve(by_freq.size());
  for (auto& [n, tok] : by_freq) v.tokens_.push_back(tok);
  std::sort(v.tokens_.begin(), v.tokens_.end());
  for (int i = 0; i < static_cast<int>(v.tokens_.size()); ++i)
    v.ids_[v.tokens_[i]] = i + 2;
  return v;
}

int Vocabulary::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::encode(std::string_view s, int fixed_len) const {
  std::vector<int> out(fixed_len, kPad);
  auto toks = tokenize(s);
  const int n = std::min<int>(fixed_len, static_cast<int>(toks.size()));
  for (int i = 0; i < n; ++i) out[i] = id_of(toks[i]);
  return out;
}

}  // namespace ragan::text
