#pragma once

#include <random>
#include <string>
#include <vector>

namespace ragan::forge {

struct StyleDirective {
  std::string category;
  std::string text;
};

// Style-transfer directives grouped into the ten fixed categories. Loading
// validates that exactly those categories are present.
class StyleCorpus {
 public:
  static const std::vector<std::string>& categories();
  static StyleCorpus builtin();
  static StyleCorpus load(const std::string& path);  // TSV: category \t text

  size_t size() const { return directives_.size(); }
  const std::vector<StyleDirective>& directives() const { return directives_; }

 private:
  void validate() const;
  std::vector<StyleDirective> directives_;
};

const StyleDirective& pick_style(const StyleCorpus& corpus, std::mt19937_64& rng);

}  // namespace ragan::forge
