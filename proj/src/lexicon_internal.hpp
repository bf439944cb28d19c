#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialx/featurizer.hpp"

namespace dialx {

// Builds a lexicon from file contents; `category_files` pairs a category name
// with the text of its one-token-per-line file.
LexiconSet parse_sentiment_and_categories(
    std::string_view sentiment_tsv,
    const std::vector<std::pair<std::string, std::string>>& category_files);

}  // namespace dialx
