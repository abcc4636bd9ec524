#pragma once

#include <string_view>

#include "meshscore/citation.hpp"
#include "meshscore/text.hpp"

namespace meshscore {

// Built from data/check_tags.txt and data/smart_stopwords.txt at configure time.
std::string_view default_check_tags_text();
std::string_view default_stopwords_text();

ExclusionList default_exclusion_list();
StopwordSet default_stopwords();

}  // namespace meshscore
