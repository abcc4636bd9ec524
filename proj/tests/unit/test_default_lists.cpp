#include <doctest.h>

#include "fixtures.hpp"
#include "meshscore/default_lists.hpp"

using namespace meshscore;

TEST_SUITE("default_lists") {
  TEST_CASE("embedded lists match the data files") {
    CHECK(default_check_tags_text() == testing::slurp(std::string(MESHSCORE_DATA_DIR) + "/check_tags.txt"));
    CHECK(default_stopwords_text() ==
          testing::slurp(std::string(MESHSCORE_DATA_DIR) + "/smart_stopwords.txt"));
  }

  TEST_CASE("check tags") {
    const auto ex = default_exclusion_list();
    for (const char* tag : {"Humans", "Animals", "Mice", "Male", "Female", "Aged, 80 and over"}) {
      CHECK(ex.contains(tag));
    }
    CHECK_FALSE(ex.contains("Mutation"));
  }

  TEST_CASE("SMART stopwords") {
    const auto sw = default_stopwords();
    CHECK(sw.size() == 570);
    for (const char* w : {"a", "the", "of", "and", "zero", "whereupon"}) CHECK(sw.contains(w));
    CHECK_FALSE(sw.contains("gene"));
  }
}
