#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "meshscore/corpus_io.hpp"
#include "meshscore/error.hpp"

using namespace meshscore;
using meshscore::testing::fixture;

namespace {

std::vector<Citation> numbered(std::size_t n) {
  std::vector<Citation> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i].id = std::to_string(1000 + i);
  return v;
}

}  // namespace

TEST_SUITE("corpus_io") {
  TEST_CASE("MEDLINE XML fields map onto citations") {
    std::ifstream in(fixture("medline_small.xml"));
    const auto r = parse_medline_xml(in);
    REQUIRE(r.citations.size() == 3);
    CHECK(r.errors.empty());

    const auto& a = r.citations[0];
    CHECK(a.id == "10001");
    CHECK(a.title == "TP53 mutations in human tumors.");
    REQUIRE(a.abstract.has_value());
    CHECK(*a.abstract == "Somatic mutations were sequenced. Most affected the DNA-binding domain.");
    CHECK(a.descriptors == std::vector<std::string>{"Genes, p53", "Humans", "Mutation"});
    CHECK_FALSE(a.label.has_value());

    const auto& b = r.citations[1];
    CHECK(b.id == "10002");
    CHECK(b.title == "Hip fracture outcomes & rehabilitation.");
    CHECK_FALSE(b.abstract.has_value());
    CHECK(b.descriptors == std::vector<std::string>{"Aged", "Hip Fractures"});

    CHECK(r.citations[2].descriptors.empty());
  }

  TEST_CASE("record without PMID: skip-and-report keeps the other two") {
    std::ifstream in(fixture("medline_bad_middle.xml"));
    const auto r = parse_medline_xml(in, ErrorMode::SkipAndReport);
    REQUIRE(r.citations.size() == 2);
    CHECK(r.citations[0].id == "201");
    CHECK(r.citations[1].id == "203");
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].record == 1);
    CHECK(r.errors[0].byte_offset > 0);
    CHECK(r.errors[0].message.find("missing PMID") != std::string::npos);
  }

  TEST_CASE("record without PMID: fail-fast throws") {
    std::ifstream in(fixture("medline_bad_middle.xml"));
    CHECK_THROWS_AS(parse_medline_xml(in, ErrorMode::FailFast), ParseError);
  }

  TEST_CASE("malformed XML reports a byte offset in either mode") {
    for (auto mode : {ErrorMode::FailFast, ErrorMode::SkipAndReport}) {
      std::ifstream in(fixture("medline_truncated.xml"));
      try {
        parse_medline_xml(in, mode);
        FAIL("expected ParseError");
      } catch (const ParseError& e) {
        REQUIRE(e.byte_offset().has_value());
        CHECK(*e.byte_offset() > 0);
        CHECK(std::string(e.what()).find("malformed XML at byte") != std::string::npos);
      }
    }
  }

  TEST_CASE("streaming reader delivers records in document order") {
    std::ifstream in(fixture("medline_small.xml"));
    std::vector<std::string> ids;
    std::vector<RecordError> errors;
    for_each_medline_citation(in, ErrorMode::FailFast,
                              [&](Citation&& c) { ids.push_back(c.id); }, errors);
    CHECK(ids == std::vector<std::string>{"10001", "10002", "10003"});
  }

  TEST_CASE("JSONL deduplicates descriptors and reads labels") {
    std::istringstream in(
        "{\"id\":\"9\",\"title\":\"t\",\"descriptors\":[\"A\",\"A\",\"B\"]}\n"
        "{\"id\":\"10\",\"title\":\"t\",\"descriptors\":[],\"label\":\"genetic\"}\n");
    const auto r = parse_jsonl(in);
    REQUIRE(r.citations.size() == 2);
    CHECK(r.citations[0].descriptors == std::vector<std::string>{"A", "B"});
    CHECK_FALSE(r.citations[0].label.has_value());
    CHECK(r.citations[1].label == DomainLabel::Genetic);
    CHECK(r.citations[1].descriptors.empty());
  }

  TEST_CASE("JSONL line missing id") {
    std::istringstream in("{\"title\":\"t\",\"descriptors\":[]}\n");
    try {
      parse_jsonl(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()) == "line 1: missing id");
    }
  }

  TEST_CASE("JSONL skip-and-report names the line") {
    std::istringstream in(
        "{\"id\":\"1\",\"descriptors\":[]}\n"
        "not json\n"
        "{\"id\":\"1\",\"descriptors\":[]}\n"
        "{\"id\":\"3\",\"descriptors\":[]}\n");
    const auto r = parse_jsonl(in, ErrorMode::SkipAndReport);
    CHECK(r.citations.size() == 2);
    REQUIRE(r.errors.size() == 2);
    CHECK(r.errors[0].record == 2);
    CHECK(r.errors[1].message.find("duplicate id") != std::string::npos);
  }

  TEST_CASE("JSONL round trip preserves every field") {
    Citation c;
    c.id = "77";
    c.title = "Quoted \"title\", with comma";
    c.abstract = "Unicode: \xce\xb2-catenin";
    c.descriptors = {"Wnt Signaling Pathway", "beta Catenin"};
    c.label = DomainLabel::NonGenetic;
    Citation bare;
    bare.id = "78";
    std::ostringstream out;
    write_jsonl(out, {c, bare});
    std::istringstream in(out.str());
    const auto r = parse_jsonl(in);
    REQUIRE(r.citations.size() == 2);
    CHECK(r.citations[0] == c);
    CHECK(r.citations[1] == bare);
  }

  TEST_CASE("TSV groups rows by id with empty titles") {
    std::ifstream in(fixture("relational.tsv"));
    const auto r = parse_tsv(in);
    REQUIRE(r.citations.size() == 3);
    CHECK(r.citations[0].id == "501");
    CHECK(r.citations[0].title.empty());
    CHECK_FALSE(r.citations[0].abstract.has_value());
    CHECK(r.citations[0].descriptors ==
          std::vector<std::string>{"Genome, Human", "Humans", "Sequence Analysis, DNA"});
    CHECK(r.citations[1].id == "502");
    CHECK(r.citations[2].descriptors == std::vector<std::string>{"Exome"});
  }

  TEST_CASE("reference labeling is set membership") {
    auto corpus = numbered(3);
    ReferenceList ref;
    ref.insert("1001");
    ref.insert("424242");
    const auto labeled = label_by_reference(corpus, ref);
    CHECK(labeled[0].label == DomainLabel::NonGenetic);
    CHECK(labeled[1].label == DomainLabel::Genetic);
    CHECK(labeled[2].label == DomainLabel::NonGenetic);

    for (const auto& c : label_by_reference(corpus, ReferenceList{})) {
      CHECK(c.label == DomainLabel::NonGenetic);
    }
  }

  TEST_CASE("reference list column selection") {
    std::istringstream g2p(
        "#tax_id\tGeneID\tPubMed_ID\n9606\t7157\t1001\n9606\t672\t1001\n10090\t22059\t1002\n");
    const auto ref = read_reference_list(g2p, 2);
    CHECK(ref.size() == 2);
    CHECK(ref.contains("1001"));
    CHECK(ref.contains("1002"));
    std::istringstream flat("1001\n1001\n");
    CHECK(read_reference_list(flat).size() == 1);
    std::istringstream narrow("1001\n");
    CHECK_THROWS_AS(read_reference_list(narrow, 2), ParseError);
  }

  TEST_CASE("exclusion removes listed descriptors only") {
    Citation c;
    c.id = "1";
    c.title = "t";
    c.descriptors = {"Humans", "TP53"};
    const ExclusionList ex({"Humans"});
    const auto filtered = apply_exclusion(c, ex);
    CHECK(filtered.descriptors == std::vector<std::string>{"TP53"});
    CHECK(filtered.title == "t");
    CHECK(apply_exclusion(filtered, ex) == filtered);
    CHECK(apply_exclusion(c, ExclusionList{}) == c);
    const auto all = apply_exclusion(c, ExclusionList({"Humans", "TP53"}));
    CHECK(all.descriptors.empty());
    CHECK(all.id == "1");
  }

  TEST_CASE("exclusion list file") {
    std::istringstream in("# check tags\nHumans\n  Animals  \n\nMice\n");
    const auto ex = read_exclusion_list(in);
    CHECK(ex.size() == 3);
    CHECK(ex.contains("Animals"));
  }

  TEST_CASE("folds: sizes, coverage and determinism") {
    const auto ten = numbered(10);
    const auto f10 = split_folds(ten, 10, 3);
    for (const auto& m : f10.members()) CHECK(m.size() == 1);

    const auto corpus = numbered(734);
    const auto a = split_folds(corpus, 10, 7);
    const auto b = split_folds(corpus, 10, 7);
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& m : a.members()) {
      CHECK((m.size() == 73 || m.size() == 74));
      total += m.size();
      seen.insert(m.begin(), m.end());
    }
    CHECK(total == 734);
    CHECK(seen.size() == 734);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      CHECK(a.fold_at(i) == b.fold_at(i));
      CHECK(a.fold_of(corpus[i].id) == a.fold_at(i));
    }
    const auto c = split_folds(corpus, 10, 8);
    std::size_t moved = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) moved += a.fold_at(i) != c.fold_at(i);
    CHECK(moved > 0);
  }

  TEST_CASE("folds do not depend on input order") {
    auto corpus = numbered(50);
    const auto a = split_folds(corpus, 5, 11);
    std::reverse(corpus.begin(), corpus.end());
    const auto b = split_folds(corpus, 5, 11);
    for (const auto& c : corpus) CHECK(a.fold_of(c.id) == b.fold_of(c.id));
  }

  TEST_CASE("fold preconditions") {
    const auto five = numbered(5);
    CHECK_THROWS_AS(split_folds(five, 6, 1), InputError);
    CHECK_THROWS_AS(split_folds(five, 1, 1), UsageError);
  }

  TEST_CASE("duplicate ids are rejected") {
    auto corpus = numbered(3);
    corpus[2].id = corpus[0].id;
    CHECK_THROWS_AS(check_unique_ids(corpus), InputError);
  }
}
