#include <array>
#include <string>
#include <string_view>

#include "meshscore/text.hpp"

namespace meshscore {

namespace {

// Context conditions on the stem left after an ending is removed. AA, BB and
// CC of the original table are spelled a, b and c.
bool condition_holds(char code, std::string_view stem) {
  const std::size_t len = stem.size();
  const char last = stem[len - 1];
  auto ends = [&](std::string_view s) { return stem.ends_with(s); };
  auto at = [&](std::size_t back) { return len > back ? stem[len - 1 - back] : '\0'; };
  switch (code) {
    case 'A': return true;
    case 'B': return len >= 3;
    case 'C': return len >= 4;
    case 'D': return len >= 5;
    case 'E': return last != 'e';
    case 'F': return len >= 3 && last != 'e';
    case 'G': return len >= 3 && last == 'f';
    case 'H': return last == 't' || ends("ll");
    case 'I': return last != 'o' && last != 'e';
    case 'J': return last != 'a' && last != 'e';
    case 'K': return len >= 3 && (last == 'l' || last == 'i' || (last == 'e' && at(2) == 'u'));
    case 'L': return last != 'u' && last != 'x' && (last != 's' || at(1) == 'o');
    case 'M': return last != 'a' && last != 'c' && last != 'e' && last != 'm';
    case 'N': return len >= 3 && (at(2) != 's' || len >= 4);
    case 'O': return last == 'l' || last == 'i';
    case 'P': return last != 'c';
    case 'Q': return len >= 3 && last != 'l' && last != 'n';
    case 'R': return last == 'n' || last == 'r';
    case 'S': return ends("dr") || (last == 't' && at(1) != 't');
    case 'T': return last == 's' || (last == 't' && at(1) != 'o');
    case 'U': return last == 'l' || last == 'm' || last == 'n' || last == 'r';
    case 'V': return last == 'c';
    case 'W': return last != 's' && last != 'u';
    case 'X': return last == 'l' || last == 'i' || (last == 'e' && at(2) == 'u');
    case 'Y': return ends("in");
    case 'Z': return last != 'f';
    case 'a':
      return last == 'd' || last == 'f' || last == 'l' || last == 't' || ends("ph") ||
             ends("th") || ends("er") || ends("or") || ends("es");
    case 'b': return len >= 3 && !ends("met") && !ends("ryst");
    case 'c': return last == 'l';
    default: return false;
  }
}

struct Ending {
  std::string_view suffix;
  char condition;
};

// Longest endings first; within a length the order does not matter.
constexpr std::array<Ending, 294> kEndings{{
    {"alistically", 'B'}, {"arizability", 'A'}, {"izationally", 'B'},

    {"antialness", 'A'}, {"arisations", 'A'}, {"arizations", 'A'}, {"entialness", 'A'},

    {"allically", 'C'}, {"antaneous", 'A'}, {"antiality", 'A'}, {"arisation", 'A'},
    {"arization", 'A'}, {"ationally", 'B'}, {"ativeness", 'A'}, {"eableness", 'E'},
    {"entations", 'A'}, {"entiality", 'A'}, {"entialize", 'A'}, {"entiation", 'A'},
    {"ionalness", 'A'}, {"istically", 'A'}, {"itousness", 'A'}, {"izability", 'A'},
    {"izational", 'A'},

    {"ableness", 'A'}, {"arizable", 'A'}, {"entation", 'A'}, {"entially", 'A'},
    {"eousness", 'A'}, {"ibleness", 'A'}, {"icalness", 'A'}, {"ionalism", 'A'},
    {"ionality", 'A'}, {"ionalize", 'A'}, {"iousness", 'A'}, {"izations", 'A'},
    {"lessness", 'A'},

    {"ability", 'A'}, {"aically", 'A'}, {"alistic", 'B'}, {"alities", 'A'}, {"ariness", 'E'},
    {"aristic", 'A'}, {"arizing", 'A'}, {"ateness", 'A'}, {"atingly", 'A'}, {"ational", 'B'},
    {"atively", 'A'}, {"ativism", 'A'}, {"elihood", 'E'}, {"encible", 'A'}, {"entally", 'A'},
    {"entials", 'A'}, {"entiate", 'A'}, {"entness", 'A'}, {"fulness", 'A'}, {"ibility", 'A'},
    {"icalism", 'A'}, {"icalist", 'A'}, {"icality", 'A'}, {"icalize", 'A'}, {"ication", 'G'},
    {"icianry", 'A'}, {"ination", 'A'}, {"ingness", 'A'}, {"ionally", 'A'}, {"isation", 'A'},
    {"ishness", 'A'}, {"istical", 'A'}, {"iteness", 'A'}, {"iveness", 'A'}, {"ivistic", 'A'},
    {"ivities", 'A'}, {"ization", 'F'}, {"izement", 'A'}, {"oidally", 'A'}, {"ousness", 'A'},

    {"aceous", 'A'}, {"acious", 'B'}, {"action", 'G'}, {"alness", 'A'}, {"ancial", 'A'},
    {"ancies", 'A'}, {"ancing", 'B'}, {"ariser", 'A'}, {"arized", 'A'}, {"arizer", 'A'},
    {"atable", 'A'}, {"ations", 'B'}, {"atives", 'A'}, {"eature", 'Z'}, {"efully", 'A'},
    {"encies", 'A'}, {"encing", 'A'}, {"ential", 'A'}, {"enting", 'C'}, {"entist", 'A'},
    {"eously", 'A'}, {"ialist", 'A'}, {"iality", 'A'}, {"ialize", 'A'}, {"ically", 'A'},
    {"icance", 'A'}, {"icians", 'A'}, {"icists", 'A'}, {"ifully", 'A'}, {"ionals", 'A'},
    {"ionate", 'D'}, {"ioning", 'A'}, {"ionist", 'A'}, {"iously", 'A'}, {"istics", 'A'},
    {"izable", 'E'}, {"lessly", 'A'}, {"nesses", 'A'}, {"oidism", 'A'},

    {"acies", 'A'}, {"acity", 'A'}, {"aging", 'B'}, {"aical", 'A'}, {"alist", 'A'},
    {"alism", 'B'}, {"ality", 'A'}, {"alize", 'A'}, {"allic", 'b'}, {"anced", 'B'},
    {"ances", 'B'}, {"antic", 'C'}, {"arial", 'A'}, {"aries", 'A'}, {"arily", 'A'},
    {"arity", 'B'}, {"arize", 'A'}, {"aroid", 'A'}, {"ately", 'A'}, {"ating", 'I'},
    {"ation", 'B'}, {"ative", 'A'}, {"ators", 'A'}, {"atory", 'A'}, {"ature", 'E'},
    {"early", 'Y'}, {"ehood", 'A'}, {"eless", 'A'}, {"elity", 'A'}, {"ement", 'A'},
    {"enced", 'A'}, {"ences", 'A'}, {"eness", 'E'}, {"ening", 'E'}, {"ental", 'A'},
    {"ented", 'C'}, {"ently", 'A'}, {"fully", 'A'}, {"ially", 'A'}, {"icant", 'A'},
    {"ician", 'A'}, {"icide", 'A'}, {"icism", 'A'}, {"icist", 'A'}, {"icity", 'A'},
    {"idine", 'I'}, {"iedly", 'A'}, {"ihood", 'A'}, {"inate", 'A'}, {"iness", 'A'},
    {"ingly", 'B'}, {"inism", 'J'}, {"inity", 'c'}, {"ional", 'A'}, {"ioned", 'A'},
    {"ished", 'A'}, {"istic", 'A'}, {"ities", 'A'}, {"itous", 'A'}, {"ively", 'A'},
    {"ivity", 'A'}, {"izers", 'F'}, {"izing", 'F'}, {"oidal", 'A'}, {"oides", 'A'},
    {"otide", 'A'}, {"ously", 'A'},

    {"able", 'A'}, {"ably", 'A'}, {"ages", 'B'}, {"ally", 'B'}, {"ance", 'B'}, {"ancy", 'B'},
    {"ants", 'B'}, {"aric", 'A'}, {"arly", 'K'}, {"ated", 'I'}, {"ates", 'A'}, {"atic", 'B'},
    {"ator", 'A'}, {"ealy", 'Y'}, {"edly", 'E'}, {"eful", 'A'}, {"eity", 'A'}, {"ence", 'A'},
    {"ency", 'A'}, {"ened", 'E'}, {"enly", 'E'}, {"eous", 'A'}, {"hood", 'A'}, {"ials", 'A'},
    {"ians", 'A'}, {"ible", 'A'}, {"ibly", 'A'}, {"ical", 'A'}, {"ides", 'L'}, {"iers", 'A'},
    {"iful", 'A'}, {"ines", 'M'}, {"ings", 'N'}, {"ions", 'B'}, {"ious", 'A'}, {"isms", 'B'},
    {"ists", 'A'}, {"itic", 'H'}, {"ized", 'F'}, {"izer", 'F'}, {"less", 'A'}, {"lily", 'A'},
    {"ness", 'A'}, {"ogen", 'A'}, {"ward", 'A'}, {"wise", 'A'}, {"ying", 'B'}, {"yish", 'A'},

    {"acy", 'A'}, {"age", 'B'}, {"aic", 'A'}, {"als", 'b'}, {"ant", 'B'}, {"ars", 'O'},
    {"ary", 'F'}, {"ata", 'A'}, {"ate", 'A'}, {"eal", 'Y'}, {"ear", 'Y'}, {"ely", 'E'},
    {"ene", 'E'}, {"ent", 'C'}, {"ery", 'E'}, {"ese", 'A'}, {"ful", 'A'}, {"ial", 'A'},
    {"ian", 'A'}, {"ics", 'A'}, {"ide", 'L'}, {"ied", 'A'}, {"ier", 'A'}, {"ies", 'P'},
    {"ily", 'A'}, {"ine", 'M'}, {"ing", 'N'}, {"ion", 'Q'}, {"ish", 'C'}, {"ism", 'B'},
    {"ist", 'A'}, {"ite", 'a'}, {"ity", 'A'}, {"ium", 'A'}, {"ive", 'A'}, {"ize", 'F'},
    {"oid", 'A'}, {"one", 'R'}, {"ous", 'A'},

    {"ae", 'A'}, {"al", 'b'}, {"ar", 'X'}, {"as", 'B'}, {"ed", 'E'}, {"en", 'F'},
    {"es", 'E'}, {"ia", 'A'}, {"ic", 'A'}, {"is", 'A'}, {"ly", 'B'}, {"on", 'S'},
    {"or", 'T'}, {"um", 'U'}, {"us", 'V'}, {"yl", 'R'}, {"'s", 'A'}, {"s'", 'A'},

    {"a", 'A'}, {"e", 'A'}, {"i", 'A'}, {"o", 'A'}, {"s", 'W'}, {"y", 'B'},
}};

struct Recode {
  std::string_view from;
  std::string_view to;
  std::string_view not_after;  // rule is skipped when preceded by one of these
};

constexpr std::array<Recode, 34> kRecodes{{
    {"iev", "ief", ""},   {"uct", "uc", ""},    {"umpt", "um", ""},   {"rpt", "rb", ""},
    {"urs", "ur", ""},    {"istr", "ister", ""}, {"metr", "meter", ""}, {"olv", "olut", ""},
    {"ul", "l", "aoi"},   {"bex", "bic", ""},   {"dex", "dic", ""},   {"pex", "pic", ""},
    {"tex", "tic", ""},   {"ax", "ac", ""},     {"ex", "ec", ""},     {"ix", "ic", ""},
    {"lux", "luc", ""},   {"uad", "uas", ""},   {"vad", "vas", ""},   {"cid", "cis", ""},
    {"lid", "lis", ""},   {"erid", "eris", ""}, {"pand", "pans", ""}, {"end", "ens", "s"},
    {"ond", "ons", ""},   {"lud", "lus", ""},   {"rud", "rus", ""},   {"her", "hes", "pt"},
    {"mit", "mis", ""},   {"ent", "ens", "m"},  {"ert", "ers", ""},   {"et", "es", "n"},
    {"yt", "ys", ""},     {"yz", "ys", ""},
}};

constexpr std::string_view kDoubles = "bdglmnprst";

void recode(std::string& stem) {
  const std::size_t len = stem.size();
  if (len >= 2 && stem[len - 1] == stem[len - 2] &&
      kDoubles.find(stem[len - 1]) != std::string_view::npos) {
    stem.pop_back();
  }
  for (const auto& rule : kRecodes) {
    if (!std::string_view(stem).ends_with(rule.from)) continue;
    const std::size_t at = stem.size() - rule.from.size();
    if (!rule.not_after.empty() && at > 0 &&
        rule.not_after.find(stem[at - 1]) != std::string_view::npos) {
      return;
    }
    stem.replace(at, rule.from.size(), rule.to);
    return;
  }
}

}  // namespace

std::string LovinsStemmer::stem(std::string_view token) const {
  if (token.size() < 3) return std::string(token);
  std::string word(token);
  for (const auto& e : kEndings) {
    // The stem left behind must keep at least two letters.
    if (word.size() < e.suffix.size() + 2) continue;
    if (!std::string_view(word).ends_with(e.suffix)) continue;
    const std::string_view stem(word.data(), word.size() - e.suffix.size());
    if (condition_holds(e.condition, stem)) {
      word.resize(stem.size());
      break;
    }
  }
  recode(word);
  return word;
}

}  // namespace meshscore
