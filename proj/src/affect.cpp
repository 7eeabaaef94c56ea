#include "gdm/affect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "gdm/error.hpp"

namespace gdm::affect {

namespace {

// Empirical constants of the lexicon scorer.
constexpr double kBoosterIncrement = 0.293;
constexpr double kCapsIncrement = 0.733;
constexpr double kNegationScalar = -0.74;
constexpr double kExclamationIncrement = 0.292;
constexpr std::size_t kMaxExclamations = 4;
constexpr double kQuestionIncrement = 0.18;
constexpr double kQuestionCeiling = 0.96;
constexpr double kNormalization = 15.0;

bool is_space(unsigned char c) {
  // Matches Python's str.split() for ASCII input, including the
  // information separators 0x1c..0x1f.
  return c == ' ' || (c >= '\t' && c <= '\r') || (c >= 0x1c && c <= 0x1f);
}

bool is_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) || (c >= 123 && c <= 126);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

// Python's str.isupper(): at least one cased character and no lowercase.
bool is_upper(std::string_view s) {
  bool cased = false;
  for (unsigned char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') cased = true;
  }
  return cased;
}

std::size_t codepoints(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::string_view strip_ascii_space(std::string_view s) {
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Emoji are replaced by their textual description before tokenizing.
std::string replace_emoji(const SentimentLexicon& lex, std::string_view text) {
  if (lex.emoji.empty()) return std::string(strip_ascii_space(text));
  std::string out;
  out.reserve(text.size());
  bool prev_space = true;
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t len = std::min(utf8_length(static_cast<unsigned char>(text[i])), text.size() - i);
    const std::string_view ch = text.substr(i, len);
    auto it = lex.emoji.find(ch);
    if (it != lex.emoji.end()) {
      if (!prev_space) out += ' ';
      out += it->second;
      prev_space = false;
    } else {
      out += ch;
      prev_space = ch == " ";
    }
    i += len;
  }
  return std::string(strip_ascii_space(out));
}

const std::map<std::string, double, std::less<>>& special_cases() {
  static const std::map<std::string, double, std::less<>> cases{
      {"the shit", 3},      {"the bomb", 3},   {"bad ass", 1.5},      {"badass", 1.5},
      {"bus stop", 0.0},    {"yeah right", -2}, {"kiss of death", -1.5}, {"to die for", 3},
      {"beating heart", 3.5}};
  return cases;
}

class CompoundScorer {
 public:
  CompoundScorer(const SentimentLexicon& lex, const Tokenized& tok) : lex_(lex), tok_(tok) {
    const auto& t = tok_.tokens;
    std::size_t caps = 0;
    for (const auto& w : t) caps += is_upper(w.text) ? 1 : 0;
    const std::size_t diff = t.size() - caps;
    cap_differential_ = diff > 0 && diff < t.size();
  }

  double run() {
    const auto& t = tok_.tokens;
    std::vector<double> sentiments;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (lex_.boosters.count(t[i].lower)) {
        sentiments.push_back(0.0);
        continue;
      }
      if (i + 1 < t.size() && t[i].lower == "kind" && t[i + 1].lower == "of") {
        sentiments.push_back(0.0);
        continue;
      }
      sentiments.push_back(valence_at(i));
    }
    but_check(sentiments);
    if (sentiments.empty()) return 0.0;

    double sum = 0.0;
    for (double s : sentiments) sum += s;
    const double emphasis = punctuation_emphasis();
    if (sum > 0) sum += emphasis;
    else if (sum < 0) sum -= emphasis;
    double compound = sum / std::sqrt(sum * sum + kNormalization);
    compound = std::clamp(compound, -1.0, 1.0);
    return std::round(compound * 10000.0) / 10000.0;
  }

 private:
  const std::string& lower(std::size_t i) const { return tok_.tokens[i].lower; }
  bool in_lexicon(std::size_t i) const { return lex_.valence.count(lower(i)) > 0; }

  bool negated(const std::string& word) const {
    return lex_.negators.count(word) > 0 || word.find("n't") != std::string::npos;
  }

  double scalar_inc_dec(std::size_t j, double valence) const {
    const auto& w = tok_.tokens[j];
    auto it = lex_.boosters.find(w.lower);
    if (it == lex_.boosters.end()) return 0.0;
    double scalar = it->second;
    if (valence < 0) scalar = -scalar;
    if (is_upper(w.text) && cap_differential_) scalar += valence > 0 ? kCapsIncrement : -kCapsIncrement;
    return scalar;
  }

  double valence_at(std::size_t i) const {
    const auto& t = tok_.tokens;
    const std::size_t n = t.size();
    auto hit = lex_.valence.find(lower(i));
    if (hit == lex_.valence.end()) return 0.0;
    double valence = hit->second;

    // "no" directly before a lexicon word negates it rather than scoring itself
    if (lower(i) == "no" && i + 1 < n && in_lexicon(i + 1)) valence = 0.0;
    if ((i > 0 && lower(i - 1) == "no") || (i > 1 && lower(i - 2) == "no") ||
        (i > 2 && lower(i - 3) == "no" && (lower(i - 1) == "or" || lower(i - 1) == "nor"))) {
      valence = hit->second * kNegationScalar;
    }
    if (is_upper(t[i].text) && cap_differential_) valence += valence > 0 ? kCapsIncrement : -kCapsIncrement;

    for (std::size_t start = 0; start < 3; ++start) {
      if (i > start && !in_lexicon(i - (start + 1))) {
        double s = scalar_inc_dec(i - (start + 1), valence);
        if (start == 1 && s != 0) s *= 0.95;
        if (start == 2 && s != 0) s *= 0.9;
        valence += s;
        valence = negation_check(valence, start, i);
        if (start == 2) valence = special_idioms_check(valence, i);
      }
    }
    return least_check(valence, i);
  }

  double negation_check(double valence, std::size_t start, std::size_t i) const {
    auto is = [&](std::size_t j, const char* w) { return lower(j) == w; };
    if (start == 0) {
      if (negated(lower(i - 1))) valence *= kNegationScalar;
    } else if (start == 1) {
      if (is(i - 2, "never") && (is(i - 1, "so") || is(i - 1, "this"))) {
        valence *= 1.25;
      } else if (is(i - 2, "without") && is(i - 1, "doubt")) {
      } else if (negated(lower(i - 2))) {
        valence *= kNegationScalar;
      }
    } else {
      if ((is(i - 3, "never") && (is(i - 2, "so") || is(i - 2, "this"))) || is(i - 1, "so") || is(i - 1, "this")) {
        valence *= 1.25;
      } else if (is(i - 3, "without") && (is(i - 2, "doubt") || is(i - 1, "doubt"))) {
      } else if (negated(lower(i - 3))) {
        valence *= kNegationScalar;
      }
    }
    return valence;
  }

  double special_idioms_check(double valence, std::size_t i) const {
    const std::size_t n = tok_.tokens.size();
    const std::string onezero = lower(i - 1) + " " + lower(i);
    const std::string twoonezero = lower(i - 2) + " " + lower(i - 1) + " " + lower(i);
    const std::string twoone = lower(i - 2) + " " + lower(i - 1);
    const std::string threetwoone = lower(i - 3) + " " + lower(i - 2) + " " + lower(i - 1);
    const std::string threetwo = lower(i - 3) + " " + lower(i - 2);
    const auto& sc = special_cases();
    for (const auto* seq : {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
      auto it = sc.find(*seq);
      if (it != sc.end()) {
        valence = it->second;
        break;
      }
    }
    if (n - 1 > i) {
      auto it = sc.find(lower(i) + " " + lower(i + 1));
      if (it != sc.end()) valence = it->second;
    }
    if (n - 1 > i + 1) {
      auto it = sc.find(lower(i) + " " + lower(i + 1) + " " + lower(i + 2));
      if (it != sc.end()) valence = it->second;
    }
    for (const auto* gram : {&threetwoone, &threetwo, &twoone}) {
      auto it = lex_.boosters.find(*gram);
      if (it != lex_.boosters.end()) valence += it->second;
    }
    return valence;
  }

  double least_check(double valence, std::size_t i) const {
    if (i > 1 && !in_lexicon(i - 1) && lower(i - 1) == "least") {
      if (lower(i - 2) != "at" && lower(i - 2) != "very") valence *= kNegationScalar;
    } else if (i > 0 && !in_lexicon(i - 1) && lower(i - 1) == "least") {
      valence *= kNegationScalar;
    }
    return valence;
  }

  // Contrastive "but": halves everything before the first "but" and scales
  // everything after by 1.5. Positions are resolved by value lookup, exactly
  // as the reference does, so equal sentiments share a position.
  void but_check(std::vector<double>& s) const {
    const auto& t = tok_.tokens;
    auto but = std::find_if(t.begin(), t.end(), [](const Token& w) { return w.lower == "but"; });
    if (but == t.end()) return;
    const auto bi = static_cast<std::size_t>(but - t.begin());
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double v = s[k];
      const auto si = static_cast<std::size_t>(std::find(s.begin(), s.end(), v) - s.begin());
      if (si < bi) s[si] = v * 0.5;
      else if (si > bi) s[si] = v * 1.5;
    }
  }

  double punctuation_emphasis() const {
    const double ep = static_cast<double>(std::min(tok_.exclamations, kMaxExclamations)) * kExclamationIncrement;
    double qm = 0.0;
    if (tok_.questions > 1) {
      qm = tok_.questions <= 3 ? static_cast<double>(tok_.questions) * kQuestionIncrement : kQuestionCeiling;
    }
    return ep + qm;
  }

  const SentimentLexicon& lex_;
  const Tokenized& tok_;
  bool cap_differential_ = false;
};

template <typename F>
void read_tsv(const std::string& path, const char* what, F&& on_row) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, std::string("cannot read ") + what + " '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorKind::Schema, path + ":" + std::to_string(lineno) + ": expected <token><TAB><value>");
    }
    const auto end = line.find('\t', tab + 1);
    const std::string key = line.substr(0, tab);
    const std::string value = line.substr(tab + 1, end == std::string::npos ? std::string::npos : end - tab - 1);
    on_row(key, value, lineno);
  }
}

}  // namespace

Tokenized tokenize(std::string_view text) {
  Tokenized out;
  for (char c : text) {
    if (c == '!') ++out.exclamations;
    if (c == '?') ++out.questions;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string_view word = text.substr(i, j - i);
      std::string_view stripped = word;
      while (!stripped.empty() && is_punct(static_cast<unsigned char>(stripped.front()))) stripped.remove_prefix(1);
      while (!stripped.empty() && is_punct(static_cast<unsigned char>(stripped.back()))) stripped.remove_suffix(1);
      if (codepoints(stripped) <= 2) stripped = word;
      out.tokens.push_back({std::string(stripped), ascii_lower(stripped)});
    }
    i = j;
  }
  return out;
}

SentimentLexicon SentimentLexicon::with_default_modifiers() {
  SentimentLexicon lex;
  const double inc = kBoosterIncrement;
  const double dec = -kBoosterIncrement;
  for (const char* w :
       {"absolutely", "amazingly", "awfully", "completely", "considerable", "considerably", "decidedly",
        "deeply", "effing", "enormous", "enormously", "entirely", "especially", "exceptional",
        "exceptionally", "extreme", "extremely", "fabulously", "flipping", "flippin", "frackin", "fracking",
        "fricking", "frickin", "frigging", "friggin", "fully", "fuckin", "fucking", "fuggin", "fugging",
        "greatly", "hella", "highly", "hugely", "incredible", "incredibly", "intensely", "major", "majorly",
        "more", "most", "particularly", "purely", "quite", "really", "remarkably", "so", "substantially",
        "thoroughly", "total", "totally", "tremendous", "tremendously", "uber", "unbelievably", "unusually",
        "utter", "utterly", "very"}) {
    lex.boosters.emplace(w, inc);
  }
  for (const char* w : {"almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof", "kind-of",
                        "less", "little", "marginal", "marginally", "occasional", "occasionally", "partly",
                        "scarce", "scarcely", "slight", "slightly", "somewhat", "sort of", "sorta", "sortof",
                        "sort-of"}) {
    lex.boosters.emplace(w, dec);
  }
  for (const char* w :
       {"aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't", "aren't", "can't",
        "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt",
        "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't", "neednt",
        "needn't", "never", "none", "nope", "nor", "not", "nothing", "nowhere", "oughtnt", "shant", "shouldnt",
        "uhuh", "wasnt", "werent", "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without",
        "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite"}) {
    lex.negators.emplace(w);
  }
  return lex;
}

SentimentLexicon load_sentiment_lexicon(const std::string& path) {
  auto lex = SentimentLexicon::with_default_modifiers();
  read_tsv(path, "sentiment lexicon", [&](const std::string& key, const std::string& value, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::Schema, path + ":" + std::to_string(line) + ": invalid valence '" + value + "'");
    }
    lex.valence[ascii_lower(key)] = v;
  });
  return lex;
}

void load_emoji_descriptions(SentimentLexicon& lex, const std::string& path) {
  read_tsv(path, "emoji descriptions",
           [&](const std::string& key, const std::string& value, std::size_t) { lex.emoji[key] = value; });
}

double compound_sentiment(const SentimentLexicon& lex, std::string_view text) {
  const std::string prepared = replace_emoji(lex, text);
  const Tokenized tok = tokenize(prepared);
  return CompoundScorer(lex, tok).run();
}

const char* to_string(Emotion e) noexcept {
  switch (e) {
    case Emotion::Happy: return "happy";
    case Emotion::Surprise: return "surprise";
    case Emotion::Angry: return "angry";
    case Emotion::Sad: return "sad";
    case Emotion::Fear: return "fear";
  }
  return "?";
}

Emotion parse_emotion(std::string_view label) {
  for (auto e : {Emotion::Happy, Emotion::Surprise, Emotion::Angry, Emotion::Sad, Emotion::Fear}) {
    if (label == to_string(e)) return e;
  }
  throw Error(ErrorKind::Validation, "unknown emotion label '" + std::string(label) + "'");
}

EmotionLexicon load_emotion_lexicon(const std::string& path) {
  EmotionLexicon lex;
  read_tsv(path, "emotion lexicon", [&](const std::string& key, const std::string& value, std::size_t line) {
    try {
      lex.entries[ascii_lower(key)] = parse_emotion(value);
    } catch (const Error& e) {
      throw Error(ErrorKind::Schema, path + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return lex;
}

EmotionVector emotion_vector(const EmotionLexicon& lex, std::string_view text) {
  std::array<std::size_t, kEmotionCount> counts{};
  std::size_t total = 0;
  for (const auto& t : tokenize(text).tokens) {
    auto it = lex.entries.find(t.lower);
    if (it == lex.entries.end()) continue;
    ++counts[static_cast<std::size_t>(it->second)];
    ++total;
  }
  if (total == 0) return {};
  auto share = [&](Emotion e) {
    return static_cast<double>(counts[static_cast<std::size_t>(e)]) / static_cast<double>(total);
  };
  return {share(Emotion::Happy), share(Emotion::Surprise), share(Emotion::Angry), share(Emotion::Sad),
          share(Emotion::Fear)};
}

double emotion_score(const EmotionVector& v) noexcept {
  return std::max(v.happy, v.surprise) - std::max({v.angry, v.sad, v.fear});
}

void validate(const AffectWeights& w) {
  if (!(w.alpha >= 0.0) || !(w.beta >= 0.0) || std::abs(w.alpha + w.beta - 1.0) > 1e-9) {
    throw Error(ErrorKind::Validation, "invalid affect weights: alpha and beta must be non-negative and sum to 1");
  }
}

AffectScore fuse_affect(double sentiment, double emotion, AffectWeights w) {
  validate(w);
  AffectScore out;
  out.sentiment = std::clamp(sentiment, -1.0, 1.0);
  out.emotion = std::clamp(emotion, -1.0, 1.0);
  out.alpha = w.alpha;
  out.beta = w.beta;
  out.preference = std::clamp(w.alpha * out.sentiment + w.beta * out.emotion, -1.0, 1.0);
  return out;
}

AffectAnalyzer AffectAnalyzer::from_directory(const std::string& dir) {
  auto sentiment = load_sentiment_lexicon(dir + "/sentiment_lexicon.tsv");
  load_emoji_descriptions(sentiment, dir + "/emoji_descriptions.tsv");
  return AffectAnalyzer(std::move(sentiment), load_emotion_lexicon(dir + "/emotion_lexicon.tsv"));
}

AffectScore AffectAnalyzer::score(std::string_view text, AffectWeights w) const {
  validate(w);
  const double s = sentiment(text);
  const double e = emotion_score(emotions(text));
  return fuse_affect(s, e, w);
}

}  // namespace gdm::affect
