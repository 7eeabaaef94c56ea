#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gdm::affect {

/// A whitespace-delimited word with leading/trailing punctuation removed.
/// `text` keeps the original case (used by the ALL-CAPS heuristic).
struct Token {
  std::string text;
  std::string lower;

  bool operator==(const Token&) const = default;
};

struct Tokenized {
  std::vector<Token> tokens;
  std::size_t exclamations = 0;  ///< '!' characters anywhere in the text
  std::size_t questions = 0;     ///< '?' characters anywhere in the text
};

/// Splits on whitespace and strips ASCII punctuation from both ends of each
/// word. A word that would shrink to two characters or fewer is kept intact,
/// which preserves emoticons such as ":)" and ":-(".
Tokenized tokenize(std::string_view text);

/// Valence lexicon plus the modifier vocabularies the compound scorer needs.
struct SentimentLexicon {
  std::map<std::string, double, std::less<>> valence;   ///< lowercase token -> [-4, 4]
  std::map<std::string, double, std::less<>> boosters;  ///< lowercase token/bigram -> increment
  std::set<std::string, std::less<>> negators;
  std::map<std::string, std::string, std::less<>> emoji;  ///< UTF-8 emoji -> description

  /// Booster and negator vocabularies of the reference scorer, no valences.
  static SentimentLexicon with_default_modifiers();
};

/// Reads `token<TAB>valence[<TAB>...]` lines into a lexicon that carries the
/// default modifiers. Lines starting with '#' and blank lines are skipped.
SentimentLexicon load_sentiment_lexicon(const std::string& path);
/// Reads `emoji<TAB>description` lines into `lex.emoji`.
void load_emoji_descriptions(SentimentLexicon& lex, const std::string& path);

/// Normalised sentiment in [-1, 1], rounded to 4 decimals.
double compound_sentiment(const SentimentLexicon& lex, std::string_view text);

enum class Emotion { Happy, Surprise, Angry, Sad, Fear };
inline constexpr std::size_t kEmotionCount = 5;

const char* to_string(Emotion e) noexcept;
Emotion parse_emotion(std::string_view label);

struct EmotionLexicon {
  std::map<std::string, Emotion, std::less<>> entries;
};

/// Reads `token<TAB>label` lines; labels are happy|surprise|angry|sad|fear.
EmotionLexicon load_emotion_lexicon(const std::string& path);

/// Emotion shares, each in [0, 1]. Sums to 1 when any emotion word occurs.
struct EmotionVector {
  double happy = 0.0;
  double surprise = 0.0;
  double angry = 0.0;
  double sad = 0.0;
  double fear = 0.0;

  bool operator==(const EmotionVector&) const = default;
};

EmotionVector emotion_vector(const EmotionLexicon& lex, std::string_view text);

/// max(happy, surprise) - max(angry, sad, fear).
double emotion_score(const EmotionVector& v) noexcept;

struct AffectWeights {
  double alpha = 0.6;  ///< sentiment weight
  double beta = 0.4;   ///< emotion weight

  static constexpr AffectWeights fused() { return {0.6, 0.4}; }
  static constexpr AffectWeights sentiment_only() { return {1.0, 0.0}; }

  bool operator==(const AffectWeights&) const = default;
};

/// Throws "invalid affect weights" unless both are >= 0 and they sum to 1.
void validate(const AffectWeights& w);

struct AffectScore {
  double sentiment = 0.0;  ///< S
  double emotion = 0.0;    ///< E
  double preference = 0.0; ///< SP = alpha S + beta E, clamped to [-1, 1]
  double alpha = 1.0;
  double beta = 0.0;

  bool operator==(const AffectScore&) const = default;
};

AffectScore fuse_affect(double sentiment, double emotion, AffectWeights w);

/// Bundles both lexicons; scoring a message is a pure function of its text.
class AffectAnalyzer {
 public:
  AffectAnalyzer(SentimentLexicon sentiment, EmotionLexicon emotion)
      : sentiment_(std::move(sentiment)), emotion_(std::move(emotion)) {}

  /// Loads vader-style lexicon, emoji descriptions and emotion lexicon from
  /// a data directory.
  static AffectAnalyzer from_directory(const std::string& dir);

  double sentiment(std::string_view text) const { return compound_sentiment(sentiment_, text); }
  EmotionVector emotions(std::string_view text) const { return emotion_vector(emotion_, text); }
  AffectScore score(std::string_view text, AffectWeights w) const;

  const SentimentLexicon& sentiment_lexicon() const noexcept { return sentiment_; }
  const EmotionLexicon& emotion_lexicon() const noexcept { return emotion_; }

 private:
  SentimentLexicon sentiment_;
  EmotionLexicon emotion_;
};

}  // namespace gdm::affect
