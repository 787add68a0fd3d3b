#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "gmr/builder.hpp"

namespace gmr {

namespace {

// Dropped by the keyword style: function words, light verbs and generic role nouns.
constexpr std::array<std::string_view, 40> kKeywordStopwords = {
    "a",      "an",     "the",   "by",      "from",   "of",     "in",   "on",    "at",    "to",
    "for",    "with",   "and",   "or",      "off",    "into",   "onto", "over",  "under", "is",
    "are",    "was",    "were",  "be",      "been",   "that",   "this", "who",   "which", "its",
    "player", "players", "team", "teams",   "perform", "performed", "make", "made", "take", "taken"};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string with_article(const std::string& noun, bool capital) {
  const bool vowel = !noun.empty() && std::string_view("aeiouAEIOU").find(noun.front()) != std::string_view::npos;
  std::string article = vowel ? "an" : "a";
  if (capital) article[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(article[0])));
  return article + " " + noun;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool starts_with_by(const std::string& attr) { return attr.rfind("by ", 0) == 0; }

// "by players from Canada" -> "Canada players"; "by Messi" -> "Messi".
std::string actor_subject(const std::string& by_attr) {
  const std::string actor = by_attr.substr(3);
  const auto from = actor.find(" from ");
  if (from == std::string::npos) return actor;
  return actor.substr(from + 6) + " " + actor.substr(0, from);
}

}  // namespace

std::string diversify(const std::string& event_type, std::span<const std::string> attributes,
                      QueryStyle style) {
  const std::vector<std::string> attrs(attributes.begin(), attributes.end());
  const std::string all_attrs = join(attrs);

  std::optional<std::string> subject;
  std::vector<std::string> others;
  for (const auto& a : attrs) {
    if (!subject && starts_with_by(a)) {
      subject = actor_subject(a);
    } else {
      others.push_back(a);
    }
  }
  const std::string rest = join(others);
  auto suffix = [](const std::string& s) { return s.empty() ? std::string() : " " + s; };

  switch (style) {
    case QueryStyle::Original:
      return "Locate all " + event_type + " actions" + suffix(all_attrs) + ".";
    case QueryStyle::Question:
      if (subject) return "When did " + *subject + " perform " + with_article(event_type, false) + suffix(rest) + "?";
      return "When did " + with_article(event_type, false) + suffix(all_attrs) + " occur?";
    case QueryStyle::NounPhrase:
      if (subject) return with_article(event_type, true) + " performed by " + *subject + suffix(rest) + ".";
      return with_article(event_type, true) + suffix(all_attrs) + ".";
    case QueryStyle::Keyword: {
      std::vector<std::string> words;
      for (const auto& a : attrs) {
        std::istringstream in(a);
        std::string w;
        while (in >> w) {
          auto bare = lower(w);
          while (!bare.empty() && std::ispunct(static_cast<unsigned char>(bare.back()))) bare.pop_back();
          if (bare.empty()) continue;
          if (std::find(kKeywordStopwords.begin(), kKeywordStopwords.end(), bare) != kKeywordStopwords.end()) continue;
          words.push_back(w);
        }
      }
      words.push_back(event_type);
      return join(words);
    }
    case QueryStyle::Verbose: {
      const bool by_first = !attrs.empty() && starts_with_by(attrs.front());
      return "Please go through the entire video carefully and locate all " + event_type + " actions" +
             (by_first ? " performed" : "") + suffix(all_attrs) + ".";
    }
  }
  return event_type;
}

}  // namespace gmr
