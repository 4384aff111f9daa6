#include "rgvlm/annot/parse.hpp"

#include <map>
#include <regex>
#include <sstream>

namespace rgvlm::annot {

const char* name_of(ParseErrorCode c) {
  switch (c) {
    case ParseErrorCode::no_scores: return "no_scores";
    case ParseErrorCode::missing_index: return "missing_index";
    case ParseErrorCode::conflicting_duplicate: return "conflicting_duplicate";
    case ParseErrorCode::score_out_of_range: return "score_out_of_range";
    case ParseErrorCode::index_out_of_range: return "index_out_of_range";
  }
  return "?";
}

namespace {

std::string window_label(const Window& w) {
  return "window [" + std::to_string(w.start) + ", " + std::to_string(w.start + w.count) + ")";
}

// Normalize away markdown emphasis and unicode dashes so one byte-level
// regex covers the common formatting variants.
std::string normalized(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '*' || text[i] == '_' || text[i] == '`') continue;
    if (text.compare(i, 3, "\xe2\x80\x93") == 0 || text.compare(i, 3, "\xe2\x80\x94") == 0) {
      out.push_back('-');
      i += 2;
      continue;
    }
    out.push_back(text[i]);
  }
  return out;
}

}  // namespace

std::vector<int> parse_scores(const std::string& response, const Window& window, int scale_max) {
  const std::string text = normalized(response);

  // "Action 3: 7", "step #2 - 5", "transition 1 = 8/10", ...
  static const std::regex worded(
      R"((?:action|step|transition)\s*#?\s*(\d+)\s*[:=\-]+\s*(\d+)(?:\s*/\s*\d+)?)",
      std::regex::icase);

  std::vector<std::pair<int, int>> found;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), worded);
       it != std::sregex_iterator(); ++it)
    found.emplace_back(std::stoi((*it)[1]), std::stoi((*it)[2]));

  if (found.empty()) {
    // bare numbered list: "1: 7" / "2. 5" / "3) 6", one entry per line
    static const std::regex bare(R"(^\s*#?(\d+)\s*[:.)\-=]+\s*(\d+)(?:\s*/\s*\d+)?\s*\.?\s*$)");
    std::istringstream lines(text);
    std::string line;
    std::smatch m;
    while (std::getline(lines, line))
      if (std::regex_match(line, m, bare)) found.emplace_back(std::stoi(m[1]), std::stoi(m[2]));
  }

  if (found.empty())
    throw ParseError(ParseErrorCode::no_scores,
                     window_label(window) + ": no action scores found in response");

  std::map<int, int> by_index;
  for (const auto& [index, score] : found) {
    if (index < 1 || index > window.count)
      throw ParseError(ParseErrorCode::index_out_of_range,
                       window_label(window) + ": action " + std::to_string(index) +
                           " outside 1.." + std::to_string(window.count));
    if (score < 0 || score > scale_max)
      throw ParseError(ParseErrorCode::score_out_of_range,
                       window_label(window) + ": action " + std::to_string(index) + " scored " +
                           std::to_string(score) + ", expected 0.." + std::to_string(scale_max));
    auto it = by_index.find(index);
    if (it != by_index.end() && it->second != score)
      throw ParseError(ParseErrorCode::conflicting_duplicate,
                       window_label(window) + ": action " + std::to_string(index) +
                           " scored both " + std::to_string(it->second) + " and " +
                           std::to_string(score));
    by_index[index] = score;
  }

  std::vector<int> out(static_cast<std::size_t>(window.count));
  for (int i = 1; i <= window.count; ++i) {
    auto it = by_index.find(i);
    if (it == by_index.end())
      throw ParseError(ParseErrorCode::missing_index, window_label(window) + ": no score for action " +
                                                          std::to_string(i));
    out[static_cast<std::size_t>(i - 1)] = it->second;
  }
  return out;
}

}  // namespace rgvlm::annot
