#pragma once

#include <string>
#include <vector>

#include "rgvlm/annot/windows.hpp"
#include "rgvlm/common/errors.hpp"

namespace rgvlm::annot {

enum class ParseErrorCode {
  no_scores,              // nothing score-like in the response
  missing_index,          // some action in the window has no score
  conflicting_duplicate,  // one action scored twice with different values
  score_out_of_range,     // outside [0, scale_max]
  index_out_of_range,     // action number outside the window
};

const char* name_of(ParseErrorCode c);

class ParseError : public Error {
 public:
  ParseError(ParseErrorCode code, const std::string& msg) : Error(msg), code_(code) {}
  ParseErrorCode code() const { return code_; }

 private:
  ParseErrorCode code_;
};

// Extract one integer score per action from free-form model output.
// Accepts "Action 3: 7" and close variants: step/transition wording,
// markdown emphasis, "#4", "= 6", "8/10" denominators, reordered lines,
// consistent repeats, surrounding prose, and bare "3: 7" listings when no
// worded entries exist. Actions are 1-based in the text; the result is
// 0-based, length window.count. Malformed output raises ParseError whose
// message names the window.
std::vector<int> parse_scores(const std::string& response, const Window& window, int scale_max);

}  // namespace rgvlm::annot
