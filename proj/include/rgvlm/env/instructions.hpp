#pragma once

#include <random>
#include <string>
#include <vector>

#include "rgvlm/env/types.hpp"

namespace rgvlm::env {

// Fixed instruction vocabulary, lowercase. The last bag-of-words slot is an
// out-of-vocabulary bucket, so encoded instructions have size
// vocabulary().size() + 1.
const std::vector<std::string>& vocabulary();

// Lowercases and splits on anything non-alphabetic.
std::vector<std::string> tokenize(const std::string& text);

// Token counts over vocabulary() with a trailing OOV bucket.
std::vector<int> bag_of_words(const std::string& text);

// Render one subtask as a clause ("pick up the red key"). The rng picks
// among synonymous verbs, so the same chain can yield varied phrasings.
std::string subtask_clause(const BoardSpec& board, const SubTask& sub, std::mt19937_64& rng);

// Full instruction: clauses joined with " then ".
std::string instruction_of(const BoardSpec& board, const std::vector<SubTask>& subtasks,
                           std::mt19937_64& rng);

}  // namespace rgvlm::env
