#include "rgvlm/env/instructions.hpp"

#include <cctype>
#include <sstream>
#include <unordered_map>

namespace rgvlm::env {

namespace {

const std::vector<std::string> kGotoVerbs = {"go to", "walk to", "head to", "move to"};
const std::vector<std::string> kPickVerbs = {"pick up", "grab", "take", "fetch"};
const std::vector<std::string> kPlaceVerbs = {"put", "place", "set", "drop"};
const std::vector<std::string> kToggleVerbs = {"toggle", "open", "flip"};

const std::string& choose(const std::vector<std::string>& options, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, options.size() - 1);
  return options[d(rng)];
}

std::string object_phrase(const BoardSpec& board, int idx) {
  const ObjectSpec& o = board.objects[idx];
  return std::string("the ") + name_of(o.color) + " " + name_of(o.kind);
}

std::string receptacle_phrase(const BoardSpec& board, int idx) {
  return std::string("the ") + name_of(board.receptacles[idx].kind);
}

}  // namespace

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> vocab = {
      // verbs
      "go", "walk", "head", "move", "pick", "grab", "take", "fetch",
      "put", "place", "set", "drop", "toggle", "open", "flip",
      // function words
      "to", "up", "on", "in", "the", "then",
      // colors
      "red", "green", "blue", "yellow",
      // entities
      "key", "ball", "box", "table", "bin", "door",
  };
  return vocab;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<int> bag_of_words(const std::string& text) {
  const auto& vocab = vocabulary();
  static const std::unordered_map<std::string, int> index = [] {
    std::unordered_map<std::string, int> m;
    for (std::size_t i = 0; i < vocabulary().size(); ++i) m[vocabulary()[i]] = static_cast<int>(i);
    return m;
  }();
  std::vector<int> counts(vocab.size() + 1, 0);
  for (const auto& tok : tokenize(text)) {
    auto it = index.find(tok);
    if (it != index.end())
      counts[it->second] += 1;
    else
      counts.back() += 1;  // OOV bucket
  }
  return counts;
}

std::string subtask_clause(const BoardSpec& board, const SubTask& sub, std::mt19937_64& rng) {
  std::ostringstream os;
  switch (sub.kind) {
    case SubTaskKind::goto_object:
      os << choose(kGotoVerbs, rng) << " " << object_phrase(board, sub.object);
      break;
    case SubTaskKind::goto_receptacle:
      os << choose(kGotoVerbs, rng) << " " << receptacle_phrase(board, sub.receptacle);
      break;
    case SubTaskKind::pick:
      os << choose(kPickVerbs, rng) << " " << object_phrase(board, sub.object);
      break;
    case SubTaskKind::place: {
      const bool on = board.receptacles[sub.receptacle].kind == ReceptacleKind::table;
      os << choose(kPlaceVerbs, rng) << " " << object_phrase(board, sub.object) << " "
         << (on ? "on" : "in") << " " << receptacle_phrase(board, sub.receptacle);
      break;
    }
    case SubTaskKind::toggle:
      os << choose(kToggleVerbs, rng) << " the door";
      break;
  }
  return os.str();
}

std::string instruction_of(const BoardSpec& board, const std::vector<SubTask>& subtasks,
                           std::mt19937_64& rng) {
  std::ostringstream os;
  for (std::size_t i = 0; i < subtasks.size(); ++i) {
    if (i) os << " then ";
    os << subtask_clause(board, subtasks[i], rng);
  }
  return os.str();
}

}  // namespace rgvlm::env
