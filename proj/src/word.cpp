#include "lrswap/word.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace lrswap {

Word Word::parse(std::string_view text) {
  std::vector<int> letters;
  if (text.find('.') == std::string_view::npos) {
    for (char c : text) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad word '" + std::string(text) + "'");
      letters.push_back(c - '0');
    }
    return Word(std::move(letters));
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('.', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = text.substr(start, end - start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || ptr != part.data() + part.size())
      throw std::invalid_argument("bad word '" + std::string(text) + "'");
    letters.push_back(value);
    start = end + 1;
  }
  return Word(std::move(letters));
}

std::string to_string(const Word& w) {
  bool compact = true;
  for (int c : w.letters())
    if (c < 0 || c > 9) compact = false;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out.push_back('.');
    out += std::to_string(w[i]);
  }
  return out;
}

std::size_t basis_dimension(int species, int sites) {
  if (species < 1 || sites < 0) throw std::invalid_argument("basis dimension needs species >= 1, sites >= 0");
  std::size_t dim = 1;
  for (int s = 0; s < sites; ++s) {
    if (dim > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(species))
      throw std::overflow_error("basis dimension overflow");
    dim *= static_cast<std::size_t>(species);
  }
  return dim;
}

std::size_t word_index(const Word& w, int species) {
  std::size_t index = 0;
  for (int c : w.letters()) {
    if (c < 1 || c > species)
      throw std::out_of_range("species label " + std::to_string(c) + " outside [1, " + std::to_string(species) + "]");
    index = index * static_cast<std::size_t>(species) + static_cast<std::size_t>(c - 1);
  }
  return index;
}

Word index_word(std::size_t index, int sites, int species) {
  if (index >= basis_dimension(species, sites)) throw std::out_of_range("word index out of range");
  std::vector<int> letters(static_cast<std::size_t>(sites));
  for (int s = sites - 1; s >= 0; --s) {
    letters[static_cast<std::size_t>(s)] = static_cast<int>(index % static_cast<std::size_t>(species)) + 1;
    index /= static_cast<std::size_t>(species);
  }
  return Word(std::move(letters));
}

}  // namespace lrswap
