#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lrswap {

// Species labels of the particles from left to right. Labels start at 1;
// a smaller label is a stronger species.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<int> letters) : letters_(letters) {}

  // "112" -> 1,1,2. Labels above 9 need the dotted form "10.11.2".
  static Word parse(std::string_view text);

  std::size_t size() const { return letters_.size(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  int& operator[](std::size_t i) { return letters_[i]; }
  const std::vector<int>& letters() const { return letters_; }

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<int> letters_;
};

// Digits run together when every label is below 10, dot-separated otherwise.
std::string to_string(const Word& w);

// N^n, throwing std::overflow_error when it does not fit in size_t.
std::size_t basis_dimension(int species, int sites);

// Lexicographic rank of the word among all words over {1..species}, species 1
// smallest. Throws std::out_of_range for a letter outside [1, species].
std::size_t word_index(const Word& w, int species);

Word index_word(std::size_t index, int sites, int species);

}  // namespace lrswap
