#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fa {

// A finite word over link labels. Words name wires: an atomic wire carries a
// single label, a wire produced by composition carries the concatenation of
// the labels it passed through. The empty word is the multiplicative unit of
// the language semiring.
//
// Encoding: labels joined with '.', the empty word encoded as "". Labels
// therefore must not contain '.'.
class Word {
 public:
  Word() = default;  // the empty word
  explicit Word(std::string atom);
  explicit Word(std::vector<std::string> atoms);

  static Word parse(std::string_view text);

  Word operator*(const Word& rhs) const;  // concatenation

  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  bool is_epsilon() const noexcept { return atoms_.empty(); }
  std::size_t length() const noexcept { return atoms_.size(); }

  std::string str() const;      // dot-joined encoding; "" for the empty word
  std::string display() const;  // like str(), but the empty word shows as an epsilon

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<std::string> atoms_;
};

// An element of the semiring (K, union, concatenation, {}, {eps}): a finite
// set of words. Values are immutable; every operation returns a new value.
class Lang {
 public:
  Lang() = default;  // the zero element
  Lang(std::initializer_list<Word> words);
  explicit Lang(std::set<Word> words);

  static Lang zero() { return Lang{}; }
  static Lang one() { return Lang{Word{}}; }
  static Lang single(Word w) { return Lang{std::move(w)}; }

  bool is_zero() const noexcept { return words_.empty(); }
  bool contains(const Word& w) const { return words_.count(w) > 0; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::set<Word>& words() const noexcept { return words_; }

  std::string display() const;  // brace-set notation as used by the pretty printers

  auto operator<=>(const Lang&) const = default;

 private:
  std::set<Word> words_;
};

Lang operator+(const Lang& a, const Lang& b);  // set union
Lang operator*(const Lang& a, const Lang& b);  // pointwise concatenation

}  // namespace fa
