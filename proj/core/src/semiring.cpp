#include "fa/semiring.hpp"

#include "fa/error.hpp"

namespace fa {

Word::Word(std::string atom) {
  require_token(atom, "link label");
  atoms_.push_back(std::move(atom));
}

Word::Word(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) require_token(a, "link label");
}

Word Word::parse(std::string_view text) {
  Word w;
  if (text.empty()) return w;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = text.find('.', start);
    std::string_view atom = text.substr(start, dot == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : dot - start);
    require_token(atom, "link label");
    w.atoms_.emplace_back(atom);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return w;
}

Word Word::operator*(const Word& rhs) const {
  Word out;
  out.atoms_.reserve(atoms_.size() + rhs.atoms_.size());
  out.atoms_.insert(out.atoms_.end(), atoms_.begin(), atoms_.end());
  out.atoms_.insert(out.atoms_.end(), rhs.atoms_.begin(), rhs.atoms_.end());
  return out;
}

std::string Word::str() const {
  std::string out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i > 0) out += '.';
    out += atoms_[i];
  }
  return out;
}

std::string Word::display() const { return is_epsilon() ? "ε" : str(); }

Lang::Lang(std::initializer_list<Word> words) : words_(words) {}

Lang::Lang(std::set<Word> words) : words_(std::move(words)) {}

std::string Lang::display() const {
  if (words_.empty()) return "∅";
  std::string out = "{";
  bool first = true;
  for (const auto& w : words_) {
    if (!first) out += ',';
    first = false;
    out += w.display();
  }
  out += '}';
  return out;
}

Lang operator+(const Lang& a, const Lang& b) {
  std::set<Word> out = a.words();
  out.insert(b.words().begin(), b.words().end());
  return Lang(std::move(out));
}

Lang operator*(const Lang& a, const Lang& b) {
  std::set<Word> out;
  for (const auto& u : a.words()) {
    for (const auto& v : b.words()) {
      out.insert(u * v);
    }
  }
  return Lang(std::move(out));
}

}  // namespace fa
