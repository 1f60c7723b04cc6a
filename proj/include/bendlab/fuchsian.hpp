#pragma once

// Finitely generated groups, their representations into SL(2,C), word
// evaluation and word balls.

#include <string>
#include <vector>

#include "bendlab/hypcore.hpp"

namespace bendlab {

struct Letter {
  int generator = 0;
  int exponent = 1;  // +1 or -1

  // 2 * generator + (exponent < 0): the order used for lexicographic sorting.
  int code() const { return 2 * generator + (exponent < 0 ? 1 : 0); }
  Letter inverse() const { return {generator, -exponent}; }
  bool operator==(const Letter&) const = default;
};

class Word {
 public:
  Word() = default;
  // Freely reduces the input.
  explicit Word(std::vector<Letter> letters);
  static Word letter(int generator, int exponent = 1) { return Word({{generator, exponent}}); }

  // Space separated or concatenated single-character names; an uppercase name
  // denotes the inverse of the lowercase generator ("a B" or "aB").
  static Word parse(const std::string& text, const std::vector<std::string>& names);
  std::string to_string(const std::vector<std::string>& names) const;

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;
  Word operator*(const Word& o) const;  // concatenate then reduce

  // (length, lexicographic by letter code)
  bool operator<(const Word& o) const;
  bool operator==(const Word& o) const = default;

 private:
  std::vector<Letter> letters_;
};

struct GroupPresentation {
  std::vector<std::string> names;
  std::vector<Word> relators;

  // Throws InvalidArgument for duplicate names.
  void validate() const;
};

struct Representation {
  GroupPresentation presentation;
  std::vector<Unimodular> images;
  GeodesicTransfer transfer;
  bool validated = false;

  std::size_t rank() const { return images.size(); }
  const Unimodular& image(int generator) const { return images.at(static_cast<std::size_t>(generator)); }
  Representation conjugated(const Unimodular& g) const;
  bool is_real(double tol = default_tolerances().boundary) const;
};

Unimodular evaluate_word(const Representation& rho, const Word& w);
double relator_residual(const Representation& rho);

// Regular octagon with vertex angle pi/4, opposite sides paired.
Representation genus2_octagon();
// Free group on the given matrices (no relators).
Representation free_group(std::vector<Unimodular> images, std::vector<std::string> names = {});

constexpr int kDefaultWordCap = 10;

struct BallEntry {
  Word word;
  Unimodular matrix;
};

// All freely reduced words of length <= length, sorted by (length, lex).
// Throws CapExceeded when length > cap.
std::vector<BallEntry> group_ball(const Representation& rho, int length, int cap = kDefaultWordCap);
// Same words without matrices.
std::vector<Word> word_ball(int rank, int length, int cap = kDefaultWordCap);
// 1 + sum_{l=1..L} 2k (2k-1)^(l-1)
std::size_t word_ball_size(int rank, int length);

}  // namespace bendlab
