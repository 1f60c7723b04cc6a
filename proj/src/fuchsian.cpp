#include "bendlab/fuchsian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace bendlab {

Word::Word(std::vector<Letter> letters) {
  for (const Letter& l : letters) {
    if (l.exponent != 1 && l.exponent != -1) {
      throw Error(ErrorKind::InvalidArgument, "word exponents must be +1 or -1");
    }
    if (!letters_.empty() && letters_.back() == l.inverse()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::parse(const std::string& text, const std::vector<std::string>& names) {
  std::vector<std::string> tokens;
  if (text.find(' ') != std::string::npos) {
    std::istringstream in(text);
    for (std::string tok; in >> tok;) tokens.push_back(tok);
  } else {
    for (char ch : text) tokens.emplace_back(1, ch);
  }
  std::vector<Letter> letters;
  for (const std::string& tok : tokens) {
    bool found = false;
    for (std::size_t g = 0; g < names.size() && !found; ++g) {
      if (tok == names[g]) {
        letters.push_back({static_cast<int>(g), 1});
        found = true;
      } else {
        std::string upper = names[g];
        for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (upper != names[g] && tok == upper) {
          letters.push_back({static_cast<int>(g), -1});
          found = true;
        }
      }
    }
    if (!found) throw Error(ErrorKind::InvalidArgument, "unknown generator '" + tok + "'");
  }
  return Word(std::move(letters));
}

std::string Word::to_string(const std::vector<std::string>& names) const {
  std::string out;
  for (const Letter& l : letters_) {
    if (!out.empty()) out += ' ';
    std::string name = names.at(static_cast<std::size_t>(l.generator));
    if (l.exponent < 0) {
      for (char& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    out += name;
  }
  return out;
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
  Word w;
  w.letters_ = std::move(out);
  return w;
}

Word Word::operator*(const Word& o) const {
  std::vector<Letter> all = letters_;
  all.insert(all.end(), o.letters_.begin(), o.letters_.end());
  return Word(std::move(all));
}

bool Word::operator<(const Word& o) const {
  if (letters_.size() != o.letters_.size()) return letters_.size() < o.letters_.size();
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i].code() != o.letters_[i].code()) return letters_[i].code() < o.letters_[i].code();
  }
  return false;
}

void GroupPresentation::validate() const {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty() || !seen.insert(n).second) {
      throw Error(ErrorKind::InvalidArgument, "generator names must be distinct and nonempty");
    }
  }
}

Representation Representation::conjugated(const Unimodular& g) const {
  Representation out = *this;
  const Unimodular gi = g.inverse();
  for (auto& m : out.images) m = g * m * gi;
  return out;
}

bool Representation::is_real(double tol) const {
  return std::all_of(images.begin(), images.end(), [&](const Unimodular& m) { return m.is_real(tol); });
}

Unimodular evaluate_word(const Representation& rho, const Word& w) {
  Unimodular out;
  for (const Letter& l : w.letters()) {
    const Unimodular& g = rho.image(l.generator);
    out = out * (l.exponent > 0 ? g : g.inverse());
  }
  return out;
}

double relator_residual(const Representation& rho) {
  double worst = 0.0;
  for (const Word& r : rho.presentation.relators) {
    worst = std::max(worst, projective_distance(evaluate_word(rho, r), Unimodular::identity()));
  }
  return worst;
}

Representation genus2_octagon() {
  // Opposite sides of the regular octagon (vertex angle pi/4) centred at i lie
  // at distance l with cosh(l/2) = cot(pi/8) = 1 + sqrt(2).  The pairing for
  // the side pair in direction k pi/4 is H conjugated by the rotation R about i.
  const double c = 1.0 + std::numbers::sqrt2;
  const double lambda = c + std::sqrt(c * c - 1.0);
  const Unimodular h = Unimodular::diagonal(lambda);
  auto rotation = [](double phi) {
    const double cs = std::cos(0.5 * phi), sn = std::sin(0.5 * phi);
    return Unimodular::from_entries(cs, sn, -sn, cs);
  };
  Representation rho;
  rho.presentation.names = {"a", "b", "c", "d"};
  for (int k = 0; k < 4; ++k) {
    const double phi = k * std::numbers::pi / 4.0;
    rho.images.push_back(rotation(phi) * h * rotation(-phi));
  }
  // The unique cyclically reduced length-8 product of the eight letters (up to
  // rotation and inversion) that closes up for this pairing.
  rho.presentation.relators = {Word::parse("a B c D A b C d", rho.presentation.names)};
  rho.validated = true;
  return rho;
}

Representation free_group(std::vector<Unimodular> images, std::vector<std::string> names) {
  Representation rho;
  if (names.empty()) {
    for (std::size_t i = 0; i < images.size(); ++i) {
      names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "g" + std::to_string(i));
    }
  }
  if (names.size() != images.size()) {
    throw Error(ErrorKind::InvalidArgument, "one name per generator required");
  }
  rho.presentation.names = std::move(names);
  rho.presentation.validate();
  rho.images = std::move(images);
  rho.validated = true;
  return rho;
}

std::size_t word_ball_size(int rank, int length) {
  std::size_t total = 1, layer = 0;
  for (int l = 1; l <= length; ++l) {
    layer = l == 1 ? static_cast<std::size_t>(2 * rank) : layer * static_cast<std::size_t>(2 * rank - 1);
    total += layer;
  }
  return total;
}

namespace {

void check_cap(int length, int cap) {
  if (length < 0) throw Error(ErrorKind::InvalidArgument, "negative word length");
  if (length > cap) {
    throw Error(ErrorKind::CapExceeded,
                "word length " + std::to_string(length) + " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

std::vector<Word> word_ball(int rank, int length, int cap) {
  check_cap(length, cap);
  std::vector<Word> out{Word()};
  out.reserve(word_ball_size(rank, length));
  std::size_t begin = 0, end = 1;
  for (int l = 1; l <= length; ++l) {
    for (std::size_t i = begin; i < end; ++i) {
      for (int code = 0; code < 2 * rank; ++code) {
        const Letter next{code / 2, code % 2 == 0 ? 1 : -1};
        const auto& prev = out[i].letters();
        if (!prev.empty() && prev.back() == next.inverse()) continue;
        std::vector<Letter> letters = prev;
        letters.push_back(next);
        out.emplace_back(std::move(letters));
      }
    }
    begin = end;
    end = out.size();
  }
  return out;
}

std::vector<BallEntry> group_ball(const Representation& rho, int length, int cap) {
  const int rank = static_cast<int>(rho.rank());
  check_cap(length, cap);
  std::vector<Unimodular> letters;
  for (int code = 0; code < 2 * rank; ++code) {
    const Unimodular& g = rho.image(code / 2);
    letters.push_back(code % 2 == 0 ? g : g.inverse());
  }
  std::vector<BallEntry> out{{Word(), Unimodular::identity()}};
  out.reserve(word_ball_size(rank, length));
  std::size_t begin = 0, end = 1;
  for (int l = 1; l <= length; ++l) {
    for (std::size_t i = begin; i < end; ++i) {
      for (int code = 0; code < 2 * rank; ++code) {
        const Letter next{code / 2, code % 2 == 0 ? 1 : -1};
        const auto& prev = out[i].word.letters();
        if (!prev.empty() && prev.back() == next.inverse()) continue;
        std::vector<Letter> w = prev;
        w.push_back(next);
        out.push_back({Word(std::move(w)), out[i].matrix * letters[static_cast<std::size_t>(code)]});
      }
    }
    begin = end;
    end = out.size();
  }
  return out;
}

}  // namespace bendlab
