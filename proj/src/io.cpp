#include "bendlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace bendlab::io {

ResultTable::ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

namespace {

bool matches(ColumnKind kind, const Value& v) {
  switch (kind) {
    case ColumnKind::Real: return std::holds_alternative<double>(v);
    case ColumnKind::Complex: return std::holds_alternative<Complex>(v);
    case ColumnKind::Integer: return std::holds_alternative<long long>(v);
    case ColumnKind::Text: return std::holds_alternative<std::string>(v);
    case ColumnKind::Flag: return std::holds_alternative<bool>(v);
  }
  return false;
}

std::string quote_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void ResultTable::add_row(std::vector<Value> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorKind::InvalidArgument, "row has " + std::to_string(row.size()) + " cells, expected " +
                                                std::to_string(columns_.size()));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!matches(columns_[i].kind, row[i])) {
      throw Error(ErrorKind::InvalidArgument, "cell kind mismatch in column " + columns_[i].name);
    }
  }
  rows_.push_back(std::move(row));
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    if (columns_[i].kind == ColumnKind::Complex) {
      out += columns_[i].name + "_re," + columns_[i].name + "_im";
    } else {
      out += columns_[i].name;
    }
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out += format_real(v);
            } else if constexpr (std::is_same_v<T, Complex>) {
              out += format_real(v.real()) + "," + format_real(v.imag());
            } else if constexpr (std::is_same_v<T, long long>) {
              out += std::to_string(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
              out += quote_text(v);
            } else {
              out += v ? "true" : "false";
            }
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Config, "cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw Error(ErrorKind::Config, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot open config " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
}

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorKind::Config, "expected a number or [re, im], got " + j.dump());
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

BoundaryPoint parse_boundary(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return BoundaryPoint::infinity();
    throw Error(ErrorKind::Config, "boundary point string must be \"inf\"");
  }
  return parse_complex(j);
}

Representation parse_representation(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "genus2_octagon") return genus2_octagon();
    throw Error(ErrorKind::Config, "unknown representation " + j.dump());
  }
  if (!j.is_object() || !j.contains("generators")) {
    throw Error(ErrorKind::Config, "representation needs \"generators\"");
  }
  std::vector<Unimodular> images;
  for (const auto& g : j.at("generators")) {
    if (!g.is_array() || g.size() != 4) throw Error(ErrorKind::Config, "generator must be [a, b, c, d]");
    images.push_back(
        Unimodular::from_entries(parse_complex(g[0]), parse_complex(g[1]), parse_complex(g[2]), parse_complex(g[3])));
  }
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  Representation rho = free_group(std::move(images), std::move(names));
  if (j.contains("relators")) {
    for (const auto& r : j.at("relators")) {
      rho.presentation.relators.push_back(Word::parse(r.get<std::string>(), rho.presentation.names));
    }
  }
  return rho;
}

std::string christoffel_word(int p, int q, char first, char second) {
  if (p < 0 || q < 0 || p + q == 0) throw Error(ErrorKind::Config, "Christoffel word needs p, q >= 0");
  std::string w;
  const int n = p + q;
  for (int k = 1; k <= n; ++k) w += (k * q) / n > ((k - 1) * q) / n ? second : first;
  return w;
}

std::vector<Leaf> curve_leaves(const Representation& group, const Word& w, Complex weight) {
  std::vector<Leaf> out;
  const auto& letters = w.letters();
  for (std::size_t k = 0; k < letters.size(); ++k) {
    std::vector<Letter> rotated(letters.begin() + static_cast<std::ptrdiff_t>(k), letters.end());
    rotated.insert(rotated.end(), letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k));
    const Geodesic axis(complex_displacement(evaluate_word(group, Word(rotated))).axis);
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Leaf& l) {
      return l.geodesic.approx_equal(axis, default_tolerances().geometry);
    });
    if (!seen) out.push_back({axis, weight});
  }
  return out;
}

LaminationSource parse_lamination(const json& j, const Representation& group) {
  const std::string kind = j.value("kind", "orbit");
  if (kind == "finite") {
    std::vector<Leaf> leaves;
    for (const auto& l : j.at("leaves")) {
      const auto& e = l.at("endpoints");
      leaves.push_back({Geodesic(parse_boundary(e.at(0)), parse_boundary(e.at(1))),
                        l.contains("weight") ? parse_complex(l.at("weight")) : Complex(1.0)});
    }
    return FiniteLamination(std::move(leaves));
  }
  if (kind != "orbit") throw Error(ErrorKind::Config, "lamination kind must be finite or orbit");
  OrbitSpec spec;
  spec.group = group;
  spec.cap = j.value("cap", 6);
  const Complex weight = j.contains("weight") ? parse_complex(j.at("weight")) : Complex(1.0);
  if (j.contains("christoffel")) {
    const auto& c = j.at("christoffel");
    const std::string letters = c.value("letters", "ab");
    if (letters.size() != 2) throw Error(ErrorKind::Config, "christoffel letters must be two characters");
    const std::string w = christoffel_word(c.at("p").get<int>(), c.at("q").get<int>(), letters[0], letters[1]);
    for (Leaf& l : curve_leaves(group, Word::parse(w, group.presentation.names), weight)) spec.base.push_back(l);
  }
  if (j.contains("curves")) {
    for (const auto& c : j.at("curves")) {
      const Complex w = c.contains("weight") ? parse_complex(c.at("weight")) : weight;
      const Word word = Word::parse(c.at("word").get<std::string>(), group.presentation.names);
      for (Leaf& l : curve_leaves(group, word, w)) spec.base.push_back(l);
    }
  }
  if (spec.base.empty()) throw Error(ErrorKind::Config, "orbit lamination needs curves or christoffel");
  return spec;
}

Complex default_basepoint() { return Complex(0.0, 1.0) + 0.1 * std::polar(1.0, 0.7); }

std::vector<Word> parse_words(const json& j, const Representation& group) {
  std::vector<Word> out;
  for (const auto& w : j) out.push_back(Word::parse(w.get<std::string>(), group.presentation.names));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Complex cayley(const BoundaryPoint& p) {
  if (p.is_infinite()) return {1.0, 0.0};
  const Complex z = p.value();
  return (z - Complex(0.0, 1.0)) / (z + Complex(0.0, 1.0));
}

Complex cayley(Complex z) { return (z - Complex(0.0, 1.0)) / (z + Complex(0.0, 1.0)); }

struct Screen {
  double half, scale;
  std::string xy(Complex w) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f %.4f", half + scale * w.real(), half - scale * w.imag());
    return buf;
  }
  std::string num(double v) const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
  }
};

}  // namespace

std::string render_svg(const RenderScene& scene) {
  const Screen s{scene.size / 2.0, 0.45 * scene.size};
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << scene.size << "\" height=\""
      << scene.size << "\" viewBox=\"0 0 " << scene.size << " " << scene.size << "\">\n";
  out << "<circle cx=\"" << s.num(s.half) << "\" cy=\"" << s.num(s.half) << "\" r=\"" << s.num(s.scale)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (const Geodesic& g : scene.leaves) {
    if (!g.is_real(1e-9)) continue;
    const Complex u = cayley(g.first()), v = cayley(g.second());
    const double delta = std::abs(std::arg(v / u));
    out << "<path d=\"M " << s.xy(u);
    if (std::abs(delta - std::numbers::pi) < 1e-9) {
      out << " L " << s.xy(v);
    } else {
      const double radius = s.scale * std::tan(0.5 * delta);
      // The arc inside the disc bulges toward the origin; in screen
      // coordinates (y down) pick the sweep from the turn direction.
      const Complex su(u.real(), -u.imag()), sv(v.real(), -v.imag());
      const double turn = su.real() * sv.imag() - su.imag() * sv.real();
      out << " A " << s.num(radius) << " " << s.num(radius) << " 0 0 " << (turn > 0 ? 0 : 1) << " " << s.xy(v);
    }
    out << "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\"/>\n";
  }
  for (const auto& [p, q] : scene.segments) {
    const GeodesicSegment seg(p, q);
    out << "<path d=\"M " << s.xy(cayley(p));
    for (int k = 1; k <= 64; ++k) out << " L " << s.xy(cayley(seg.point_at(k / 64.0)));
    out << "\" fill=\"none\" stroke=\"firebrick\" stroke-width=\"1.5\"/>\n";
  }
  for (Complex p : scene.points) {
    const Complex w = cayley(p);
    out << "<circle cx=\"" << s.num(s.half + s.scale * w.real()) << "\" cy=\"" << s.num(s.half - s.scale * w.imag())
        << "\" r=\"2\" fill=\"black\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace bendlab::io
