#pragma once

// Result tables, CSV/JSON/SVG output and config parsing for the experiment
// drivers.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "bendlab/bending.hpp"
#include "json.hpp"

namespace bendlab::io {

using json = nlohmann::json;

enum class ColumnKind { Real, Complex, Integer, Text, Flag };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
};

using Value = std::variant<double, Complex, long long, std::string, bool>;

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<Column> columns);

  // Throws InvalidArgument when the row does not match the column kinds.
  void add_row(std::vector<Value> row);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Value>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  // Header row first; complex columns become name_re, name_im.
  std::string to_csv() const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Value>> rows_;
};

// 9 significant digits.
std::string format_real(double v);

// Writes to a sibling temporary and renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);
json read_json(const std::filesystem::path& path);

// Complex numbers in configs: a number or [re, im].
Complex parse_complex(const json& j);
json complex_to_json(Complex z);
// Boundary points: a number, [re, im], or the string "inf".
BoundaryPoint parse_boundary(const json& j);

// "genus2_octagon", or {"names": [...], "generators": [[a, b, c, d], ...],
// "relators": ["a B ..."]} with complex entries.
Representation parse_representation(const json& j);

// {"kind": "finite", "leaves": [{"endpoints": [u, v], "weight": w}, ...]}
// {"kind": "orbit", "curves": [{"word": "a", "weight": w}], "cap": 6}
// {"kind": "orbit", "christoffel": {"p": 13, "q": 8, "letters": "ab"}, "cap": 2}
// Orbit curves contribute the axes of all their cyclic conjugates.
LaminationSource parse_lamination(const json& j, const Representation& group);

// Lower Christoffel word of slope q/p in two letters, length p + q.
std::string christoffel_word(int p, int q, char first, char second);
// Axes of every cyclic conjugate of the word, each with the given weight.
std::vector<Leaf> curve_leaves(const Representation& group, const Word& w, Complex weight);

// Default basepoint of the genus-2 experiments: octagon centre i moved by 0.1
// in direction 0.7.
Complex default_basepoint();

std::vector<Word> parse_words(const json& j, const Representation& group);

// Disc-model picture through the Cayley map z -> (z - i) / (z + i).
struct RenderScene {
  std::vector<Geodesic> leaves;
  std::vector<std::pair<Complex, Complex>> segments;
  std::vector<Complex> points;
  int size = 600;
};
std::string render_svg(const RenderScene& scene);

}  // namespace bendlab::io
