#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lavfem {

/// Point or vector in at most two dimensions. In 1-D only the first
/// component is meaningful and the second is kept at zero.
using Coord = std::array<double, 2>;

/// Vertex indices of one element: two for an interval, three for a
/// counter-clockwise triangle. Unused slots hold kNoVertex.
using Element = std::array<std::size_t, 3>;

inline constexpr std::size_t kNoVertex = static_cast<std::size_t>(-1);

/// Conforming simplicial mesh of an interval or an axis-aligned rectangle.
///
/// A Mesh is immutable once built. Boundary vertices are grouped by side
/// label ("left", "right" in 1-D; additionally "bottom", "top" in 2-D), so
/// a corner vertex belongs to two sides.
class Mesh {
 public:
  /// nominal_h, when given, replaces the recomputed maximum diameter as h()
  /// and must agree with it to 1e-12 relative. Uniform builders pass their
  /// exact cell size so h halves exactly under refinement.
  Mesh(int dim, std::vector<Coord> vertices, std::vector<Element> elements,
       std::map<std::string, std::vector<std::size_t>> boundary,
       std::optional<double> nominal_h = std::nullopt);

  int dim() const { return dim_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t vertices_per_element() const { return static_cast<std::size_t>(dim_) + 1; }

  std::span<const Coord> vertices() const { return vertices_; }
  const Coord& vertex(std::size_t i) const { return vertices_[i]; }
  std::span<const Element> elements() const { return elements_; }
  const Element& element(std::size_t e) const { return elements_[e]; }

  /// Maximum element diameter.
  double h() const { return h_; }

  /// Length (1-D) or signed area (2-D) of element e.
  double element_measure(std::size_t e) const;
  double element_diameter(std::size_t e) const;
  double total_measure() const;

  /// Maps reference coordinates on [0,1] or the unit triangle to element e.
  Coord map_to_physical(std::size_t e, const Coord& ref) const;

  bool has_side(const std::string& label) const { return boundary_.contains(label); }
  std::vector<std::string> side_labels() const;
  /// Sorted vertex indices on a side; throws std::invalid_argument for an
  /// unknown label.
  std::span<const std::size_t> side_vertices(const std::string& label) const;
  bool vertex_on_side(const std::string& label, std::size_t v) const;

  /// Plain-text dump: `dim nv ne`, one vertex per line, then one element
  /// per line with 0-based indices.
  void write_text(std::ostream& os) const;

 private:
  int dim_;
  std::vector<Coord> vertices_;
  std::vector<Element> elements_;
  std::map<std::string, std::vector<std::size_t>> boundary_;
  double h_ = 0.0;
};

/// Uniform partition of [a, b] into n intervals.
Mesh build_interval_mesh(double a, double b, int n);

/// Structured triangulation of a rectangle: an nx-by-ny grid of cells, each
/// split along its bottom-left to top-right diagonal.
Mesh build_rect_tri_mesh(std::pair<double, double> x_range,
                         std::pair<double, double> y_range, int nx, int ny);

}  // namespace lavfem
