#include "lavfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lavfem {

Mesh::Mesh(int dim, std::vector<Coord> vertices, std::vector<Element> elements,
           std::map<std::string, std::vector<std::size_t>> boundary,
           std::optional<double> nominal_h)
    : dim_(dim),
      vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      boundary_(std::move(boundary)) {
  if (dim_ != 1 && dim_ != 2) {
    throw std::invalid_argument("Mesh: dimension must be 1 or 2");
  }
  if (elements_.empty()) {
    throw std::invalid_argument("Mesh: no elements");
  }
  const std::size_t nv = vertices_.size();
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    for (std::size_t k = 0; k < vertices_per_element(); ++k) {
      if (elements_[e][k] >= nv) {
        throw std::invalid_argument("Mesh: element " + std::to_string(e) +
                                    " references an invalid vertex");
      }
    }
    if (!(element_measure(e) > 0.0)) {
      throw std::invalid_argument("Mesh: element " + std::to_string(e) + " is degenerate or clockwise");
    }
    h_ = std::max(h_, element_diameter(e));
  }
  if (nominal_h) {
    if (!(std::abs(*nominal_h - h_) <= 1e-12 * h_)) {
      throw std::invalid_argument("Mesh: nominal h disagrees with the maximum element diameter");
    }
    h_ = *nominal_h;
  }
  for (auto& [label, verts] : boundary_) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    for (auto v : verts) {
      if (v >= nv) {
        throw std::invalid_argument("Mesh: boundary side '" + label +
                                    "' references an invalid vertex");
      }
    }
  }
}

double Mesh::element_measure(std::size_t e) const {
  const Element& el = elements_[e];
  const Coord& a = vertices_[el[0]];
  const Coord& b = vertices_[el[1]];
  if (dim_ == 1) return b[0] - a[0];
  const Coord& c = vertices_[el[2]];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double Mesh::element_diameter(std::size_t e) const {
  const Element& el = elements_[e];
  if (dim_ == 1) return std::abs(vertices_[el[1]][0] - vertices_[el[0]][0]);
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Coord& p = vertices_[el[i]];
    const Coord& q = vertices_[el[(i + 1) % 3]];
    d = std::max(d, std::hypot(q[0] - p[0], q[1] - p[1]));
  }
  return d;
}

double Mesh::total_measure() const {
  double sum = 0.0;
  for (std::size_t e = 0; e < elements_.size(); ++e) sum += element_measure(e);
  return sum;
}

Coord Mesh::map_to_physical(std::size_t e, const Coord& ref) const {
  const Element& el = elements_[e];
  const Coord& a = vertices_[el[0]];
  const Coord& b = vertices_[el[1]];
  if (dim_ == 1) return {a[0] + ref[0] * (b[0] - a[0]), 0.0};
  const Coord& c = vertices_[el[2]];
  return {a[0] + ref[0] * (b[0] - a[0]) + ref[1] * (c[0] - a[0]),
          a[1] + ref[0] * (b[1] - a[1]) + ref[1] * (c[1] - a[1])};
}

std::vector<std::string> Mesh::side_labels() const {
  std::vector<std::string> out;
  for (const auto& kv : boundary_) out.push_back(kv.first);
  return out;
}

std::span<const std::size_t> Mesh::side_vertices(const std::string& label) const {
  auto it = boundary_.find(label);
  if (it == boundary_.end()) {
    throw std::invalid_argument("Mesh: unknown boundary label '" + label + "'");
  }
  return it->second;
}

bool Mesh::vertex_on_side(const std::string& label, std::size_t v) const {
  auto verts = side_vertices(label);
  return std::binary_search(verts.begin(), verts.end(), v);
}

void Mesh::write_text(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << dim_ << ' ' << vertices_.size() << ' ' << elements_.size() << '\n';
  for (const Coord& v : vertices_) {
    os << v[0];
    if (dim_ == 2) os << ' ' << v[1];
    os << '\n';
  }
  for (const Element& el : elements_) {
    for (std::size_t k = 0; k < vertices_per_element(); ++k) {
      if (k) os << ' ';
      os << el[k];
    }
    os << '\n';
  }
  os.precision(old_precision);
}

Mesh build_interval_mesh(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("build_interval_mesh: n must be positive");
  if (!(a < b)) throw std::invalid_argument("build_interval_mesh: require a < b");

  const auto nv = static_cast<std::size_t>(n) + 1;
  std::vector<Coord> vertices(nv);
  const double len = b - a;
  for (std::size_t i = 0; i < nv; ++i) {
    vertices[i] = {a + len * static_cast<double>(i) / n, 0.0};
  }
  vertices.back()[0] = b;

  std::vector<Element> elements(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < elements.size(); ++e) elements[e] = {e, e + 1, kNoVertex};

  std::map<std::string, std::vector<std::size_t>> boundary{{"left", {0}}, {"right", {nv - 1}}};
  return Mesh(1, std::move(vertices), std::move(elements), std::move(boundary), len / n);
}

Mesh build_rect_tri_mesh(std::pair<double, double> x_range, std::pair<double, double> y_range,
                         int nx, int ny) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_rect_tri_mesh: nx and ny must be positive");
  }
  const auto [x0, x1] = x_range;
  const auto [y0, y1] = y_range;
  if (!(x0 < x1) || !(y0 < y1)) {
    throw std::invalid_argument("build_rect_tri_mesh: degenerate range");
  }

  const auto cols = static_cast<std::size_t>(nx) + 1;
  const auto rows = static_cast<std::size_t>(ny) + 1;
  auto index = [cols](std::size_t i, std::size_t j) { return j * cols + i; };

  std::vector<Coord> vertices(cols * rows);
  for (std::size_t j = 0; j < rows; ++j) {
    const double y = j + 1 == rows ? y1 : y0 + (y1 - y0) * static_cast<double>(j) / ny;
    for (std::size_t i = 0; i < cols; ++i) {
      const double x = i + 1 == cols ? x1 : x0 + (x1 - x0) * static_cast<double>(i) / nx;
      vertices[index(i, j)] = {x, y};
    }
  }

  std::vector<Element> elements;
  elements.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (std::size_t j = 0; j + 1 < rows; ++j) {
    for (std::size_t i = 0; i + 1 < cols; ++i) {
      const std::size_t v00 = index(i, j), v10 = index(i + 1, j);
      const std::size_t v01 = index(i, j + 1), v11 = index(i + 1, j + 1);
      elements.push_back({v00, v10, v11});
      elements.push_back({v00, v11, v01});
    }
  }

  std::map<std::string, std::vector<std::size_t>> boundary;
  for (std::size_t j = 0; j < rows; ++j) {
    boundary["left"].push_back(index(0, j));
    boundary["right"].push_back(index(cols - 1, j));
  }
  for (std::size_t i = 0; i < cols; ++i) {
    boundary["bottom"].push_back(index(i, 0));
    boundary["top"].push_back(index(i, rows - 1));
  }
  const double h = std::hypot((x1 - x0) / nx, (y1 - y0) / ny);
  return Mesh(2, std::move(vertices), std::move(elements), std::move(boundary), h);
}

}  // namespace lavfem
