#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qcgaps {

struct Vec2 {
  double x = 0;
  double y = 0;

  friend Vec2 operator+(Vec2 p, Vec2 q) { return {p.x + q.x, p.y + q.y}; }
  friend Vec2 operator-(Vec2 p, Vec2 q) { return {p.x - q.x, p.y - q.y}; }
  friend Vec2 operator*(double s, Vec2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 p, Vec2 q) { return p.x * q.x + p.y * q.y; }
inline double cross(Vec2 p, Vec2 q) { return p.x * q.y - p.y * q.x; }

// 2x2 matrix acting on row vectors from the right: p * g.
struct Mat2 {
  double a00 = 1, a01 = 0;
  double a10 = 0, a11 = 1;

  double det() const { return a00 * a11 - a01 * a10; }
  friend Vec2 operator*(Vec2 p, const Mat2& g) { return {p.x * g.a00 + p.y * g.a10, p.x * g.a01 + p.y * g.a11}; }
  friend Mat2 operator*(const Mat2& g, const Mat2& h) {
    return {g.a00 * h.a00 + g.a01 * h.a10, g.a00 * h.a01 + g.a01 * h.a11,
            g.a10 * h.a00 + g.a11 * h.a10, g.a10 * h.a01 + g.a11 * h.a11};
  }
};

struct ConvexPolygon {
  std::vector<Vec2> vertices;  // strictly convex, counterclockwise
};

struct Disc {
  Vec2 center;
  double radius = 1;
};

enum class Preset { ammann_beenker, gahler_shield, tubingen_triangle };

// ℓ_W(θ) = r·(−ν, 1)
struct SupportInterval {
  double r;
  double nu;
};

// Open convex window in internal space; the origin is always strictly inside.
class Window {
 public:
  using Shape = std::variant<ConvexPolygon, Disc>;

  // Validates convexity/orientation (clockwise input is reversed) and 0 ∈ W.
  static Window polygon(std::vector<Vec2> vertices);
  static Window disc(Vec2 center, double radius);

  const Shape& shape() const { return shape_; }
  bool is_polygon() const { return std::holds_alternative<ConvexPolygon>(shape_); }
  const ConvexPolygon& as_polygon() const { return std::get<ConvexPolygon>(shape_); }
  const Disc& as_disc() const { return std::get<Disc>(shape_); }

  const std::optional<std::string>& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  double area() const;
  bool contains(Vec2 p) const;
  SupportInterval support(double theta) const;
  // sup over W of w·(cosθ, −sinθ)
  double support_radius(double theta) const;

  // Extent of the window along the second coordinate.
  std::pair<double, double> vertical_extent() const;
  // Open interval of first coordinates on the horizontal line at height y;
  // returns lo >= hi when the line misses the window.
  std::pair<double, double> horizontal_slice(double y) const;
  std::pair<double, double> horizontal_extent() const;

 private:
  explicit Window(Shape s);

  Shape shape_;
  // half-plane form n_i·p < h_i of the polygon edges
  std::vector<Vec2> normals_;
  std::vector<double> offsets_;
  std::optional<std::string> provenance_;
};

// (W_base + w)·g₁ for the tiling presets.
Window preset_window(Preset name, Vec2 w);
Mat2 preset_internal_matrix(Preset name);
bool contains(const Window& window, Vec2 p);
SupportInterval support_interval(const Window& window, double theta);
// Polar set {z : z·w <= 1 ∀ w ∈ W}. A disc must be centred at the origin
// (otherwise the polar set is an ellipse); use polar_area for that case.
Window polar_set(const Window& window);
double polar_area(const Window& window);
// W·g. Discs only accept similarity matrices.
Window apply_linear(const Window& window, const Mat2& g);

std::string preset_name(Preset p);
std::optional<Preset> parse_preset(const std::string& s);

}  // namespace qcgaps
