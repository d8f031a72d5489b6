#include "qcgaps/window.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcgaps/error.hpp"

namespace qcgaps {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_area(const std::vector<Vec2>& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

}  // namespace

Window::Window(Shape s) : shape_(std::move(s)) {
  if (auto* poly = std::get_if<ConvexPolygon>(&shape_)) {
    const auto& v = poly->vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      Vec2 e = v[(i + 1) % v.size()] - v[i];
      Vec2 n{e.y, -e.x};
      normals_.push_back(n);
      offsets_.push_back(dot(n, v[i]));
    }
  }
}

Window Window::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw ValidationError("polygon window needs at least 3 vertices");
  for (const Vec2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("non-finite polygon vertex");
  }
  if (signed_area(vertices) < 0) std::reverse(vertices.begin(), vertices.end());
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
    Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    double scale = std::hypot(e1.x, e1.y) * std::hypot(e2.x, e2.y);
    if (!(cross(e1, e2) > 1e-14 * scale)) throw ValidationError("polygon window is not strictly convex");
  }
  // turning number 1: total exterior angle 2π
  double turn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 e1 = vertices[(i + 1) % n] - vertices[i];
    Vec2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    turn += std::atan2(cross(e1, e2), dot(e1, e2));
  }
  if (std::abs(turn - 2 * kPi) > 1e-9) throw ValidationError("polygon window is self-intersecting");
  Window w(ConvexPolygon{std::move(vertices)});
  if (!w.contains({0, 0})) throw ValidationError("origin is not strictly inside the window");
  return w;
}

Window Window::disc(Vec2 center, double radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw ValidationError("disc radius must be positive");
  if (!(std::hypot(center.x, center.y) < radius)) throw ValidationError("origin is not strictly inside the window");
  return Window(Disc{center, radius});
}

double Window::area() const {
  if (is_polygon()) return signed_area(as_polygon().vertices);
  const Disc& d = as_disc();
  return kPi * d.radius * d.radius;
}

bool Window::contains(Vec2 p) const {
  if (is_polygon()) {
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      if (!(dot(normals_[i], p) < offsets_[i])) return false;
    }
    return true;
  }
  const Disc& d = as_disc();
  Vec2 q = p - d.center;
  return q.x * q.x + q.y * q.y < d.radius * d.radius;
}

double Window::support_radius(double theta) const {
  const Vec2 u{std::cos(theta), -std::sin(theta)};
  if (is_polygon()) {
    double best = -INFINITY;
    for (const Vec2& v : as_polygon().vertices) best = std::max(best, dot(v, u));
    return best;
  }
  const Disc& d = as_disc();
  return dot(d.center, u) + d.radius;
}

SupportInterval Window::support(double theta) const {
  double r = support_radius(theta);
  double r_opposite = support_radius(theta + kPi);
  return {r, r_opposite / r};
}

std::pair<double, double> Window::vertical_extent() const {
  if (is_polygon()) {
    const auto& v = as_polygon().vertices;
    auto [lo, hi] = std::minmax_element(v.begin(), v.end(), [](Vec2 p, Vec2 q) { return p.y < q.y; });
    return {lo->y, hi->y};
  }
  const Disc& d = as_disc();
  return {d.center.y - d.radius, d.center.y + d.radius};
}

std::pair<double, double> Window::horizontal_extent() const {
  if (is_polygon()) {
    const auto& v = as_polygon().vertices;
    auto [lo, hi] = std::minmax_element(v.begin(), v.end(), [](Vec2 p, Vec2 q) { return p.x < q.x; });
    return {lo->x, hi->x};
  }
  const Disc& d = as_disc();
  return {d.center.x - d.radius, d.center.x + d.radius};
}

std::pair<double, double> Window::horizontal_slice(double y) const {
  if (is_polygon()) {
    double lo = -INFINITY, hi = INFINITY;
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      const Vec2 n = normals_[i];
      double rhs = offsets_[i] - n.y * y;
      if (n.x > 0) {
        hi = std::min(hi, rhs / n.x);
      } else if (n.x < 0) {
        lo = std::max(lo, rhs / n.x);
      } else if (!(0 < rhs)) {
        return {0, 0};
      }
    }
    return {lo, hi};
  }
  const Disc& d = as_disc();
  double dy = y - d.center.y;
  double h2 = d.radius * d.radius - dy * dy;
  if (!(h2 > 0)) return {0, 0};
  double h = std::sqrt(h2);
  return {d.center.x - h, d.center.x + h};
}

Mat2 preset_internal_matrix(Preset name) {
  switch (name) {
    case Preset::ammann_beenker:
      return {1, 0, 1, std::sqrt(2.0)};
    case Preset::gahler_shield:
      return {1, 0, std::sqrt(3.0), 2};
    case Preset::tubingen_triangle: {
      const double tau = (1 + std::sqrt(5.0)) / 2;
      Mat2 stretch{1, 0, 0, std::sqrt((2 + tau) / 5)};
      Mat2 shear{1, 0, tau, 2};
      return stretch * shear;
    }
  }
  throw ValidationError("unknown preset");
}

Window preset_window(Preset name, Vec2 w) {
  int sides = 0;
  double circumradius = 0;
  switch (name) {
    case Preset::ammann_beenker:
      sides = 8;
      circumradius = std::sqrt(1 + std::sqrt(0.5));
      break;
    case Preset::gahler_shield:
      sides = 12;
      circumradius = std::sqrt(2 + std::sqrt(3.0));
      break;
    case Preset::tubingen_triangle:
      sides = 10;
      circumradius = std::sqrt(2.0) / 20 * std::pow(5 + std::sqrt(5.0), 1.5);
      break;
  }
  const Mat2 g1 = preset_internal_matrix(name);
  std::vector<Vec2> vertices;
  for (int k = 0; k < sides; ++k) {
    double phi = 2 * kPi * (1.0 / (2 * sides) + static_cast<double>(k) / sides);
    Vec2 p{circumradius * std::cos(phi) + w.x, circumradius * std::sin(phi) + w.y};
    vertices.push_back(p * g1);
  }
  Window win = Window::polygon(std::move(vertices));
  win.set_provenance(preset_name(name) + " w=(" + std::to_string(w.x) + "," + std::to_string(w.y) + ")");
  return win;
}

bool contains(const Window& window, Vec2 p) { return window.contains(p); }

SupportInterval support_interval(const Window& window, double theta) { return window.support(theta); }

Window polar_set(const Window& window) {
  if (window.is_polygon()) {
    const auto& v = window.as_polygon().vertices;
    std::vector<Vec2> dual;
    for (std::size_t i = 0; i < v.size(); ++i) {
      Vec2 e = v[(i + 1) % v.size()] - v[i];
      Vec2 n{e.y, -e.x};
      double h = dot(n, v[i]);
      dual.push_back((1.0 / h) * n);
    }
    return Window::polygon(std::move(dual));
  }
  const Disc& d = window.as_disc();
  if (d.center.x != 0 || d.center.y != 0) {
    throw ValidationError("polar set of an off-centre disc is an ellipse, not representable as a window");
  }
  return Window::disc({0, 0}, 1.0 / d.radius);
}

double polar_area(const Window& window) {
  if (window.is_polygon()) return polar_set(window).area();
  const Disc& d = window.as_disc();
  double c2 = dot(d.center, d.center);
  double rho = d.radius;
  return kPi * rho / std::pow(rho * rho - c2, 1.5);
}

Window apply_linear(const Window& window, const Mat2& g) {
  const double det = g.det();
  const double scale = std::max({std::abs(g.a00), std::abs(g.a01), std::abs(g.a10), std::abs(g.a11)});
  if (!(std::abs(det) > 1e-14 * scale * scale)) throw ValidationError("singular matrix");
  if (window.is_polygon()) {
    std::vector<Vec2> out;
    for (const Vec2& p : window.as_polygon().vertices) out.push_back(p * g);
    return Window::polygon(std::move(out));
  }
  // g g^T must be a multiple of the identity
  double r0 = g.a00 * g.a00 + g.a01 * g.a01;
  double r1 = g.a10 * g.a10 + g.a11 * g.a11;
  double off = g.a00 * g.a10 + g.a01 * g.a11;
  if (std::abs(r0 - r1) > 1e-12 * r0 || std::abs(off) > 1e-12 * r0) {
    throw ValidationError("a disc window can only be mapped by a similarity");
  }
  const Disc& d = window.as_disc();
  return Window::disc(d.center * g, d.radius * std::sqrt(r0));
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::ammann_beenker:
      return "ab";
    case Preset::gahler_shield:
      return "gh";
    case Preset::tubingen_triangle:
      return "tt";
  }
  return "?";
}

std::optional<Preset> parse_preset(const std::string& s) {
  if (s == "ab" || s == "ammann_beenker") return Preset::ammann_beenker;
  if (s == "gh" || s == "gahler_shield") return Preset::gahler_shield;
  if (s == "tt" || s == "tubingen_triangle") return Preset::tubingen_triangle;
  return std::nullopt;
}

}  // namespace qcgaps
