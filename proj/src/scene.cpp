#include "classlang/scene.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "classlang/error.hpp"

namespace classlang {

namespace {

constexpr std::array<std::string_view, 16> kPalette = {
    "black", "silver", "gray",  "white", "maroon", "red",  "purple", "fuchsia",
    "green", "lime",   "olive", "yellow", "navy",  "blue", "teal",   "aqua",
};

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::runtime, message); }

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const char* mode_name(CircleMode m) { return m == CircleMode::solid ? "solid" : "outline"; }

nlohmann::json number_json(const Number& n) {
  if (n.is_exact() && n.is_integer() && n.numerator().fits_slong_p()) {
    return static_cast<std::int64_t>(n.numerator().get_si());
  }
  return n.to_double();
}

Number number_from_json(const nlohmann::json& j, const char* field) {
  if (j.is_number_integer()) return Number(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number()) return Number::inexact(j.get<double>());
  throw Error(ErrorKind::protocol, std::string("scene: field `") + field + "` must be a number");
}

}  // namespace

const Scene::Node& Scene::node() const { return *node_; }

Scene make_scene(Scene::Node node) {
  return Scene(std::make_shared<const Scene::Node>(std::move(node)));
}

bool Scene::is_scene_rooted() const { return !std::holds_alternative<scene::Circle>(*node_); }

Number Scene::width() const {
  return std::visit(
      [](const auto& n) -> Number {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, scene::EmptyScene>) return n.width;
        else if constexpr (std::is_same_v<T, scene::Circle>) return n.radius * Number(2);
        else return n.scene.width();
      },
      *node_);
}

Number Scene::height() const {
  return std::visit(
      [](const auto& n) -> Number {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, scene::EmptyScene>) return n.height;
        else if constexpr (std::is_same_v<T, scene::Circle>) return n.radius * Number(2);
        else return n.scene.height();
      },
      *node_);
}

std::size_t Scene::hash() const {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, scene::EmptyScene>) {
          return 0x51 ^ (n.width.hash() * 31 + n.height.hash());
        } else if constexpr (std::is_same_v<T, scene::Circle>) {
          return 0x52 ^ (n.radius.hash() * 31 + std::hash<std::string>{}(n.color) * 7 +
                         static_cast<std::size_t>(n.mode));
        } else {
          return 0x53 ^ (n.image.hash() * 131 + n.x.hash() * 31 + n.y.hash() * 17 + n.scene.hash());
        }
      },
      *node_);
}

bool is_known_color(std::string_view name) {
  return std::find(kPalette.begin(), kPalette.end(), name) != kPalette.end();
}

Scene circle(const Number& radius, std::string_view mode, std::string_view color) {
  if (radius.sign() <= 0) fail("circle: expected a positive radius, given " + radius.to_string());
  CircleMode m;
  if (mode == "solid") {
    m = CircleMode::solid;
  } else if (mode == "outline") {
    m = CircleMode::outline;
  } else {
    fail("circle: expected \"solid\" or \"outline\" as mode, given \"" + std::string(mode) + "\"");
  }
  std::string c = lowercase(color);
  if (!is_known_color(c)) fail("circle: unknown color \"" + std::string(color) + "\"");
  return make_scene(scene::Circle{radius, m, std::move(c)});
}

Scene empty_scene(const Number& width, const Number& height) {
  if (width.sign() < 0 || height.sign() < 0) {
    fail("empty-scene: expected non-negative dimensions, given " + width.to_string() + " and " +
         height.to_string());
  }
  return make_scene(scene::EmptyScene{width, height});
}

Scene place_image(const Scene& image, const Number& x, const Number& y, const Scene& scene) {
  if (!scene.is_scene_rooted()) {
    fail("place-image: expected a scene as fourth argument, given a circle");
  }
  return make_scene(scene::PlaceImage{image, x, y, scene});
}

bool scene_equal(const Scene& a, const Scene& b) {
  if (a.node().index() != b.node().index()) return false;
  if (const auto* e = std::get_if<scene::EmptyScene>(&a.node())) {
    const auto& f = std::get<scene::EmptyScene>(b.node());
    return e->width == f.width && e->height == f.height;
  }
  if (const auto* c = std::get_if<scene::Circle>(&a.node())) {
    const auto& d = std::get<scene::Circle>(b.node());
    return c->radius == d.radius && c->mode == d.mode && c->color == d.color;
  }
  const auto& p = std::get<scene::PlaceImage>(a.node());
  const auto& q = std::get<scene::PlaceImage>(b.node());
  return p.x == q.x && p.y == q.y && scene_equal(p.image, q.image) && scene_equal(p.scene, q.scene);
}

std::string to_source(const Scene& s) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, scene::EmptyScene>) {
          return "(empty-scene " + n.width.to_string() + " " + n.height.to_string() + ")";
        } else if constexpr (std::is_same_v<T, scene::Circle>) {
          return "(circle " + n.radius.to_string() + " \"" + mode_name(n.mode) + "\" \"" + n.color +
                 "\")";
        } else {
          return "(place-image " + to_source(n.image) + " " + n.x.to_string() + " " +
                 n.y.to_string() + " " + to_source(n.scene) + ")";
        }
      },
      s.node());
}

nlohmann::json to_json(const Scene& s) {
  return std::visit(
      [](const auto& n) -> nlohmann::json {
        using T = std::decay_t<decltype(n)>;
        nlohmann::json j;
        if constexpr (std::is_same_v<T, scene::EmptyScene>) {
          j["type"] = "empty-scene";
          j["width"] = number_json(n.width);
          j["height"] = number_json(n.height);
        } else if constexpr (std::is_same_v<T, scene::Circle>) {
          j["type"] = "circle";
          j["radius"] = number_json(n.radius);
          j["mode"] = mode_name(n.mode);
          j["color"] = n.color;
        } else {
          j["type"] = "place-image";
          j["image"] = to_json(n.image);
          j["x"] = number_json(n.x);
          j["y"] = number_json(n.y);
          j["scene"] = to_json(n.scene);
        }
        return j;
      },
      s.node());
}

Scene scene_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw Error(ErrorKind::protocol, "scene: expected an object with a string `type`");
  }
  const std::string type = j["type"];
  auto field = [&j](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) throw Error(ErrorKind::protocol, std::string("scene: missing `") + name + "`");
    return j.at(name);
  };
  if (type == "empty-scene") {
    return empty_scene(number_from_json(field("width"), "width"),
                       number_from_json(field("height"), "height"));
  }
  if (type == "circle") {
    return circle(number_from_json(field("radius"), "radius"), field("mode").get<std::string>(),
                  field("color").get<std::string>());
  }
  if (type == "place-image") {
    return place_image(scene_from_json(field("image")), number_from_json(field("x"), "x"),
                       number_from_json(field("y"), "y"), scene_from_json(field("scene")));
  }
  throw Error(ErrorKind::protocol, "scene: unknown node type `" + type + "`");
}

std::string svg_number(const Number& n) {
  double d = n.to_double();
  if (!std::isfinite(d)) d = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", d);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

namespace {

void render_image(std::ostream& os, const Scene& image, const Number& x, const Number& y);

void render_scene(std::ostream& os, const Scene& s) {
  if (const auto* e = std::get_if<scene::EmptyScene>(&s.node())) {
    os << "<rect x=\"0\" y=\"0\" width=\"" << svg_number(e->width) << "\" height=\""
       << svg_number(e->height) << "\" fill=\"white\"/>\n";
  } else if (const auto* p = std::get_if<scene::PlaceImage>(&s.node())) {
    render_scene(os, p->scene);
    render_image(os, p->image, p->x, p->y);
  }
}

void render_image(std::ostream& os, const Scene& image, const Number& x, const Number& y) {
  if (const auto* c = std::get_if<scene::Circle>(&image.node())) {
    os << "<circle cx=\"" << svg_number(x) << "\" cy=\"" << svg_number(y) << "\" r=\""
       << svg_number(c->radius) << "\" ";
    if (c->mode == CircleMode::solid) {
      os << "fill=\"" << c->color << "\"/>\n";
    } else {
      os << "fill=\"none\" stroke=\"" << c->color << "\"/>\n";
    }
    return;
  }
  const Number w = image.width();
  const Number h = image.height();
  const Number two(2);
  os << "<svg x=\"" << svg_number(x - w / two) << "\" y=\"" << svg_number(y - h / two)
     << "\" width=\"" << svg_number(w) << "\" height=\"" << svg_number(h) << "\" viewBox=\"0 0 "
     << svg_number(w) << ' ' << svg_number(h) << "\" overflow=\"hidden\">\n";
  render_scene(os, image);
  os << "</svg>\n";
}

}  // namespace

std::string render_svg(const Scene& s) {
  std::ostringstream os;
  const std::string w = svg_number(s.width());
  const std::string h = svg_number(s.height());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  if (s.is_scene_rooted()) {
    render_scene(os, s);
  } else {
    const Number half = s.width() / Number(2);
    render_image(os, s, half, half);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace classlang
