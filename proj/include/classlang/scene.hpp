#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "classlang/number.hpp"

namespace classlang {

enum class CircleMode { solid, outline };

class Scene;

namespace scene {

struct EmptyScene {
  Number width;
  Number height;
};

struct Circle {
  Number radius;
  CircleMode mode;
  std::string color;
};

struct PlaceImage;

}  // namespace scene

// Immutable image value. Equality is structural: two constructions that
// happen to look alike on screen are still different scenes.
class Scene {
 public:
  using Node = std::variant<scene::EmptyScene, scene::Circle, scene::PlaceImage>;

  const Node& node() const;
  // Scenes are what place-image composes onto: empty scenes and placements.
  bool is_scene_rooted() const;

  // Width and height of the bounding box used to centre this image.
  Number width() const;
  Number height() const;

  std::size_t hash() const;

 private:
  friend Scene make_scene(Node node);
  explicit Scene(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

namespace scene {

struct PlaceImage {
  Scene image;
  Number x;
  Number y;
  Scene scene;
};

}  // namespace scene

Scene make_scene(Scene::Node node);

// Constructors validate their arguments and throw runtime errors.
Scene circle(const Number& radius, std::string_view mode, std::string_view color);
Scene empty_scene(const Number& width, const Number& height);
Scene place_image(const Scene& image, const Number& x, const Number& y, const Scene& scene);

// The sixteen basic colour names (lowercase).
bool is_known_color(std::string_view name);

bool scene_equal(const Scene& a, const Scene& b);

// Source-like rendering: (place-image (circle 10 "solid" "red") 10 200 (empty-scene 400 400))
std::string to_source(const Scene& s);

// Schema shared with the wire protocol and frames.jsonl.
nlohmann::json to_json(const Scene& s);
Scene scene_from_json(const nlohmann::json& j);

// Deterministic SVG snapshot. Paint order follows nesting: the innermost
// background first, then each placed image.
std::string render_svg(const Scene& s);

// Fixed-point decimal with at most six fractional digits, trailing zeros removed.
std::string svg_number(const Number& n);

}  // namespace classlang
