#include <doctest.h>

#include <regex>

#include "classlang/scene.hpp"
#include "support.hpp"

using namespace classlang;

namespace {

Scene ball_frame(long x) {
  return place_image(circle(10, "solid", "red"), x, 200, empty_scene(400, 400));
}

}  // namespace

TEST_SUITE("images") {

TEST_CASE("circle") {
  const Scene s = circle(10, "solid", "red");
  const auto& c = std::get<scene::Circle>(s.node());
  CHECK(c.radius == Number(10));
  CHECK(c.mode == CircleMode::solid);
  CHECK(c.color == "red");
  CHECK_THROWS_AS(circle(0, "solid", "red"), Error);
  CHECK_THROWS_AS(circle(-2, "solid", "red"), Error);
  CHECK_THROWS_WITH(circle(10, "fuzzy", "red"), doctest::Contains("fuzzy"));
  CHECK_THROWS_AS(circle(10, "solid", "chartreuse-ish"), Error);
  CHECK(std::get<scene::Circle>(circle(10, "outline", "Red").node()).color == "red");
}

TEST_CASE("empty-scene") {
  CHECK(std::get<scene::EmptyScene>(empty_scene(400, 400).node()).width == Number(400));
  CHECK_NOTHROW(empty_scene(0, 0));
  CHECK_THROWS_AS(empty_scene(-1, 5), Error);
}

TEST_CASE("place-image") {
  Scene landed = place_image(circle(10, "solid", "red"), 390, 200, empty_scene(400, 400));
  CHECK(std::get<scene::PlaceImage>(landed.node()).x == Number(390));
  Scene nested = place_image(landed, 0, 0, landed);
  CHECK(nested.is_scene_rooted());
  CHECK_THROWS_AS(place_image(landed, 0, 0, circle(3, "solid", "red")), Error);
  CHECK_THROWS_AS(testsupport::eval_print("(place-image 5 1 1 (empty-scene 4 4))"), Error);
}

TEST_CASE("coordinates outside the scene are kept") {
  Scene s = place_image(circle(10, "solid", "red"), -50, 900, empty_scene(400, 400));
  const std::string svg = render_svg(s);
  CHECK(svg.find("cx=\"-50\"") != std::string::npos);
  CHECK(svg.find("cy=\"900\"") != std::string::npos);
}

TEST_CASE("svg of an empty scene") {
  const std::string svg = render_svg(empty_scene(400, 400));
  CHECK(svg.find("viewBox=\"0 0 400 400\"") != std::string::npos);
  CHECK(svg.find("<rect") != std::string::npos);
  CHECK(svg.find("<circle") == std::string::npos);
}

TEST_CASE("svg of the initial world frame") {
  const std::string svg = render_svg(ball_frame(10));
  std::regex circle_re("<circle[^>]*>");
  auto begin = std::sregex_iterator(svg.begin(), svg.end(), circle_re);
  REQUIRE(std::distance(begin, std::sregex_iterator()) == 1);
  const std::string c = begin->str();
  CHECK(c.find("cx=\"10\"") != std::string::npos);
  CHECK(c.find("cy=\"200\"") != std::string::npos);
  CHECK(c.find("r=\"10\"") != std::string::npos);
  CHECK(c.find("fill=\"red\"") != std::string::npos);
}

TEST_CASE("svg of the landed frame") {
  CHECK(render_svg(ball_frame(390)).find("cx=\"390\"") != std::string::npos);
}

TEST_CASE("outline circles are stroked") {
  Scene s = place_image(circle(5, "outline", "blue"), 1, 2, empty_scene(10, 10));
  const std::string svg = render_svg(s);
  CHECK(svg.find("fill=\"none\"") != std::string::npos);
  CHECK(svg.find("stroke=\"blue\"") != std::string::npos);
}

TEST_CASE("svg numbers") {
  CHECK(svg_number(Number::exact(1, 3)) == "0.333333");
  CHECK(svg_number(Number::exact(5, 2)) == "2.5");
  CHECK(svg_number(Number(7)) == "7");
  CHECK(svg_number(Number::inexact(-0.5)) == "-0.5");
}

TEST_CASE("svg is deterministic") {
  CHECK(render_svg(ball_frame(42)) == render_svg(ball_frame(42)));
}

TEST_CASE("scene JSON") {
  CHECK(to_json(ball_frame(10)).dump() ==
        R"({"image":{"color":"red","mode":"solid","radius":10,"type":"circle"},"scene":{"height":400,"type":"empty-scene","width":400},"type":"place-image","x":10,"y":200})");
  CHECK(to_json(place_image(circle(Number::exact(1, 2), "solid", "red"), Number::exact(1, 4), 0, empty_scene(1, 1)))["x"] == 0.25);
  Scene s = ball_frame(123);
  CHECK(scene_equal(scene_from_json(to_json(s)), s));
}

TEST_CASE("equality is structural, not visual") {
  Scene a = ball_frame(10);
  Scene b = place_image(circle(10, "solid", "red"), 10, 200, empty_scene(400, 400));
  CHECK(scene_equal(a, b));
  // Same picture, different construction.
  Scene c = place_image(empty_scene(0, 0), 0, 0, ball_frame(10));
  CHECK(render_svg(a) != render_svg(empty_scene(400, 400)));
  CHECK_FALSE(scene_equal(a, c));
}

TEST_CASE("scenes as values") {
  CHECK(testsupport::eval_print("(circle 10 \"solid\" \"red\")") == "(circle 10 \"solid\" \"red\")");
  CHECK(testsupport::eval_print("(image? (empty-scene 1 1))") == "true");
  CHECK(testsupport::eval_print("(equal? (empty-scene 1 1) (empty-scene 1 1))") == "true");
}

}
