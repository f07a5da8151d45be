#include <string>

#include "morreyheat/error.hpp"
#include "morreyheat/functions.hpp"

namespace morreyheat {
namespace {

using nlohmann::json;

json ball_json(const Ball& b) { return json::array({b.center, b.radius}); }

Ball ball_from_json(const json& j) {
  if (j.is_object()) return {j.at("center").get<Point>(), j.at("radius").get<double>()};
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::invalid_argument, "ball must be [[centre...], radius]");
  Point c = j[0].is_array() ? j[0].get<Point>() : Point{j[0].get<double>()};
  return {std::move(c), j[1].get<double>()};
}

std::optional<int> inferred_dim(const json& j) {
  if (j.contains("dim")) return j.at("dim").get<int>();
  if (j.contains("center")) return static_cast<int>(j.at("center").size());
  if (j.contains("origin")) return static_cast<int>(j.at("origin").size());
  if (j.contains("balls") && !j.at("balls").empty()) return static_cast<int>(ball_from_json(j.at("balls")[0]).center.size());
  if (j.contains("inner")) return inferred_dim(j.at("inner"));
  return std::nullopt;
}

FunctionRep parse(const json& j, std::optional<int> hint) {
  if (!j.is_object() || !j.contains("variant"))
    throw Error(ErrorCode::invalid_argument, "function JSON needs a \"variant\" field");
  const std::string v = j.at("variant").get<std::string>();
  const double amp = j.value("amplitude", 1.0);
  std::optional<int> dim = inferred_dim(j);
  if (!dim) dim = hint;
  auto need_dim = [&]() {
    if (!dim) throw Error(ErrorCode::invalid_argument, v + " needs \"dim\" or a --n value");
    return *dim;
  };
  if (v == "RadialPower") {
    std::optional<double> in, out;
    if (j.contains("inner_cut") && !j.at("inner_cut").is_null()) in = j.at("inner_cut").get<double>();
    if (j.contains("outer_cut") && !j.at("outer_cut").is_null()) out = j.at("outer_cut").get<double>();
    return FunctionRep::radial_power(need_dim(), j.at("a").get<double>(), in, out, amp);
  }
  if (v == "GaussianBump") {
    Point c = j.contains("center") ? j.at("center").get<Point>() : zero_point(need_dim());
    return FunctionRep::gaussian(std::move(c), j.value("width", 1.0), amp);
  }
  if (v == "IndicatorBallUnion") {
    std::vector<Ball> balls;
    for (const json& b : j.at("balls")) balls.push_back(ball_from_json(b));
    return FunctionRep::indicator(need_dim(), std::move(balls), amp);
  }
  if (v == "SpacedBallsG") return FunctionRep::spaced_balls(need_dim(), j.at("J").get<int>(), amp);
  if (v == "GridSample") {
    GridSample g;
    g.origin = j.at("origin").get<Point>();
    g.spacing = j.at("spacing").get<double>();
    g.extent = j.at("extent").get<std::vector<std::size_t>>();
    g.values = j.at("values").get<std::vector<double>>();
    return FunctionRep::grid(std::move(g), amp);
  }
  if (v == "Weighted") {
    return FunctionRep::weighted(j.at("gamma").get<double>(), parse(j.at("inner"), dim), amp);
  }
  throw Error(ErrorCode::invalid_argument, "unknown variant \"" + v + "\"");
}

}  // namespace

json to_json(const FunctionRep& f) {
  json j;
  j["variant"] = f.variant_name();
  j["dim"] = f.dim();
  j["amplitude"] = f.amplitude();
  std::visit(
      [&j](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, RadialPower>) {
          j["a"] = rep.exponent;
          if (rep.inner_cut) j["inner_cut"] = *rep.inner_cut;
          if (rep.outer_cut) j["outer_cut"] = *rep.outer_cut;
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          j["center"] = rep.center;
          j["width"] = rep.width;
        } else if constexpr (std::is_same_v<T, IndicatorBallUnion>) {
          j["balls"] = json::array();
          for (const Ball& b : rep.balls) j["balls"].push_back(ball_json(b));
        } else if constexpr (std::is_same_v<T, SpacedBallsG>) {
          j["J"] = rep.order;
        } else if constexpr (std::is_same_v<T, GridSample>) {
          j["origin"] = rep.origin;
          j["spacing"] = rep.spacing;
          j["extent"] = rep.extent;
          j["values"] = rep.values;
        } else {
          j["gamma"] = rep.gamma;
          j["inner"] = to_json(*rep.inner);
        }
      },
      f.variant());
  return j;
}

FunctionRep function_from_json(const nlohmann::json& j, std::optional<int> dim_hint) {
  try {
    return parse(j, dim_hint);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed function JSON: ") + e.what());
  }
}

}  // namespace morreyheat
