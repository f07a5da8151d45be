#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "morreyheat/error.hpp"
#include "morreyheat/verify.hpp"

namespace morreyheat {
namespace {

using nlohmann::json;

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

void round_tree(json& j) {
  if (j.is_number_float()) {
    j = number(j.get<double>());
  } else if (j.is_array() || j.is_object()) {
    for (auto& v : j) round_tree(v);
  }
}

double read_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::invalid_argument, std::string("report field '") + what + "' is not a number");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::invalid_argument, "malformed report: " + message);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw Error(ErrorCode::invalid_argument, "unknown verdict '" + s + "'");
}

json to_json(const Thresholds& t) {
  return {{"ratio_constancy", t.ratio_constancy},         {"slope_exact", t.slope_exact},
          {"slope_upper", t.slope_upper},                 {"morrey_stability", t.morrey_stability},
          {"weak_exact", t.weak_exact},                   {"identity_exact", t.identity_exact},
          {"identity_quadrature", t.identity_quadrature}, {"embedding_spread", t.embedding_spread}};
}

Thresholds thresholds_from_json(const json& j, Thresholds base) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "thresholds must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const double v = read_number(value, key.c_str());
    if (key == "ratio_constancy") base.ratio_constancy = v;
    else if (key == "slope_exact") base.slope_exact = v;
    else if (key == "slope_upper") base.slope_upper = v;
    else if (key == "morrey_stability") base.morrey_stability = v;
    else if (key == "weak_exact") base.weak_exact = v;
    else if (key == "identity_exact") base.identity_exact = v;
    else if (key == "identity_quadrature") base.identity_quadrature = v;
    else if (key == "embedding_spread") base.embedding_spread = v;
    else throw Error(ErrorCode::invalid_argument, "unknown threshold '" + key + "'");
  }
  return base;
}

json to_json(const SpaceParams& p) {
  json r = p.r.is_infinite() ? json("inf") : json(p.r.value());
  return {{"n", p.n}, {"p", p.p}, {"q", p.q}, {"r", r}, {"s", p.s}, {"gamma", p.gamma}, {"k", p.k},
          {"alpha_order", p.alpha_order}};
}

SpaceParams space_params_from_json(const json& j) {
  require(j.is_object(), "params must be an object");
  SpaceParams p;
  p.n = j.at("n").get<int>();
  p.p = read_number(j.at("p"), "p");
  p.q = read_number(j.at("q"), "q");
  const double r = read_number(j.at("r"), "r");
  p.r = std::isinf(r) ? FineIndex::infinity() : FineIndex(r);
  p.s = read_number(j.at("s"), "s");
  p.gamma = read_number(j.at("gamma"), "gamma");
  p.k = j.value("k", 0);
  p.alpha_order = j.value("alpha_order", 0);
  return p;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& norms, double theoretical) {
  if (t.size() != norms.size()) throw Error(ErrorCode::invalid_argument, "t and norm samples differ in length");
  if (t.size() < 3) throw Error(ErrorCode::invalid_argument, "a decay fit needs at least 3 samples");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || (i > 0 && !(t[i] > t[i - 1])))
      throw Error(ErrorCode::invalid_argument, "t samples must be positive and strictly increasing");
    if (!(norms[i] > 0.0) || !std::isfinite(norms[i]))
      throw Error(ErrorCode::invalid_argument, "norm samples must be positive and finite");
  }
  const std::size_t m = t.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(t[i]);
    y[i] = std::log(norms[i]);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  DecayFit fit;
  fit.t_samples = t;
  fit.norm_samples = norms;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.theoretical = theoretical;
  for (std::size_t i = 0; i < m; ++i)
    fit.residual = std::max(fit.residual, std::abs(y[i] - (fit.intercept + fit.slope * x[i])));
  return fit;
}

json to_json(const Report& r) {
  json j;
  j["experiment"] = r.experiment;
  j["params"] = r.params ? to_json(*r.params) : json(nullptr);
  j["input"] = r.input;
  j["samples"] = json::array();
  for (const Sample& s : r.samples) j["samples"].push_back({{"t", s.t}, {"norm", s.norm}, {"error", s.error}});
  if (r.fit) {
    j["fit"] = {{"slope", r.fit->slope},
                {"intercept", r.fit->intercept},
                {"residual", r.fit->residual},
                {"theoretical", r.fit->theoretical}};
  } else {
    j["fit"] = nullptr;
  }
  j["verdict"] = to_string(r.verdict);
  j["details"] = r.details;
  j["settings"] = r.settings;
  round_tree(j);
  return j;
}

void validate_report(const json& j) {
  require(j.is_object(), "not an object");
  for (const char* key : {"experiment", "params", "input", "samples", "fit", "verdict", "settings"})
    require(j.contains(key), std::string("missing key '") + key + "'");
  require(j["experiment"].is_string(), "experiment must be a string");
  require(j["params"].is_null() || j["params"].is_object(), "params must be an object or null");
  require(j["samples"].is_array(), "samples must be an array");
  for (const auto& s : j["samples"]) {
    require(s.is_object() && s.contains("t") && s.contains("norm") && s.contains("error"),
            "samples need t, norm and error");
    read_number(s["t"], "t");
    read_number(s["norm"], "norm");
    read_number(s["error"], "error");
  }
  require(j["fit"].is_null() || (j["fit"].is_object() && j["fit"].contains("slope") && j["fit"].contains("intercept") &&
                                 j["fit"].contains("residual")),
          "fit needs slope, intercept and residual");
  require(j["verdict"].is_string(), "verdict must be a string");
  verdict_from_string(j["verdict"].get<std::string>());
  require(j["settings"].is_object(), "settings must be an object");
  if (!j["params"].is_null()) space_params_from_json(j["params"]);
}

Report report_from_json(const json& j) {
  validate_report(j);
  Report r;
  r.experiment = j["experiment"].get<std::string>();
  if (!j["params"].is_null()) r.params = space_params_from_json(j["params"]);
  r.input = j["input"];
  for (const auto& s : j["samples"])
    r.samples.push_back({read_number(s["t"], "t"), read_number(s["norm"], "norm"), read_number(s["error"], "error")});
  if (!j["fit"].is_null()) {
    DecayFit fit;
    fit.slope = read_number(j["fit"]["slope"], "slope");
    fit.intercept = read_number(j["fit"]["intercept"], "intercept");
    fit.residual = read_number(j["fit"]["residual"], "residual");
    if (j["fit"].contains("theoretical")) fit.theoretical = read_number(j["fit"]["theoretical"], "theoretical");
    for (const Sample& s : r.samples) {
      fit.t_samples.push_back(s.t);
      fit.norm_samples.push_back(s.norm);
    }
    r.fit = fit;
  }
  r.verdict = verdict_from_string(j["verdict"].get<std::string>());
  r.details = j.value("details", json::object());
  r.settings = j["settings"];
  return r;
}

std::string to_csv(const Report& r) {
  std::string out = "t,norm,error\n";
  for (const Sample& s : r.samples) out += fmt(s.t) + "," + fmt(s.norm) + "," + fmt(s.error) + "\n";
  return out;
}

}  // namespace morreyheat
