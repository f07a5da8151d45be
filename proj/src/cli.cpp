#include "morreyheat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "morreyheat/error.hpp"

namespace morreyheat::cli {
namespace {

using nlohmann::json;

[[noreturn]] void usage(const std::string& message) { throw CliUsageError{message, kExitUsage, {}}; }

FineIndex parse_fine_index(const std::string& text, const char* flag) {
  if (text == "inf") return FineIndex::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return FineIndex(v);
  } catch (const std::exception&) {
    usage(std::string(flag) + ": expected a number >= 1 or 'inf', got '" + text + "'");
  }
}

std::vector<int> alpha_vector(int n, int order) {
  std::vector<int> a(n, 0);
  a[0] = order;
  return a;
}

json load_json(const std::string& text) {
  if (text.empty()) usage("--input is required");
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      usage(std::string("--input: invalid JSON (") + e.what() + ")");
    }
  }
  std::ifstream in(text);
  if (!in) usage("--input: '" + text + "' is neither inline JSON nor a readable file");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    usage("--input: invalid JSON in '" + text + "' (" + e.what() + ")");
  }
}

FunctionRep load_function(const json& j, std::optional<int> n) {
  try {
    const FunctionRep f = function_from_json(j, n);
    if (n && f.dim() != *n) usage("--n: input has dimension " + std::to_string(f.dim()) + ", not " + std::to_string(*n));
    return f;
  } catch (const Error& e) {
    usage(std::string("--input: ") + e.what());
  }
}

HeatTarget heat_target_of(const std::string& target, double s, FineIndex r) {
  if (target == "lebesgue") return HeatTarget::lebesgue(s);
  if (target == "weak") return HeatTarget::weak(s);
  return HeatTarget::lorentz(s, r);
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::inadmissible:
    case ErrorCode::unsupported_dimension:
    case ErrorCode::unsupported_order:
    case ErrorCode::non_integrable_weight:
    case ErrorCode::overlap_detected:
      return true;
    default:
      return false;
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string scan_csv(const Report& rep) {
  std::string out = "gamma,admissible,lower,upper,slope,theoretical,verdict\n";
  for (const auto& row : rep.details.at("rows")) {
    const bool adm = row.at("admissible").get<bool>();
    out += fmt(row.at("gamma").get<double>()) + "," + (adm ? "true" : "false") + "," +
           fmt(row.at("lower").get<double>()) + "," + fmt(row.at("upper").get<double>()) + ",";
    if (adm) {
      out += fmt(row.at("slope").get<double>()) + "," + fmt(row.at("theoretical").get<double>()) + "," +
             row.at("verdict").get<std::string>();
    } else {
      out += ",,";
    }
    out += "\n";
  }
  return out;
}

}  // namespace

CliConfig parse(const std::vector<std::string>& args) {
  CliConfig c;
  CLI::App app{"Morrey-type norms and weighted heat smoothing experiments", "morreyheat"};
  app.require_subcommand(1, 1);

  std::optional<int> n;
  double p = 2.0, q = 1.0, s = 2.0, gamma = 0.0;
  int k = 0, alpha = 0;
  std::string r_text = "inf", format = "json", output;
  double rel_tol = c.options.norm.norm.rel_tol;
  std::size_t grid_points = c.options.norm.norm.grid_points;
  double mesh_tolerance = c.options.norm.mesh_tolerance;
  double resolution = c.options.heat.resolution;
  double tail_widths = c.options.heat.tail_widths;
  std::string thresholds, backend;
  std::vector<double> times;
  std::vector<double> gammas;
  std::vector<int> orders{2, 3, 4, 5, 6};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--output", output, "Write the report here instead of stdout");
    sub->add_option("--format", format, "json or csv")->capture_default_str();
    sub->add_option("--rel-tol", rel_tol, "Relative tolerance of the norm engines")->capture_default_str();
    sub->add_option("--grid-points", grid_points, "Sup-search grid size")->capture_default_str();
    sub->add_option("--thresholds", thresholds, "JSON object overriding pass thresholds");
  };
  auto heat_opts = [&](CLI::App* sub) {
    sub->add_option("--resolution", resolution, "Grid backend: points per sqrt(t)")->capture_default_str();
    sub->add_option("--tail-widths", tail_widths, "Grid backend: tail margin in sqrt(t)")->capture_default_str();
    sub->add_option("--mesh-tolerance", mesh_tolerance, "Allowed disagreement of two mesh resolutions")
        ->capture_default_str();
  };

  CLI::App* norm = app.add_subcommand("norm", "Norm of a function in one of the function spaces");
  norm->add_option("--space", c.space, "lebesgue, weak, lorentz, local-morrey, morrey or global-morrey")
      ->capture_default_str();
  norm->add_option("--n", n, "Dimension (taken from the input when omitted)");
  norm->add_option("--p", p)->required();
  norm->add_option("--q", q)->capture_default_str();
  norm->add_option("--r", r_text, "Fine index, a number >= 1 or inf")->capture_default_str();
  norm->add_option("--input", c.input, "FunctionRep JSON, inline or a file path")->required();
  common(norm);

  CLI::App* heat = app.add_subcommand("heat", "Norms of d_t^k d^alpha e^{t Delta}[|x|^{-gamma} f]");
  heat->add_option("--input", c.input)->required();
  heat->add_option("--n", n);
  heat->add_option("--gamma", gamma)->capture_default_str();
  heat->add_option("--t", times, "Times (comma separated)")->delimiter(',')->required();
  heat->add_option("--k", k)->capture_default_str();
  heat->add_option("--alpha", alpha, "Order of the derivative along e_1")->capture_default_str();
  heat->add_option("--target", c.target, "lebesgue, weak or lorentz")->capture_default_str();
  heat->add_option("--s", s, "Target exponent")->required();
  heat->add_option("--r", r_text)->capture_default_str();
  heat->add_option("--backend", backend, "closed-form, radial-quadrature or grid-convolution");
  common(heat);
  heat_opts(heat);

  CLI::App* smooth = app.add_subcommand("verify-smoothing", "Decay-exponent fit against the smoothing estimate");
  smooth->add_option("--input", c.input)->required();
  smooth->add_option("--n", n);
  smooth->add_option("--p", p)->required();
  smooth->add_option("--q", q)->required();
  smooth->add_option("--s", s)->required();
  smooth->add_option("--gamma", gamma)->required();
  smooth->add_option("--k", k)->capture_default_str();
  smooth->add_option("--alpha", alpha)->capture_default_str();
  smooth->add_option("--r", r_text)->capture_default_str();
  smooth->add_option("--target", c.target)->capture_default_str();
  smooth->add_option("--t-grid", times, "Times (comma separated; default 2^-4..2^4)")->delimiter(',');
  common(smooth);
  heat_opts(smooth);

  CLI::App* identity = app.add_subcommand("verify-identity", "Local Morrey-type norm against the weighted integral");
  identity->add_option("--input", c.input)->required();
  identity->add_option("--n", n);
  identity->add_option("--p", p)->required();
  identity->add_flag("--force-quadrature", c.force_quadrature, "Skip closed forms on both sides");
  common(identity);

  CLI::App* cex = app.add_subcommand("counterexample", "Truncations of the spaced-balls function");
  cex->add_option("--n", n);
  cex->add_option("--p", p)->required();
  cex->add_option("--q", q)->required();
  cex->add_option("--orders", orders, "Truncation orders J (comma separated)")->delimiter(',')->capture_default_str();
  cex->add_option("--max-order", c.max_order, "Largest accepted J")->capture_default_str();
  common(cex);

  CLI::App* scan = app.add_subcommand("scan", "Admissibility and decay fits over a gamma grid");
  scan->add_option("--n", n)->required();
  scan->add_option("--p", p)->required();
  scan->add_option("--q", q)->required();
  scan->add_option("--s", s)->required();
  scan->add_option("--gammas", gammas, "Comma separated")->delimiter(',');
  common(scan);
  heat_opts(scan);

  CLI::App* emb = app.add_subcommand("embedding", "Global Morrey-type norm against the Lorentz norm");
  emb->add_option("--input", c.input, "One FunctionRep or an array of them")->required();
  emb->add_option("--n", n);
  emb->add_option("--p", p)->required();
  emb->add_option("--q", q)->required();
  emb->add_option("--r", r_text)->capture_default_str();
  common(emb);

  try {
    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw CliUsageError{"", 0, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw CliUsageError{"", 0, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    usage(msg);
  }

  c.command = app.get_subcommands().front()->get_name();
  if (format == "json") c.format = Format::json;
  else if (format == "csv") c.format = Format::csv;
  else usage("--format: expected json or csv, got '" + format + "'");
  if (!output.empty()) c.output = output;
  if (!backend.empty()) c.backend = backend;
  if (!thresholds.empty()) c.thresholds = thresholds;
  if (c.command == "norm" &&
      !(c.space == "lebesgue" || c.space == "weak" || c.space == "lorentz" || c.space == "local-morrey" ||
        c.space == "morrey" || c.space == "global-morrey"))
    usage("--space: unknown space '" + c.space + "'");
  if (!(c.target == "lebesgue" || c.target == "weak" || c.target == "lorentz"))
    usage("--target: expected lebesgue, weak or lorentz, got '" + c.target + "'");
  if (c.backend && *c.backend != "closed-form" && *c.backend != "radial-quadrature" &&
      *c.backend != "grid-convolution")
    usage("--backend: unknown backend '" + *c.backend + "'");
  if (!(rel_tol > 0.0)) usage("--rel-tol: must be positive");
  if (!(mesh_tolerance > 0.0)) usage("--mesh-tolerance: must be positive");
  if (!(resolution > 0.0)) usage("--resolution: must be positive");
  if (!(tail_widths > 0.0)) usage("--tail-widths: must be positive");
  if (grid_points < 8) usage("--grid-points: must be at least 8");

  c.params.n = n.value_or(c.command == "counterexample" ? 1 : 0);
  c.params.p = p;
  c.params.q = q;
  c.params.s = s;
  c.params.gamma = gamma;
  c.params.k = k;
  c.params.alpha_order = alpha;
  c.params.r = parse_fine_index(r_text, "--r");
  c.times = times;
  c.gammas = gammas;
  c.orders = orders;
  c.options.norm.norm.rel_tol = rel_tol;
  c.options.norm.norm.grid_points = grid_points;
  c.options.norm.mesh_tolerance = mesh_tolerance;
  c.options.heat.resolution = resolution;
  c.options.heat.tail_widths = tail_widths;
  if (c.thresholds) {
    try {
      c.options.thresholds = thresholds_from_json(json::parse(*c.thresholds));
    } catch (const json::exception& e) {
      usage(std::string("--thresholds: invalid JSON (") + e.what() + ")");
    } catch (const Error& e) {
      usage(std::string("--thresholds: ") + e.what());
    }
  }
  if (c.command == "counterexample")
    for (int J : c.orders)
      if (J > c.max_order) usage("--orders: J = " + std::to_string(J) + " exceeds --max-order " + std::to_string(c.max_order));

  c.resolved = {{"command", c.command},
                {"space", c.space},
                {"target", c.target},
                {"input", c.input},
                {"format", format},
                {"output", output.empty() ? json(nullptr) : json(output)},
                {"n", n ? json(*n) : json(nullptr)},
                {"p", p},
                {"q", q},
                {"r", r_text},
                {"s", s},
                {"gamma", gamma},
                {"k", k},
                {"alpha", alpha},
                {"times", times},
                {"gammas", gammas},
                {"orders", orders},
                {"max_order", c.max_order},
                {"backend", backend.empty() ? json(nullptr) : json(backend)},
                {"force_quadrature", c.force_quadrature},
                {"thresholds", to_json(c.options.thresholds)}};
  return c;
}

int dispatch(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const std::optional<int> n = c.params.n > 0 ? std::optional<int>(c.params.n) : std::nullopt;
  Report rep;
  SpaceParams params = c.params;

  if (c.command == "norm") {
    const FunctionRep f = load_function(load_json(c.input), n);
    params.n = f.dim();
    const NormOptions& no = c.options.norm.norm;
    NormValue v;
    if (c.space == "lebesgue") v = lebesgue_norm(f, params.p, no);
    else if (c.space == "weak") v = weak_lebesgue_norm(f, params.p, no);
    else if (c.space == "lorentz") v = lorentz_norm(f, params.p, params.r, no);
    else if (c.space == "local-morrey") v = local_morrey_type_norm(f, params.p, params.q, params.r, no);
    else if (c.space == "morrey") v = morrey_norm(f, params.p, params.q, no);
    else v = global_morrey_type_norm(f, params.p, params.q, params.r, no);
    rep.experiment = "norm";
    rep.params = params;
    rep.input = to_json(f);
    rep.samples.push_back({0.0, v.value, v.error});
    rep.details = {{"space", c.space}, {"value", v.value}, {"error", v.error}, {"method", to_string(v.method)}};
    if (v.witness) rep.details["witness"] = {{"center", v.witness->center}, {"scale", v.witness->scale}};
    rep.verdict = Verdict::pass;
  } else if (c.command == "heat") {
    const FunctionRep f = load_function(load_json(c.input), n);
    params.n = f.dim();
    HeatOptions ho = c.options.heat;
    if (c.backend) {
      if (*c.backend == "closed-form") ho.backend = HeatBackend::closed_form;
      else if (*c.backend == "radial-quadrature") ho.backend = HeatBackend::radial_quadrature;
      else ho.backend = HeatBackend::grid_convolution;
    }
    const HeatTarget target = heat_target_of(c.target, params.s, params.r);
    rep.experiment = "heat";
    rep.params = params;
    rep.input = to_json(f);
    json backends = json::array();
    for (double t : c.times) {
      const HeatField field = apply_weighted_heat(f, params.gamma, t, params.k, alpha_vector(f.dim(), params.alpha_order), ho);
      const NormValue v = heat_norm(field, target, c.options.norm);
      rep.samples.push_back({t, v.value, v.error});
      backends.push_back(to_string(field.backend()));
    }
    rep.details = {{"target", c.target}, {"backends", backends}};
    rep.verdict = Verdict::pass;
  } else if (c.command == "verify-smoothing") {
    const FunctionRep f = load_function(load_json(c.input), n);
    params.n = f.dim();
    const DecayTarget target = c.target == "lebesgue" ? DecayTarget::lebesgue
                               : c.target == "weak"   ? DecayTarget::weak
                                                      : DecayTarget::lorentz;
    rep = run_decay_experiment(f, params, c.times.empty() ? default_t_grid() : c.times, target, c.options);
  } else if (c.command == "verify-identity") {
    const FunctionRep f = load_function(load_json(c.input), n);
    IdentityOptions io;
    io.base = c.options;
    io.force_quadrature = c.force_quadrature;
    rep = check_identity_lemma(f, params.p, io);
  } else if (c.command == "counterexample") {
    rep = run_counterexample(c.orders, params.p, params.q, params.n, c.options);
    params.s = params.p;
    rep.params = params;
  } else if (c.command == "scan") {
    rep = scan_region(params.n, params.p, params.q, params.s, c.gammas, c.options);
    rep.params = params;
  } else if (c.command == "embedding") {
    const json j = load_json(c.input);
    std::vector<FunctionRep> corpus;
    if (j.is_array()) {
      for (const auto& item : j) corpus.push_back(load_function(item, n));
    } else {
      corpus.push_back(load_function(j, n));
    }
    rep = check_embedding(corpus, params.p, params.q, params.r, c.options);
  } else {
    usage("unknown command '" + c.command + "'");
  }
  rep.settings["cli"] = c.resolved;

  std::string text;
  if (c.format == Format::json) text = to_json(rep).dump(2) + "\n";
  else if (c.command == "scan") text = scan_csv(rep);
  else text = to_csv(rep);
  if (c.output) {
    std::ofstream file(*c.output);
    if (!file) usage("--output: cannot write '" + *c.output + "'");
    file << text;
  } else {
    out << text;
  }
  if (rep.verdict != Verdict::pass) err << "verdict: " << to_string(rep.verdict) << "\n";
  return rep.verdict == Verdict::pass ? kExitPass : kExitFail;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig config;
  try {
    config = parse(args);
  } catch (const CliUsageError& e) {
    if (e.status == 0) {
      out << e.help;
      return kExitPass;
    }
    err << "error: " << e.message << "\n";
    return kExitUsage;
  }
  try {
    return dispatch(config, out, err);
  } catch (const CliUsageError& e) {
    err << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace morreyheat::cli
