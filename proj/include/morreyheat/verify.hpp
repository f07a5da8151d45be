#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "morreyheat/functions.hpp"
#include "morreyheat/heat.hpp"
#include "morreyheat/scaling.hpp"
#include "morreyheat/spaces.hpp"

namespace morreyheat {

inline constexpr const char* kToolVersion = "morreyheat 0.1.0";

/// Pass/fail policy. Every verdict reads its tolerance from here.
struct Thresholds {
  double ratio_constancy = 0.01;     // max/min - 1 of t^{-E} N(t), homogeneous sources
  double slope_exact = 0.02;         // |slope - E|, homogeneous sources
  double slope_upper = 0.05;         // slope <= E + this, generic sources (large t)
  double morrey_stability = 0.02;    // relative change of the last two counterexample norms
  double weak_exact = 1e-10;         // counterexample weak norm vs ((2J+1) v_n)^{1/p}
  double identity_exact = 1e-6;      // both identity sides from closed forms
  double identity_quadrature = 1e-3; // any identity side from quadrature
  double embedding_spread = 0.10;    // dilation spread of Morrey / Lorentz ratios
};

nlohmann::json to_json(const Thresholds& t);
Thresholds thresholds_from_json(const nlohmann::json& j, Thresholds base = {});

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct DecayFit {
  std::vector<double> t_samples;
  std::vector<double> norm_samples;
  double slope = 0.0;
  double intercept = 0.0;  // log C
  double residual = 0.0;   // max |log N - (intercept + slope log t)|
  double theoretical = 0.0;
};

/// Least squares of log N against log t. Needs >= 3 strictly increasing t and N > 0.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& norms, double theoretical);

struct Sample {
  double t = 0.0;
  double norm = 0.0;
  double error = 0.0;
};

struct Report {
  std::string experiment;
  std::optional<SpaceParams> params;
  nlohmann::json input;  // FunctionRep serialisation(s)
  std::vector<Sample> samples;
  std::optional<DecayFit> fit;
  Verdict verdict = Verdict::inconclusive;
  nlohmann::json details = nlohmann::json::object();
  nlohmann::json settings = nlohmann::json::object();  // thresholds, tolerances, provenance
};

/// Numbers are rounded to 12 significant digits.
nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
/// Columns t, norm, error.
std::string to_csv(const Report& r);
/// Throws invalid_argument when the document is not a well-formed report.
void validate_report(const nlohmann::json& j);

nlohmann::json to_json(const SpaceParams& p);
SpaceParams space_params_from_json(const nlohmann::json& j);

struct ExperimentOptions {
  Thresholds thresholds;
  HeatOptions heat;
  HeatNormOptions norm;
  Exec exec = Exec::parallel;
};

/// Nine points 2^-4 .. 2^4.
std::vector<double> default_t_grid();

enum class DecayTarget { lebesgue, weak, lorentz };

/// Norms of e^{t Delta}[|.|^{-gamma} f] (with params.k, params.alpha_order along e_1) in
/// L^s, L^{s,inf} or L^{s,r}, fitted against smoothing_exponent(params).
Report run_decay_experiment(const FunctionRep& f, const SpaceParams& params, const std::vector<double>& t_grid,
                            DecayTarget target = DecayTarget::lebesgue, const ExperimentOptions& opt = {});

struct IdentityOptions {
  ExperimentOptions base;
  /// Skip closed forms on both sides.
  bool force_quadrature = false;
};

/// ||f||_{LM^p_{1,1}} against (n - n/p)^{-1} int |f(x)| |x|^{-(n - n/p)} dx.
Report check_identity_lemma(const FunctionRep& f, double p, const IdentityOptions& opt = {});

/// C (1 + sum_{j=1}^J (2j+1)^{1/q} 10^{j(n/p - n/q)}) with the constant derived for g_J.
double counterexample_bound(int J, double p, double q, int n);

Report run_counterexample(const std::vector<int>& orders, double p, double q, int n, const ExperimentOptions& opt = {});

Report check_embedding(const std::vector<FunctionRep>& corpus, double p, double q, FineIndex r,
                       const ExperimentOptions& opt = {});
Report check_embedding(const FunctionRep& f, double p, double q, FineIndex r, const ExperimentOptions& opt = {});

/// One row per gamma: admissibility and, when admissible, a 3-point decay fit on |x|^{-n/p}.
Report scan_region(int n, double p, double q, double s, const std::vector<double>& gammas,
                   const ExperimentOptions& opt = {});

}  // namespace morreyheat
