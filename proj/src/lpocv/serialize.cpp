#include "lpocv/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "lpocv/errors.hpp"

namespace lpocv {

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep it recognisably floating so a reader does not narrow it to an integer
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

void write(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(v, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t require_size(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double require_number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) fail(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_array()) fail(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(ErrorCode::InvalidArgument, std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Json with_schema(Json j) {
  j["schema_version"] = kSchemaVersion;
  return j;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
}

Json model_to_json(const Model& m) {
  Json params = Json::object();
  switch (m.family()) {
    case Family::Histogram: params["D"] = m.param(); break;
    case Family::Trigonometric: params["K"] = m.param(); break;
    case Family::HaarScaling: params["j"] = m.param(); break;
    case Family::HaarWavelet: params["J"] = m.param(); break;
    case Family::PiecewisePolynomial:
      params["depth"] = m.param();
      params["r"] = m.degree_bound();
      break;
  }
  return {{"family", family_name(m.family())}, {"params", params}};
}

Model model_from_json(const Json& j) {
  const Json& fam = require(j, "family");
  if (!fam.is_string()) fail(ErrorCode::InvalidArgument, "model family must be a string");
  const std::string f = fam.get<std::string>();
  const Json& params = require(j, "params");
  if (f == family_name(Family::Histogram)) return Model::histogram(require_size(params, "D"));
  if (f == family_name(Family::Trigonometric)) return Model::trigonometric(require_size(params, "K"));
  if (f == family_name(Family::HaarScaling)) return Model::haar_scaling(static_cast<unsigned>(require_size(params, "j")));
  if (f == family_name(Family::HaarWavelet)) return Model::haar_wavelet(static_cast<unsigned>(require_size(params, "J")));
  if (f == family_name(Family::PiecewisePolynomial)) {
    return Model::piecewise_polynomial(static_cast<unsigned>(require_size(params, "depth")),
                                       static_cast<unsigned>(require_size(params, "r")));
  }
  fail(ErrorCode::InvalidArgument, "unknown model family '" + f + "'");
}

CollectionKind collection_kind_from_string(std::string_view s) {
  if (s == "pc") return CollectionKind::Pc;
  if (s == "pp") return CollectionKind::Pp;
  if (s == "tp") return CollectionKind::Tp;
  fail(ErrorCode::InvalidArgument, "unknown collection kind '" + std::string(s) + "' (expected pc, pp or tp)");
}

Json density_to_json(const DensitySpec& d) {
  Json j;
  j["kind"] = density_kind_name(d.kind());
  switch (d.kind()) {
    case DensityKind::PiecewiseConstant:
      j["heights"] = d.heights();
      j["breaks"] = d.piece_breaks();
      break;
    case DensityKind::HolderCusp:
      j["L"] = d.L();
      j["alpha"] = d.alpha();
      break;
    case DensityKind::TrigSmooth:
      j["cos"] = d.cos_coeffs();
      j["sin"] = d.sin_coeffs();
      break;
  }
  return j;
}

DensitySpec density_from_json(const Json& j) {
  const Json& kind = require(j, "kind");
  if (!kind.is_string()) fail(ErrorCode::InvalidArgument, "density kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "uniform") return DensitySpec::uniform();
  if (k == "piecewise_constant") return DensitySpec::piecewise_constant(number_array(j, "heights"), number_array(j, "breaks"));
  if (k == "holder_cusp") return DensitySpec::holder_cusp(require_number(j, "L"), require_number(j, "alpha"));
  if (k == "trig_smooth") {
    std::vector<double> c, s;
    if (j.contains("cos")) c = number_array(j, "cos");
    if (j.contains("sin")) s = number_array(j, "sin");
    return DensitySpec::trig_smooth(std::move(c), std::move(s));
  }
  fail(ErrorCode::InvalidArgument, "unknown density kind '" + k + "'");
}

PRule p_rule_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "auto") return PRule::automatic();
    if (s == "half") return PRule::fraction(0.5);
    if (s == "loo") return PRule::fixed(1);
    fail(ErrorCode::InvalidArgument, "unknown p rule '" + s + "'");
  }
  const Json& rule = require(j, "rule");
  if (!rule.is_string()) fail(ErrorCode::InvalidArgument, "p rule must be a string");
  const auto r = rule.get<std::string>();
  if (r == "auto") return PRule::automatic();
  if (r == "fixed") return PRule::fixed(require_size(j, "value"));
  if (r == "fraction") return PRule::fraction(require_number(j, "value"));
  fail(ErrorCode::InvalidArgument, "unknown p rule '" + r + "'");
}

Json p_rule_to_json(const PRule& r) {
  switch (r.kind) {
    case PRule::Kind::Auto: return {{"rule", "auto"}};
    case PRule::Kind::Fixed: return {{"rule", "fixed"}, {"value", static_cast<std::size_t>(r.value)}};
    case PRule::Kind::Fraction: return {{"rule", "fraction"}, {"value", r.value}};
  }
  return nullptr;
}

ExperimentConfig experiment_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "experiment config must be a JSON object");
  ExperimentConfig c;
  c.density = density_from_json(require(j, "density"));
  if (j.contains("collection")) {
    const Json& col = j.at("collection");
    if (!col.is_string()) fail(ErrorCode::InvalidArgument, "collection must be a string");
    c.collection = collection_kind_from_string(col.get<std::string>());
  }
  if (j.contains("phi")) c.collection_params.phi = require_number(j, "phi");
  if (j.contains("r")) c.collection_params.degree_bound = static_cast<unsigned>(require_size(j, "r"));
  if (j.contains("max_dim") && !j.at("max_dim").is_null()) c.collection_params.max_dim = require_size(j, "max_dim");
  if (j.contains("p")) c.p_rule = p_rule_from_json(j.at("p"));
  const Json& grid = require(j, "n_grid");
  if (!grid.is_array()) fail(ErrorCode::InvalidArgument, "n_grid must be an array");
  for (const auto& v : grid) {
    if (!v.is_number_integer() || v.get<long long>() < 2) fail(ErrorCode::InvalidArgument, "n_grid entries must be integers >= 2");
    c.n_grid.push_back(v.get<std::size_t>());
  }
  if (j.contains("replications")) c.replications = require_size(j, "replications");
  if (j.contains("seed")) c.seed = require(j, "seed").get<std::uint64_t>();
  if (j.contains("compare_loo")) c.compare_loo = require(j, "compare_loo").get<bool>();
  return c;
}

Json experiment_to_json(const ExperimentConfig& c) {
  Json j;
  j["density"] = density_to_json(c.density);
  j["collection"] = collection_kind_name(c.collection);
  j["phi"] = c.collection_params.phi;
  j["r"] = c.collection_params.degree_bound;
  j["max_dim"] = c.collection_params.max_dim ? Json(*c.collection_params.max_dim) : Json(nullptr);
  j["p"] = p_rule_to_json(c.p_rule);
  j["n_grid"] = c.n_grid;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["compare_loo"] = c.compare_loo;
  return j;
}

Json to_json(const LpoRisk& r) {
  return with_schema({{"model", r.model}, {"n", r.n}, {"p", r.p}, {"risk", r.value}});
}

Json to_json(const ProjectionEstimate& e) {
  std::vector<double> a(e.coeffs().begin(), e.coeffs().end());
  return with_schema({{"model", model_to_json(e.model())}, {"coefficients", a}, {"squared_norm", e.squared_norm()}});
}

Json to_json(const SelectionResult& r, const Collection& c) {
  Json curve = Json::array();
  Json risks = Json::array();
  for (const auto& pt : r.curve) {
    curve.push_back({{"index", pt.model_index}, {"model", model_to_json(c.models.at(pt.model_index))},
                     {"name", pt.model}, {"dim", pt.dim}, {"risk", pt.risk}});
    risks.push_back(pt.risk);
  }
  const auto& best = r.best();
  Json chosen = {{"index", best.model_index}, {"model", model_to_json(c.models.at(best.model_index))},
                 {"name", best.model}, {"dim", best.dim}, {"risk", best.risk}};
  return with_schema({{"n", r.n}, {"p", r.p}, {"collection", collection_kind_name(c.kind)}, {"chosen", chosen},
                      {"risks", risks}, {"curve", curve}, {"tied", r.tied}});
}

Json to_json(const AssumptionReport& r, const Collection& c, std::size_t n) {
  return with_schema({
      {"n", n},
      {"collection", collection_kind_name(c.kind)},
      {"models", c.models.size()},
      {"max_dim", c.max_dim},
      {"phi", r.phi},
      {"reg_bound", r.reg_bound},
      {"reg", {{"ok", r.reg_ok}, {"max_sup_phi_m", r.max_phi_sup}}},
      {"reg2", {{"ok", r.reg2_ok}, {"max_coefficient_sup", r.max_coefficient_sup}, {"bound", std::sqrt(r.reg_bound)}}},
      {"reg3", {{"ok", r.reg3_ok}, {"max_ratio", r.max_reg3_ratio}}},
      {"pol", {{"ok", r.pol_ok}, {"delta", r.pol_delta}, {"max_models_per_dim", r.max_models_per_dim}}},
      {"ad", {{"status", r.ad == AdStatus::VerifiedSufficientCondition ? "verified-sufficient-condition" : "unknown"},
              {"rho", r.density_lower_bound}}},
  });
}

Json to_json(const MomentReport& r, const Model& m) {
  return with_schema({{"model", model_to_json(m)}, {"n", r.n}, {"p", r.p}, {"mean", r.mean},
                      {"variance", r.variance}, {"bias", r.bias}});
}

Json to_json(const PenaltyDecomposition& d, const Model& m) {
  return with_schema({{"model", model_to_json(m)}, {"n", d.n}, {"p", d.p}, {"empirical_risk", d.empirical_risk},
                      {"penalty", d.lpo_penalty}, {"risk", d.lpo_risk}, {"overpenalization", overpen_factor(d.n, d.p)}});
}

Json to_json(const EpsilonSolution& e) {
  return {{"epsilon", e.epsilon}, {"zeta", e.zeta}, {"delta", e.delta}, {"delta_lo", e.delta_lo}, {"delta_hi", e.delta_hi}};
}

Json to_json(const PRange& r) {
  Json j = {{"epsilon", r.epsilon}, {"zeta", r.zeta}, {"alpha", r.alpha}, {"beta", r.beta},
            {"lower", r.lower},     {"upper", r.upper}, {"empty", r.empty}};
  if (!r.empty) {
    j["p_lo"] = r.p_lo;
    j["p_hi"] = r.p_hi;
  }
  return j;
}

Json to_json(const RatioReport& r, const ExperimentConfig& c) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr = {{"n", row.n},
               {"p", row.p},
               {"mean_risk", row.mean_risk},
               {"stderr", row.stderr_risk},
               {"oracle_risk", row.oracle_risk},
               {"oracle_model", row.oracle_model},
               {"oracle_dim", row.oracle_dim},
               {"ratio", row.ratio},
               {"ratio_finite", std::isfinite(row.ratio)},
               {"ci", {row.ci_low, row.ci_high}},
               {"mean_selected_dim", row.mean_dim}};
    if (row.loo_mean_risk) {
      jr["loo_mean_risk"] = *row.loo_mean_risk;
      jr["loo_ratio"] = *row.loo_ratio;
    }
    rows.push_back(std::move(jr));
  }
  return with_schema({{"experiment", "oracle-ratio"}, {"config", experiment_to_json(c)}, {"rows", rows}});
}

Json to_json(const SlopeReport& r, const ExperimentConfig& c) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"p", row.p}, {"mean_risk", row.mean_risk}, {"stderr", row.stderr_risk},
                    {"oracle_risk", row.oracle_risk}, {"mean_selected_dim", row.mean_dim}});
  }
  return with_schema({{"experiment", "adaptivity"}, {"config", experiment_to_json(c)}, {"slope", r.slope},
                      {"slope_stderr", r.slope_stderr}, {"intercept", r.intercept}, {"rows", rows}});
}

}  // namespace lpocv
