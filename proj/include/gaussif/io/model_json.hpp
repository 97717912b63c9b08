#pragma once

// Model description files (JSON syntax). One object per model:
//
//   {"model": "two-tone", "xi": 1.0, "eta": 3.0, "corr": [0.5, 0.2]}
//   {"model": "locally-stationary", "alpha": 0.5, "beta": 2.0}
//   {"model": "rank-one", "variance": 2.0, "amplitude": 1.0, "decay": 1.0,
//    "omega": 0.0, "chirp": 1.0}
//   {"model": "wss", "rho_x": [{"kind": "cos", "amp": 1, "freq": 1},
//                              {"kind": "gauss", "amp": 1, "rate": 1}],
//                    "rho_yx": [{"kind": "sin", "amp": 1, "freq": 1}]}
//   {"model": "atomic", "atoms": [{"xi": 2, "eta": 2, "w": [1, 0]}, ...]}
//   {"model": "numeric", "base": {...any of the above...}, "step_scale": 1e-5}
//
// Complex numbers are [re, im] pairs; a bare number is a real value.
// rank-one uses g(t) = amplitude exp(-decay t^2/2) exp(i(omega t + chirp t^2/2)).

#include <complex>
#include <string>

#include <json.hpp>

#include "gaussif/errors.hpp"
#include "gaussif/models.hpp"

namespace gaussif::io {

using nlohmann::json;

namespace detail {

inline double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("model field '") + key + "' is missing");
  if (!j.at(key).is_number()) throw ConfigError(std::string("model field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

inline cplx complex_value(const json& v, const char* key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(std::string("model field '") + key + "' must be a number or [re, im]");
}

inline LagFunction lag_terms(const json& j, const char* key, bool odd) {
  LagFunction f = LagFunction::zero();
  if (!j.contains(key)) return f;
  if (!j.at(key).is_array()) throw ConfigError(std::string("'") + key + "' must be a list of terms");
  for (const auto& term : j.at(key)) {
    const std::string kind = term.value("kind", "");
    if (!odd && kind == "cos")
      f = f + LagFunction::cosine(number(term, "amp"), number(term, "freq"));
    else if (!odd && kind == "gauss")
      f = f + LagFunction::gaussian(number(term, "amp"), number(term, "rate"));
    else if (odd && kind == "sin")
      f = f + LagFunction::sine(number(term, "amp"), number(term, "freq"));
    else
      throw ConfigError("unknown " + std::string(odd ? "odd" : "even") + " lag term kind '" + kind +
                        "' in '" + key + "'");
  }
  return f;
}

}  // namespace detail

inline CovarianceModel parse_model(const json& j) {
  if (!j.is_object() || !j.contains("model") || !j.at("model").is_string())
    throw ConfigError("model description needs a string field 'model'");
  const std::string name = j.at("model").get<std::string>();
  CovarianceModel m;
  if (name == "two-tone") {
    m = TwoTone{detail::number(j, "xi"), detail::number(j, "eta"),
                j.contains("corr") ? detail::complex_value(j.at("corr"), "corr") : cplx{}};
  } else if (name == "locally-stationary") {
    m = LocallyStationary{detail::number(j, "alpha"), detail::number(j, "beta")};
  } else if (name == "rank-one") {
    m = gaussian_chirp(detail::number_or(j, "amplitude", 1.0), detail::number_or(j, "decay", 0.0),
                       detail::number_or(j, "omega", 0.0), detail::number_or(j, "chirp", 0.0),
                       detail::number_or(j, "variance", 2.0));
  } else if (name == "wss") {
    if (!j.contains("rho_x")) throw ConfigError("wss model needs 'rho_x'");
    m = Wss{detail::lag_terms(j, "rho_x", false), detail::lag_terms(j, "rho_yx", true)};
  } else if (name == "atomic") {
    if (!j.contains("atoms") || !j.at("atoms").is_array())
      throw ConfigError("atomic model needs a list 'atoms'");
    SpectralAtomMeasure meas;
    for (const auto& a : j.at("atoms")) {
      if (!a.contains("w")) throw ConfigError("atom needs a weight 'w'");
      meas.atoms.push_back(
          {detail::number(a, "xi"), detail::number(a, "eta"), detail::complex_value(a.at("w"), "w")});
    }
    m = AtomicSpectral{std::move(meas)};
  } else if (name == "numeric") {
    if (!j.contains("base")) throw ConfigError("numeric model needs a 'base' model");
    m = numeric_from(parse_model(j.at("base")), detail::number_or(j, "step_scale", 1e-5));
  } else {
    throw ConfigError("unknown model '" + name + "'");
  }
  validate(m);
  return m;
}

inline CovarianceModel parse_model_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model description is not valid JSON: ") + e.what());
  }
  return parse_model(j);
}

}  // namespace gaussif::io
