#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lovo/errors.hpp"
#include "lovo/solver.hpp"

namespace lovo {

namespace {

nlohmann::json outcome_json(const StepOutcome& o) {
  nlohmann::json j;
  j["k"] = o.k;
  j["kind"] = std::string(to_string(o.kind));
  j["rho"] = o.rho;
  j["rho_cheap"] = o.rho_was_cheap;
  j["delta"] = o.delta_after;
  j["Delta"] = o.Delta_after;
  j["index"] = o.index;
  j["fx"] = o.fx;
  j["evals_total"] = o.evals_total;
  j["fx_certified"] = o.fx_certified;
  j["evaluated"] = o.evaluated;
  j["accepted"] = o.accepted;
  j["swapped"] = o.index_swapped;
  j["altmov"] = o.altmov;
  j["step_norm"] = o.step_norm;
  j["pi"] = o.pi;
  j["delta_before"] = o.delta_before;
  j["Delta_before"] = o.Delta_before;
  j["gamma_before"] = o.gamma_before;
  j["gamma"] = o.gamma_after;
  if (o.rho_hat_check) j["rho_hat_check"] = *o.rho_hat_check;
  return j;
}

}  // namespace

std::string outcome_to_json(const StepOutcome& outcome) { return outcome_json(outcome).dump(); }

std::string history_to_jsonl(const std::vector<StepOutcome>& history) {
  std::string out;
  for (const auto& o : history) {
    out += outcome_json(o).dump();
    out += '\n';
  }
  return out;
}

std::string config_to_json(const SolverConfig& c) {
  nlohmann::json j;
  j["beta"] = c.beta;
  j["delta0"] = c.delta0;
  j["Delta0"] = c.Delta0;
  j["tau1"] = c.tau1;
  j["tau2"] = c.tau2;
  j["tau3"] = c.tau3;
  j["tau4"] = c.tau4;
  j["eta"] = c.eta;
  j["eta1"] = c.eta1;
  j["eta2"] = c.eta2;
  j["gamma_max"] = c.gamma_max;
  j["nrhomax"] = c.nrhomax;
  j["use_cheap_rho"] = c.use_cheap_rho;
  j["delta_min"] = c.delta_min;
  j["maxalt"] = c.maxalt ? nlohmann::json(*c.maxalt) : nlohmann::json(nullptr);
  j["maxcrit"] = c.maxcrit ? nlohmann::json(*c.maxcrit) : nlohmann::json(nullptr);
  j["budget"] = c.budget ? nlohmann::json(*c.budget) : nlohmann::json(nullptr);
  j["metering"] = c.metering == Metering::kComponent ? "component" : "fmin";
  j["theta_diag"] = c.theta_diag;
  j["tie_tolerance"] = c.tie_tolerance;
  return j.dump(2);
}

SolverConfig config_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SolverConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "beta") c.beta = value.get<double>();
      else if (key == "delta0") c.delta0 = value.get<double>();
      else if (key == "Delta0") c.Delta0 = value.get<double>();
      else if (key == "tau1") c.tau1 = value.get<double>();
      else if (key == "tau2") c.tau2 = value.get<double>();
      else if (key == "tau3") c.tau3 = value.get<double>();
      else if (key == "tau4") c.tau4 = value.get<double>();
      else if (key == "eta") c.eta = value.get<double>();
      else if (key == "eta1") c.eta1 = value.get<double>();
      else if (key == "eta2") c.eta2 = value.get<double>();
      else if (key == "gamma_max") c.gamma_max = value.get<int>();
      else if (key == "nrhomax") c.nrhomax = value.get<int>();
      else if (key == "use_cheap_rho") c.use_cheap_rho = value.get<bool>();
      else if (key == "delta_min") c.delta_min = value.get<double>();
      else if (key == "maxalt") c.maxalt = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
      else if (key == "maxcrit") c.maxcrit = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
      else if (key == "budget") c.budget = value.is_null() ? std::nullopt : std::optional<long long>(value.get<long long>());
      else if (key == "metering") {
        const auto m = value.get<std::string>();
        if (m == "component") c.metering = Metering::kComponent;
        else if (m == "fmin") c.metering = Metering::kFmin;
        else throw ConfigError("metering must be \"component\" or \"fmin\"");
      }
      else if (key == "theta_diag") c.theta_diag = value.get<double>();
      else if (key == "tie_tolerance") c.tie_tolerance = value.get<double>();
      else throw ConfigError("unknown config key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace lovo
