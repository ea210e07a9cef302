#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pic/common.hpp"

namespace pic {

// One clustering run, serialized as a single JSON line.
struct RunRecord {
  std::string dataset;
  double per = 0.0;
  std::uint64_t seed = 0;
  int trial = 0;
  double beta_tilde = 0.1;
  Index k_nn = 9;
  Index clusters = 0;
  double beta = 0.0;
  std::vector<double> omega;
  std::optional<double> acc;
  std::optional<double> nmi;
  std::optional<double> wall_time_ms;  // only when timing capture is requested

  bool operator==(const RunRecord&) const = default;
};

inline nlohmann::ordered_json to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["per"] = r.per;
  j["seed"] = r.seed;
  j["trial"] = r.trial;
  j["beta_tilde"] = r.beta_tilde;
  j["k_nn"] = r.k_nn;
  j["clusters"] = r.clusters;
  j["beta"] = r.beta;
  j["omega"] = r.omega;
  if (r.acc) j["acc"] = *r.acc;
  if (r.nmi) j["nmi"] = *r.nmi;
  if (r.wall_time_ms) j["wall_time_ms"] = *r.wall_time_ms;
  return j;
}

inline std::string to_line(const RunRecord& r) { return to_json(r).dump(); }

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.dataset = j.at("dataset").get<std::string>();
    r.per = j.at("per").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trial = j.at("trial").get<int>();
    r.beta_tilde = j.at("beta_tilde").get<double>();
    r.k_nn = j.at("k_nn").get<Index>();
    r.clusters = j.at("clusters").get<Index>();
    r.beta = j.at("beta").get<double>();
    r.omega = j.at("omega").get<std::vector<double>>();
    if (j.contains("acc")) r.acc = j["acc"].get<double>();
    if (j.contains("nmi")) r.nmi = j["nmi"].get<double>();
    if (j.contains("wall_time_ms")) r.wall_time_ms = j["wall_time_ms"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

inline RunRecord record_from_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed run record: ") + e.what());
  }
  return record_from_json(j);
}

}  // namespace pic
