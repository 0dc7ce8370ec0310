#include "pml/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pml {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<double> doubles_at(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw std::invalid_argument(std::string("missing array field '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("non-numeric entry in '") + key + "'");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string distribution_to_json(const Distribution& dist) {
  json j;
  j["probs"] = dist.probs();
  return j.dump(2) + "\n";
}

Distribution distribution_from_json(const std::string& text) {
  return Distribution(doubles_at(parse(text), "probs"));
}

std::string sample_set_to_json(const SampleSet& samples) {
  json j;
  j["counts"] = samples.counts;
  return j.dump(2) + "\n";
}

SampleSet sample_set_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("counts") || !j["counts"].is_array()) {
    throw std::invalid_argument("missing array field 'counts'");
  }
  SampleSet s;
  for (const auto& v : j["counts"]) {
    if (!v.is_number_unsigned()) {
      throw std::invalid_argument("counts must be nonnegative integers");
    }
    s.counts.push_back(v.get<std::uint64_t>());
  }
  return s;
}

std::string mechanism_to_json(const Mechanism& mech) {
  json j;
  j["matrix"] = mech.matrix();
  return j.dump(2) + "\n";
}

std::string design_result_to_json(const DesignResult& result) {
  json j;
  j["matrix"] = result.mechanism.matrix();
  j["meta"] = {{"eps", result.eps},
               {"beta", result.beta},
               {"eps_prime", result.eps_prime},
               {"path", result.path}};
  return j.dump(2) + "\n";
}

Mechanism mechanism_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("matrix") || !j["matrix"].is_array()) {
    throw std::invalid_argument("missing array field 'matrix'");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : j["matrix"]) {
    if (!row.is_array()) throw std::invalid_argument("matrix rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw std::invalid_argument("non-numeric matrix entry");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return Mechanism(std::move(rows));
}

std::string leakage_profile_to_json(const LeakageProfile& profile) {
  json j;
  j["per_outcome"] = profile.per_outcome;
  j["eps_min"] = profile.eps_min;
  j["output_indices"] = profile.output_indices;
  j["excluded_outcomes"] = profile.excluded_outcomes;
  j["output_dist"] = profile.output_dist;
  return j.dump(2) + "\n";
}

std::string guarantee_to_json(const PrivacyGuarantee& g) {
  json j;
  j["eps"] = g.eps;
  j["delta"] = g.delta;
  j["provenance"] = to_string(g.provenance);
  return j.dump(2) + "\n";
}

PrivacyGuarantee guarantee_from_json(const std::string& text) {
  const json j = parse(text);
  PrivacyGuarantee g;
  if (!j.contains("eps") || !j.contains("delta") || !j.contains("provenance")) {
    throw std::invalid_argument("guarantee JSON needs eps, delta, provenance");
  }
  g.eps = j["eps"].get<double>();
  g.delta = j["delta"].get<double>();
  g.provenance = provenance_from_string(j["provenance"].get<std::string>());
  return g;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace pml
