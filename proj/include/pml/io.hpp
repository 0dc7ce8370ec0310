#ifndef PML_IO_HPP
#define PML_IO_HPP

#include <string>

#include "pml/design.hpp"
#include "pml/leakage.hpp"
#include "pml/types.hpp"

namespace pml {

// JSON formats:
//   Distribution   {"probs": [...]}
//   SampleSet      {"counts": [...]}
//   Mechanism      {"matrix": [[...], ...], "meta": {eps, beta, eps_prime, path}}
//   LeakageProfile {"per_outcome": [...], "eps_min": x, "excluded_outcomes": [...]}
//   Guarantee      {"eps": x, "delta": x, "provenance": "..."}
// Numbers round-trip at 17 significant digits.

std::string distribution_to_json(const Distribution& dist);
Distribution distribution_from_json(const std::string& text);

std::string sample_set_to_json(const SampleSet& samples);
SampleSet sample_set_from_json(const std::string& text);

std::string mechanism_to_json(const Mechanism& mech);
std::string design_result_to_json(const DesignResult& result);
/// Accepts both bare {"matrix": ...} and the meta-carrying design output.
Mechanism mechanism_from_json(const std::string& text);

std::string leakage_profile_to_json(const LeakageProfile& profile);

std::string guarantee_to_json(const PrivacyGuarantee& g);
PrivacyGuarantee guarantee_from_json(const std::string& text);

std::string read_file(const std::string& path);

/// Writes via a temp file in the same directory followed by rename, so a
/// crash never leaves a truncated output behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace pml

#endif  // PML_IO_HPP
