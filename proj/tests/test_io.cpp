#include <cstdio>
#include <string>

#include "doctest.h"
#include "pml/io.hpp"
#include "pml/leakage.hpp"

using namespace pml;

TEST_CASE("distribution JSON round-trips at full precision") {
  const Distribution d({0.1234567890123456, 0.5, 0.3765432109876544});
  const Distribution back = distribution_from_json(distribution_to_json(d));
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back(i) == d(i));
  CHECK_THROWS_AS(distribution_from_json("{\"probs\": \"oops\"}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json("not json"), std::invalid_argument);
}

TEST_CASE("sample set JSON round-trips") {
  const SampleSet s{{3, 0, 141592653589793238ull}};
  const SampleSet back = sample_set_from_json(sample_set_to_json(s));
  CHECK(back.counts == s.counts);
  CHECK_THROWS_AS(sample_set_from_json("{\"counts\": [-1]}"), std::invalid_argument);
}

TEST_CASE("mechanism JSON round-trips with and without meta") {
  const Mechanism m({{0.25, 0.75}, {0.6, 0.4}});
  const Mechanism back = mechanism_from_json(mechanism_to_json(m));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(back(i, j) == m(i, j));
  }
  const DesignResult r{m, 0.5, 0.1, 0.45, "closed_form"};
  const std::string with_meta = design_result_to_json(r);
  CHECK(with_meta.find("\"eps_prime\": 0.45") != std::string::npos);
  CHECK(with_meta.find("\"path\": \"closed_form\"") != std::string::npos);
  const Mechanism from_meta = mechanism_from_json(with_meta);
  CHECK(from_meta(1, 0) == 0.6);
  CHECK_THROWS_AS(mechanism_from_json("{\"matrix\": [[0.9, 0.2]]}"),
                  std::invalid_argument);
}

TEST_CASE("leakage profile JSON carries the support bookkeeping") {
  const Mechanism mech({{0.5, 0.5, 0.0}, {0.25, 0.75, 0.0}});
  const LeakageProfile profile = pml_per_outcome(mech, Distribution({0.5, 0.5}));
  const std::string text = leakage_profile_to_json(profile);
  CHECK(text.find("\"eps_min\"") != std::string::npos);
  CHECK(text.find("\"excluded_outcomes\"") != std::string::npos);
  CHECK(text.find("\"per_outcome\"") != std::string::npos);
}

TEST_CASE("guarantee JSON round-trips the provenance enum") {
  for (Provenance p : {Provenance::exact, Provenance::l1_bound,
                       Provenance::lipschitz_bound, Provenance::composed}) {
    PrivacyGuarantee g{0.25, 1e-6, p};
    const PrivacyGuarantee back = guarantee_from_json(guarantee_to_json(g));
    CHECK(back.eps == g.eps);
    CHECK(back.delta == g.delta);
    CHECK(back.provenance == g.provenance);
  }
  CHECK_THROWS_AS(guarantee_from_json("{\"eps\": 1}"), std::invalid_argument);
}

TEST_CASE("write_file_atomic leaves no temp file behind") {
  const std::string path = "/tmp/pml_test_atomic.json";
  write_file_atomic(path, "payload\n");
  CHECK(read_file(path) == "payload\n");
  std::FILE* tmp = std::fopen((path + ".tmp").c_str(), "r");
  CHECK(tmp == nullptr);
  if (tmp) std::fclose(tmp);
  std::remove(path.c_str());
  CHECK_THROWS(read_file(path));
}
