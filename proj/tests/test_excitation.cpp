#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "ris/distributions.hpp"
#include "ris/errors.hpp"
#include "ris/excitation.hpp"

using namespace ris;

TEST_CASE("bundled records are 30 s at 0.005 s scaled to 0.05 g") {
  const auto& recs = bundled_records();
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) {
    CHECK(r.dt == 0.005);
    CHECK(r.duration() == doctest::Approx(30.0).epsilon(1e-3));
    CHECK(r.pga() == doctest::Approx(0.05 * kGravity).epsilon(1e-12));
  }
  CHECK(recs[0].acceleration != recs[1].acceleration);
}

TEST_CASE("synthetic records are reproducible from their seed") {
  const auto a = synthetic_record(5), b = synthetic_record(5), c = synthetic_record(6);
  CHECK(a.acceleration == b.acceleration);
  CHECK(a.acceleration != c.acceleration);
}

TEST_CASE("two-record excitation is the linear combination") {
  const auto m = make_synthetic_record_model();
  const auto e = two_record_excitation(2.0, -0.5, m);
  const auto& r1 = m.records[0].acceleration;
  const auto& r2 = m.records[1].acceleration;
  for (std::size_t k = 0; k < e.size(); k += 97) CHECK(e[k] == doctest::Approx(2.0 * r1[k] - 0.5 * r2[k]));
  CHECK_THROWS_AS(build_excitation(std::vector<double>{1.0, 2.0, 3.0}, m), DomainError);
}

TEST_CASE("record files round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "ris_record_roundtrip.txt";
  const auto rec = synthetic_record(3);
  write_record(path, rec);
  const auto back = read_record(path);
  CHECK(back.dt == doctest::Approx(rec.dt));
  REQUIRE(back.acceleration.size() == rec.acceleration.size());
  for (std::size_t k = 0; k < rec.acceleration.size(); ++k)
    CHECK(back.acceleration[k] == doctest::Approx(rec.acceleration[k]).epsilon(1e-12));
  std::filesystem::remove(path);
}

TEST_CASE("FFT synthesis matches the direct cosine sum") {
  const SpectralSynthesizer s(200, 1.3e-4, 25.0 * M_PI, 30.0, 0.005);
  RandomStream rng(4);
  const auto x = sample_standard_normal(200, rng);
  std::vector<double> fast(s.samples()), slow(s.samples());
  s.synthesize(x, fast);
  s.synthesize_direct(x, slow);
  double scale = 0.0;
  for (double v : slow) scale = std::max(scale, std::fabs(v));
  for (std::size_t k = 0; k < fast.size(); ++k) CHECK(std::fabs(fast[k] - slow[k]) <= 1e-10 * scale);
}

TEST_CASE("white-noise excitation has variance 2 S0 omega_max") {
  const auto m = make_white_noise_model(200);
  const double want = 2.0 * m.s0 * m.omega_max;
  RandomStream rng(8);
  const int draws = 4000;
  const std::size_t probe = 1234;
  double sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto x = sample_standard_normal(200, rng);
    const auto a = spectral_excitation(x, m);
    sq += a[probe] * a[probe];
  }
  CHECK(std::fabs(sq / draws - want) < 3.0 * want * std::sqrt(2.0 / draws));
  CHECK_THROWS_AS(make_white_noise_model(3), DomainError);
}
