#include <doctest.h>

#include <cmath>

#include "polarcs/errors.hpp"
#include "polarcs/infodim.hpp"

using namespace polarcs;

namespace {

const MixtureSpec kUniform{1.0, {}, {ContinuousLaw::Kind::uniform, 0.0, 1.0}};

}  // namespace

TEST_SUITE("infodim") {

TEST_CASE("exact entropies on hand-built samples") {
  SampleSet s{1, {0.1, 0.1, 0.6, 0.6}};
  const std::size_t c0[] = {0};
  const auto e = quantized_entropy(s, c0, 2, Box{0.0, 1.0});
  CHECK(e.entropy_bits == doctest::Approx(1.0));
  CHECK(e.dim_estimate == doctest::Approx(1.0));
  CHECK(e.occupied_cells == 2);
  const auto fine = quantized_entropy(s, c0, 4, Box{0.0, 1.0});
  CHECK(fine.dim_estimate == doctest::Approx(0.5));
  // Values outside the box land in the edge cells.
  SampleSet clipped{1, {-5.0, 7.0}};
  CHECK(quantized_entropy(clipped, c0, 8, Box{0.0, 1.0}).occupied_cells == 2);
}

TEST_CASE("constant variable has dimension zero") {
  const MixtureSpec point{0.0, {{0.3, 1.0}}, {}};
  const auto est = estimate_dim(mixture_sampler(point), 1, 4096, 10000, 1, Box{-1.0, 1.0});
  CHECK(est.entropy_bits == 0.0);
  CHECK(est.dim_estimate == 0.0);
  CHECK_FALSE(est.wide_confidence);
}

TEST_CASE("uniform law") {
  const auto est = estimate_dim(mixture_sampler(kUniform), 1, 4096, 1000000, 2, mixture_box(kUniform));
  CHECK(std::abs(est.dim_estimate - 1.0) <= 0.05);
  const auto coarse = estimate_dim(mixture_sampler(kUniform), 1, 1024, 1000000, 2, mixture_box(kUniform));
  CHECK(std::abs(est.dim_estimate - coarse.dim_estimate) <= 0.05);
}

TEST_CASE("discrete-continuous mixtures have the continuous weight as dimension") {
  for (double p : {0.1, 0.3}) {
    const auto spec = sparse_noise_mixture(p, 1.0);
    const auto fine = estimate_dim(mixture_sampler(spec), 1, 4096, 1000000, 3, mixture_box(spec));
    const auto coarse = estimate_dim(mixture_sampler(spec), 1, 1024, 1000000, 3, mixture_box(spec));
    CHECK(std::abs(fine.dim_estimate - p) <= 0.05);
    CHECK(std::abs(coarse.dim_estimate - p) <= 0.05);
    CHECK(std::abs(fine.dim_estimate - coarse.dim_estimate) <= 0.05);
  }
}

TEST_CASE("joint mesh dimension of a vector") {
  const Sampler pair = [](Rng& rng, std::span<double> out) {
    out[0] = rng.uniform();
    out[1] = rng.uniform();
  };
  const auto est = estimate_dim(pair, 2, 256, 1000000, 4, Box{0.0, 1.0});
  CHECK(est.mesh_dim == 2);
  CHECK(std::abs(est.dim_estimate - 2.0) <= 0.1);
}

TEST_CASE("identity channel and independent variables") {
  const Sampler same = [](Rng& rng, std::span<double> out) { out[0] = out[1] = rng.uniform(); };
  const SampleSet s = draw_samples(same, 2, 1000000, 5);
  const std::size_t x[] = {0};
  const std::size_t y[] = {1};
  CHECK(std::abs(estimate_mid(s, x, y, 1024, Box{0.0, 1.0}).mid - 1.0) <= 0.1);

  const Sampler indep = [](Rng& rng, std::span<double> out) {
    out[0] = rng.normal();
    out[1] = rng.normal();
  };
  const SampleSet t = draw_samples(indep, 2, 1000000, 6);
  CHECK(std::abs(estimate_mid(t, x, y, 1024, Box{-8.0, 8.0}).mid) <= 0.1);
}

TEST_CASE("mutual information estimate is symmetric") {
  const SampleSet s = draw_samples(
      [](Rng& rng, std::span<double> out) {
        out[0] = rng.normal();
        out[1] = rng.bernoulli(0.2) ? out[0] + rng.normal() : out[0];
        out[2] = rng.normal();
      },
      3, 200000, 7);
  const std::size_t a[] = {0};
  const std::size_t b[] = {1, 2};
  const auto ab = estimate_mid(s, a, b, 1024, Box{-8.0, 8.0});
  const auto ba = estimate_mid(s, b, a, 1024, Box{-8.0, 8.0});
  CHECK(ab.mid == ba.mid);
  CHECK(ab.entropy_joint == ba.entropy_joint);
}

TEST_CASE("estimates are reproducible from the seed") {
  const auto a = estimate_sanc_mid(0.2, 1.0, 1024, 50000, 9);
  const auto b = estimate_sanc_mid(0.2, 1.0, 1024, 50000, 9);
  CHECK(a.mid == b.mid);
  const auto [p, q] = estimate_onestep_mids(0.2, 1.0, 256, 50000, 9);
  const auto [r, s] = estimate_onestep_mids(0.2, 1.0, 256, 50000, 9);
  CHECK(p.mid == r.mid);
  CHECK(q.mid == s.mid);
}

TEST_CASE("noisier channels carry less dimension") {
  const double clean = estimate_sanc_mid(0.0, 1.0, 4096, 400000, 10).mid;
  const double light = estimate_sanc_mid(0.1, 1.0, 4096, 400000, 10).mid;
  const double heavy = estimate_sanc_mid(0.5, 1.0, 4096, 400000, 10).mid;
  CHECK(clean > light);
  CHECK(light > heavy);
  const auto [m1, m2] = estimate_onestep_mids(0.3, 1.0, 1024, 400000, 11);
  // The second synthetic channel is the better one.
  CHECK(m2.mid > m1.mid);
}

TEST_CASE("fully noisy one-step channels carry only finite information") {
  // With every output noisy the channels are Gaussian: the quantized mutual
  // information approaches the Shannon value, so the dimension tends to 0.
  const int levels = 64;
  const auto [m1, m2] = estimate_onestep_mids(1.0, 1.0, levels, 1000000, 12);
  const double bits = std::log2(static_cast<double>(levels));
  const double i1 = 0.5 * std::log2(3.5 / 2.5);
  const double i2 = 0.5 * std::log2(2.5);
  CHECK(std::abs(m1.mid * bits - i1) <= 0.05);
  CHECK(std::abs(m2.mid * bits - i2) <= 0.05);
}

TEST_CASE("sparse wide histograms are flagged") {
  const auto est = estimate_dim(mixture_sampler(kUniform), 1, 65536, 1000, 13, Box{0.0, 1.0});
  CHECK(est.wide_confidence);
}

TEST_CASE("argument checks") {
  SampleSet s{1, {0.5}};
  const std::size_t c0[] = {0};
  const std::size_t c1[] = {1};
  CHECK_THROWS_AS(quantized_entropy(s, c0, 1, Box{}), InvalidParameter);
  CHECK_THROWS_AS(quantized_entropy(s, c0, 70000, Box{}), InvalidParameter);
  CHECK_THROWS_AS(quantized_entropy(s, c1, 16, Box{}), InvalidParameter);
  CHECK_THROWS_AS(quantized_entropy(s, c0, 16, Box{1.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS((MixtureSpec{0.5, {{0.0, 0.4}}, {}}.validate()), InvalidParameter);
  CHECK_THROWS_AS((MixtureSpec{1.5, {}, {}}.validate()), InvalidParameter);
  CHECK_THROWS_AS(sparse_noise_mixture(0.1, 0.0), InvalidParameter);
  SampleSet wide{5, std::vector<double>(5, 0.0)};
  const std::size_t all[] = {0, 1, 2, 3, 4};
  CHECK_THROWS_AS(quantized_entropy(wide, all, 65536, Box{}), InvalidParameter);
}

TEST_CASE("mixture boxes") {
  const auto box = mixture_box(sparse_noise_mixture(0.2, 2.0));
  CHECK(box.lo == -16.0);
  CHECK(box.hi == 16.0);
  const auto u = mixture_box(kUniform);
  CHECK(u.lo == 0.0);
  CHECK(u.hi == 1.0);
}

}
