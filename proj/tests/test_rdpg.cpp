#include <cmath>
#include <vector>

#include "doctest.h"
#include "dk/rdpg.hpp"
#include "dk/rng.hpp"
#include "dk/spectral.hpp"
#include "dk/synth.hpp"

namespace {

dk::RdpgParams constant_params(dk::Index n, double value) {
  dk::RdpgParams params;
  params.latent.values = dk::Matrix::Constant(n, 1, value);
  return params;
}

double edge_count(const dk::SparseMatrix& a) { return a.sum() / 2.0; }

void check_hollow_symmetric_binary(const dk::SparseMatrix& a) {
  for (int c = 0; c < a.outerSize(); ++c)
    for (dk::SparseMatrix::InnerIterator it(a, c); it; ++it) {
      CHECK(it.value() == 1.0);
      CHECK(it.row() != it.col());
      CHECK(a.coeff(it.col(), it.row()) == 1.0);
    }
}

}  // namespace

TEST_CASE("unit latent positions give the complete graph, zero gives the empty one") {
  const auto complete = dk::sample_rdpg(constant_params(10, 1.0), 42);
  CHECK(edge_count(complete) == 45.0);
  check_hollow_symmetric_binary(complete);

  const auto empty = dk::sample_rdpg(constant_params(10, 0.0), 42);
  CHECK(empty.nonZeros() == 0);
}

TEST_CASE("edge probabilities clamp dot products into [0, 1]") {
  dk::RdpgParams params;
  params.latent.values.resize(3, 1);
  params.latent.values << 0.6, 0.5, -0.2;
  const dk::Matrix p = dk::edge_probabilities(params);
  CHECK(p(0, 1) == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(p(0, 2) == 0.0);  // -0.12 clipped up
  CHECK(p(1, 2) == 0.0);  // -0.10 clipped up
  CHECK(p.diagonal().cwiseAbs().maxCoeff() == 0.0);

  dk::RdpgParams big;
  big.latent.values = dk::Matrix::Constant(2, 1, 2.0);
  CHECK(dk::edge_probabilities(big)(0, 1) == 1.0);  // 4.0 clipped down
}

TEST_CASE("edge probabilities are invariant to orthogonal rotation of the latents") {
  dk::Matrix z(6, 2);
  for (dk::Index i = 0; i < 6; ++i)
    for (dk::Index j = 0; j < 2; ++j)
      z(i, j) = 0.4 * dk::uniform01(dk::mix_key(5ULL, static_cast<std::uint64_t>(i * 2 + j)));
  const double th = 1.1;
  dk::Matrix r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);

  dk::RdpgParams a, b;
  a.latent.values = z;
  b.latent.values = z * r;
  CHECK((dk::edge_probabilities(a) - dk::edge_probabilities(b)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("edge count concentrates at its binomial mean") {
  // N = 100 with constant p = 0.5: 4950 pairs, mean 2475, sd ~35.2. The
  // average over 20 seeds has sd ~7.9; a 3-sigma band is a safe check.
  dk::RdpgParams params = constant_params(100, std::sqrt(0.5));
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    total += edge_count(dk::sample_rdpg(params, seed));
  const double mean = total / 20.0;
  const double sd_of_mean = std::sqrt(4950.0 * 0.25 / 20.0);
  CHECK(std::abs(mean - 2475.0) <= 3.0 * sd_of_mean);
}

TEST_CASE("per-pair empirical frequency tracks the pair probability") {
  // Nodes with distinct latent values give each pair its own probability;
  // 10,000 seeds pin the empirical frequency within 4 sigma.
  dk::RdpgParams params;
  params.latent.values.resize(4, 1);
  params.latent.values << 0.9, 0.7, 0.5, 0.3;
  const dk::Matrix p = dk::edge_probabilities(params);

  dk::Matrix counts = dk::Matrix::Zero(4, 4);
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    const auto a = dk::sample_rdpg(params, static_cast<std::uint64_t>(seed));
    counts += dk::Matrix(a);
  }
  for (dk::Index i = 0; i < 4; ++i)
    for (dk::Index j = i + 1; j < 4; ++j) {
      const double freq = counts(i, j) / trials;
      const double sd = std::sqrt(p(i, j) * (1.0 - p(i, j)) / trials);
      CHECK(std::abs(freq - p(i, j)) <= 4.0 * sd);
    }
}

TEST_CASE("samples are a pure function of parameters and seed") {
  dk::RdpgParams params;
  params.latent.values.resize(50, 2);
  for (dk::Index i = 0; i < 50; ++i) {
    params.latent.values(i, 0) = 0.6 * dk::uniform01(dk::mix_key(11ULL, static_cast<std::uint64_t>(i)));
    params.latent.values(i, 1) = 0.3;
  }
  const auto a = dk::sample_rdpg(params, 123);
  const auto b = dk::sample_rdpg(params, 123);
  CHECK((dk::Matrix(a) - dk::Matrix(b)).cwiseAbs().maxCoeff() == 0.0);

  const auto c = dk::sample_rdpg(params, 124);
  CHECK((dk::Matrix(a) - dk::Matrix(c)).cwiseAbs().maxCoeff() == 1.0);  // different draw
  check_hollow_symmetric_binary(c);
}

TEST_CASE("sampling round-trips through ase on a strong two-block model") {
  const auto latent = dk::two_block_latents(200, 0.7, 0.1);
  dk::RdpgParams params;
  params.latent = latent;
  const auto a = dk::sample_rdpg(params, 9);
  const auto z = dk::ase(a, 2);
  // Estimated probabilities should be near the truth on average.
  const dk::Matrix p_hat = z.values * z.values.transpose();
  const dk::Matrix p_true = dk::edge_probabilities(params);
  double err = 0.0;
  for (dk::Index i = 0; i < 200; ++i)
    for (dk::Index j = 0; j < 200; ++j)
      if (i != j) err += std::abs(p_hat(i, j) - p_true(i, j));
  err /= 200.0 * 199.0;
  CHECK(err <= 0.05);
}
