#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "oracles.hpp"
#include "qpt/rdm.hpp"

using namespace qpt;
using oracle::cd;

namespace {

FullState haar_full(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXcd psi = oracle::haar_state(1 << n, rng);
  // The production FullState holds real amplitudes, so route complex test
  // states through the VectorXcd overloads instead; this helper is only for
  // real states.
  FullState f;
  f.n_sites = n;
  f.amplitudes = psi.real();
  f.amplitudes.normalize();
  return f;
}

}  // namespace

TEST_CASE("sector ground states scatter into their bitmask positions") {
  ModelSpec s;
  s.family = Model::XXZ;
  s.n_sites = 6;
  s.delta = 0.8;
  const auto gs = ground_state(build_hamiltonian(s, 3));
  const auto full = FullState::from(gs);
  REQUIRE(full.amplitudes.size() == 64);
  CHECK(full.n_sites == 6);
  CHECK(full.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const auto basis = BasisMap::sz_sector(6, 3);
  for (std::size_t k = 0; k < basis.dim(); ++k)
    CHECK(full.amplitudes(basis.states[k]) == gs.amplitudes(k));
  double off_sector = 0.0;
  for (uint32_t m = 0; m < 64; ++m)
    if (std::popcount(m) != 3) off_sector += std::abs(full.amplitudes(m));
  CHECK(off_sector == 0.0);

  // Full-space states pass through unchanged.
  const auto gs_full = ground_state(build_hamiltonian(s));
  const auto ff = FullState::from(gs_full);
  CHECK((ff.amplitudes.array() == gs_full.amplitudes.array()).all());
}

TEST_CASE("one-site reduction matches the partial-trace oracle on random states") {
  std::mt19937_64 rng(2024);
  for (int n : {3, 5, 7}) {
    const Eigen::VectorXcd psi = oracle::haar_state(1 << n, rng);
    for (int site = 1; site <= n; ++site) {
      const Eigen::Matrix2cd got = rdm1(psi, n, site);
      const Eigen::Matrix2cd want = oracle::ptrace1(psi, n, site);
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
      // Invariants.
      CHECK(std::abs(got.trace().real() - 1.0) < 1e-12);
      CHECK((got - got.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("two-site reduction matches the partial-trace oracle on random states") {
  std::mt19937_64 rng(99);
  for (int n : {3, 4, 6}) {
    const Eigen::VectorXcd psi = oracle::haar_state(1 << n, rng);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        const Eigen::Matrix4cd got = rdm2(psi, n, i, j);
        const Eigen::Matrix4cd want = oracle::ptrace2(psi, n, i, j);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(got.trace().real() - 1.0) < 1e-12);
        CHECK((got - got.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(got);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
      }
  }
}

TEST_CASE("swapping the pair order transposes the middle slots") {
  std::mt19937_64 rng(7);
  const Eigen::VectorXcd psi = oracle::haar_state(1 << 5, rng);
  const Eigen::Matrix4cd a = rdm2(psi, 5, 2, 4);
  const Eigen::Matrix4cd b = rdm2(psi, 5, 4, 2);
  // Exchanging the slots permutes (uu, ud, du, dd) -> (uu, du, ud, dd).
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(0, 0) = p(3, 3) = p(1, 2) = p(2, 1) = 1.0;
  CHECK((b - p * a * p).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("three-site W state has the textbook reductions") {
  Eigen::VectorXd amps = Eigen::VectorXd::Zero(8);
  const double w = 1.0 / std::sqrt(3.0);
  amps(0b001) = amps(0b010) = amps(0b100) = w;
  FullState psi;
  psi.n_sites = 3;
  psi.amplitudes = amps;

  const Eigen::Matrix2cd r1 = rdm1(psi, 1);
  CHECK(std::abs(r1(0, 0).real() - 1.0 / 3) < 1e-14);  // up-up entry
  CHECK(std::abs(r1(1, 1).real() - 2.0 / 3) < 1e-14);
  CHECK(std::abs(r1(0, 1)) < 1e-14);

  const Eigen::Matrix4cd r2 = rdm2(psi, 1, 2);
  Eigen::Matrix4cd want = Eigen::Matrix4cd::Zero();
  want(1, 1) = want(2, 2) = want(1, 2) = want(2, 1) = 1.0 / 3;
  want(3, 3) = 1.0 / 3;
  CHECK((r2 - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("product states reduce to tensor factors") {
  std::mt19937_64 rng(5);
  const Eigen::VectorXcd q1 = oracle::haar_state(2, rng);
  const Eigen::VectorXcd q2 = oracle::haar_state(2, rng);
  const Eigen::VectorXcd q3 = oracle::haar_state(2, rng);
  // Assemble |q3 q2 q1> with site 1 = lowest bit.
  Eigen::VectorXcd psi(8);
  for (int m = 0; m < 8; ++m)
    psi(m) = q1((m >> 0) & 1) * q2((m >> 1) & 1) * q3((m >> 2) & 1);

  // Single-qubit density matrices in (up, down) order: index 1 of the
  // amplitude vector is "up" (bit value 1).
  auto dm = [](const Eigen::VectorXcd& q) {
    Eigen::Matrix2cd d;
    d << q(1) * std::conj(q(1)), q(1) * std::conj(q(0)),
        q(0) * std::conj(q(1)), q(0) * std::conj(q(0));
    return d;
  };
  CHECK((rdm1(psi, 3, 2) - dm(q2)).cwiseAbs().maxCoeff() < 1e-13);
  const Eigen::Matrix4cd pair = rdm2(psi, 3, 3, 1);
  const Eigen::Matrix4cd want = oracle::kron(dm(q3), dm(q1));
  CHECK((pair - want).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("reductions validate their inputs") {
  const auto psi = haar_full(4, 77);
  CHECK_THROWS_AS((void)rdm1(psi, 0), UsageError);
  CHECK_THROWS_AS((void)rdm1(psi, 5), UsageError);
  CHECK_THROWS_AS((void)rdm2(psi, 2, 2), UsageError);
  CHECK_THROWS_AS((void)rdm2(psi, 0, 2), UsageError);
  Eigen::VectorXcd bad(7);
  bad.setZero();
  bad(0) = 1.0;
  CHECK_THROWS_AS((void)rdm1(bad, 3, 1), UsageError);
  // Unnormalized input trips the trace guard.
  Eigen::VectorXcd unnorm = Eigen::VectorXcd::Zero(8);
  unnorm(0) = 2.0;
  CHECK_THROWS_AS((void)rdm1(unnorm, 3, 1), NumericalError);
}
