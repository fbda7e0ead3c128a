#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "oracles.hpp"
#include "qpt/hilbert.hpp"

using namespace qpt;

TEST_CASE("full-space basis enumerates every bitmask in ascending order") {
  const auto b = BasisMap::full_space(5);
  REQUIRE(b.dim() == 32);
  CHECK(!b.n_up.has_value());
  for (uint32_t s = 0; s < 32; ++s) {
    CHECK(b.states[s] == s);
    CHECK(b.index_of(s) == s);
    CHECK(b.contains(s));
  }
  CHECK(!b.contains(32));
  CHECK_THROWS_AS((void)b.index_of(32), NumericalError);
}

TEST_CASE("sector basis holds exactly the states with the requested up-count") {
  const auto b = BasisMap::sz_sector(6, 2);
  REQUIRE(b.dim() == 15);  // C(6,2)
  REQUIRE(b.n_up.has_value());
  CHECK(*b.n_up == 2);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    CHECK(std::popcount(b.states[i]) == 2);
    if (i > 0) CHECK(b.states[i] > b.states[i - 1]);
    CHECK(b.index_of(b.states[i]) == i);
  }
  CHECK(!b.contains(0b111));
  CHECK_THROWS_AS((void)b.index_of(0b111), NumericalError);
  CHECK_THROWS_AS(BasisMap::sz_sector(6, 7), UsageError);
  CHECK_THROWS_AS(BasisMap::sz_sector(6, -1), UsageError);
}

namespace {

// Compare the sparse assembly against the Kronecker-product oracle on the
// full space.
void check_against_oracle(const ModelSpec& spec) {
  CAPTURE(to_string(spec.family));
  CAPTURE(spec.n_sites);
  const auto h = build_hamiltonian(spec);
  const Eigen::MatrixXd dense = h.dense();
  const oracle::MatrixXcd ref = oracle::dense_h(spec);
  REQUIRE(dense.rows() == ref.rows());
  CHECK(ref.imag().cwiseAbs().maxCoeff() < 1e-14);
  CHECK((dense - ref.real()).cwiseAbs().maxCoeff() < 1e-12);
  // Hermiticity of the assembled matrix itself.
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

}  // namespace

TEST_CASE("anisotropic Heisenberg chain matches the tensor-product assembly") {
  for (int n : {3, 4, 5, 6})
    for (double d : {-1.3, 0.0, 0.5, 1.0, 2.7}) {
      ModelSpec s;
      s.family = Model::XXZ;
      s.n_sites = n;
      s.delta = d;
      check_against_oracle(s);
    }
}

TEST_CASE("dimerized XY chain matches the tensor-product assembly") {
  for (int n : {4, 6, 8})
    for (double e : {-0.6, 0.0, 0.35, 1.0}) {
      ModelSpec s;
      s.family = Model::SSH;
      s.n_sites = n;
      s.eta = e;
      check_against_oracle(s);
    }
}

TEST_CASE("two-parameter dimerized chain matches the tensor-product assembly") {
  for (int n : {4, 6})
    for (double g1 : {-0.8, 0.3})
      for (double g2 : {0.0, 0.77}) {
        ModelSpec s;
        s.family = Model::SSHXY;
        s.n_sites = n;
        s.gamma1 = g1;
        s.gamma2 = g2;
        check_against_oracle(s);
      }
}

TEST_CASE("multispin-interaction chain matches the tensor-product assembly") {
  // N = 3 and 4 make the wrapped three- and four-site terms revisit sites,
  // which the assembly must fold into the correct diagonal contributions.
  for (int n : {3, 4, 5, 6, 7}) {
    ModelSpec s;
    s.family = Model::XYMI;
    s.n_sites = n;
    s.gamma = 0.45;
    s.lambda = 0.8;
    s.alpha = 0.3;
    s.beta = -0.2;
    check_against_oracle(s);
  }
  // Pure transverse-field limit and pure multispin limits.
  for (auto [g, l, a, b] : {std::array<double, 4>{1.0, 1.0, 0.0, 0.0},
                            std::array<double, 4>{0.0, 0.0, 0.7, 0.0},
                            std::array<double, 4>{0.0, 0.0, 0.0, 0.6}}) {
    ModelSpec s;
    s.family = Model::XYMI;
    s.n_sites = 6;
    s.gamma = g;
    s.lambda = l;
    s.alpha = a;
    s.beta = b;
    check_against_oracle(s);
  }
}

TEST_CASE("sector Hamiltonian is the oracle restricted to sector states") {
  ModelSpec s;
  s.family = Model::XXZ;
  s.n_sites = 6;
  s.delta = 0.7;
  const auto h = build_hamiltonian(s, 3);
  const auto basis = BasisMap::sz_sector(6, 3);
  REQUIRE(h.dim() == basis.dim());
  const Eigen::MatrixXd dense = h.dense();
  const Eigen::MatrixXd full = oracle::dense_h(s).real();
  for (std::size_t a = 0; a < basis.dim(); ++a)
    for (std::size_t b = 0; b < basis.dim(); ++b)
      CHECK(dense(a, b) ==
            doctest::Approx(full(basis.states[a], basis.states[b]))
                .epsilon(1e-13));
}

TEST_CASE("sector restriction is rejected for families that mix up-counts") {
  for (Model m : {Model::SSHXY, Model::XYMI}) {
    ModelSpec s;
    s.family = m;
    s.n_sites = 4;
    CHECK_THROWS_AS(build_hamiltonian(s, 2), UsageError);
  }
}

TEST_CASE("sparse apply agrees with the dense matrix on random vectors") {
  ModelSpec s;
  s.family = Model::XYMI;
  s.n_sites = 8;
  s.gamma = 0.3;
  s.lambda = 1.1;
  s.alpha = -0.25;
  s.beta = 0.15;
  const auto h = build_hamiltonian(s);
  const Eigen::MatrixXd dense = h.dense();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 3; ++rep) {
    Eigen::VectorXd x(h.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
    const Eigen::VectorXd y = h.apply(x);
    CHECK((y - dense * x).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("model validation rejects malformed specifications") {
  ModelSpec s;
  s.n_sites = 2;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.n_sites = 29;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.n_sites = 8;
  s.delta = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.delta = 1.0;
  CHECK_NOTHROW(s.validate());
  s.family = Model::SSH;
  s.n_sites = 5;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.family = Model::SSHXY;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.family = Model::XYMI;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("parameter access by name covers every coupling") {
  ModelSpec s;
  for (const char* name :
       {"delta", "eta", "gamma1", "gamma2", "gamma", "lambda", "alpha", "beta"}) {
    s.set_param(name, 0.25);
    CHECK(s.get_param(name) == 0.25);
  }
  CHECK_THROWS_AS(s.set_param("kappa", 1.0), UsageError);
  CHECK_THROWS_AS((void)s.get_param("kappa"), UsageError);
}

TEST_CASE("model names round-trip through the string mapping") {
  for (Model m : {Model::XXZ, Model::SSH, Model::SSHXY, Model::XYMI})
    CHECK(model_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(model_from_string("ising"), UsageError);
}

TEST_CASE("translation permutes sites cyclically") {
  const int n = 4;
  const int dim = 1 << n;
  // Basis vector concentrated on bitmask m moves to the rotated bitmask.
  auto rotate = [&](uint32_t m, int shift) {
    uint32_t out = 0;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) out |= 1u << ((i + shift) % n);
    return out;
  };
  for (uint32_t m = 0; m < static_cast<uint32_t>(dim); ++m) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v(m) = 1.0;
    const Eigen::VectorXd t = translate(v, n, 1);
    for (int k = 0; k < dim; ++k)
      CHECK(t(k) == (static_cast<uint32_t>(k) == rotate(m, 1) ? 1.0 : 0.0));
  }
}

TEST_CASE("uniform chains commute with translation") {
  ModelSpec s;
  s.family = Model::XYMI;
  s.n_sites = 6;
  s.gamma = 0.5;
  s.lambda = 0.9;
  s.alpha = 0.2;
  s.beta = 0.1;
  const auto h = build_hamiltonian(s);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd x(h.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
  const Eigen::VectorXd lhs = h.apply(translate(x, 6, 1));
  const Eigen::VectorXd rhs = translate(h.apply(x), 6, 1);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);

  // The dimerized family only commutes with two-site translations.
  ModelSpec d;
  d.family = Model::SSH;
  d.n_sites = 6;
  d.eta = 0.4;
  const auto hd = build_hamiltonian(d);
  const Eigen::VectorXd lhs2 = hd.apply(translate(x, 6, 2));
  const Eigen::VectorXd rhs2 = translate(hd.apply(x), 6, 2);
  CHECK((lhs2 - rhs2).cwiseAbs().maxCoeff() < 1e-11);
}
