#include <cmath>
#include <random>

#include <doctest.h>

#include "support/oracle.hpp"
#include "unipred/errors.hpp"
#include "unipred/information.hpp"
#include "unipred/prediction.hpp"

using namespace unipred;

namespace {

ModelClassPtr running_example() {
  std::vector<SourcePtr> m{
      std::make_shared<const DeterministicPeriodic>(Sequence(Alphabet(2), {1})),
      std::make_shared<const IidCategorical>(std::vector<double>{0.5, 0.5})};
  return std::make_shared<const ModelClass>(ModelClass::uniform(std::move(m)));
}

ModelClassPtr singleton(std::vector<double> p) {
  std::vector<SourcePtr> m{std::make_shared<const IidCategorical>(std::move(p))};
  return std::make_shared<const ModelClass>(ModelClass::uniform(std::move(m)));
}

}  // namespace

TEST_CASE("argmax and predict examples") {
  const std::vector<double> a{0.2, 0.8}, tie{0.5, 0.5};
  CHECK(argmax(a) == 1);
  CHECK(argmax(tie) == 0);
  const auto c = running_example();
  Predictor theta_xi(std::make_shared<const MixtureSource>(c));
  CHECK(theta_xi.predict(Sequence(Alphabet(2), {1})) == 1);
  CHECK(predict(theta_xi, Sequence(Alphabet(2), {})) == 1);
  Predictor fair(std::make_shared<const IidCategorical>(std::vector<double>{0.5, 0.5}));
  CHECK(fair.predict(Sequence(Alphabet(2), {1, 1})) == 0);
}

TEST_CASE("argmax is invariant under positive scaling") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(1e-3, 1e3);
  for (int rep = 0; rep < 2000; ++rep) {
    auto v = oracle::random_distribution(2 + rep % 5, g, 0.2);
    const auto before = argmax(v);
    const double s = u(g);
    for (auto& x : v) x *= s;
    CHECK(argmax(v) == before);
  }
}

TEST_CASE("step_error examples") {
  const std::vector<double> mu{0.6, 0.4};
  CHECK(step_error(mu, 0) == doctest::Approx(0.4).epsilon(1e-15));
  const std::vector<double> point{0.0, 1.0, 0.0};
  CHECK(step_error(point, 1) == 0.0);
  const std::vector<double> u{0.25, 0.25, 0.25, 0.25};
  for (Symbol a = 0; a < 4; ++a) CHECK(step_error(u, a) == 0.75);
  CHECK_THROWS_AS(step_error(mu, 2), InputError);
}

TEST_CASE("expected errors: closed forms") {
  const auto c = singleton({0.6, 0.4});
  const auto e = expected_errors_exact(c, 0, Scheme::informed(), 12);
  for (std::size_t n = 1; n <= 12; ++n) {
    CHECK(e.cumulative[n - 1] == doctest::Approx(0.4 * static_cast<double>(n)).epsilon(1e-13));
  }
  const auto det = running_example();
  const auto e_mu = expected_errors_exact(det, 0, Scheme::informed(), 50);
  CHECK(e_mu.total() == 0.0);
  const auto e_xi = expected_errors_exact(det, 0, Scheme::universal(), 1000, 2000);
  CHECK(e_xi.total() <= 2.0 * std::log(2.0));
  const auto mc = expected_errors_mc(det, 0, Scheme::informed(), 50, 20, 1);
  CHECK(mc.total() == 0.0);
  CHECK(mc.total_stderr() == 0.0);
}

TEST_CASE("theorem2_bound") {
  const double ln2 = std::log(2.0);
  auto b = theorem2_bound(1.0, ln2);
  CHECK(b.tight == doctest::Approx(ln2 + std::sqrt(4.0 * ln2 + ln2 * ln2)).epsilon(1e-15));
  CHECK(b.loose == doctest::Approx(2.0 * ln2 + 2.0 * std::sqrt(ln2)).epsilon(1e-15));
  CHECK(b.tight <= b.loose);
  b = theorem2_bound(0.0, 0.3);
  CHECK(b.tight == doctest::Approx(0.6).epsilon(1e-15));
  b = theorem2_bound(3.0, 0.0);
  CHECK(b.tight == 0.0);
  CHECK(b.loose == 0.0);
  CHECK_THROWS_AS(theorem2_bound(-1.0, 0.1), InputError);
  CHECK_THROWS_AS(theorem2_bound(1.0, -0.1), InputError);
}

TEST_CASE("property: ledgers match the oracle; optimality and the error bound on random classes") {
  std::mt19937_64 g(707);
  for (std::size_t n = 2; n <= 3; ++n) {
    for (std::size_t size = 1; size <= 4; ++size) {
      for (int rep = 0; rep < 8; ++rep) {
        const auto oc = oracle::random_class(n, size, rep % 2 == 1, g);
        const auto c = oc.to_library();
        const std::size_t truth = (rep * 7) % size;
        const std::size_t horizon = n == 2 ? 8 : 6;
        const auto alt = oracle::random_model(n, g);
        const auto e_mu = expected_errors_exact(c, truth, Scheme::informed(), horizon);
        const auto e_xi = expected_errors_exact(c, truth, Scheme::universal(), horizon);
        const auto e_rho =
            expected_errors_exact(c, truth, Scheme::custom(alt.to_library(), "alt"), horizon);
        const auto H = accumulate_exact(c, truth, horizon).H;

        const auto o_mu = oracle::expect(oc, truth, horizon, [](const auto&, const auto& mu, const auto&) {
          return oracle::bayes_error(mu, mu);
        });
        const auto o_xi = oracle::expect(oc, truth, horizon, [](const auto&, const auto& mu, const auto& xi) {
          return oracle::bayes_error(mu, xi);
        });
        const auto o_rho = oracle::expect(oc, truth, horizon, [&](const auto& x, const auto& mu, const auto&) {
          oracle::Vec rho(n);
          for (std::size_t a = 0; a < n; ++a) rho[a] = alt.cond(x, a);
          return oracle::bayes_error(mu, rho);
        });
        for (std::size_t k = 0; k < horizon; ++k) {
          CHECK(e_mu.cumulative[k] >= o_mu.cumulative[k].lo - 1e-12);
          CHECK(e_mu.cumulative[k] <= o_mu.cumulative[k].hi + 1e-12);
          CHECK(e_xi.cumulative[k] >= o_xi.cumulative[k].lo - 1e-12);
          CHECK(e_xi.cumulative[k] <= o_xi.cumulative[k].hi + 1e-12);
          CHECK(e_rho.cumulative[k] >= o_rho.cumulative[k].lo - 1e-12);
          CHECK(e_rho.cumulative[k] <= o_rho.cumulative[k].hi + 1e-12);

          CHECK(e_mu.cumulative[k] <= e_rho.cumulative[k] + 1e-10);
          const double excess = e_xi.cumulative[k] - e_mu.cumulative[k];
          CHECK(excess >= -1e-10);
          const auto b = theorem2_bound(e_mu.cumulative[k], H[k]);
          CHECK(excess <= b.tight + 1e-9);
          CHECK(b.tight <= b.loose + 1e-12);
          if (k > 0) CHECK(e_xi.cumulative[k] >= e_xi.cumulative[k - 1]);
        }
      }
    }
  }
}

TEST_CASE("monte carlo errors agree with exact") {
  std::mt19937_64 g(808);
  for (int rep = 0; rep < 6; ++rep) {
    const auto oc = oracle::random_class(2 + rep % 2, 3, false, g);
    const auto c = oc.to_library();
    for (const auto& s : {Scheme::informed(), Scheme::universal()}) {
      const auto ex = expected_errors_exact(c, 2, s, 6);
      const auto mc = expected_errors_mc(c, 2, s, 6, 4000, 900 + rep);
      for (std::size_t k = 0; k < 6; ++k) {
        CHECK(std::abs(mc.cumulative[k] - ex.cumulative[k]) <= 3.0 * mc.stderr_cumulative[k] + 1e-12);
      }
    }
  }
}

TEST_CASE("custom scheme alphabet must match") {
  const auto c = running_example();
  auto tri = std::make_shared<const IidCategorical>(std::vector<double>{0.2, 0.3, 0.5});
  CHECK_THROWS_AS(expected_errors_exact(c, 0, Scheme::custom(tri, "tri"), 3), InputError);
}
