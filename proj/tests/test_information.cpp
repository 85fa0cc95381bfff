#include <cmath>
#include <random>

#include <doctest.h>

#include "support/oracle.hpp"
#include "unipred/errors.hpp"
#include "unipred/information.hpp"

using namespace unipred;

namespace {

ModelClassPtr running_example() {
  std::vector<SourcePtr> m{
      std::make_shared<const DeterministicPeriodic>(Sequence(Alphabet(2), {1})),
      std::make_shared<const IidCategorical>(std::vector<double>{0.5, 0.5})};
  return std::make_shared<const ModelClass>(ModelClass::uniform(std::move(m)));
}

double binary_kl(double y, double z) {
  auto term = [](double a, double b) { return a > 0.0 ? a * std::log(a / b) : 0.0; };
  return term(y, z) + term(1.0 - y, 1.0 - z);
}

}  // namespace

TEST_CASE("step_kl examples") {
  const std::vector<double> u{0.25, 0.25, 0.5};
  CHECK(step_kl(u, u) == 0.0);
  const std::vector<double> mu{1.0, 0.0}, xi{0.75, 0.25};
  CHECK(step_kl(mu, xi) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-15));
  CHECK(step_kl(mu, xi) == doctest::Approx(0.28768).epsilon(1e-5));
  const std::vector<double> e{0.0, 1.0};
  CHECK(step_kl(e, e) == 0.0);
  const auto bad = step_kl_checked(xi, mu);
  CHECK(bad.dominance_violated);
  CHECK(std::isinf(bad.nats));
  const std::vector<double> not_prob{0.7, 0.7};
  CHECK_THROWS_AS(step_kl(not_prob, xi), InputError);
  const std::vector<double> short_v{1.0};
  CHECK_THROWS_AS(step_kl(short_v, xi), InputError);
}

TEST_CASE("step_sq examples") {
  const std::vector<double> mu{1.0, 0.0}, xi{0.75, 0.25};
  CHECK(step_sq(mu, mu) == 0.0);
  CHECK(step_sq(mu, xi) == 0.125);
  CHECK(step_sq(mu, xi) <= step_kl(mu, xi));
}

TEST_CASE("entropy inequality examples") {
  const std::vector<double> u{0.25, 0.25, 0.25, 0.25};
  auto r = check_entropy_inequality(u, u);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 0.0);
  CHECK(r.holds);
  const std::vector<double> y{0.9, 0.1}, z{0.5, 0.5};
  r = check_entropy_inequality(y, z);
  CHECK(r.lhs == doctest::Approx(0.32).epsilon(1e-15));
  CHECK(r.rhs == doctest::Approx(0.9 * std::log(1.8) + 0.1 * std::log(0.2)).epsilon(1e-15));
  CHECK(r.rhs == doctest::Approx(0.3681).epsilon(1e-4));
  CHECK(r.holds);
  // shared zero coordinate: 0 ln(0/0) = 0
  const std::vector<double> y0{0.0, 0.3, 0.7}, z0{0.0, 0.6, 0.4};
  r = check_entropy_inequality(y0, z0);
  CHECK(std::isfinite(r.rhs));
  CHECK(r.holds);
}

TEST_CASE("property: inequality chain through the sign partition") {
  // sum (y-z)^2 <= 2 (y+ - z+)^2 <= binary KL(y+, z+) <= sum y ln(y/z),
  // with y+ / z+ the masses where y_i > z_i.
  std::mt19937_64 g(404);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 20000; ++rep) {
      const auto y = oracle::random_distribution(n, g, 0.1);
      const auto z = oracle::random_distribution(n, g, 0.0);
      double yp = 0.0, zp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] > z[i]) {
          yp += y[i];
          zp += z[i];
        }
      }
      const auto r = check_entropy_inequality(y, z);
      const double mid_sq = 2.0 * (yp - zp) * (yp - zp);
      const double mid_kl = binary_kl(yp, zp);
      CHECK(r.lhs <= mid_sq + 1e-12);
      CHECK(mid_sq <= mid_kl + 1e-12);
      CHECK(mid_kl <= r.rhs + 1e-12);
      CHECK(r.rhs >= -1e-12);
      CHECK(r.holds);
    }
  }
}

TEST_CASE("H_n of the running example") {
  const auto l = accumulate_exact(running_example(), 0, 40);
  for (std::size_t n = 1; n <= 40; ++n) {
    CHECK(std::abs(l.H[n - 1] - std::log(2.0 / (1.0 + std::pow(2.0, -static_cast<double>(n))))) <= 1e-12);
  }
  CHECK(l.d_mu == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_FALSE(l.dominance_violated);
}

TEST_CASE("singleton class has zero relative entropy") {
  auto m = std::make_shared<const IidCategorical>(std::vector<double>{0.2, 0.3, 0.5});
  const auto c = std::make_shared<const ModelClass>(ModelClass::uniform({m}));
  const auto l = accumulate_exact(c, 0, 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(l.H[k] == 0.0);
    CHECK(l.D[k] == 0.0);
  }
  CHECK(l.d_mu == 0.0);
}

TEST_CASE("budget and truth checks") {
  auto m = std::make_shared<const IidCategorical>(std::vector<double>{0.2, 0.3, 0.5});
  const auto c = std::make_shared<const ModelClass>(ModelClass::uniform({m}));
  CHECK_THROWS_AS(accumulate_exact(c, 0, 12, 1000), EnumerationTooLarge);
  CHECK_THROWS_AS(accumulate_exact(c, 1, 3), InputError);
  // deterministic truth prunes to a single path, so a long horizon is cheap
  const auto l = accumulate_exact(running_example(), 0, 2000, 2000);
  CHECK(l.H.back() <= l.d_mu + 1e-9);
}

TEST_CASE("property: exact ledgers match the oracle, D <= H <= d_mu, monotone") {
  std::mt19937_64 g(505);
  for (std::size_t n = 2; n <= 3; ++n) {
    for (std::size_t size = 1; size <= 4; ++size) {
      for (int rep = 0; rep < 8; ++rep) {
        const auto oc = oracle::random_class(n, size, rep % 2 == 0, g);
        const auto c = oc.to_library();
        const std::size_t truth = rep % size;
        const std::size_t horizon = n == 2 ? 8 : 6;
        const auto l = accumulate_exact(c, truth, horizon);
        const auto h = oracle::expect(oc, truth, horizon, [](const auto&, const auto& mu, const auto& xi) {
          return oracle::point(oracle::kl(mu, xi));
        });
        const auto d = oracle::expect(oc, truth, horizon, [](const auto&, const auto& mu, const auto& xi) {
          return oracle::point(oracle::sq(mu, xi));
        });
        for (std::size_t k = 0; k < horizon; ++k) {
          CHECK(std::abs(l.H[k] - h.cumulative[k].lo) <= 1e-10);
          CHECK(std::abs(l.D[k] - d.cumulative[k].lo) <= 1e-10);
          CHECK(l.D[k] <= l.H[k] + 1e-9);
          CHECK(l.H[k] <= l.d_mu + 1e-9);
          if (k > 0) {
            CHECK(l.H[k] >= l.H[k - 1]);
            CHECK(l.D[k] >= l.D[k - 1]);
          }
        }
        // chain rule: H_n = sum_x mu(x) ln(mu(x)/xi(x)) over x of length n
        double direct = 0.0;
        for (const auto& x : oracle::all_sequences(n, horizon)) {
          const double m = oc.models[truth].joint(x);
          if (m > 0.0) direct += m * std::log(m / oc.xi_joint(x));
        }
        CHECK(std::abs(l.H.back() - direct) <= 1e-10);
      }
    }
  }
}

TEST_CASE("monte carlo ledgers agree with exact ones") {
  std::mt19937_64 g(606);
  for (int rep = 0; rep < 6; ++rep) {
    const auto oc = oracle::random_class(2 + rep % 2, 3, true, g);
    const auto c = oc.to_library();
    const auto ex = accumulate_exact(c, 1, 6);
    const auto mc = accumulate_mc(c, 1, 6, 4000, 77 + rep);
    CHECK(mc.flavor == Flavor::monte_carlo);
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(std::abs(mc.H[k] - ex.H[k]) <= 3.0 * mc.H_stderr[k] + 1e-12);
      CHECK(std::abs(mc.D[k] - ex.D[k]) <= 3.0 * mc.D_stderr[k] + 1e-12);
    }
  }
}

TEST_CASE("monte carlo stderr scales like 1/sqrt(trials)") {
  std::vector<SourcePtr> m{std::make_shared<const IidCategorical>(std::vector<double>{0.7, 0.3}),
                           std::make_shared<const IidCategorical>(std::vector<double>{0.3, 0.7})};
  const auto c = std::make_shared<const ModelClass>(ModelClass::uniform(std::move(m)));
  const auto a = accumulate_mc(c, 0, 10, 4000, 1);
  const auto b = accumulate_mc(c, 0, 10, 8000, 1);
  CHECK(b.H_stderr.back() / a.H_stderr.back() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.1));
  // deterministic truth: zero variance
  const auto z = accumulate_mc(running_example(), 0, 10, 100, 3);
  CHECK(z.H_stderr.back() == 0.0);
  // one trial gives no variance estimate
  const auto one = accumulate_mc(c, 0, 5, 1, 3);
  CHECK(std::isinf(one.H_stderr.back()));
}

TEST_CASE("monte carlo is reproducible per seed") {
  std::vector<SourcePtr> m{std::make_shared<const IidCategorical>(std::vector<double>{0.7, 0.3}),
                           std::make_shared<const IidCategorical>(std::vector<double>{0.3, 0.7})};
  const auto c = std::make_shared<const ModelClass>(ModelClass::uniform(std::move(m)));
  const auto a = accumulate_mc(c, 0, 10, 50, 42);
  const auto b = accumulate_mc(c, 0, 10, 50, 42);
  const auto d = accumulate_mc(c, 0, 10, 50, 43);
  CHECK(a.H == b.H);
  CHECK(a.H != d.H);
}
