#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "ucm/error.hpp"
#include "ucm/evidence.hpp"
#include "ucm/parser.hpp"

using namespace ucm;

namespace {

const std::string kModels = UCM_MODELS_DIR;

MassFunction fail_ok(double fail, double ok, double either) {
  const Frame f({"fail", "ok"});
  return MassFunction(f, {{f.set_of({"fail"}), fail}, {f.set_of({"ok"}), ok}, {f.full(), either}});
}

MassFunction perception_mass() {
  const Frame f({"car", "pedestrian", "none"});
  return MassFunction(f, {{f.set_of({"car"}), 0.5415},
                          {f.set_of({"pedestrian"}), 0.273},
                          {f.set_of({"car", "pedestrian"}), 0.065},
                          {f.set_of({"none"}), 0.1205}});
}

bool same_masses(const MassFunction& a, const MassFunction& b, double tol) {
  if (a.frame() != b.frame()) return false;
  for (std::uint32_t s = 1; s <= a.frame().full().bits; ++s) {
    const FocalSet fs{static_cast<std::uint16_t>(s)};
    if (std::abs(a.mass(fs) - b.mass(fs)) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("focal sets and frames") {
  const Frame f({"a", "b", "c"});
  CHECK(f.full().bits == 0b111);
  CHECK(f.set_of({"c", "a"}).bits == 0b101);
  CHECK(f.complement(f.set_of({"a"})).bits == 0b110);
  CHECK(f.describe(f.set_of({"c", "a"})) == "{a,c}");
  CHECK(f.set_of({"a", "b"}).size() == 2);
  CHECK_THROWS_AS(f.index("z"), UnresolvedName);
  CHECK_THROWS_AS(Frame({}), ModelError);
  CHECK_THROWS_AS(Frame({"a", "a"}), ModelError);
  std::vector<std::string> many;
  for (int i = 0; i < 17; ++i) many.push_back("h" + std::to_string(i));
  CHECK_THROWS_AS(Frame{many}, ModelError);
  many.pop_back();
  CHECK(Frame(many).full().bits == 0xFFFF);
}

TEST_CASE("mass function construction") {
  const Frame f({"a", "b"});
  CHECK_THROWS_AS(MassFunction(f, {{f.set_of({"a"}), 0.5}}), ModelError);
  CHECK_THROWS_AS(MassFunction(f, {{FocalSet{}, 0.5}, {f.full(), 0.5}}), ModelError);
  CHECK_THROWS_AS(MassFunction(f, {{f.set_of({"a"}), 1.5}, {f.full(), -0.5}}), ModelError);
  CHECK_THROWS_AS(MassFunction(f, {{FocalSet{0b100}, 1.0}}), FrameMismatch);
  const MassFunction m(f, {{f.set_of({"a"}), 0.25}, {f.set_of({"a"}), 0.25}, {f.full(), 0.5}, {f.set_of({"b"}), 0.0}});
  CHECK(m.masses().size() == 2);
  CHECK(m.mass(f.set_of({"a"})) == 0.5);
  CHECK(m.mass(f.set_of({"b"})) == 0.0);
}

TEST_CASE("belief and plausibility examples") {
  const MassFunction m = fail_ok(0.15, 0.8, 0.05);
  const Frame& f = m.frame();
  CHECK(bel(m, f.set_of({"fail"})) == doctest::Approx(0.15));
  CHECK(pl(m, f.set_of({"fail"})) == doctest::Approx(0.2));
  CHECK(bel(m, f.full()) == doctest::Approx(1.0));

  const MassFunction vac = MassFunction::vacuous(f);
  CHECK(bel(vac, f.set_of({"fail"})) == 0.0);
  CHECK(pl(vac, f.set_of({"ok"})) == 1.0);
  CHECK(bel(vac, f.full()) == 1.0);

  const MassFunction bayes = MassFunction::bayesian(f, (Eigen::VectorXd(2) << 0.3, 0.7).finished());
  for (std::uint16_t s = 0; s <= 3; ++s) CHECK(bel(bayes, FocalSet{s}) == doctest::Approx(pl(bayes, FocalSet{s})));

  CHECK_THROWS_AS(bel(m, FocalSet{0b100}), FrameMismatch);
  CHECK_THROWS_AS(pl(m, FocalSet{0b100}), FrameMismatch);
}

TEST_CASE("Dempster combination examples") {
  const Frame f({"A", "B"});
  const MassFunction m1(f, {{f.set_of({"A"}), 0.6}, {f.full(), 0.4}});
  const MassFunction m2(f, {{f.set_of({"B"}), 0.5}, {f.full(), 0.5}});
  const MassFunction m = dempster_combine(m1, m2);
  // products: A*B conflict 0.3; A*AB 0.3; AB*B 0.2; AB*AB 0.2; normalize by 0.7
  CHECK(m.mass(f.set_of({"A"})) == doctest::Approx(0.3 / 0.7).epsilon(1e-12));
  CHECK(m.mass(f.set_of({"B"})) == doctest::Approx(0.2 / 0.7).epsilon(1e-12));
  CHECK(m.mass(f.full()) == doctest::Approx(0.2 / 0.7).epsilon(1e-12));
  CHECK(m.mass(f.set_of({"A"})) == doctest::Approx(0.428571).epsilon(1e-6));

  CHECK(same_masses(dempster_combine(m1, MassFunction::vacuous(f)), m1, 1e-15));

  const MassFunction onlyA(f, {{f.set_of({"A"}), 1.0}});
  const MassFunction onlyB(f, {{f.set_of({"B"}), 1.0}});
  CHECK_THROWS_AS(dempster_combine(onlyA, onlyB), TotalConflict);

  CHECK_THROWS_AS(dempster_combine(m1, MassFunction::vacuous(Frame({"A", "C"}))), FrameMismatch);
}

TEST_CASE("pignistic transform examples") {
  const Eigen::VectorXd p = pignistic(perception_mass());
  CHECK(p[0] == doctest::Approx(0.574));
  CHECK(p[1] == doctest::Approx(0.3055));
  CHECK(p[2] == doctest::Approx(0.1205));

  const Frame f({"a", "b", "c", "d"});
  const Eigen::VectorXd q = (Eigen::VectorXd(4) << 0.1, 0.2, 0.3, 0.4).finished();
  CHECK((pignistic(MassFunction::bayesian(f, q)) - q).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((pignistic(MassFunction::vacuous(f)).array() == 0.25).all());
}

TEST_CASE("marginal to mass") {
  const auto doc = load_model(kModels + "/perception-chain.ucm");

  SUBCASE("disjunction state lifts to its member set") {
    const Marginal marg{"perception", (Eigen::VectorXd(4) << 0.5415, 0.273, 0.065, 0.1205).finished()};
    const MassFunction m = marginal_to_mass(marg, doc.variable("perception"));
    CHECK(same_masses(m, perception_mass(), 0));
  }
  SUBCASE("ontological state lifts to the whole frame") {
    const Marginal marg{"ground_truth", (Eigen::VectorXd(3) << 0.6, 0.3, 0.1).finished()};
    const MassFunction m = marginal_to_mass(marg, doc.variable("ground_truth"));
    const Frame& f = m.frame();
    CHECK(f.hypotheses() == std::vector<std::string>{"car", "pedestrian"});
    CHECK(m.mass(f.set_of({"car"})) == 0.6);
    CHECK(m.mass(f.set_of({"pedestrian"})) == 0.3);
    CHECK(m.mass(f.full()) == 0.1);
    const auto iv = bel_pl_intervals(m);
    CHECK(iv[0].bel == doctest::Approx(0.6));
    CHECK(iv[0].pl == doctest::Approx(0.7));
  }
  SUBCASE("plain node gives a Bayesian mass") {
    const auto plain = parse_model(R"(model "m" variable x { states: a, b, c } cpt x { () -> 0.2, 0.5, 0.3 })");
    const Marginal marg{"x", (Eigen::VectorXd(3) << 0.2, 0.5, 0.3).finished()};
    const MassFunction m = marginal_to_mass(marg, plain.variables[0]);
    CHECK(m.masses().size() == 3);
    CHECK((pignistic(m) - marg.distribution).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("disjunction naming a state outside the frame") {
    VariableNode node{"x", {"a", "b", "ab"}, {}, {{"ab", UncertaintyTag::epistemic}}, {{"ab", {"a", "zz"}}}};
    const Marginal marg{"x", (Eigen::VectorXd(3) << 0.2, 0.5, 0.3).finished()};
    CHECK_THROWS_AS(marginal_to_mass(marg, node), UnresolvedName);
  }
}

TEST_CASE("interval examples") {
  const auto iv = bel_pl_intervals(perception_mass());
  REQUIRE(iv.size() == 3);
  CHECK(iv[0].hypothesis == "car");
  CHECK(iv[0].bel == doctest::Approx(0.5415));
  CHECK(iv[0].pl == doctest::Approx(0.6065));
  CHECK(iv[2].bel == iv[2].pl);

  for (const auto& i : bel_pl_intervals(MassFunction::vacuous(Frame({"x", "y", "z"})))) {
    CHECK(i.bel == 0.0);
    CHECK(i.pl == 1.0);
  }
}

TEST_CASE("belief bounds plausibility on random masses") {
  testing::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    const MassFunction m = testing::random_mass(rng, testing::pick(rng, 1, 5));
    const Frame& f = m.frame();
    for (std::uint32_t s = 0; s <= f.full().bits; ++s) {
      const FocalSet fs{static_cast<std::uint16_t>(s)};
      CHECK(bel(m, fs) <= pl(m, fs) + 1e-15);
      CHECK(std::abs(pl(m, fs) - (1.0 - bel(m, f.complement(fs)))) <= 1e-12);
    }
    double total = 0.0;
    for (const auto& [s, v] : m.masses()) total += v;
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

TEST_CASE("Dempster combination algebra on random masses") {
  testing::Rng rng(22);
  int combined = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = testing::pick(rng, 1, 5);
    const MassFunction a = testing::random_mass(rng, n);
    const MassFunction b = testing::random_mass(rng, n);
    const MassFunction c = testing::random_mass(rng, n);
    CHECK(same_masses(dempster_combine(a, MassFunction::vacuous(a.frame())), a, 1e-12));
    try {
      const MassFunction ab = dempster_combine(a, b);
      CHECK(ab.masses() == dempster_combine(b, a).masses());

      const auto oracle = testing::dempster_by_commonality(a, b);
      for (std::uint32_t s = 1; s <= a.frame().full().bits; ++s)
        CHECK(std::abs(ab.mass(FocalSet{static_cast<std::uint16_t>(s)}) - oracle[s]) <= 1e-9);

      const MassFunction left = dempster_combine(ab, c);
      const MassFunction right = dempster_combine(a, dempster_combine(b, c));
      CHECK(same_masses(left, right, 1e-9));
      ++combined;
    } catch (const TotalConflict&) {
    }
  }
  CHECK(combined > 100);
}

TEST_CASE("pignistic lies inside the belief interval") {
  testing::Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const MassFunction m = testing::random_mass(rng, testing::pick(rng, 1, 5));
    const Eigen::VectorXd p = pignistic(m);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-9);
    const auto iv = bel_pl_intervals(m);
    for (std::size_t h = 0; h < iv.size(); ++h) {
      CHECK(p[static_cast<Eigen::Index>(h)] >= iv[h].bel - 1e-12);
      CHECK(p[static_cast<Eigen::Index>(h)] <= iv[h].pl + 1e-12);
    }
  }
}

TEST_CASE("marginal to mass preserves total mass") {
  testing::Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = testing::pick(rng, 4, 6);
    VariableNode node{"x", {}, {}, {}, {}};
    for (std::size_t s = 0; s < n; ++s) node.states.push_back("s" + std::to_string(s));
    node.tags["s0"] = UncertaintyTag::ontological;
    node.tags["s1"] = UncertaintyTag::epistemic;
    node.disjunctions["s1"] = {"s2", "s3"};
    const auto p = testing::random_distribution(rng, n, 3);
    const Marginal marg{"x", Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(n))};
    const MassFunction m = marginal_to_mass(marg, node);
    double total = 0.0;
    for (const auto& [s, v] : m.masses()) total += v;
    CHECK(std::abs(total - 1.0) <= 1e-9);
    CHECK(m.mass(m.frame().full()) >= p[0]);
  }
}
