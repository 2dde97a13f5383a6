#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fkdet/entropy.hpp"
#include "fkdet/errors.hpp"
#include "fkdet/mahler.hpp"
#include "fkdet/torsion.hpp"
#include "support.hpp"

using namespace fkdet;

namespace {

const GroupDescriptor Z = GroupDescriptor::lattice(1);
const GroupDescriptor Z2 = GroupDescriptor::lattice(2);

RingElement E(const char* s, const GroupDescriptor& g = Z) { return parse_ring_element(s, g); }
RingMatrix M(const char* s, const GroupDescriptor& g = Z) { return parse_ring_matrix(s, g); }

ChainComplex koszul() { return parse_complex("group = Z^2\nboundary 1 = [[x-1],[y-1]]\nboundary 2 = [y-1, -(x-1)]\n"); }

ChainComplex single(const char* f, const GroupDescriptor& g = Z) { return ChainComplex{g, {M(f, g)}}; }

}  // namespace

TEST_CASE("Jensen examples") {
  CHECK(mahler_jensen(E("x-2")) == doctest::Approx(std::log(2.0)));
  CHECK(mahler_jensen(E("x-1")) == doctest::Approx(0.0).scale(1e-9));
  CHECK(mahler_jensen(E("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")) == doctest::Approx(0.162357).epsilon(1e-5));
  CHECK(mahler_jensen(E("3")) == doctest::Approx(std::log(3.0)));
  CHECK(mahler_jensen(E("x^-2*(2*x-1)")) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(mahler_jensen(E("x+y", Z2)), InvalidArgument);
  CHECK_THROWS_AS(mahler_jensen(RingElement(Z)), InvalidArgument);
}

TEST_CASE("polynomial roots") {
  const auto r = polynomial_roots({Rational(-2), Rational(1)});
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - std::complex<double>(2.0, 0.0)) <= 1e-12);
  const auto q = polynomial_roots({Rational(0), Rational(1), Rational(0), Rational(1)});
  CHECK(q.size() == 2);
}

TEST_CASE("Jensen agrees with the independent root oracle") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> c(-6, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const int deg = 1 + trial % 10;
    std::vector<double> coeffs(static_cast<std::size_t>(deg + 1));
    RingElement f(Z);
    for (int k = 0; k <= deg; ++k) {
      int v = c(rng);
      if (k == deg && v == 0) v = 1;
      coeffs[static_cast<std::size_t>(k)] = v;
      f.add_term(GroupElement{k}, Coeff(v));
    }
    CHECK(mahler_jensen(f) == doctest::Approx(test::jensen_oracle(coeffs)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("quadrature agrees with Jensen on random integer polynomials") {
  std::mt19937_64 rng(62);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = 1 + trial % 10;
    RingElement f(Z);
    for (int k = 0; k <= deg; ++k) {
      int v = c(rng);
      if (k == deg && v == 0) v = 2;
      f.add_term(GroupElement{k}, Coeff(v));
    }
    const QuadratureResult q = mahler_quadrature(f, QuadratureOptions{.target = 1e-8});
    INFO(to_string(f));
    CHECK(std::abs(q.value - mahler_jensen(f)) <= std::max(1e-3, q.error));
  }
}

TEST_CASE("quadrature on Z^2 symbols") {
  const QuadratureResult smooth = mahler_quadrature(E("5 - x - 1/x - y - 1/y", Z2));
  CHECK(smooth.converged);
  CHECK(smooth.value == doctest::Approx(test::torus_laplacian_oracle(5.0)).epsilon(1e-9));
  const QuadratureResult sing = mahler_quadrature(E("4 - x - 1/x - y - 1/y", Z2), QuadratureOptions{.target = 1e-5});
  CHECK(std::abs(sing.value - test::catalan_four_over_pi()) <= 1e-3);
  const QuadratureResult one = mahler_quadrature(E("1 + x + y", Z2), QuadratureOptions{.target = 1e-6});
  // log M(1 + x + y) = 3 sqrt 3 / (4 pi) L(2, chi_-3)
  CHECK(std::abs(one.value - 0.3230659472) <= 1e-3);
  CHECK_THROWS_AS(mahler_quadrature(E("x", GroupDescriptor::heisenberg())), InvalidArgument);
}

TEST_CASE("quadrature in three variables") {
  QuadratureOptions o;
  o.seed = 7;
  o.max_points = 1 << 14;
  o.target = 1e-4;
  const auto Z3 = GroupDescriptor::lattice(3);
  const QuadratureResult r = mahler_quadrature(E("7 - x - 1/x - y - 1/y - z - 1/z", Z3), o);
  // 1-D slices: int log(u - 2cos c) = acosh(u / 2)
  long double acc = 0;
  const int N = 512;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const long double a = 2 * std::numbers::pi_v<long double> * (i + 0.5L) / N;
      const long double b = 2 * std::numbers::pi_v<long double> * (j + 0.5L) / N;
      acc += std::acosh((7 - 2 * std::cos(a) - 2 * std::cos(b)) / 2);
    }
  }
  const double truth = static_cast<double>(acc / (N * N));
  CHECK(std::abs(r.value - truth) <= std::max(1e-3, 3 * r.error));
  CHECK(r.samples > 0);
  const QuadratureResult again = mahler_quadrature(E("7 - x - 1/x - y - 1/y - z - 1/z", Z3), o);
  CHECK(again.value == r.value);
}

TEST_CASE("entropy of principal actions") {
  const EntropyResult a = entropy_principal(M("x-2"), doubling_schedule(256));
  CHECK(a.kind == EntropyKind::Finite);
  CHECK(std::abs(a.value - std::log(2.0)) <= 5e-3);
  const EntropyResult b = entropy_principal(M("[2]"), doubling_schedule(16));
  CHECK(b.value == doctest::Approx(std::log(2.0)));
  const auto C2 = GroupDescriptor::finite({2});
  const EntropyResult c = entropy_principal(M("1+x", C2), {4});
  CHECK(c.kind == EntropyKind::Infinite);
  CHECK(std::isinf(c.value));
  CHECK(std::string(to_string(c.kind)) == "infinite");
  const auto C4 = GroupDescriptor::finite({4});
  const EntropyResult d = entropy_principal(M("x-2", C4), {4});
  CHECK(d.method == "cokernel");
  CHECK(d.value == doctest::Approx(std::log(15.0) / 4));
  const EntropyResult e = entropy_principal(M("[3]", C2), {4});
  CHECK(e.value == doctest::Approx(std::log(9.0) / 2));
  CHECK_THROWS_AS(entropy_principal(M("x-1/2"), {4}), InvalidArgument);
}

TEST_CASE("cokernel oracle matches the Folner value on finite groups") {
  std::mt19937_64 rng(63);
  for (const auto& g : {GroupDescriptor::finite({5}), GroupDescriptor::finite({2, 3})}) {
    for (int trial = 0; trial < 10; ++trial) {
      const RingMatrix f = test::random_matrix(rng, g, 2, 2);
      const CokernelEntropy k = entropy_finite_group_oracle(f);
      CHECK(k.group_order == g.order());
      const ApproximationTrace t = fk_det_general(f, {1});
      if (k.singular) {
        CHECK(t.verdict == Verdict::KernelDetected);
        continue;
      }
      CHECK(t.value == doctest::Approx(k.value).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("validate_complex") {
  const ComplexCheck k = validate_complex(koszul());
  CHECK(k.chain_ok);
  CHECK(k.euler == 0);
  CHECK(koszul().ranks() == std::vector<std::size_t>{1, 2, 1});
  const ChainComplex bad = parse_complex("group = Z^2\nboundary 1 = [[x-1],[y-1]]\nboundary 2 = [y-1, x-1]\n");
  const ComplexCheck kb = validate_complex(bad);
  CHECK_FALSE(kb.chain_ok);
  CHECK(kb.failing == std::vector<std::size_t>{2});
  const ChainComplex r{Z, {M("[[1], [x]]")}};
  CHECK(r.ranks() == std::vector<std::size_t>{1, 2});
  CHECK(validate_complex(r).euler == -1);
  const ChainComplex mis{Z, {M("[[1], [x]]"), M("[[1, 2, 3]]")}};
  CHECK_THROWS_AS(validate_complex(mis), InvalidArgument);
}

TEST_CASE("Laplacians of the Koszul complex") {
  const ChainComplex C = koszul();
  const RingElement L = E("4 - x - 1/x - y - 1/y", Z2);
  CHECK(C.laplacian(0) == RingMatrix(L));
  CHECK(C.laplacian(2) == RingMatrix(L));
  RingMatrix L2(Z2, 2, 2);
  L2.set(0, 0, L);
  L2.set(1, 1, L);
  CHECK(C.laplacian(1) == L2);
}

TEST_CASE("weak acyclicity") {
  CHECK(weak_acyclicity(single("x-2"), doubling_schedule(64)).weakly_acyclic);
  CHECK(weak_acyclicity(koszul(), doubling_schedule(16)).weakly_acyclic);
  const ChainComplex zero{Z, {RingMatrix(Z, 1, 1)}};
  const AcyclicityReport z = weak_acyclicity(zero, doubling_schedule(16));
  CHECK_FALSE(z.weakly_acyclic);
  CHECK(z.levels.size() == 2);
}

TEST_CASE("torsion examples") {
  const TorsionReport a = l2_torsion(single("x-2"), doubling_schedule(256));
  CHECK(std::abs(a.rho - std::log(2.0)) <= 5e-3);
  REQUIRE(a.laplacian_rho.has_value());
  CHECK(std::abs(*a.laplacian_rho - std::log(2.0)) <= 5e-3);
  const TorsionReport b = l2_torsion(single("x-1"), doubling_schedule(1024));
  CHECK(std::abs(b.rho) <= 5e-3);
  const TorsionReport k = l2_torsion(koszul(), doubling_schedule(16));
  CHECK(std::abs(k.rho) <= 1e-9);
  REQUIRE(k.laplacian_rho.has_value());
  CHECK(std::abs(*k.laplacian_rho) <= 1e-9);
  CHECK(k.per_level.size() == 2);
  CHECK(k.laplacian_levels.size() == 3);
}

TEST_CASE("torsion of a finite-group complex is exact") {
  const auto C4 = GroupDescriptor::finite({4});
  const TorsionReport t = l2_torsion(single("x-2", C4), {1});
  CHECK(t.rho == doctest::Approx(std::log(15.0) / 4));
  CHECK(t.rho_error == 0.0);
}

TEST_CASE("torsion is additive under direct sums and the two routes agree") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 5; ++trial) {
    const RingMatrix f(test::dominant_element(rng, GroupDescriptor::finite({6}), 3 + trial));
    const ChainComplex C{f.group(), {f}};
    const TorsionReport one = l2_torsion(C, {1});
    const TorsionReport two = l2_torsion(direct_sum(C, C), {1});
    CHECK(std::abs(two.rho - 2 * one.rho) <= 1e-9);
    CHECK(one.rho >= -1e-9);
    REQUIRE(one.laplacian_rho.has_value());
    CHECK(std::abs(*one.laplacian_rho - one.rho) <= 1e-9);
  }
  const TorsionReport k1 = l2_torsion(koszul(), doubling_schedule(8));
  const TorsionReport k2 = l2_torsion(direct_sum(koszul(), koszul()), doubling_schedule(8));
  CHECK(std::abs(k2.rho - 2 * k1.rho) <= 1e-9);
}

TEST_CASE("torsion routes can be selected") {
  const TorsionReport p = l2_torsion(single("x-2"), doubling_schedule(64), {}, TorsionMethod::Pseudo);
  CHECK(p.method == TorsionMethod::Pseudo);
  REQUIRE_FALSE(p.per_level.empty());
  CHECK(p.rho == doctest::Approx(0.5 * p.per_level[0].log_det));
  const TorsionReport l = l2_torsion(single("x-2"), doubling_schedule(64), {}, TorsionMethod::Laplacian);
  REQUIRE(l.laplacian_rho.has_value());
  CHECK(l.rho == *l.laplacian_rho);
  const TorsionReport b = l2_torsion(single("x-2"), doubling_schedule(64), {}, TorsionMethod::Both);
  REQUIRE(b.discrepancy.has_value());
  CHECK(*b.discrepancy <= 1e-2);
  CHECK(parse_torsion_method("laplacian") == TorsionMethod::Laplacian);
  CHECK_THROWS_AS(parse_torsion_method("magic"), InvalidArgument);
}

TEST_CASE("parse_complex errors") {
  CHECK_THROWS_AS(parse_complex("boundary 1 = [x]\n"), ParseError);
  CHECK_THROWS_AS(parse_complex("group = Z\nboundary 2 = [x]\n"), ParseError);
  CHECK_THROWS_AS(parse_complex("group = Z\nboundary 1 = [[x-1]\n"), ParseError);
  CHECK_THROWS_AS(parse_complex("group = Z\nfoo\n"), ParseError);
  CHECK_THROWS_AS(parse_complex("group = Z\n"), ParseError);
}

TEST_CASE("complex file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "fk_koszul.cx";
  {
    std::ofstream o(path);
    o << "# Koszul complex\ngroup = Z^2\nboundary 1 = [[x-1],\n  [y-1]]\nboundary 2 = [y-1, -(x-1)]  # last\n";
  }
  const ChainComplex C = read_complex_file(path);
  CHECK(C.length() == 2);
  CHECK(C.boundaries[0] == koszul().boundaries[0]);
  CHECK(C.boundaries[1] == koszul().boundaries[1]);
  std::filesystem::remove(path);
  CHECK_THROWS(read_complex_file(path));
}
