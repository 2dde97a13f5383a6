#include <doctest.h>

#include <filesystem>
#include <random>

#include "fkdet/errors.hpp"
#include "fkdet/spectral.hpp"
#include "support.hpp"

using namespace fkdet;

namespace {

const GroupDescriptor Z = GroupDescriptor::lattice(1);
const GroupDescriptor Z2 = GroupDescriptor::lattice(2);

Eigen::MatrixXd real_of(const FiniteSection& s) { return std::get<Eigen::MatrixXd>(s.matrix()); }

}  // namespace

TEST_CASE("assemble examples") {
  const FolnerSet F = folner_box(Z, 3);
  Eigen::MatrixXd expect(3, 3);
  expect << -2, 0, 0, 1, -2, 0, 0, 1, -2;
  CHECK(real_of(assemble(parse_ring_matrix("x-2", Z), F)) == expect);

  CHECK(real_of(assemble(RingMatrix::identity(Z2, 1), folner_box(Z2, 3))) == Eigen::MatrixXd::Identity(9, 9));

  Eigen::MatrixXd e2(2, 2);
  e2 << 5, -2, -2, 5;
  CHECK(real_of(assemble(parse_ring_matrix("5-2*x-2/x", Z), folner_box(Z, 2))) == e2);
}

TEST_CASE("right sections use the transposed block layout") {
  const RingMatrix f = parse_ring_matrix("x-2", Z);
  const FolnerSet F = folner_box(Z, 3);
  // abelian scalar: s^-1 t = t s^-1, both sides agree
  CHECK(real_of(assemble(f, F, Side::Right)) == real_of(assemble(f, F)));
  const RingMatrix m = parse_ring_matrix("[[x, 2, 0], [1, y, x*y]]", Z2);
  const FiniteSection R = assemble(m, folner_box(Z2, 2), Side::Right);
  CHECK(R.rows() == 12);
  CHECK(R.cols() == 8);
  const RingMatrix mt = parse_ring_matrix("[[x, 1], [2, y], [0, x*y]]", Z2);
  CHECK(real_of(R) == real_of(assemble(mt, folner_box(Z2, 2))));
  // non-abelian: the sides differ
  const auto H = GroupDescriptor::heisenberg();
  const RingMatrix h = parse_ring_matrix("x + y", H);
  CHECK(real_of(assemble(h, folner_box(H, 2), Side::Right)) != real_of(assemble(h, folner_box(H, 2))));
}

TEST_CASE("block layout of matrices") {
  const RingMatrix f = parse_ring_matrix("[[1, x], [0, 3]]", Z);
  const FolnerSet F = folner_box(Z, 2);
  const FiniteSection S = assemble(f, F);
  CHECK(S.row_blocks() == 2);
  CHECK(S.flat_index(1, 0) == 2);
  CHECK(S(0, 0) == 1.0);
  CHECK(S(1, 2) == 1.0);  // (f_01)_{t s^-1} at t = 1, s = 0
  CHECK(S(2, 2) == 3.0);
  CHECK(S(2, 0) == 0.0);
}

TEST_CASE("Hermitian for star-symmetric input, exact on integer domains") {
  std::mt19937_64 rng(31);
  for (const auto& g : {Z, Z2, GroupDescriptor::heisenberg(), GroupDescriptor::finite({7})}) {
    for (int trial = 0; trial < 20; ++trial) {
      const RingMatrix f = test::random_matrix(rng, g, 2, 2);
      const RingMatrix h = f + star(f);
      CHECK(assemble(h, folner_box(g, 3)).is_hermitian(0.0));
    }
  }
}

TEST_CASE("twisted sections are Hermitian for star-symmetric input") {
  std::mt19937_64 rng(32);
  const auto g = GroupDescriptor::lattice(2, Cocycle{0.3183});
  for (int trial = 0; trial < 20; ++trial) {
    const RingMatrix f = test::random_matrix(rng, g, 2, 2);
    const RingMatrix h = f + star(f);
    const FiniteSection S = assemble(h, folner_box(g, 5));
    CHECK(S.is_complex());
    CHECK(S.is_hermitian(1e-12));
    const FiniteSection P = assemble(mat_mul(star(f), f), folner_box(g, 5));
    CHECK(P.is_hermitian(1e-12));
  }
}

TEST_CASE("adjoint compatibility") {
  std::mt19937_64 rng(33);
  for (const auto& g : {Z2, GroupDescriptor::heisenberg(), GroupDescriptor::lattice(2, Cocycle{0.2})}) {
    for (int trial = 0; trial < 10; ++trial) {
      const RingMatrix f = test::random_matrix(rng, g, 2, 3);
      const FolnerSet F = folner_box(g, 3);
      const Eigen::MatrixXcd a = to_complex(assemble(star(f), F).matrix());
      const Eigen::MatrixXcd b = to_complex(assemble(f, F).matrix()).adjoint();
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("theta 0 twisted sections equal untwisted sections exactly") {
  std::mt19937_64 rng(34);
  const auto g0 = GroupDescriptor::lattice(2, Cocycle{0.0});
  for (int trial = 0; trial < 20; ++trial) {
    const RingMatrix f = test::random_matrix(rng, Z2, 2, 2);
    const RingMatrix f0 = parse_ring_matrix(to_string(f), g0);
    const FolnerSet F = folner_box(Z2, 4);
    const Eigen::MatrixXd u = real_of(assemble(f, F));
    const Eigen::MatrixXcd t = to_complex(assemble(f0, F).matrix());
    CHECK(t.real() == u);
    CHECK(t.imag().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("multilevel Toeplitz structure on Z^d") {
  std::mt19937_64 rng(35);
  for (const auto& g : {Z, Z2, GroupDescriptor::lattice(3)}) {
    const RingMatrix f = test::random_matrix(rng, g, 1, 1, 6);
    const FolnerSet F = folner_box(g, 4);
    const Eigen::MatrixXd M = real_of(assemble(f, F));
    std::uniform_int_distribution<std::size_t> pick(0, F.size() - 1);
    for (int k = 0; k < 500; ++k) {
      const std::size_t t = pick(rng);
      const std::size_t s = pick(rng);
      const GroupElement d = g.mul(F[t], g.inv(F[s]));
      const double expect = f.at(0, 0).coeff(d).to_complex().real();
      CHECK(M(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) == expect);
    }
  }
}

TEST_CASE("grow equals assemble") {
  const RingMatrix f = parse_ring_matrix("x-2", Z);
  const FiniteSection a = grow(assemble(f, folner_box(Z, 1)), folner_box(Z, 2));
  CHECK(real_of(a) == real_of(assemble(f, folner_box(Z, 2))));

  const FiniteSection same = assemble(f, folner_box(Z, 3));
  CHECK(real_of(grow(same, folner_box(Z, 3))) == real_of(same));

  const RingMatrix five = parse_ring_matrix("5 - x - 1/x - y - 1/y", Z2);
  const FiniteSection g3 = grow(assemble(five, folner_box(Z2, 2)), folner_box(Z2, 3));
  CHECK(real_of(g3) == real_of(assemble(five, folner_box(Z2, 3))));

  std::mt19937_64 rng(36);
  for (const auto& g : {Z2, GroupDescriptor::heisenberg(), GroupDescriptor::lattice(2, Cocycle{0.37})}) {
    const RingMatrix m = test::random_matrix(rng, g, 2, 2);
    for (Side side : {Side::Left, Side::Right}) {
      FiniteSection s = assemble(m, folner_box(g, 2), side);
      for (int n = 3; n <= 5; ++n) {
        s = grow(std::move(s), folner_box(g, n));
        const FiniteSection fresh = assemble(m, folner_box(g, n), side);
        CHECK((to_complex(s.matrix()) - to_complex(fresh.matrix())).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(grow(assemble(f, FolnerSet(std::vector<GroupElement>{{5}})), folner_box(Z, 2)), InvalidArgument);
}

TEST_CASE("positivity inheritance for injective f") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const RingElement h = test::dominant_element(rng, Z2, 4);
    const RingMatrix g = mat_mul(star(RingMatrix(h)), RingMatrix(h));
    CHECK(try_cholesky(assemble(g, folner_box(Z2, 6)).matrix()).ok);
  }
}

TEST_CASE("integer sections") {
  const RingMatrix f = parse_ring_matrix("x-2", GroupDescriptor::finite({4}));
  const IntMatrix M = integer_section(f, folner_box(f.group(), 1));
  CHECK(M.rows == 4);
  CHECK(M(0, 0) == -2);
  CHECK(M(1, 0) == 1);
  CHECK(M(0, 3) == 1);  // wraps around
  CHECK_THROWS_AS(integer_section(parse_ring_matrix("x/2", Z), folner_box(Z, 2)), InvalidArgument);
  const auto g = GroupDescriptor::lattice(2, Cocycle{0.1});
  CHECK_THROWS_AS(integer_section(parse_ring_matrix("x", g), folner_box(g, 2)), InvalidArgument);
}

TEST_CASE("binary dump round trip") {
  const auto dir = std::filesystem::temp_directory_path();
  const FiniteSection r = assemble(parse_ring_matrix("5-2*x-2/x", Z), folner_box(Z, 5));
  r.write_binary(dir / "fk_sect_real.bin");
  CHECK(std::get<Eigen::MatrixXd>(read_binary_section(dir / "fk_sect_real.bin")) == real_of(r));
  CHECK(std::filesystem::file_size(dir / "fk_sect_real.bin") == 32 + 25 * 8);

  const auto g = GroupDescriptor::lattice(2, Cocycle{0.25});
  const FiniteSection c = assemble(parse_ring_matrix("x + y + 2i", g), folner_box(g, 3));
  c.write_binary(dir / "fk_sect_cplx.bin");
  CHECK(std::get<Eigen::MatrixXcd>(read_binary_section(dir / "fk_sect_cplx.bin")) ==
        std::get<Eigen::MatrixXcd>(c.matrix()));
  std::filesystem::remove(dir / "fk_sect_real.bin");
  std::filesystem::remove(dir / "fk_sect_cplx.bin");
}

TEST_CASE("group mismatch") {
  CHECK_THROWS_AS(assemble(parse_ring_matrix("x", Z), folner_box(Z2, 2)), InvalidArgument);
}
