#include "fkdet/section.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "fkdet/errors.hpp"

namespace fkdet {

std::size_t rows(const DenseMatrix& m) {
  return std::visit([](const auto& a) { return static_cast<std::size_t>(a.rows()); }, m);
}

std::size_t cols(const DenseMatrix& m) {
  return std::visit([](const auto& a) { return static_cast<std::size_t>(a.cols()); }, m);
}

bool is_complex(const DenseMatrix& m) { return std::holds_alternative<Eigen::MatrixXcd>(m); }

Eigen::MatrixXcd to_complex(const DenseMatrix& m) {
  if (const auto* r = std::get_if<Eigen::MatrixXd>(&m)) return r->cast<std::complex<double>>();
  return std::get<Eigen::MatrixXcd>(m);
}

double inf_norm(const DenseMatrix& m) {
  return std::visit(
      [](const auto& a) {
        if (a.size() == 0) return 0.0;
        return a.cwiseAbs().rowwise().sum().maxCoeff();
      },
      m);
}

bool is_hermitian(const DenseMatrix& m, double tol) {
  return std::visit(
      [tol](const auto& a) {
        if (a.rows() != a.cols()) return false;
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
          for (Eigen::Index i = j; i < a.rows(); ++i) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
          }
        }
        return true;
      },
      m);
}

FiniteSection::FiniteSection(DenseMatrix m, RingMatrix source, FolnerSet set, Side side)
    : m_(std::move(m)), source_(std::move(source)), set_(std::move(set)), side_(side) {}

std::complex<double> FiniteSection::operator()(std::size_t r, std::size_t c) const {
  return std::visit(
      [r, c](const auto& a) -> std::complex<double> {
        return a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      },
      m_);
}

void FiniteSection::write_binary(const std::filesystem::path& path) const {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  char header[32] = {};
  std::memcpy(header, "FKSECT01", 8);
  const std::uint64_t r = rows();
  const std::uint64_t c = cols();
  const std::uint32_t dtype = is_complex() ? 2 : 1;
  std::memcpy(header + 8, &r, 8);
  std::memcpy(header + 16, &c, 8);
  std::memcpy(header + 24, &dtype, 4);
  out.write(header, sizeof header);
  std::visit(
      [&](const auto& a) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
          for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const auto v = a(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
          }
        }
      },
      m_);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

DenseMatrix read_binary_section(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char header[32];
  if (!in.read(header, sizeof header) || std::memcmp(header, "FKSECT01", 8) != 0) {
    throw std::runtime_error("not a section file: " + path.string());
  }
  std::uint64_t r = 0;
  std::uint64_t c = 0;
  std::uint32_t dtype = 0;
  std::memcpy(&r, header + 8, 8);
  std::memcpy(&c, header + 16, 8);
  std::memcpy(&dtype, header + 24, 4);
  auto fill = [&](auto& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        in.read(reinterpret_cast<char*>(&a(i, j)), sizeof a(i, j));
      }
    }
    if (!in) throw std::runtime_error("truncated section file: " + path.string());
  };
  const auto R = static_cast<Eigen::Index>(r);
  const auto C = static_cast<Eigen::Index>(c);
  if (dtype == 1) {
    Eigen::MatrixXd a(R, C);
    fill(a);
    return a;
  }
  if (dtype == 2) {
    Eigen::MatrixXcd a(R, C);
    fill(a);
    return a;
  }
  throw std::runtime_error("unknown dtype in " + path.string());
}

namespace {

struct Shape {
  std::size_t out_blocks;
  std::size_t in_blocks;
};

Shape shape_for(const RingMatrix& f, Side side) {
  return side == Side::Left ? Shape{f.rows(), f.cols()} : Shape{f.cols(), f.rows()};
}

// Calls emit(row, col, value) for every nonzero entry of the section whose
// column position satisfies want(p_in, p_out).
template <typename Emit, typename Want>
void for_each_entry(const RingMatrix& f, const FolnerSet& F, Side side, Want want, Emit emit) {
  const GroupDescriptor& g = f.group();
  const std::size_t n = F.size();
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < f.cols(); ++j) {
      for (const auto& [u, c] : f.at(i, j).terms()) {
        for (std::size_t p = 0; p < n; ++p) {
          const GroupElement& s = F[p];
          const GroupElement t = side == Side::Left ? g.mul(u, s) : g.mul(s, u);
          const auto q = F.index_of(t);
          if (!q || !want(p, *q)) continue;
          const std::complex<double> phase = side == Side::Left ? g.cocycle(u, s) : g.cocycle(s, u);
          if (side == Side::Left) {
            emit(i * n + *q, j * n + p, c, phase);
          } else {
            emit(j * n + *q, i * n + p, c, phase);
          }
        }
      }
    }
  }
}

template <typename Want>
DenseMatrix fill_section(const RingMatrix& f, const FolnerSet& F, Side side, DenseMatrix m, Want want) {
  if (auto* real = std::get_if<Eigen::MatrixXd>(&m)) {
    for_each_entry(f, F, side, want, [&](std::size_t r, std::size_t col, const Coeff& c, std::complex<double>) {
      (*real)(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = c.to_complex().real();
    });
  } else {
    auto& cm = std::get<Eigen::MatrixXcd>(m);
    for_each_entry(f, F, side, want,
                   [&](std::size_t r, std::size_t col, const Coeff& c, std::complex<double> phase) {
                     cm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
                         c.times_phase(phase).to_complex();
                   });
  }
  return m;
}

DenseMatrix zero_section(const RingMatrix& f, std::size_t n, Side side) {
  const Shape sh = shape_for(f, side);
  const auto R = static_cast<Eigen::Index>(sh.out_blocks * n);
  const auto C = static_cast<Eigen::Index>(sh.in_blocks * n);
  if (f.group().twist() || f.domain() == Domain::Complex) {
    return Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(R, C));
  }
  return Eigen::MatrixXd(Eigen::MatrixXd::Zero(R, C));
}

void check_group(const RingMatrix& f, const FolnerSet& F) {
  for (const GroupElement& s : F.elements()) {
    if (s.arity() != f.group().arity()) {
      throw InvalidArgument("Folner set and ring matrix are over different groups");
    }
  }
}

}  // namespace

FiniteSection assemble(const RingMatrix& f, const FolnerSet& F, Side side) {
  check_group(f, F);
  DenseMatrix m = fill_section(f, F, side, zero_section(f, F.size(), side),
                               [](std::size_t, std::size_t) { return true; });
  return FiniteSection(std::move(m), f, F, side);
}

FiniteSection grow(FiniteSection prev, const FolnerSet& F2) {
  const FolnerSet& F = prev.set();
  const std::size_t n = F.size();
  const std::size_t n2 = F2.size();
  std::vector<std::size_t> to_new(n);
  std::vector<bool> is_old(n2, false);
  for (std::size_t p = 0; p < n; ++p) {
    const auto q = F2.index_of(F[p]);
    if (!q) throw InvalidArgument("grow: new Folner set does not contain the old one");
    to_new[p] = *q;
    is_old[*q] = true;
  }
  if (n == n2) {
    bool same = true;
    for (std::size_t p = 0; p < n && same; ++p) same = to_new[p] == p;
    if (same) return prev;
  }
  const RingMatrix& f = prev.source();
  DenseMatrix m = zero_section(f, n2, prev.side());
  const std::size_t rb = prev.row_blocks();
  const std::size_t cb = prev.col_blocks();
  std::visit(
      [&](auto& dst) {
        using M = std::decay_t<decltype(dst)>;
        const M& src = std::get<M>(prev.matrix());
        for (std::size_t bj = 0; bj < cb; ++bj) {
          for (std::size_t pj = 0; pj < n; ++pj) {
            const auto dc = static_cast<Eigen::Index>(bj * n2 + to_new[pj]);
            const auto sc = static_cast<Eigen::Index>(bj * n + pj);
            for (std::size_t bi = 0; bi < rb; ++bi) {
              for (std::size_t pi = 0; pi < n; ++pi) {
                dst(static_cast<Eigen::Index>(bi * n2 + to_new[pi]), dc) =
                    src(static_cast<Eigen::Index>(bi * n + pi), sc);
              }
            }
          }
        }
      },
      m);
  m = fill_section(f, F2, prev.side(), std::move(m),
                   [&](std::size_t p, std::size_t q) { return !is_old[p] || !is_old[q]; });
  return FiniteSection(std::move(m), f, F2, prev.side());
}

IntMatrix integer_section(const RingMatrix& f, const FolnerSet& F, Side side) {
  check_group(f, F);
  if (f.group().twist() || !f.has_integer_coefficients()) {
    throw InvalidArgument("integer section needs an untwisted integer-coefficient matrix");
  }
  const Shape sh = shape_for(f, side);
  IntMatrix out(sh.out_blocks * F.size(), sh.in_blocks * F.size());
  for_each_entry(f, F, side, [](std::size_t, std::size_t) { return true; },
                 [&](std::size_t r, std::size_t c, const Coeff& v, std::complex<double>) {
                   out(r, c) = boost::multiprecision::numerator(v.exact());
                 });
  return out;
}

}  // namespace fkdet
