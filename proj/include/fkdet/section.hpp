#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <variant>

#include <Eigen/Dense>

#include "fkdet/ring.hpp"

namespace fkdet {

using DenseMatrix = std::variant<Eigen::MatrixXd, Eigen::MatrixXcd>;

std::size_t rows(const DenseMatrix& m);
std::size_t cols(const DenseMatrix& m);
bool is_complex(const DenseMatrix& m);
Eigen::MatrixXcd to_complex(const DenseMatrix& m);
/// Max absolute row sum (the induced infinity norm).
double inf_norm(const DenseMatrix& m);
bool is_hermitian(const DenseMatrix& m, double tol);

enum class Side {
  Left,   // columns (l2 F)^{d x 1}: ((i,t),(j,s)) = (f_ij)_{t s^-1} alpha(t s^-1, s)
  Right,  // rows (l2 F)^{1 x d'}:  ((k,t),(i,s)) = (f_ik)_{s^-1 t} alpha(s, s^-1 t)
};

/// Dense compression p_F g i_F of a ring matrix to a finite set.
/// Flat index of (block b, element F[p]) is b * |F| + p.
class FiniteSection {
 public:
  FiniteSection(DenseMatrix m, RingMatrix source, FolnerSet set, Side side);

  const DenseMatrix& matrix() const noexcept { return m_; }
  const RingMatrix& source() const noexcept { return source_; }
  const FolnerSet& set() const noexcept { return set_; }
  Side side() const noexcept { return side_; }

  std::size_t rows() const { return fkdet::rows(m_); }
  std::size_t cols() const { return fkdet::cols(m_); }
  bool is_complex() const { return fkdet::is_complex(m_); }
  /// Number of row blocks (d for a left section of a d x d matrix).
  std::size_t row_blocks() const noexcept { return rows() / set_.size(); }
  std::size_t col_blocks() const noexcept { return cols() / set_.size(); }
  std::size_t flat_index(std::size_t block, std::size_t pos) const noexcept {
    return block * set_.size() + pos;
  }
  std::complex<double> operator()(std::size_t r, std::size_t c) const;
  bool is_hermitian(double tol = 0.0) const { return fkdet::is_hermitian(m_, tol); }

  /// 32-byte header ("FKSECT01", u64 rows, u64 cols, u32 dtype 1=f64 2=c128,
  /// u32 reserved) followed by row-major little-endian values.
  void write_binary(const std::filesystem::path& path) const;

 private:
  DenseMatrix m_;
  RingMatrix source_;
  FolnerSet set_;
  Side side_;
};

FiniteSection assemble(const RingMatrix& f, const FolnerSet& F, Side side = Side::Left);

/// Extends a section to a superset F2 of its set. Entries on the shared index
/// block are copied; the result equals assemble(source, F2, side).
FiniteSection grow(FiniteSection prev, const FolnerSet& F2);

/// Dense integer matrix, row-major.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<BigInt> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  BigInt& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Exact section of an untwisted integer-coefficient matrix.
IntMatrix integer_section(const RingMatrix& f, const FolnerSet& F, Side side = Side::Left);

DenseMatrix read_binary_section(const std::filesystem::path& path);

}  // namespace fkdet
