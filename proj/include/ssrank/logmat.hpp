#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ssrank/cyclotomic.hpp"
#include "ssrank/iwasawa.hpp"
#include "ssrank/padic.hpp"

namespace ssrank::logmat {

using cyclo::CycloElement;
using iwasawa::IwasawaSeries;
using padic::PadicNumber;

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using PadicMatrix = Matrix<PadicNumber>;
using SeriesMatrix = Matrix<IwasawaSeries>;
using CycloMatrix = Matrix<CycloElement>;

/// a * b, accumulating from `zero`.
template <class A, class B, class C>
Matrix<C> multiply(const Matrix<A>& a, const Matrix<B>& b, const C& zero) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shapes do not compose");
  Matrix<C> out(a.rows(), b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      C acc = zero;
      for (std::size_t k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

PadicMatrix identity_matrix(std::uint32_t p, std::size_t size, int precision);
PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b);
/// Determinant by elimination with minimal-valuation pivots.
PadicNumber padic_determinant(const PadicMatrix& m);
/// Gauss-Jordan inverse. Exact zeros stay exact. Throws std::domain_error if singular.
PadicMatrix padic_inverse(const PadicMatrix& m);

struct PrimeBlock {
  std::string label;
  int f = 1;
  PadicMatrix C;
};

/// Frobenius data of an abelian variety at the primes above p.
///
/// Construction validates that every C_v is square of side 2 g f_v, has
/// p-integral entries and unit determinant, and that det C_{phi,v} has
/// valuation exactly -g f_v.
class FrobeniusData {
 public:
  static FrobeniusData create(std::uint32_t p, int g, std::vector<PrimeBlock> blocks,
                              int precision = padic::kDefaultPrecision);

  std::uint32_t prime() const { return prime_; }
  int g() const { return g_; }
  int precision() const { return precision_; }
  std::size_t num_primes() const { return blocks_.size(); }
  const PrimeBlock& block(std::size_t v) const { return blocks_.at(v); }
  const std::vector<PrimeBlock>& blocks() const { return blocks_; }
  /// [F:Q] = sum f_v.
  int degree() const;
  /// g f_v.
  std::size_t half_size(std::size_t v) const;
  /// 2 g f_v.
  std::size_t size(std::size_t v) const { return 2 * half_size(v); }
  std::size_t total_size() const;
  const PadicMatrix& c_inverse(std::size_t v) const { return c_inverse_.at(v); }
  /// Valuation of det C_{phi,v}, recomputed at construction.
  const Valuation& det_cphi_valuation(std::size_t v) const { return det_cphi_valuation_.at(v); }

 private:
  std::uint32_t prime_ = 3;
  int g_ = 1;
  int precision_ = padic::kDefaultPrecision;
  std::vector<PrimeBlock> blocks_;
  std::vector<PadicMatrix> c_inverse_;
  std::vector<Valuation> det_cphi_valuation_;
};

/// C_{phi,v} = C_v diag(I, I/p).
PadicMatrix build_cphi(const FrobeniusData& data, std::size_t v);
/// C_{v,n} = diag(I, Phi_{p^n}(1+X) I) C_v^{-1}.
SeriesMatrix build_cvn(const FrobeniusData& data, std::size_t v, int n);
/// H_{v,n} = C_{v,n} ... C_{v,1}.
SeriesMatrix build_hvn(const FrobeniusData& data, std::size_t v, int n);
/// M_{v,n} = C_{phi,v}^{n+1} H_{v,n}.
SeriesMatrix build_mvn(const FrobeniusData& data, std::size_t v, int n);
/// Block diagonal H_n in the declared prime order; off-diagonal blocks are exact zero.
SeriesMatrix assemble_hn(const FrobeniusData& data, int n);

/// Largest X-degree among the entries.
std::int64_t max_degree(const SeriesMatrix& m);

/// Entrywise evaluation at eps_n.
CycloMatrix evaluate_at_level(const SeriesMatrix& m, int n);

/// H_{v,n}(eps_n) computed factor by factor: each C_{k} contributes
/// U + Phi_{p^k}(zeta_{p^n}) L, the product is expanded over subsets of
/// {1..n-1} and the Phi products are exact polynomials of degree below d.
CycloMatrix evaluate_hvn(const FrobeniusData& data, std::size_t v, int n);

struct EvaluatedHn {
  int level = 0;
  std::vector<std::size_t> block_sizes;
  CycloMatrix value;
};

EvaluatedHn evaluate_hn(const FrobeniusData& data, int n);

/// Per-prime subsets of {1..2 g f_v}, 1-based and sorted.
struct IndexTuple {
  std::vector<std::vector<int>> parts;

  std::size_t total_size() const;
  std::string to_string() const;
  friend bool operator==(const IndexTuple& a, const IndexTuple& b) { return a.parts == b.parts; }
  friend bool operator<(const IndexTuple& a, const IndexTuple& b) { return a.parts < b.parts; }
};

/// Throws std::invalid_argument unless the tuple fits the shape of `data`
/// and has total size g[F:Q].
void validate_tuple(const FrobeniusData& data, const IndexTuple& t);

/// I_0 = {1..g f_v} at every prime.
IndexTuple tuple_i0(const FrobeniusData& data);
/// Complement of I_0.
IndexTuple tuple_i1(const FrobeniusData& data);
/// I_0 for even n, I_1 for odd n.
IndexTuple tuple_jn(const FrobeniusData& data, int n);

/// Determinant by fraction-free elimination, pivoting on minimal valuation.
CycloElement cyclo_determinant(const CycloMatrix& m);
/// Cofactor expansion; division free.
CycloElement cyclo_determinant_laplace(const CycloMatrix& m);

/// Rows `rows`, columns `cols` (0-based global indices).
CycloMatrix submatrix(const CycloMatrix& m, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols);

/// Global 0-based indices of a tuple under the block layout.
std::vector<std::size_t> global_indices(const std::vector<std::size_t>& block_sizes, const IndexTuple& t);

/// The (I, J)-minor of H_n(eps_n), as a product of per-block determinants.
/// Exact zero when |I_v| != |J_v| at some prime.
CycloElement minor_at(const EvaluatedHn& hn, const IndexTuple& rows, const IndexTuple& cols);

struct EntryValuation {
  std::size_t row = 0;
  std::size_t col = 0;
  Valuation valuation = Valuation::infinite();
};

struct LowerHalfReport {
  std::size_t entries_checked = 0;
  /// Every bottom-row entry of the symbolic H_{v,n} divides by Phi_{p^n}(1+X).
  bool symbolic_divisible = false;
  bool symbolic_checked = false;
  /// Bottom-row entries of H_{v,n}(eps_n) that are not exact zero.
  std::vector<EntryValuation> failures;

  bool passed() const { return failures.empty() && (!symbolic_checked || symbolic_divisible); }
};

/// Checks that rows g f_v + 1 .. 2 g f_v of H_{v,n}(eps_n) vanish exactly.
/// The symbolic divisibility check runs when p^n - 1 <= symbolic_degree_limit.
LowerHalfReport lower_half_vanishing_check(const FrobeniusData& data, std::size_t v, int n,
                                           std::int64_t symbolic_degree_limit = 250);

/// delta_n = Phi_{p^(n-1)}(zeta) Phi_{p^(n-3)}(zeta) ... at level n; 1 for n = 1.
CycloElement delta_n(std::uint32_t p, int n, int precision = padic::kDefaultPrecision);

struct ClosedForm {
  CycloMatrix h;
  CycloElement delta;
};

/// H_{v,n}(eps_n) for C_{v,n} = (0 | B1 ; Phi B2 | 0): upper right
/// delta_n (B1 B2)^((n-1)/2) B1 for odd n, upper left delta_n (B1 B2)^(n/2)
/// for even n, exact zero elsewhere.
ClosedForm closed_form_h_antidiag(const PadicMatrix& b1, const PadicMatrix& b2, int n,
                                  int precision = padic::kDefaultPrecision);

/// (B1, B2) read off C_v^{-1} = (0 | B1 ; B2 | 0). Throws std::invalid_argument
/// if the diagonal blocks of C_v^{-1} are not zero.
std::pair<PadicMatrix, PadicMatrix> antidiag_blocks(const FrobeniusData& data, std::size_t v);

}  // namespace ssrank::logmat
