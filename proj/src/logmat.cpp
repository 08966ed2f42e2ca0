#include "ssrank/logmat.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "ssrank/modarith.hpp"
#include "ssrank/tables.hpp"

namespace ssrank::logmat {

namespace {

using u64 = std::uint64_t;

PadicNumber one(std::uint32_t p) { return PadicNumber::p_power(p, 0, padic::max_precision(p)); }

CycloElement cyclo_one(std::uint32_t p, int level) { return CycloElement::constant(one(p), level); }

std::uint32_t prime_of(const PadicMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_exact_zero()) return m(i, j).prime();
  if (m.rows() > 0 && m.cols() > 0) return m(0, 0).prime();
  throw std::invalid_argument("empty matrix has no prime");
}

std::optional<std::size_t> min_valuation_pivot(const PadicMatrix& a, std::size_t k) {
  std::optional<std::size_t> best;
  for (std::size_t r = k; r < a.rows(); ++r) {
    if (!a(r, k).is_nonzero()) continue;
    if (!best || a(r, k).valuation_lower_bound() < a(*best, k).valuation_lower_bound()) best = r;
  }
  return best;
}

template <class T>
void swap_rows(Matrix<T>& a, std::size_t r, std::size_t s) {
  if (r == s) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(s, j));
}

PadicMatrix power(const PadicMatrix& m, int k) {
  PadicMatrix r = identity_matrix(prime_of(m), m.rows(), padic::max_precision(prime_of(m)));
  for (int i = 0; i < k; ++i) r = m * r;
  return r;
}

// Products of Phi_{p^k}(1+X) over subsets of {1..n-1}, indexed by bitmask
// (bit k-1 for k), modulo p^N.
using SubsetProducts = std::vector<std::vector<u64>>;

std::shared_ptr<const SubsetProducts> phi_subset_products(std::uint32_t p, int n, int N) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, int, int>, std::shared_ptr<const SubsetProducts>> cache;
  const auto key = std::make_tuple(p, n, N);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const u64 m = detail::ipow(p, N);
  const std::size_t count = std::size_t{1} << (n - 1);
  auto out = std::make_shared<SubsetProducts>(count);
  (*out)[0] = {1 % m};
  for (std::size_t mask = 1; mask < count; ++mask) {
    int h = 0;
    while ((mask >> (h + 1)) != 0) ++h;
    const auto& rest = (*out)[mask ^ (std::size_t{1} << h)];
    const auto table = detail::phi_table(p, h + 1, N);
    const auto& f = table->dense;
    std::vector<u64> c(rest.size() + f.size() - 1, 0);
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] == 0) continue;
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (f[j] == 0) continue;
        c[i + j] = detail::addmod(c[i + j], detail::mulmod(rest[i], f[j], m), m);
      }
    }
    (*out)[mask] = std::move(c);
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace

PadicMatrix identity_matrix(std::uint32_t p, std::size_t size, int precision) {
  PadicMatrix m(size, size, PadicNumber::zero(p));
  for (std::size_t i = 0; i < size; ++i) m(i, i) = PadicNumber::p_power(p, 0, precision);
  return m;
}

PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
  return multiply(a, b, PadicNumber::zero(prime_of(a)));
}

PadicNumber padic_determinant(const PadicMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::uint32_t p = prime_of(m);
  PadicMatrix a = m;
  PadicNumber det = one(p);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto pivot = min_valuation_pivot(a, k);
    if (!pivot) {
      int prec = padic::kExactPrecision;
      for (std::size_t r = k; r < a.rows(); ++r)
        if (!a(r, k).is_exact_zero()) prec = std::min(prec, a(r, k).precision());
      if (prec == padic::kExactPrecision) return PadicNumber::zero(p);
      return det * PadicNumber::zero_to_precision(p, prec);
    }
    if (*pivot != k) {
      swap_rows(a, *pivot, k);
      det = -det;
    }
    det = det * a(k, k);
    const PadicNumber inv = a(k, k).inverse();
    for (std::size_t i = k + 1; i < a.rows(); ++i) {
      if (a(i, k).is_exact_zero()) continue;
      const PadicNumber factor = a(i, k) * inv;
      for (std::size_t j = k + 1; j < a.cols(); ++j) a(i, j) = a(i, j) - factor * a(k, j);
    }
  }
  return det;
}

PadicMatrix padic_inverse(const PadicMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::uint32_t p = prime_of(m);
  const std::size_t n = m.rows();
  PadicMatrix a(n, 2 * n, PadicNumber::zero(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
    a(i, n + i) = one(p);
  }
  for (std::size_t k = 0; k < n; ++k) {
    auto pivot = min_valuation_pivot(a, k);
    if (!pivot) throw std::domain_error("matrix is singular at the working precision");
    swap_rows(a, *pivot, k);
    const PadicNumber inv = a(k, k).inverse();
    for (std::size_t j = 0; j < 2 * n; ++j) a(k, j) = a(k, j) * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_exact_zero()) continue;
      const PadicNumber factor = a(i, k);
      for (std::size_t j = 0; j < 2 * n; ++j) {
        if (a(k, j).is_exact_zero()) continue;
        a(i, j) = a(i, j) - factor * a(k, j);
      }
    }
  }
  PadicMatrix out(n, n, PadicNumber::zero(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, n + j);
  return out;
}

FrobeniusData FrobeniusData::create(std::uint32_t p, int g, std::vector<PrimeBlock> blocks, int precision) {
  padic::require_odd_prime(p);
  if (g < 1) throw std::invalid_argument("g must be at least 1");
  if (blocks.empty()) throw std::invalid_argument("at least one prime above p is required");
  if (precision < 1 || precision > padic::max_precision(p)) {
    throw std::invalid_argument("precision must lie in [1, " + std::to_string(padic::max_precision(p)) + "]");
  }
  FrobeniusData d;
  d.prime_ = p;
  d.g_ = g;
  d.precision_ = precision;
  std::unordered_set<std::string> labels;
  for (auto& b : blocks) {
    const std::string where = "prime '" + b.label + "': ";
    if (!labels.insert(b.label).second) throw std::invalid_argument(where + "duplicate label");
    if (b.f < 1) throw std::invalid_argument(where + "f must be at least 1");
    const auto side = static_cast<std::size_t>(2 * g * b.f);
    if (b.C.rows() != side || b.C.cols() != side) {
      throw std::invalid_argument(where + "C must be " + std::to_string(side) + "x" + std::to_string(side));
    }
    for (std::size_t i = 0; i < side; ++i) {
      for (std::size_t j = 0; j < side; ++j) {
        auto& x = b.C(i, j);
        if (x.is_exact_zero()) {
          x = PadicNumber::zero(p);
          continue;
        }
        if (x.prime() != p) throw std::invalid_argument(where + "entry prime mismatch");
        if (x.is_nonzero() && x.valuation_lower_bound() < 0) {
          throw std::invalid_argument(where + "C must have entries in Z_p");
        }
        if (x.precision() > precision) x = x.reduce_precision(precision);
      }
    }
    const PadicNumber det = padic_determinant(b.C);
    if (!det.is_unit()) {
      throw std::invalid_argument(where + "C must lie in GL_" + std::to_string(side) +
                                  "(Z_p): det C has valuation " + det.valuation().to_string());
    }
    d.blocks_.push_back(b);
    d.c_inverse_.push_back(padic_inverse(b.C));
  }
  for (std::size_t v = 0; v < d.blocks_.size(); ++v) {
    const Valuation val = val_p(padic_determinant(build_cphi(d, v)));
    const auto expected = -static_cast<std::int64_t>(d.half_size(v));
    if (!(val == Valuation::exact(Rational(expected)))) {
      throw std::invalid_argument("prime '" + d.blocks_[v].label + "': det C_phi has valuation " + val.to_string() +
                                  ", expected " + std::to_string(expected));
    }
    d.det_cphi_valuation_.push_back(val);
  }
  return d;
}

int FrobeniusData::degree() const {
  int s = 0;
  for (const auto& b : blocks_) s += b.f;
  return s;
}

std::size_t FrobeniusData::half_size(std::size_t v) const {
  return static_cast<std::size_t>(g_ * blocks_.at(v).f);
}

std::size_t FrobeniusData::total_size() const {
  std::size_t s = 0;
  for (std::size_t v = 0; v < blocks_.size(); ++v) s += size(v);
  return s;
}

PadicMatrix build_cphi(const FrobeniusData& data, std::size_t v) {
  PadicMatrix m = data.block(v).C;
  const std::size_t h = data.half_size(v);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = h; j < m.cols(); ++j) m(i, j) = m(i, j).shifted(-1);
  return m;
}

SeriesMatrix build_cvn(const FrobeniusData& data, std::size_t v, int n) {
  if (n < 1) throw std::invalid_argument("build_cvn: n must be at least 1");
  const std::uint32_t p = data.prime();
  const auto& cinv = data.c_inverse(v);
  const std::size_t h = data.half_size(v);
  const auto phi = IwasawaSeries::polynomial(p, cyclo::phi_poly(p, n, data.precision()));
  SeriesMatrix out(cinv.rows(), cinv.cols(), IwasawaSeries::zero(p));
  for (std::size_t i = 0; i < cinv.rows(); ++i) {
    for (std::size_t j = 0; j < cinv.cols(); ++j) {
      if (cinv(i, j).is_exact_zero()) continue;
      out(i, j) = i < h ? IwasawaSeries::constant(cinv(i, j)) : cinv(i, j) * phi;
    }
  }
  return out;
}

SeriesMatrix build_hvn(const FrobeniusData& data, std::size_t v, int n) {
  if (n < 1) throw std::invalid_argument("build_hvn: n must be at least 1");
  SeriesMatrix h = build_cvn(data, v, 1);
  for (int k = 2; k <= n; ++k) h = multiply(build_cvn(data, v, k), h, IwasawaSeries::zero(data.prime()));
  return h;
}

SeriesMatrix build_mvn(const FrobeniusData& data, std::size_t v, int n) {
  const PadicMatrix cphi_power = power(build_cphi(data, v), n + 1);
  return multiply(cphi_power, build_hvn(data, v, n), IwasawaSeries::zero(data.prime()));
}

SeriesMatrix assemble_hn(const FrobeniusData& data, int n) {
  const std::size_t total = data.total_size();
  SeriesMatrix out(total, total, IwasawaSeries::zero(data.prime()));
  std::size_t offset = 0;
  for (std::size_t v = 0; v < data.num_primes(); ++v) {
    const auto h = build_hvn(data, v, n);
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) out(offset + i, offset + j) = h(i, j);
    offset += h.rows();
  }
  return out;
}

std::int64_t max_degree(const SeriesMatrix& m) {
  std::int64_t d = -1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d = std::max(d, m(i, j).x_truncation() - 1);
  return d;
}

CycloMatrix evaluate_at_level(const SeriesMatrix& m, int n) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  const std::uint32_t p = m(0, 0).prime();
  const auto theta = iwasawa::Character::at_level(p, n);
  CycloMatrix out(m.rows(), m.cols(), CycloElement::zero(p, n));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = iwasawa::eval_at_character(m(i, j), theta).value;
  return out;
}

CycloMatrix evaluate_hvn(const FrobeniusData& data, std::size_t v, int n) {
  if (n < 1) throw std::invalid_argument("evaluate_hvn: n must be at least 1");
  const std::uint32_t p = data.prime();
  const auto& cinv = data.c_inverse(v);
  const std::size_t h = data.half_size(v), s = data.size(v);
  PadicMatrix upper(s, s, PadicNumber::zero(p)), lower(s, s, PadicNumber::zero(p));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) (i < h ? upper : lower)(i, j) = cinv(i, j);

  // coef[mask]: coefficient matrix of prod_{k in mask} Phi_{p^k}(zeta_{p^n}).
  std::vector<PadicMatrix> coef{upper};
  if (n > 1) coef.push_back(lower);
  for (int k = 2; k <= n; ++k) {
    const std::size_t old = coef.size();
    if (k < n) coef.resize(2 * old);
    for (std::size_t mask = 0; mask < old; ++mask) {
      if (k < n) coef[mask | (std::size_t{1} << (k - 1))] = lower * coef[mask];
      coef[mask] = upper * coef[mask];
    }
  }

  const int N = std::min(data.precision(), padic::max_precision(p));
  const auto products = phi_subset_products(p, n, N);
  CycloMatrix out(s, s, CycloElement::zero(p, n));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      int prec = N;
      bool any = false;
      for (const auto& c : coef) {
        const auto& x = c(i, j);
        if (x.is_exact_zero()) continue;
        any = true;
        if (x.valuation_lower_bound() < 0) throw std::domain_error("evaluate_hvn: C_v^{-1} is not p-integral");
        prec = std::min(prec, x.precision());
      }
      if (!any) continue;
      if (prec < 1) {
        out(i, j) = CycloElement::zero_to_precision(p, n, prec);
        continue;
      }
      const u64 m = detail::ipow(p, prec);
      std::vector<u64> acc;
      for (std::size_t mask = 0; mask < coef.size(); ++mask) {
        const auto& x = coef[mask](i, j);
        if (!x.is_nonzero()) continue;
        const u64 r = x.residue() % m;
        const auto& poly = (*products)[mask];
        if (acc.size() < poly.size()) acc.resize(poly.size(), 0);
        for (std::size_t t = 0; t < poly.size(); ++t) {
          acc[t] = detail::addmod(acc[t], detail::mulmod(r, poly[t] % m, m), m);
        }
      }
      out(i, j) = CycloElement::from_residues(p, n, prec, std::move(acc));
    }
  }
  return out;
}

EvaluatedHn evaluate_hn(const FrobeniusData& data, int n) {
  EvaluatedHn out;
  out.level = n;
  const std::size_t total = data.total_size();
  out.value = CycloMatrix(total, total, CycloElement::zero(data.prime(), n));
  std::size_t offset = 0;
  for (std::size_t v = 0; v < data.num_primes(); ++v) {
    const auto h = evaluate_hvn(data, v, n);
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) out.value(offset + i, offset + j) = h(i, j);
    out.block_sizes.push_back(h.rows());
    offset += h.rows();
  }
  return out;
}

std::size_t IndexTuple::total_size() const {
  std::size_t s = 0;
  for (const auto& part : parts) s += part.size();
  return s;
}

std::string IndexTuple::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t v = 0; v < parts.size(); ++v) {
    if (v > 0) os << ",";
    os << "{";
    for (std::size_t i = 0; i < parts[v].size(); ++i) os << (i > 0 ? "," : "") << parts[v][i];
    os << "}";
  }
  os << ")";
  return os.str();
}

void validate_tuple(const FrobeniusData& data, const IndexTuple& t) {
  if (t.parts.size() != data.num_primes()) {
    throw std::invalid_argument("index tuple " + t.to_string() + " has " + std::to_string(t.parts.size()) +
                                " parts, expected " + std::to_string(data.num_primes()));
  }
  for (std::size_t v = 0; v < t.parts.size(); ++v) {
    const auto& part = t.parts[v];
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (part[i] < 1 || static_cast<std::size_t>(part[i]) > data.size(v) || (i > 0 && part[i] <= part[i - 1])) {
        throw std::invalid_argument("index tuple " + t.to_string() + " is not a sorted subset of 1.." +
                                    std::to_string(data.size(v)) + " at prime '" + data.block(v).label + "'");
      }
    }
  }
  if (t.total_size() != static_cast<std::size_t>(data.g() * data.degree())) {
    throw std::invalid_argument("index tuple " + t.to_string() + " has total size " +
                                std::to_string(t.total_size()) + ", expected g[F:Q] = " +
                                std::to_string(data.g() * data.degree()));
  }
}

IndexTuple tuple_i0(const FrobeniusData& data) {
  IndexTuple t;
  for (std::size_t v = 0; v < data.num_primes(); ++v) {
    std::vector<int> part;
    for (std::size_t i = 1; i <= data.half_size(v); ++i) part.push_back(static_cast<int>(i));
    t.parts.push_back(std::move(part));
  }
  return t;
}

IndexTuple tuple_i1(const FrobeniusData& data) {
  IndexTuple t;
  for (std::size_t v = 0; v < data.num_primes(); ++v) {
    std::vector<int> part;
    for (std::size_t i = data.half_size(v) + 1; i <= data.size(v); ++i) part.push_back(static_cast<int>(i));
    t.parts.push_back(std::move(part));
  }
  return t;
}

IndexTuple tuple_jn(const FrobeniusData& data, int n) { return n % 2 == 0 ? tuple_i0(data) : tuple_i1(data); }

CycloElement cyclo_determinant_laplace(const CycloMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw std::invalid_argument("determinant needs a nonempty square matrix");
  if (n == 1) return m(0, 0);
  std::optional<CycloElement> acc;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_exact_zero()) continue;
    CycloMatrix minor(n - 1, n - 1, m(0, 0));
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = m(i, k);
    CycloElement term = m(0, j) * cyclo_determinant_laplace(minor);
    if (j % 2 == 1) term = -term;
    acc = acc ? *acc + term : term;
  }
  return acc ? *acc : CycloElement::zero(m(0, 0).prime(), m(0, 0).level());
}

CycloElement cyclo_determinant(const CycloMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw std::invalid_argument("determinant needs a nonempty square matrix");
  CycloMatrix a = m;
  bool negate = false;
  std::optional<CycloElement> prev_inverse;
  for (std::size_t k = 0; k < n; ++k) {
    std::optional<std::size_t> pivot;
    bool all_exact_zero = true;
    for (std::size_t r = k; r < n; ++r) {
      const auto& x = a(r, k);
      if (!x.is_exact_zero()) all_exact_zero = false;
      if (x.is_zero()) continue;
      if (!pivot || x.valuation().value() < a(*pivot, k).valuation().value()) pivot = r;
    }
    if (!pivot) {
      if (all_exact_zero) return CycloElement::zero(m(0, 0).prime(), m(0, 0).level());
      return cyclo_determinant_laplace(m);
    }
    if (*pivot != k) {
      swap_rows(a, *pivot, k);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        CycloElement x = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        a(i, j) = prev_inverse ? x * *prev_inverse : x;
      }
    }
    if (k + 1 < n) prev_inverse = a(k, k).inverse();
  }
  return negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

CycloMatrix submatrix(const CycloMatrix& m, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols) {
  if (rows.empty() || cols.empty()) return {};
  for (auto r : rows)
    if (r >= m.rows()) throw std::out_of_range("submatrix row outside the matrix");
  for (auto c : cols)
    if (c >= m.cols()) throw std::out_of_range("submatrix column outside the matrix");
  CycloMatrix out(rows.size(), cols.size(), m(rows[0], cols[0]));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

std::vector<std::size_t> global_indices(const std::vector<std::size_t>& block_sizes, const IndexTuple& t) {
  if (t.parts.size() != block_sizes.size()) throw std::invalid_argument("index tuple does not match the block layout");
  std::vector<std::size_t> out;
  std::size_t offset = 0;
  for (std::size_t v = 0; v < block_sizes.size(); ++v) {
    for (int i : t.parts[v]) {
      if (i < 1 || static_cast<std::size_t>(i) > block_sizes[v]) throw std::out_of_range("index outside its block");
      out.push_back(offset + static_cast<std::size_t>(i) - 1);
    }
    offset += block_sizes[v];
  }
  return out;
}

CycloElement minor_at(const EvaluatedHn& hn, const IndexTuple& rows, const IndexTuple& cols) {
  if (rows.parts.size() != hn.block_sizes.size() || cols.parts.size() != hn.block_sizes.size()) {
    throw std::invalid_argument("index tuple does not match the block layout");
  }
  if (rows.total_size() != cols.total_size()) throw std::invalid_argument("minor needs |I| = |J|");
  const std::uint32_t p = hn.value(0, 0).prime();
  std::optional<CycloElement> acc;
  std::size_t offset = 0;
  for (std::size_t v = 0; v < hn.block_sizes.size(); ++v) {
    if (rows.parts[v].size() != cols.parts[v].size()) return CycloElement::zero(p, hn.level);
    std::vector<std::size_t> r, c;
    for (int i : rows.parts[v]) r.push_back(offset + static_cast<std::size_t>(i) - 1);
    for (int j : cols.parts[v]) c.push_back(offset + static_cast<std::size_t>(j) - 1);
    offset += hn.block_sizes[v];
    if (r.empty()) continue;
    const CycloElement det = cyclo_determinant(submatrix(hn.value, r, c));
    acc = acc ? *acc * det : det;
  }
  return acc ? *acc : cyclo_one(p, hn.level);
}

LowerHalfReport lower_half_vanishing_check(const FrobeniusData& data, std::size_t v, int n,
                                           std::int64_t symbolic_degree_limit) {
  LowerHalfReport r;
  const std::size_t h = data.half_size(v), s = data.size(v);
  const auto value = evaluate_hvn(data, v, n);
  for (std::size_t i = h; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      ++r.entries_checked;
      if (!value(i, j).is_exact_zero()) r.failures.push_back({i, j, value(i, j).valuation()});
    }
  }
  const auto top = static_cast<std::int64_t>(detail::ipow(data.prime(), n)) - 1;
  if (top <= symbolic_degree_limit) {
    r.symbolic_checked = true;
    r.symbolic_divisible = true;
    const auto sym = build_hvn(data, v, n);
    const auto phi = cyclo::phi_poly(data.prime(), n, data.precision());
    for (std::size_t i = h; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (!sym(i, j).divide_exact(phi)) r.symbolic_divisible = false;
  }
  return r;
}

CycloElement delta_n(std::uint32_t p, int n, int precision) {
  if (n < 1) throw std::invalid_argument("delta_n: n must be at least 1");
  std::optional<CycloElement> acc;
  for (int k = (n - 1) % 2 == 0 ? 2 : 1; k <= n - 1; k += 2) {
    const CycloElement f = cyclo::phi_at_zeta(p, k, n, precision);
    acc = acc ? *acc * f : f;
  }
  if (!acc) return CycloElement::constant(PadicNumber::p_power(p, 0, precision), n);
  return *acc;
}

ClosedForm closed_form_h_antidiag(const PadicMatrix& b1, const PadicMatrix& b2, int n, int precision) {
  if (n < 1) throw std::invalid_argument("closed form: n must be at least 1");
  const std::size_t h = b1.rows();
  if (b1.cols() != h || b2.rows() != h || b2.cols() != h) throw std::invalid_argument("B1, B2 must be square of one size");
  const std::uint32_t p = prime_of(b1);
  const PadicMatrix b = b1 * b2;
  const PadicMatrix block = n % 2 == 1 ? power(b, (n - 1) / 2) * b1 : power(b, n / 2);
  ClosedForm out{CycloMatrix(2 * h, 2 * h, CycloElement::zero(p, n)), delta_n(p, n, precision)};
  const std::size_t col0 = n % 2 == 1 ? h : 0;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) out.h(i, col0 + j) = block(i, j) * out.delta;
  return out;
}

std::pair<PadicMatrix, PadicMatrix> antidiag_blocks(const FrobeniusData& data, std::size_t v) {
  const auto& cinv = data.c_inverse(v);
  const std::size_t h = data.half_size(v);
  PadicMatrix b1(h, h, PadicNumber::zero(data.prime())), b2 = b1;
  for (std::size_t i = 0; i < 2 * h; ++i) {
    for (std::size_t j = 0; j < 2 * h; ++j) {
      const bool diagonal_block = (i < h) == (j < h);
      if (diagonal_block) {
        if (!cinv(i, j).is_zero()) throw std::invalid_argument("C_v is not block anti-diagonal");
      } else if (i < h) {
        b1(i, j - h) = cinv(i, j);
      } else {
        b2(i - h, j) = cinv(i, j);
      }
    }
  }
  return {b1, b2};
}

}  // namespace ssrank::logmat
