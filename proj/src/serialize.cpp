#include "ssrank/serialize.hpp"

#include <limits>
#include <set>

namespace ssrank::io {

namespace {

using padic::PadicNumber;

std::string at(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(at(where, key) + ": missing");
  return *it;
}

const json& require_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  return j;
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw ConfigError(where + ": integer out of range");
  }
  return j.get<std::int64_t>();
}

std::int64_t integer_field(const json& obj, const std::string& key, const std::string& where,
                           std::optional<std::int64_t> fallback = std::nullopt) {
  if (obj.is_object() && !obj.contains(key) && fallback) return *fallback;
  return integer(require(obj, key, where), at(where, key));
}

template <class F>
auto wrap(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

cyclo::PadicPolynomial coefficient_list(std::uint32_t p, const json& j, int precision, const std::string& where) {
  require_array(j, where);
  cyclo::PadicPolynomial out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(padic_from_json(p, j[i], precision, at(where, i)));
  return out;
}

}  // namespace

json parse_document(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

PadicNumber padic_from_json(std::uint32_t p, const json& j, int precision, const std::string& where) {
  if (j.is_number_integer()) return wrap(where, [&] { return PadicNumber::from_integer(p, integer(j, where), precision); });
  if (!j.is_string()) throw ConfigError(where + ": expected an integer or a p-adic literal");
  const auto text = j.get<std::string>();
  return wrap(where, [&] {
    if (text.find("(mod") != std::string::npos) return PadicNumber::parse(p, text);
    return PadicNumber::from_decimal(p, text, precision);
  });
}

json padic_to_json(const PadicNumber& x) { return x.to_string(); }

iwasawa::IwasawaSeries series_from_json(std::uint32_t p, const json& j, int precision, const std::string& where) {
  if (j.is_array()) return iwasawa::IwasawaSeries::polynomial(p, coefficient_list(p, j, precision, where));
  const auto coeffs = coefficient_list(p, require(j, "coefficients", where), precision, at(where, "coefficients"));
  if (!j.contains("truncation")) return iwasawa::IwasawaSeries::polynomial(p, coeffs);
  const auto d = integer_field(j, "truncation", where);
  return wrap(at(where, "truncation"), [&] { return iwasawa::IwasawaSeries::truncated(p, coeffs, d); });
}

json series_to_json(const iwasawa::IwasawaSeries& f) {
  json coeffs = json::array();
  std::size_t len = f.coefficients().size();
  if (!f.is_polynomial()) {
    while (len > 0 && f.coefficients()[len - 1].is_exact_zero()) --len;
  }
  for (std::size_t i = 0; i < len; ++i) coeffs.push_back(padic_to_json(f.coefficients()[i]));
  json out{{"coefficients", coeffs}};
  if (!f.is_polynomial()) out["truncation"] = f.x_truncation();
  return out;
}

cyclo::CycloElement cyclo_from_json(std::uint32_t p, int level, const json& j, const std::string& where) {
  const auto coeffs =
      coefficient_list(p, require(j, "coefficients", where), padic::kDefaultPrecision, at(where, "coefficients"));
  return wrap(where, [&] { return cyclo::CycloElement::from_coefficients(p, level, coeffs); });
}

json cyclo_to_json(const cyclo::CycloElement& x) {
  json coeffs = json::array();
  if (!x.is_exact_zero()) {
    auto c = x.coefficients();
    std::size_t len = c.size();
    while (len > 1 && !c[len - 1].is_nonzero()) --len;
    for (std::size_t i = 0; i < len; ++i) coeffs.push_back(padic_to_json(c[i]));
  }
  return json{{"coefficients", coeffs}, {"valuation", valuation_to_json(x.valuation())}};
}

IndexTuple tuple_from_json(const json& j, const std::string& where) {
  require_array(j, where);
  IndexTuple t;
  for (std::size_t v = 0; v < j.size(); ++v) {
    require_array(j[v], at(where, v));
    std::vector<int> part;
    for (std::size_t i = 0; i < j[v].size(); ++i) part.push_back(static_cast<int>(integer(j[v][i], at(at(where, v), i))));
    t.parts.push_back(std::move(part));
  }
  return t;
}

json tuple_to_json(const IndexTuple& t) {
  json out = json::array();
  for (const auto& part : t.parts) out.push_back(part);
  return out;
}

SeriesMatrix series_matrix_from_json(std::uint32_t p, const json& j, int precision, const std::string& where) {
  const auto rows = static_cast<std::size_t>(integer_field(j, "rows", where));
  const auto cols = static_cast<std::size_t>(integer_field(j, "cols", where));
  const auto& entries = require_array(require(j, "entries", where), at(where, "entries"));
  if (entries.size() != rows) throw ConfigError(at(where, "entries") + ": expected " + std::to_string(rows) + " rows");
  SeriesMatrix m(rows, cols, iwasawa::IwasawaSeries::zero(p));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rw = at(at(where, "entries"), i);
    require_array(entries[i], rw);
    if (entries[i].size() != cols) {
      throw ConfigError(rw + ": row has " + std::to_string(entries[i].size()) + " entries, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = series_from_json(p, entries[i][c], precision, at(rw, c));
  }
  return m;
}

json series_matrix_to_json(const SeriesMatrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(series_to_json(m(i, j)));
    entries.push_back(row);
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

CycloMatrix cyclo_matrix_from_json(std::uint32_t p, const json& j, const std::string& where) {
  const int level = static_cast<int>(integer_field(j, "level", where));
  if (level < 1) throw ConfigError(at(where, "level") + ": must be at least 1");
  const auto rows = static_cast<std::size_t>(integer_field(j, "rows", where));
  const auto cols = static_cast<std::size_t>(integer_field(j, "cols", where));
  const auto& entries = require_array(require(j, "entries", where), at(where, "entries"));
  if (entries.size() != rows) throw ConfigError(at(where, "entries") + ": expected " + std::to_string(rows) + " rows");
  CycloMatrix m(rows, cols, cyclo::CycloElement::zero(p, level));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rw = at(at(where, "entries"), i);
    require_array(entries[i], rw);
    if (entries[i].size() != cols) {
      throw ConfigError(rw + ": row has " + std::to_string(entries[i].size()) + " entries, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = cyclo_from_json(p, level, entries[i][c], at(rw, c));
  }
  return m;
}

json cyclo_matrix_to_json(const CycloMatrix& m, int level) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(cyclo_to_json(m(i, j)));
    entries.push_back(row);
  }
  return json{{"level", level}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

FrobeniusData frobenius_from_json(const json& doc, std::optional<int> precision) {
  if (!doc.is_object()) throw ConfigError("document: expected an object");
  const std::int64_t p_raw = integer_field(doc, "p", "");
  if (p_raw < 3 || p_raw > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("p: must be an odd prime");
  const auto p = static_cast<std::uint32_t>(p_raw);
  const int prec = precision ? *precision
                             : static_cast<int>(integer_field(doc, "precision", "", padic::kDefaultPrecision));
  const int g = static_cast<int>(integer_field(doc, "g", "", 1));
  const auto& primes = require_array(require(doc, "primes", ""), "primes");
  if (primes.empty()) throw ConfigError("primes: at least one prime above p is required");
  wrap("p", [&] {
    padic::require_odd_prime(p);
    return 0;
  });
  if (prec < 1 || prec > padic::max_precision(p)) {
    throw ConfigError("precision: must lie in [1, " + std::to_string(padic::max_precision(p)) + "] for p = " +
                      std::to_string(p));
  }
  std::vector<logmat::PrimeBlock> blocks;
  for (std::size_t v = 0; v < primes.size(); ++v) {
    const std::string w = at("primes", v);
    const auto& entry = primes[v];
    logmat::PrimeBlock b;
    b.label = entry.is_object() && entry.contains("label") ? entry["label"].get<std::string>() : "v" + std::to_string(v + 1);
    b.f = static_cast<int>(integer_field(entry, "f", w, 1));
    const auto& c = require_array(require(entry, "C", w), at(w, "C"));
    const std::size_t side = c.size();
    b.C = logmat::PadicMatrix(side, side, padic::PadicNumber::zero(p));
    for (std::size_t i = 0; i < side; ++i) {
      const std::string rw = at(at(w, "C"), i);
      require_array(c[i], rw);
      if (c[i].size() != side) {
        throw ConfigError(rw + ": row has " + std::to_string(c[i].size()) + " entries, expected " + std::to_string(side));
      }
      for (std::size_t j = 0; j < side; ++j) b.C(i, j) = padic_from_json(p, c[i][j], prec, at(rw, j));
    }
    blocks.push_back(std::move(b));
  }
  return wrap("primes", [&] { return FrobeniusData::create(p, g, std::move(blocks), prec); });
}

json frobenius_to_json(const FrobeniusData& data) {
  json primes = json::array();
  for (const auto& b : data.blocks()) {
    json c = json::array();
    for (std::size_t i = 0; i < b.C.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < b.C.cols(); ++j) row.push_back(padic_to_json(b.C(i, j)));
      c.push_back(row);
    }
    primes.push_back(json{{"label", b.label}, {"f", b.f}, {"C", c}});
  }
  return json{{"p", data.prime()}, {"precision", data.precision()}, {"g", data.g()}, {"primes", primes}};
}

ColemanFamily coleman_from_json(const FrobeniusData& data, const json& j, std::optional<std::uint64_t> seed) {
  const std::uint32_t p = data.prime();
  if (j.is_object() && j.contains("synthetic")) {
    const auto& s = j["synthetic"];
    const std::string w = "coleman.synthetic";
    const auto use_seed =
        seed ? *seed : static_cast<std::uint64_t>(integer_field(s, "seed", w, 0));
    const auto extra = integer_field(s, "extra_degree", w, 3);
    const auto& entries = require_array(require(s, "entries", w), at(w, "entries"));
    std::vector<criterion::SyntheticSpec> specs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string ew = at(at(w, "entries"), i);
      criterion::SyntheticSpec spec;
      spec.tuple = tuple_from_json(require(entries[i], "tuple", ew), at(ew, "tuple"));
      spec.mu = static_cast<int>(integer_field(entries[i], "mu", ew));
      spec.lambda = integer_field(entries[i], "lambda", ew);
      specs.push_back(spec);
    }
    return wrap(w, [&] { return criterion::synthetic_family(data, specs, use_seed, extra); });
  }
  ColemanFamily family;
  family.provenance = "user-supplied";
  const json* list = &j;
  std::string w = "coleman";
  if (j.is_object()) {
    if (j.contains("provenance")) family.provenance = j["provenance"].get<std::string>();
    list = &require(j, "entries", w);
    w = "coleman.entries";
  }
  require_array(*list, w);
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string ew = at(w, i);
    const auto& e = (*list)[i];
    IndexTuple t = tuple_from_json(require(e, "tuple", ew), at(ew, "tuple"));
    auto series = series_from_json(p, e, data.precision(), ew);
    if (!family.entries.emplace(t, series).second) throw ConfigError(ew + ": duplicate tuple " + t.to_string());
  }
  return wrap(w, [&] { return criterion::normalize_family(data, std::move(family)); });
}

json coleman_to_json(const ColemanFamily& family) {
  std::set<IndexTuple> missing(family.missing.begin(), family.missing.end());
  json entries = json::array(), miss = json::array();
  for (const auto& [t, series] : family.entries) {
    if (missing.count(t)) {
      miss.push_back(tuple_to_json(t));
      continue;
    }
    json e = series_to_json(series);
    e["tuple"] = tuple_to_json(t);
    entries.push_back(e);
  }
  return json{{"provenance", family.provenance}, {"entries", entries}, {"missing", miss}};
}

json valuation_to_json(const Valuation& v) { return v.to_string(); }

json verdict_to_json(const criterion::Verdict& v) {
  json terms = json::array();
  for (const auto& t : v.witness.terms) {
    json row{{"tuple", tuple_to_json(t.tuple)},
             {"minor_valuation", valuation_to_json(t.minor)},
             {"coleman_valuation", valuation_to_json(t.coleman)},
             {"term_valuation", valuation_to_json(t.total)}};
    if (t.predicted_coleman) row["predicted_coleman_valuation"] = to_string(*t.predicted_coleman);
    terms.push_back(row);
  }
  json out{{"kind", criterion::to_string(v.kind)},
           {"n", v.n},
           {"dominant", v.witness.dominant ? tuple_to_json(*v.witness.dominant) : json(nullptr)},
           {"dominant_valuation", valuation_to_json(v.witness.dominant_valuation)},
           {"runner_up_valuation", valuation_to_json(v.witness.runner_up)},
           {"terms", terms}};
  if (!v.diagnostic.empty()) out["diagnostic"] = v.diagnostic;
  if (v.threshold) {
    out["threshold"] = json{{"n0", v.threshold->n0},
                            {"n_tail", v.threshold->n_tail},
                            {"gap_constant", to_string(v.threshold->gap_constant)},
                            {"lambda_spread", v.threshold->lambda_spread},
                            {"failing_levels", v.threshold->failing_levels}};
  }
  return out;
}

}  // namespace ssrank::io
