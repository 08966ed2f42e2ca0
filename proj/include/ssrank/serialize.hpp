#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ssrank/criterion.hpp"
#include "ssrank/logmat.hpp"

namespace ssrank::io {

using json = nlohmann::json;
using criterion::ColemanFamily;
using logmat::CycloMatrix;
using logmat::FrobeniusData;
using logmat::IndexTuple;
using logmat::SeriesMatrix;

/// Malformed or inconsistent input. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text; syntax errors become ConfigError with line and column.
json parse_document(const std::string& text, const std::string& source = "input");

/// Integers (JSON numbers or decimal strings) or "u * p^v (mod p^N)" text.
padic::PadicNumber padic_from_json(std::uint32_t p, const json& j, int precision, const std::string& where);
json padic_to_json(const padic::PadicNumber& x);

/// {"coefficients": [...]} plus "truncation" for series known modulo X^D.
/// A bare coefficient array is accepted on input.
iwasawa::IwasawaSeries series_from_json(std::uint32_t p, const json& j, int precision, const std::string& where);
json series_to_json(const iwasawa::IwasawaSeries& f);

/// {"coefficients": [...], "valuation": "..."}; coefficients in the eps_n basis.
cyclo::CycloElement cyclo_from_json(std::uint32_t p, int level, const json& j, const std::string& where);
json cyclo_to_json(const cyclo::CycloElement& x);

IndexTuple tuple_from_json(const json& j, const std::string& where);
json tuple_to_json(const IndexTuple& t);

/// {"rows", "cols", "entries"} with series entries.
SeriesMatrix series_matrix_from_json(std::uint32_t p, const json& j, int precision, const std::string& where);
json series_matrix_to_json(const SeriesMatrix& m);

/// {"level", "rows", "cols", "entries"} with cyclotomic entries.
CycloMatrix cyclo_matrix_from_json(std::uint32_t p, const json& j, const std::string& where);
json cyclo_matrix_to_json(const CycloMatrix& m, int level);

/// {p, precision, g, primes: [{label, f, C}]}. `precision` overrides the
/// document's value when given. Validation failures become ConfigError.
FrobeniusData frobenius_from_json(const json& doc, std::optional<int> precision = std::nullopt);
json frobenius_to_json(const FrobeniusData& data);

/// Either a list [{tuple, coefficients[, truncation]}] or
/// {"synthetic": {seed, extra_degree, entries: [{tuple, mu, lambda}]}}.
/// `seed` overrides the synthetic seed when given.
ColemanFamily coleman_from_json(const FrobeniusData& data, const json& j,
                                std::optional<std::uint64_t> seed = std::nullopt);
/// Explicit form; missing tuples are listed separately and not written as entries.
json coleman_to_json(const ColemanFamily& family);

json valuation_to_json(const Valuation& v);
json verdict_to_json(const criterion::Verdict& v);

}  // namespace ssrank::io
