#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssrank/criterion.hpp"
#include "ssrank/iwasawa.hpp"
#include "ssrank/logmat.hpp"
#include "ssrank/serialize.hpp"

namespace {

using namespace ssrank;
using io::ConfigError;
using io::json;

enum Exit : int { kSuccess = 0, kPartial = 1, kIndeterminate = 2, kFalsified = 3, kConfigError = 4 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::optional<int> precision_flag;
  std::optional<int> n_min_flag;
  std::optional<int> n_max_flag;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  bool verbose = false;
  bool all_rows = false;
  std::optional<std::string> gl2_a, gl2_b;
  std::optional<int> gl2_f, gl2_p;
  std::optional<std::string> gl2_label;
};

struct Report {
  json doc;
  std::vector<std::string> text;
  int exit = kSuccess;
};

struct Context {
  json doc = json::object();
  int precision = padic::kDefaultPrecision;
  int n_min = 1;
  int n_max = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int doc_int(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
  return doc[key].get<int>();
}

Context load(const RunConfig& cfg, bool needs_input) {
  Context ctx;
  if (!cfg.input.empty()) {
    ctx.doc = io::parse_document(read_file(cfg.input), cfg.input);
    if (!ctx.doc.is_object()) throw ConfigError(cfg.input + ": expected a JSON object");
  } else if (needs_input) {
    throw ConfigError("--input is required for " + cfg.command);
  }
  ctx.precision = cfg.precision_flag ? *cfg.precision_flag : doc_int(ctx.doc, "precision", padic::kDefaultPrecision);
  if (ctx.precision < 4) throw ConfigError("precision: must be at least 4");
  ctx.n_min = cfg.n_min_flag ? *cfg.n_min_flag : doc_int(ctx.doc, "n_min", 1);
  ctx.n_max = cfg.n_max_flag ? *cfg.n_max_flag : doc_int(ctx.doc, "n_max", ctx.n_min);
  if (ctx.n_min < 1) throw ConfigError("n-range: n_min must be at least 1");
  if (ctx.n_max < ctx.n_min) {
    throw ConfigError("n-range: empty range [" + std::to_string(ctx.n_min) + ", " + std::to_string(ctx.n_max) + "]");
  }
  return ctx;
}

json header(const std::string& command, const logmat::FrobeniusData& data, const Context& ctx) {
  return json{{"command", command},
              {"p", data.prime()},
              {"precision", data.precision()},
              {"n_min", ctx.n_min},
              {"n_max", ctx.n_max}};
}

criterion::ColemanFamily load_coleman(const logmat::FrobeniusData& data, const Context& ctx, const RunConfig& cfg,
                                      json& report) {
  if (!ctx.doc.contains("coleman")) throw ConfigError("coleman: missing");
  auto family = io::coleman_from_json(data, ctx.doc["coleman"], cfg.seed);
  report["coleman_provenance"] = family.provenance;
  const auto& c = ctx.doc["coleman"];
  if (c.is_object() && c.contains("synthetic")) {
    report["seed"] = cfg.seed ? *cfg.seed : c["synthetic"].value("seed", std::uint64_t{0});
  } else if (cfg.seed) {
    report["seed"] = *cfg.seed;
  }
  json missing = json::array();
  for (const auto& t : family.missing) missing.push_back(io::tuple_to_json(t));
  report["missing_coleman"] = missing;
  return family;
}

Report cmd_build_h(const RunConfig& cfg) {
  const auto ctx = load(cfg, true);
  const auto data = io::frobenius_from_json(ctx.doc, ctx.precision);
  Report r;
  r.doc = header("build-h", data, ctx);
  json levels = json::array();
  for (int n = ctx.n_min; n <= ctx.n_max; ++n) {
    json primes = json::array();
    for (std::size_t v = 0; v < data.num_primes(); ++v) {
      const auto h = logmat::build_hvn(data, v, n);
      primes.push_back(json{{"label", data.block(v).label}, {"H", io::series_matrix_to_json(h)}});
      r.text.push_back("n=" + std::to_string(n) + " " + data.block(v).label + ": H is " + std::to_string(h.rows()) +
                       "x" + std::to_string(h.cols()) + ", max degree " + std::to_string(logmat::max_degree(h)));
    }
    levels.push_back(json{{"n", n}, {"primes", primes}});
  }
  r.doc["levels"] = levels;
  return r;
}

Report cmd_eval(const RunConfig& cfg) {
  const auto ctx = load(cfg, true);
  const auto data = io::frobenius_from_json(ctx.doc, ctx.precision);
  Report r;
  r.doc = header("eval", data, ctx);
  json levels = json::array();
  for (int n = ctx.n_min; n <= ctx.n_max; ++n) {
    json primes = json::array();
    for (std::size_t v = 0; v < data.num_primes(); ++v) {
      const auto value = logmat::evaluate_hvn(data, v, n);
      const auto check = logmat::lower_half_vanishing_check(data, v, n);
      json failures = json::array();
      for (const auto& f : check.failures) {
        failures.push_back(json{{"row", f.row}, {"col", f.col}, {"valuation", io::valuation_to_json(f.valuation)}});
      }
      primes.push_back(json{{"label", data.block(v).label},
                            {"H", io::cyclo_matrix_to_json(value, n)},
                            {"lower_half",
                             {{"entries_checked", check.entries_checked},
                              {"symbolic_checked", check.symbolic_checked},
                              {"symbolic_divisible", check.symbolic_divisible},
                              {"failures", failures},
                              {"passed", check.passed()}}}});
      r.text.push_back("n=" + std::to_string(n) + " " + data.block(v).label + ": lower half " +
                       (check.passed() ? "vanishes" : "DOES NOT vanish") + " (" +
                       std::to_string(check.entries_checked) + " entries)");
      if (!check.passed()) r.exit = kFalsified;
    }
    levels.push_back(json{{"n", n}, {"primes", primes}});
  }
  r.doc["levels"] = levels;
  return r;
}

Report cmd_minors(const RunConfig& cfg) {
  const auto ctx = load(cfg, true);
  const auto data = io::frobenius_from_json(ctx.doc, ctx.precision);
  const auto tuples = criterion::enumerate_index_tuples(data);
  std::vector<logmat::IndexTuple> rows = cfg.all_rows ? tuples : std::vector{logmat::tuple_i0(data)};
  Report r;
  r.doc = header("minors", data, ctx);
  json levels = json::array();
  for (int n = ctx.n_min; n <= ctx.n_max; ++n) {
    const auto hn = logmat::evaluate_hn(data, n);
    json minors = json::array();
    std::size_t nonzero = 0;
    for (const auto& i : rows) {
      for (const auto& j : tuples) {
        const auto m = logmat::minor_at(hn, i, j);
        if (!m.is_exact_zero()) ++nonzero;
        minors.push_back(json{{"rows", io::tuple_to_json(i)}, {"cols", io::tuple_to_json(j)}, {"value", io::cyclo_to_json(m)}});
      }
    }
    levels.push_back(json{{"n", n}, {"j_n", io::tuple_to_json(logmat::tuple_jn(data, n))}, {"minors", minors}});
    r.text.push_back("n=" + std::to_string(n) + ": " + std::to_string(minors.size()) + " minors, " +
                     std::to_string(nonzero) + " not exactly zero; J_n = " + logmat::tuple_jn(data, n).to_string());
  }
  r.doc["levels"] = levels;
  return r;
}

Report cmd_key_sum(const RunConfig& cfg) {
  const auto ctx = load(cfg, true);
  const auto data = io::frobenius_from_json(ctx.doc, ctx.precision);
  Report r;
  r.doc = header("key-sum", data, ctx);
  const auto family = load_coleman(data, ctx, cfg, r.doc);
  json levels = json::array();
  for (int n = ctx.n_min; n <= ctx.n_max; ++n) {
    const auto ks = criterion::key_sum(data, family, n);
    levels.push_back(json{{"n", n}, {"sum", io::cyclo_to_json(ks.sum)}, {"verdict", io::verdict_to_json(ks.verdict)}});
    r.text.push_back("n=" + std::to_string(n) + ": " + criterion::to_string(ks.verdict.kind) + ", ord_p S = " +
                     ks.sum.valuation().to_string());
    if (ks.verdict.kind != criterion::VerdictKind::nonzero_at_n) r.exit = kIndeterminate;
  }
  r.doc["levels"] = levels;
  return r;
}

Report cmd_certify(const RunConfig& cfg) {
  const auto ctx = load(cfg, true);
  const auto data = io::frobenius_from_json(ctx.doc, ctx.precision);
  Report r;
  r.doc = header("certify", data, ctx);
  const auto family = load_coleman(data, ctx, cfg, r.doc);
  json classes = json::array();
  for (std::size_t v = 0; v < data.num_primes(); ++v) {
    classes.push_back(json{{"label", data.block(v).label},
                           {"classification", criterion::to_string(criterion::classify_frobenius(data, v))}});
  }
  r.doc["classification"] = classes;

  const auto cert = criterion::dominance_certificate(data, family, ctx.n_min);
  const bool certified = cert.kind == criterion::VerdictKind::certified_for_all_large_n;
  bool all_nonzero = true;
  bool contradiction = false;
  json table = json::array();
  for (int n = ctx.n_min; n <= ctx.n_max; ++n) {
    const auto ks = criterion::key_sum(data, family, n);
    const bool nonzero = ks.verdict.kind == criterion::VerdictKind::nonzero_at_n;
    all_nonzero = all_nonzero && nonzero;
    if (certified && n >= cert.threshold->n0 && !nonzero) contradiction = true;
    table.push_back(json{{"n", n},
                         {"kind", criterion::to_string(ks.verdict.kind)},
                         {"sum_valuation", io::valuation_to_json(ks.sum.valuation())}});
    r.text.push_back("n=" + std::to_string(n) + ": " + criterion::to_string(ks.verdict.kind) + ", ord_p S = " +
                     ks.sum.valuation().to_string());
  }
  r.doc["levels"] = table;
  r.doc["certificate"] = io::verdict_to_json(cert);
  if (certified) {
    r.text.push_back("certified for all n >= " + std::to_string(cert.threshold->n0) + " (tail from n = " +
                     std::to_string(cert.threshold->n_tail) + ")");
  } else {
    r.text.push_back("no certificate: " + cert.diagnostic);
  }
  std::string status;
  if (contradiction) {
    status = "invariant falsified";
    r.exit = kFalsified;
  } else if (certified) {
    status = "certified";
    r.exit = kSuccess;
  } else if (all_nonzero) {
    status = "partially verified";
    r.exit = kPartial;
  } else {
    status = "indeterminate";
    r.exit = kIndeterminate;
  }
  r.doc["status"] = status;
  r.text.push_back("status: " + status);
  return r;
}

Report cmd_weierstrass(const RunConfig& cfg) {
  const auto ctx = load(cfg, true);
  const auto p_raw = ctx.doc.contains("p") ? doc_int(ctx.doc, "p", 0) : 0;
  if (p_raw < 3) throw ConfigError("p: must be an odd prime");
  const auto p = static_cast<std::uint32_t>(p_raw);
  padic::require_odd_prime(p);

  std::vector<std::pair<std::string, iwasawa::IwasawaSeries>> series;
  json report{{"command", "weierstrass"}, {"p", p}, {"precision", ctx.precision}, {"n_min", ctx.n_min}, {"n_max", ctx.n_max}};
  if (ctx.doc.contains("series")) {
    series.emplace_back("series", io::series_from_json(p, ctx.doc["series"], ctx.precision, "series"));
  } else {
    const auto data = io::frobenius_from_json(ctx.doc, ctx.precision);
    const auto family = load_coleman(data, ctx, cfg, report);
    for (const auto& [t, f] : family.entries) series.emplace_back(t.to_string(), f);
  }
  Report r;
  r.doc = report;
  json entries = json::array();
  for (const auto& [name, f] : series) {
    const auto inv = iwasawa::newton_invariants(f);
    json checks = json::array();
    for (int n = ctx.n_min; n <= ctx.n_max; ++n) {
      const auto w = iwasawa::weierstrass_valuation_check(f, n);
      json row{{"n", n}, {"applicable", w.applicable}};
      if (w.applicable) {
        row["evaluated"] = io::valuation_to_json(w.evaluated);
        row["predicted"] = to_string(w.predicted);
        row["agrees"] = w.agrees;
        if (!w.agrees) r.exit = kFalsified;
      } else {
        row["diagnostic"] = w.diagnostic;
      }
      checks.push_back(row);
    }
    entries.push_back(json{{"name", name},
                           {"mu", inv.mu},
                           {"lambda", inv.lambda},
                           {"certified", inv.certified},
                           {"checks", checks}});
    r.text.push_back(name + ": mu = " + std::to_string(inv.mu) + ", lambda = " + std::to_string(inv.lambda) +
                     (inv.certified ? "" : " (uncertified)"));
  }
  r.doc["series"] = entries;
  return r;
}

Report cmd_gl2(const RunConfig& cfg) {
  const auto ctx = load(cfg, false);
  const json g = ctx.doc.contains("gl2") ? ctx.doc["gl2"] : json::object();
  const int p_raw = cfg.gl2_p ? *cfg.gl2_p : doc_int(ctx.doc, "p", 0);
  if (p_raw < 3) throw ConfigError("p: must be an odd prime");
  const auto p = static_cast<std::uint32_t>(p_raw);
  padic::require_odd_prime(p);
  const auto field = [&](const std::optional<std::string>& flag, const char* key) {
    if (flag) return io::padic_from_json(p, json(*flag), ctx.precision, key);
    if (!g.contains(key)) throw ConfigError(std::string("gl2.") + key + ": missing");
    return io::padic_from_json(p, g[key], ctx.precision, std::string("gl2.") + key);
  };
  const auto a = field(cfg.gl2_a, "a");
  const auto b = field(cfg.gl2_b, "b");
  const int f = cfg.gl2_f ? *cfg.gl2_f : doc_int(g, "f", 1);
  const std::string label = cfg.gl2_label ? *cfg.gl2_label : g.value("label", std::string("v"));
  auto block = criterion::gl2_frobenius(p, a, b, f, label);
  const auto data = logmat::FrobeniusData::create(p, 1, {block}, ctx.precision);
  Report r;
  r.doc = io::frobenius_to_json(data);
  r.text.push_back("prime " + label + ", f = " + std::to_string(f) + ", val det C_phi = " +
                   data.det_cphi_valuation(0).to_string());
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logarithmic matrices and bounded-rank certificates for supersingular data"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "JSON configuration");
    sub->add_option("--output", cfg.output, "Write the report here instead of stdout");
    sub->add_option("--precision", cfg.precision_flag, "Working precision N (default 20)");
    sub->add_option("--n-min", cfg.n_min_flag, "First level");
    sub->add_option("--n-max", cfg.n_max_flag, "Last level");
    sub->add_option("--seed", cfg.seed, "Seed for synthetic Coleman data");
    sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_flag("-v,--verbose", cfg.verbose, "Progress on stderr");
  };

  std::vector<std::pair<CLI::App*, Report (*)(const RunConfig&)>> commands;
  const auto add = [&](const char* name, const char* help, Report (*fn)(const RunConfig&)) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    commands.emplace_back(sub, fn);
    return sub;
  };
  add("build-h", "Symbolic H_{v,n} for each level", cmd_build_h);
  add("eval", "H_{v,n} at eps_n with the lower-half vanishing check", cmd_eval);
  add("minors", "Minors of H_n at eps_n", cmd_minors)->add_flag("--all-rows", cfg.all_rows, "All row tuples, not just I_0");
  add("key-sum", "The sum over J of minor(I_0, J) col_J(eps_n)", cmd_key_sum);
  add("certify", "Per-level verdicts and the dominance certificate", cmd_certify);
  add("weierstrass", "mu/lambda invariants and the valuation check", cmd_weierstrass);
  auto* gl2 = add("gl2", "Frobenius block from a and b", cmd_gl2);
  gl2->add_option("--a", cfg.gl2_a, "a in pZ_p");
  gl2->add_option("--b", cfg.gl2_b, "b in Z_p^x");
  gl2->add_option("--f", cfg.gl2_f, "Residue degree");
  gl2->add_option("--p", cfg.gl2_p, "Prime");
  gl2->add_option("--label", cfg.gl2_label, "Prime label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  for (const auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    cfg.command = sub->get_name();
    try {
      if (cfg.verbose) std::cerr << "ssrank: running " << cfg.command << "\n";
      Report r = fn(cfg);
      std::string body;
      if (cfg.format == "json") {
        body = r.doc.dump(2) + "\n";
      } else {
        for (const auto& line : r.text) body += line + "\n";
      }
      if (cfg.output.empty()) {
        std::cout << body;
      } else {
        std::ofstream out(cfg.output);
        if (!out) throw ConfigError(cfg.output + ": cannot write");
        out << body;
      }
      return r.exit;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::domain_error& e) {
      std::cerr << "indeterminate: " << e.what() << "\n";
      return kIndeterminate;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    }
  }
  return kConfigError;
}
