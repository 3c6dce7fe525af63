/*
   Copyright 2026 The qdp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// JSON and TSV input/output, and the verification-grid runner behind `qdp verify all`.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dalg.hpp"
#include "dmod.hpp"
#include "ealgebra.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "suites.hpp"

namespace qdp {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Elements, presentations and groups
// ---------------------------------------------------------------------------

/// [[degree, coeff], ...]
inline DElement delement_from_json(const Json& j, const QContext& ctx) {
  if (!j.is_array()) throw ParseError("element must be a list of [degree, coeff] pairs");
  std::vector<std::pair<std::uint64_t, std::int64_t>> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number_unsigned() || !t[1].is_number_integer())
      throw ParseError("bad term " + t.dump());
    terms.emplace_back(t[0].get<std::uint64_t>(), t[1].get<std::int64_t>());
  }
  return DElement::from_terms(ctx, terms);
}

inline Json delement_to_json(const DElement& e) {
  Json j = Json::array();
  for (const auto& [d, c] : e.terms()) j.push_back(Json::array({d, c}));
  return j;
}

inline QContext context_from_json(const Json& j) {
  if (!j.contains("ell") || !j.contains("q")) throw ParseError("missing \"ell\" or \"q\"");
  return QContext(j.at("ell").get<std::uint32_t>(), j.at("q").get<std::uint64_t>());
}

inline FPModule fpmodule_from_json(const Json& j) {
  try {
    const QContext ctx = context_from_json(j);
    std::vector<std::uint64_t> degs;
    for (const auto& g : j.at("generators")) degs.push_back(g.at("degree").get<std::uint64_t>());
    std::vector<Relation> rels;
    for (const auto& row : j.value("relations", Json::array())) {
      Relation r;
      for (const auto& entry : row) {
        const auto col = entry.at("col").get<std::size_t>();
        DElement e = delement_from_json(entry.at("element"), ctx);
        if (r.entries.count(col)) e += r.entries.at(col);
        r.entries.insert_or_assign(col, e);
      }
      rels.push_back(std::move(r));
    }
    return FPModule(ctx, degs, rels);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("module presentation: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("module presentation: ") + e.what());
  }
}

inline Json fpmodule_to_json(const FPModule& M) {
  Json j;
  j["ell"] = M.context().ell();
  j["q"] = M.context().q_int();
  j["generators"] = Json::array();
  for (auto d : M.gen_degrees()) j["generators"].push_back({{"degree", d}});
  j["relations"] = Json::array();
  for (const auto& r : M.relations()) {
    Json row = Json::array();
    for (const auto& [col, e] : r.entries) row.push_back({{"col", col}, {"element", delement_to_json(e)}});
    j["relations"].push_back(row);
  }
  return j;
}

/// {"family":"GL","n":2,"q":3} | {"family":"Sym","n":4} |
/// {"family":"Parabolic","q":2,"blocks":[1,1],"barred":[false,true],"zero_blocks":[[2,3]]} |
/// {"family":"Table","mul":[[...]]}
inline GroupPtr group_from_json(const Json& j) {
  try {
    const auto family = j.at("family").get<std::string>();
    if (family == "GL") return general_linear(j.at("n").get<std::size_t>(), j.at("q").get<std::uint32_t>());
    if (family == "Sym") return symmetric(j.at("n").get<std::size_t>());
    if (family == "Parabolic") {
      BlockShape shape;
      shape.sizes = j.at("blocks").get<std::vector<std::size_t>>();
      shape.barred = j.value("barred", std::vector<bool>(shape.sizes.size(), false));
      for (const auto& z : j.value("zero_blocks", Json::array()))
        shape.zero_blocks.emplace_back(z.at(0).get<std::size_t>(), z.at(1).get<std::size_t>());
      return parabolic(*general_linear(shape.total(), j.at("q").get<std::uint32_t>()), shape);
    }
    if (family == "Table") {
      const auto mul = j.at("mul").get<std::vector<std::vector<Code>>>();
      std::vector<Code> codes(mul.size());
      for (Code c = 0; c < codes.size(); ++c) codes[c] = c;
      return std::make_shared<FiniteGroup>(std::make_shared<TableAmbient>(mul), codes, "Table");
    }
    throw ParseError("unknown group family '" + family + "'");
  } catch (const Json::exception& e) {
    throw ParseError(std::string("group spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("group spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

enum class Format { Json, Tsv };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

/// Canonical JSON (sorted keys, two-space indent, trailing newline).
inline std::string emit_json(const Json& j) { return j.dump(2) + "\n"; }

inline std::string tsv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// TSV with a header row, or a JSON list of objects keyed by column.
inline std::string emit_table(const Table& t, Format fmt) {
  if (fmt == Format::Json) {
    Json out = Json::array();
    for (const auto& row : t.rows) {
      Json o = Json::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) o[t.columns[c]] = c < row.size() ? row[c] : Json();
      out.push_back(o);
    }
    return emit_json(out);
  }
  std::string s;
  for (std::size_t c = 0; c < t.columns.size(); ++c) s += (c ? "\t" : "") + t.columns[c];
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) s += (c ? "\t" : "") + (c < row.size() ? tsv_cell(row[c]) : "");
    s += "\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ReportEntry {
  std::string cell;
  VerificationReport report;

  std::string status() const { return !report.skipped.empty() ? "skipped" : report.ok() ? "pass" : "fail"; }
};

struct Report {
  Json config;
  std::vector<ReportEntry> entries;

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.report.failures.size();
    return n;
  }
  bool ok() const { return failures() == 0; }

  Json to_json() const {
    Json j;
    j["config"] = config;
    j["suites"] = Json::array();
    std::size_t checks = 0, failed = 0, skipped = 0;
    for (const auto& e : entries) {
      Json s;
      s["suite"] = e.report.suite;
      s["cell"] = e.cell;
      s["status"] = e.status();
      s["checked"] = e.report.checked;
      s["failures"] = e.report.failures;
      Json obs = Json::object();
      for (const auto& [k, v] : e.report.observations) obs[k] = v;
      s["observations"] = obs;
      if (!e.report.skipped.empty()) s["skipped"] = e.report.skipped;
      j["suites"].push_back(s);
      checks += e.report.checked;
      failed += e.report.ok() ? 0 : 1;
      skipped += e.report.skipped.empty() ? 0 : 1;
    }
    j["summary"] = {{"suites", entries.size()}, {"checks", checks},   {"failed_suites", failed},
                    {"failures", failures()},   {"skipped", skipped}, {"status", ok() ? "pass" : "fail"}};
    return j;
  }

  Table to_table() const {
    Table t{{"suite", "cell", "status", "checked", "failures"}, {}};
    for (const auto& e : entries)
      t.rows.push_back({e.report.suite, e.cell, e.status(), e.report.checked, e.report.failures.size()});
    return t;
  }

  std::string emit(Format fmt) const { return fmt == Format::Json ? emit_json(to_json()) : emit_table(to_table(), fmt); }
};

// ---------------------------------------------------------------------------
// Verification grid
// ---------------------------------------------------------------------------

struct GridCell {
  Family family;
  std::uint32_t q, ell;
  std::size_t nmax, tmax;

  std::string name() const {
    return family_name(family) + (family == Family::GL ? " q=" + std::to_string(q) : "") + " ell=" + std::to_string(ell) +
           " n<=" + std::to_string(nmax) + " t<=" + std::to_string(tmax);
  }
};

struct RunConfig {
  std::optional<std::uint32_t> q;    // restricts the grid to one family: q = 1 is Sym, otherwise GL_n(F_q) and Sym
  std::optional<std::uint32_t> ell;  // restricts the grid to one prime
  std::size_t tmax = 3;
  std::optional<std::size_t> nmax;   // defaults: 4 for GL over F_2, 3 for other GL, 5 for Sym
  std::size_t truncation = 60;
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;

  /// Rejects ell | q and non-prime-power q.
  void validate() const {
    if (ell && !is_prime(*ell)) throw ParseError("ell = " + std::to_string(*ell) + " is not prime");
    if (q && *q != 1 && !is_prime_power(*q)) throw ParseError("q = " + std::to_string(*q) + " is not a prime power");
    if (q && ell && *q % *ell == 0) throw ParseError("ell = " + std::to_string(*ell) + " divides q = " + std::to_string(*q));
    if (jobs == 0) throw ParseError("jobs must be positive");
  }

  Json to_json() const {
    Json j;
    j["q"] = q ? Json(*q) : Json("all");
    j["ell"] = ell ? Json(*ell) : Json("all");
    j["tmax"] = tmax;
    j["nmax"] = nmax ? Json(*nmax) : Json("default");
    j["truncation"] = truncation;
    j["samples"] = samples;
    j["seed"] = seed;
    return j;
  }
};

inline std::vector<GridCell> verification_grid(const RunConfig& cfg) {
  std::vector<GridCell> cells;
  const std::vector<std::uint32_t> ells = cfg.ell ? std::vector<std::uint32_t>{*cfg.ell} : std::vector<std::uint32_t>{2, 3, 5};
  const std::vector<std::uint32_t> qs = cfg.q ? std::vector<std::uint32_t>{*cfg.q} : std::vector<std::uint32_t>{2, 3, 4};
  for (auto q : qs) {
    if (q == 1) continue;
    for (auto ell : ells)
      if (q % ell != 0) cells.push_back({Family::GL, q, ell, cfg.nmax.value_or(q == 2 ? 4 : 3), cfg.tmax});
  }
  for (auto ell : ells) cells.push_back({Family::Sym, 1, ell, cfg.nmax.value_or(5), cfg.tmax});
  return cells;
}

/// Runs the E-algebra grid, the lemma suites, and the property suites of every module.
/// Sampled suites draw their seeds from one generator in a fixed order, so the report
/// depends only on the configuration.
inline Report run_verification_grid(const RunConfig& cfg) {
  cfg.validate();
  using Task = std::function<std::vector<VerificationReport>()>;
  std::vector<std::pair<std::string, Task>> tasks;
  std::mt19937_64 master(cfg.seed);
  const auto cells = verification_grid(cfg);

  for (const auto& c : cells)
    tasks.emplace_back(c.name(), [c] { return ealgebra_suites(c.family, c.q, c.ell, c.nmax, c.tmax); });
  for (const auto& c : cells) {
    if (c.family != Family::GL || c.q > 3) continue;
    const std::size_t t = std::min<std::size_t>(c.tmax, 2);
    const std::string name = "GL q=" + std::to_string(c.q) + " ell=" + std::to_string(c.ell) + " n+m<=" +
                             std::to_string(std::min<std::size_t>(c.nmax, 3)) + " t<=" + std::to_string(t);
    tasks.emplace_back(name, [c, t] {
      return std::vector<VerificationReport>{mid_portion_suite(c.q, c.ell, c.nmax, t),
                                             inflation_transfer_suite(c.q, c.ell, c.nmax, t)};
    });
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> contexts;  // (ell, q)
  for (const auto& c : cells) contexts.emplace(c.ell, c.q);
  for (auto [ell, q] : contexts) {
    const QContext ctx(ell, q);
    const std::uint64_t s1 = master(), s2 = master(), s3 = master(), s4 = master();
    const std::size_t N = cfg.truncation, samples = cfg.samples;
    tasks.emplace_back(detail::ctx_name(ctx), [ctx, s1, s2, s3, s4, N, samples] {
      return std::vector<VerificationReport>{qarith_properties(ctx),        dalg_properties(ctx, s1),
                                             dmod_iterated(ctx, s2, samples), dmod_connection(ctx, s3, N),
                                             dmod_invariants(ctx, s4, N),     bound_properties(ctx)};
    });
  }
  for (const auto& c : cells) {
    if (c.family != Family::GL || c.q > 3) continue;
    tasks.emplace_back("q=" + std::to_string(c.q) + " ell=" + std::to_string(c.ell),
                       [c] { return std::vector<VerificationReport>{specht_properties(c.q, c.ell)}; });
  }

  std::vector<std::vector<VerificationReport>> results(tasks.size());
  for (std::size_t start = 0; start < tasks.size(); start += cfg.jobs) {
    const std::size_t stop = std::min(tasks.size(), start + cfg.jobs);
    std::vector<std::future<std::vector<VerificationReport>>> running;
    for (std::size_t i = start; i < stop; ++i)
      running.push_back(std::async(std::launch::async, [&task = tasks[i].second]() -> std::vector<VerificationReport> {
        try {
          return task();
        } catch (const std::exception& e) {
          VerificationReport r;
          r.suite = "error";
          r.checked = 1;
          r.fail(e.what());
          return {r};
        }
      }));
    for (std::size_t i = start; i < stop; ++i) results[i] = running[i - start].get();
  }

  Report rep;
  rep.config = cfg.to_json();
  for (std::size_t i = 0; i < tasks.size(); ++i)
    for (auto& r : results[i]) rep.entries.push_back({tasks[i].first, std::move(r)});
  return rep;
}

}  // namespace qdp
