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

// qdp: command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdp/cohomology.hpp"
#include "qdp/dalg.hpp"
#include "qdp/dmod.hpp"
#include "qdp/ealgebra.hpp"
#include "qdp/errors.hpp"
#include "qdp/lemmas.hpp"
#include "qdp/qarith.hpp"
#include "qdp/report.hpp"
#include "qdp/specht.hpp"

namespace {

using namespace qdp;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kComputation = 3 };

struct Options {
  bool json = false, tsv = false;
  std::size_t budget = 0;
  Format format() const { return tsv ? Format::Tsv : Format::Json; }
};

/// Reads a JSON document from a file, or parses the argument itself when it starts with '{' or '['.
Json load_json(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return Json::parse(arg);
    } catch (const Json::exception& e) {
      throw ParseError(std::string("inline JSON: ") + e.what());
    }
  }
  std::ifstream in(arg);
  if (!in) throw ParseError("cannot open '" + arg + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("'" + arg + "': " + e.what());
  }
}

/// (ell, q) with ell prime and ell not dividing q; q = 1 is allowed for the symmetric-group family.
QContext context(std::uint32_t ell, std::uint64_t q) {
  if (!is_prime(ell)) throw ParseError("ell = " + std::to_string(ell) + " is not prime");
  if (q == 0 || q % ell == 0) throw ParseError("ell = " + std::to_string(ell) + " divides q = " + std::to_string(q));
  return QContext(ell, q);
}

void print(const Options& o, const Json& j) {
  if (o.format() == Format::Tsv) {
    Table t;
    for (auto it = j.begin(); it != j.end(); ++it) t.columns.push_back(it.key());
    std::vector<Json> row;
    for (auto it = j.begin(); it != j.end(); ++it) row.push_back(it.value());
    t.rows.push_back(row);
    std::cout << emit_table(t, Format::Tsv);
  } else {
    std::cout << emit_json(j);
  }
}

void print(const Options& o, const Table& t) { std::cout << emit_table(t, o.format()); }

Json report_json(const VerificationReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["checked"] = r.checked;
  j["failures"] = r.failures;
  j["status"] = r.ok() ? "pass" : "fail";
  Json obs = Json::object();
  for (const auto& [k, v] : r.observations) obs[k] = v;
  j["observations"] = obs;
  return j;
}

Json element_json(const DElement& e) { return delement_to_json(e); }

std::string bigint_string(const BigInt& v) { return v.str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact q-divided powers, D-modules, and desk-scale group cohomology"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  auto* fmt = app.add_option_group("format");
  fmt->add_flag("--json", opt.json, "JSON output (default)");
  fmt->add_flag("--tsv", opt.tsv, "TSV output");
  fmt->require_option(0, 1);
  app.add_option("--budget", opt.budget, "largest group enumerated (elements); overrides QDP_GROUP_BUDGET");

  std::function<int()> action;

  // qbinom
  std::uint32_t ell = 3;
  std::uint64_t q = 2;
  std::uint64_t qb_n = 0, qb_m = 0;
  bool integer = false;
  auto* qbinom = app.add_subcommand("qbinom", "Gaussian binomial [N choose M]_q in F_ell");
  qbinom->add_option("--ell", ell, "prime ell")->required();
  qbinom->add_option("--q", q, "integer q")->required();
  qbinom->add_option("N", qb_n)->required();
  qbinom->add_option("M", qb_m)->required();
  qbinom->add_flag("--integer", integer, "also print the integer value");
  qbinom->callback([&] {
    action = [&] {
      const QContext ctx = context(ell, q);
      Json j{{"ell", ell}, {"q", q}, {"n", qb_n}, {"m", qb_m}, {"value", q_binomial(qb_n, qb_m, ctx)}};
      if (integer) j["integer"] = bigint_string(q_binomial_integer(qb_n, qb_m, q));
      print(opt, j);
      return kOk;
    };
  });

  // dalg
  auto* dalg = app.add_subcommand("dalg", "The q-divided power algebra");
  dalg->require_subcommand(1);
  std::string elem_a, elem_b;
  std::uint64_t times = 1;
  auto dalg_ctx_opts = [&](CLI::App* c) {
    c->add_option("--ell", ell, "prime ell")->required();
    c->add_option("--q", q, "integer q")->required();
  };
  auto* mul = dalg->add_subcommand("mul", "product of two elements");
  dalg_ctx_opts(mul);
  mul->add_option("A", elem_a, "element as [[degree, coeff], ...]")->required();
  mul->add_option("B", elem_b, "element as [[degree, coeff], ...]")->required();
  mul->callback([&] {
    action = [&] {
      const QContext ctx = context(ell, q);
      print(opt, Json{{"product", element_json(d_mul(delement_from_json(load_json(elem_a), ctx),
                                                        delement_from_json(load_json(elem_b), ctx)))}});
      return kOk;
    };
  });
  auto* derive = dalg->add_subcommand("derive", "iterated derivation d^k");
  dalg_ctx_opts(derive);
  derive->add_option("A", elem_a, "element as [[degree, coeff], ...]")->required();
  derive->add_option("--times", times, "number of iterations")->check(CLI::PositiveNumber);
  derive->callback([&] {
    action = [&] {
      const QContext ctx = context(ell, q);
      print(opt, Json{{"derivative", element_json(d_derive(delement_from_json(load_json(elem_a), ctx), times))}});
      return kOk;
    };
  });
  auto* taylor = dalg->add_subcommand("taylor", "Taylor expansion sum d^n(a)_0 x^[n]");
  dalg_ctx_opts(taylor);
  taylor->add_option("A", elem_a, "element as [[degree, coeff], ...]")->required();
  taylor->callback([&] {
    action = [&] {
      const QContext ctx = context(ell, q);
      Table t{{"constant", "degree"}, {}};
      for (auto [c, n] : taylor_expand(delement_from_json(load_json(elem_a), ctx))) t.rows.push_back({c, n});
      print(opt, t);
      return kOk;
    };
  });
  auto* ybasis = dalg->add_subcommand("ybasis", "expansion in the monomials of the y_i");
  dalg_ctx_opts(ybasis);
  ybasis->add_option("A", elem_a, "element as [[degree, coeff], ...]")->required();
  ybasis->callback([&] {
    action = [&] {
      const QContext ctx = context(ell, q);
      Table t{{"coeff", "monomial"}, {}};
      for (const auto& term : to_y_basis(delement_from_json(load_json(elem_a), ctx))) {
        Json mono = Json::object();
        for (auto [i, c] : term.monomial.exponents) mono["y" + std::to_string(i)] = c;
        t.rows.push_back({term.coeff, mono});
      }
      print(opt, t);
      return kOk;
    };
  });

  // dmod
  auto* dmod = app.add_subcommand("dmod", "Graded D-modules: invariants and bounds");
  dmod->require_subcommand(1);
  std::string file;
  std::size_t trunc = 60;
  auto* analyze = dmod->add_subcommand("analyze", "Hilbert function, epsilon, lambda and period of a presentation");
  analyze->add_option("FILE", file, "module presentation (JSON)")->required();
  analyze->add_option("--trunc", trunc, "truncation degree");
  analyze->callback([&] {
    action = [&] {
      const FPModule M = fpmodule_from_json(load_json(file));
      const auto p = predict_period(M, trunc);
      Json j{{"hilbert", p.hilbert},       {"epsilon", p.epsilon_bound}, {"lambda", p.lambda_bound},
             {"period", p.period},         {"onset", p.onset},           {"certified_to", p.truncation},
             {"verified", p.verified()}};
      print(opt, j);
      return p.verified() ? kOk : kFailed;
    };
  });
  auto* bounds = dmod->add_subcommand("bounds", "Evaluate a bound formula");
  bounds->require_subcommand(1);
  std::int64_t bt = 0, bt0 = 0, bt1 = 0, bdelta = 0, bd = 0, blam1 = 0, blam2 = 0, br = 0;
  std::size_t beps1 = 0, beps2 = 0, beps3 = 0;
  std::optional<std::int64_t> bk;
  std::string eps_map, fl_map;
  auto* vimod = bounds->add_subcommand("vimod", "lambda, epsilon, onset and period for H^t of a VI-module");
  dalg_ctx_opts(vimod);
  vimod->add_option("--t", bt)->required();
  vimod->add_option("--t0", bt0, "generation degree");
  vimod->add_option("--t1", bt1, "relation degree");
  vimod->add_option("--delta", bdelta, "polynomial degree")->required();
  vimod->callback([&] {
    action = [&] {
      const auto b = bound_vimod(bt, bt0, bt1, bdelta, context(ell, q));
      print(opt, Json{{"lambda_bound", b.lambda_bound}, {"epsilon_bound", b.epsilon_bound}, {"onset", b.onset},
                      {"period", b.period}});
      return kOk;
    };
  });
  auto* unip = bounds->add_subcommand("unipotent", "period and onset for H^t with unipotent Specht coefficients");
  dalg_ctx_opts(unip);
  unip->add_option("--t", bt)->required();
  unip->add_option("--d", bd, "|mu|")->required();
  unip->callback([&] {
    action = [&] {
      const auto b = bound_unipotent(bt, bd, context(ell, q));
      print(opt, Json{{"s", b.s}, {"period", b.period}, {"onset", b.onset}});
      return kOk;
    };
  });
  auto* hom = bounds->add_subcommand("hom", "epsilon bound for the homology of M1 -> M2 -> M3");
  dalg_ctx_opts(hom);
  hom->add_option("--eps1", beps1)->required();
  hom->add_option("--eps2", beps2)->required();
  hom->add_option("--eps3", beps3)->required();
  hom->add_option("--lam1", blam1)->required();
  hom->add_option("--lam2", blam2)->required();
  hom->callback([&] {
    action = [&] {
      print(opt, Json{{"epsilon_bound", bound_homology_epsilon(beps1, beps2, beps3, blam1, blam2, context(ell, q))}});
      return kOk;
    };
  });
  auto* spectral = bounds->add_subcommand("spectral", "epsilon bound on a later page of a spectral sequence");
  spectral->add_option("--r", br)->required();
  spectral->add_option("--t", bt)->required();
  spectral->add_option("--eps1", eps_map, "first-page epsilons as {\"t\": eps, ...}")->required();
  spectral->add_option("--fl", fl_map, "fl(lambda) per t as {\"t\": value, ...}");
  spectral->add_option("--k", bk, "page offset (default 2r + 1)");
  spectral->callback([&] {
    action = [&] {
      auto read = [](const std::string& s) {
        std::map<std::int64_t, std::size_t> m;
        if (s.empty()) return m;
        const Json j = load_json(s);
        if (!j.is_object()) throw ParseError("expected an object of t -> value");
        for (auto it = j.begin(); it != j.end(); ++it) m[std::stoll(it.key())] = it.value().get<std::size_t>();
        return m;
      };
      print(opt, Json{{"epsilon_bound", bound_spectral_epsilon(br, bt, read(eps_map), read(fl_map), bk)}});
      return kOk;
    };
  });

  // gcoh
  auto* gcoh = app.add_subcommand("gcoh", "Cohomology of finite groups with F_ell coefficients");
  gcoh->require_subcommand(1);
  std::string group_arg;
  std::size_t tmax = 3, nmax = 3;
  std::string family = "GL";
  auto* dims = gcoh->add_subcommand("dims", "dim H^t(G; F_ell) for t <= tmax");
  dims->add_option("GROUP", group_arg, "group spec (JSON file or inline JSON)")->required();
  dims->add_option("--ell", ell)->required();
  dims->add_option("--tmax", tmax);
  dims->callback([&] {
    action = [&] {
      if (!is_prime(ell)) throw ParseError("ell = " + std::to_string(ell) + " is not prime");
      const Json spec = load_json(group_arg);
      Json n;
      if (spec.contains("n")) n = spec["n"];
      else if (spec.contains("blocks")) {
        std::size_t total = 0;
        for (const auto& b : spec["blocks"]) total += b.get<std::size_t>();
        n = total;
      }
      const GroupPtr G = group_from_json(spec);
      GroupCohomology H(std::make_shared<CohomologyEngine>(ell), G, GModule::trivial_module());
      Table t{{"n", "t", "dim"}, {}};
      for (std::size_t k = 0; k <= tmax; ++k) t.rows.push_back({n, k, H.dim(k)});
      print(opt, t);
      return kOk;
    };
  });
  auto* gverify = gcoh->add_subcommand("verify", "Check the structure of E on a window");
  gverify->require_subcommand(1);
  auto window_opts = [&](CLI::App* c) {
    c->add_option("--q", q, "q (ignored for the Sym family)");
    c->add_option("--ell", ell)->required();
    c->add_option("--tmax", tmax);
    c->add_option("--nmax", nmax);
    c->add_option("--family", family, "GL or Sym")->check(CLI::IsMember({"GL", "Sym"}));
  };
  auto run_window = [&](const std::function<VerificationReport(const BigradedAlgebraE&)>& f) {
    const bool sym = family == "Sym";
    context(ell, sym ? 1 : q);
    const BigradedAlgebraE E(sym ? Family::Sym : Family::GL, static_cast<std::uint32_t>(q), ell, nmax, tmax);
    const auto r = f(E);
    print(opt, report_json(r));
    return r.ok() ? kOk : kFailed;
  };
  auto* vl = gverify->add_subcommand("leibniz", "d(xy) = x d(y) + q^m d(x) y and surjectivity of d");
  window_opts(vl);
  vl->callback([&] {
    action = [&] {
      return run_window([](const BigradedAlgebraE& E) {
        auto r = verify_leibniz(E);
        r.merge(verify_surjectivity(E));
        return r;
      });
    };
  });
  auto* vf = gverify->add_subcommand("free", "freeness of E^t over D with the kernel-degree bound");
  window_opts(vf);
  vf->callback([&] { action = [&] { return run_window([](const BigradedAlgebraE& E) { return verify_free_D(E); }); }; });
  auto* vm = gverify->add_subcommand("midportion", "the mid-portion identity for n + m <= nmax");
  window_opts(vm);
  vm->callback([&] {
    action = [&] {
      context(ell, q);
      const auto r = mid_portion_suite(static_cast<std::uint32_t>(q), ell, nmax, tmax);
      print(opt, report_json(r));
      return r.ok() ? kOk : kFailed;
    };
  });
  auto* vi = gverify->add_subcommand("inftransfer", "transfer against inflation: ratio |N2/N1| = q^m");
  window_opts(vi);
  vi->callback([&] {
    action = [&] {
      context(ell, q);
      const auto r = inflation_transfer_suite(static_cast<std::uint32_t>(q), ell, nmax, tmax);
      print(opt, report_json(r));
      return r.ok() ? kOk : kFailed;
    };
  });

  // specht
  auto* specht = app.add_subcommand("specht", "Unipotent Specht modules of GL_n(F_q)");
  specht->require_subcommand(1);
  std::string mu_text;
  std::size_t st = 0, snmin = 0;
  auto* sdim = specht->add_subcommand("dim", "dimension of M_mu");
  sdim->add_option("--mu", mu_text, "partition, e.g. 2,1")->required();
  dalg_ctx_opts(sdim);
  sdim->callback([&] {
    action = [&] {
      context(ell, q);
      if (!is_prime_power(q)) throw ParseError("q = " + std::to_string(q) + " is not a prime power");
      const auto mu = Composition::parse(mu_text);
      print(opt, Json{{"mu", mu.to_string()}, {"q", q}, {"ell", ell},
                      {"dim", specht_dim(mu, static_cast<std::uint32_t>(q), ell)}});
      return kOk;
    };
  });
  auto* sseries = specht->add_subcommand("series", "n -> dim H^t(GL_n(F_q), M_{mu[n]})");
  sseries->add_option("--mu", mu_text, "partition, e.g. 1")->required();
  dalg_ctx_opts(sseries);
  sseries->add_option("--t", st)->required();
  sseries->add_option("--nmax", nmax)->required();
  sseries->add_option("--nmin", snmin);
  sseries->callback([&] {
    action = [&] {
      const QContext ctx = context(ell, q);
      if (!is_prime_power(q)) throw ParseError("q = " + std::to_string(q) + " is not a prime power");
      const auto mu = Composition::parse(mu_text);
      const auto s = specht_cohomology_series(mu, st, snmin, nmax, ctx);
      Table t{{"n", "dim", "module_dim", "note"}, {}};
      Json series = Json::array();
      for (const auto& e : s.entries) {
        t.rows.push_back({e.n, e.dim ? Json(*e.dim) : Json(), e.module_dim, e.note});
        if (e.dim) series.push_back(Json::array({e.n, *e.dim}));
      }
      if (opt.format() == Format::Tsv) {
        print(opt, t);
      } else {
        Json entries = Json::parse(emit_table(t, Format::Json));
        print(opt, Json{{"mu", mu.to_string()},
                        {"q", q},
                        {"ell", ell},
                        {"t", st},
                        {"entries", entries},
                        {"series", series},
                        {"bound", {{"s", s.bound.s}, {"period", s.bound.period}, {"onset", s.bound.onset}}}});
      }
      return kOk;
    };
  });
  auto* sfit = specht->add_subcommand("fit", "fit a polynomial in X = q^n to a dimension series");
  sfit->add_option("FILE", file, "JSON {\"q\": q, \"series\": [[n, dim], ...]}")->required();
  sfit->callback([&] {
    action = [&] {
      const Json j = load_json(file);
      if (!j.contains("q") || !j.contains("series")) throw ParseError("expected \"q\" and \"series\"");
      std::vector<std::pair<std::size_t, BigInt>> pts;
      for (const auto& p : j["series"]) {
        if (!p.is_array() || p.size() != 2) throw ParseError("series entries must be [n, dim]");
        pts.emplace_back(p[0].get<std::size_t>(), BigInt(p[1].get<std::uint64_t>()));
      }
      const auto poly = fit_dimension_polynomial(pts, j["q"].get<std::uint64_t>());
      std::vector<std::string> coeffs;
      for (const auto& c : poly.coeffs) coeffs.push_back(c.str());
      print(opt, Json{{"polynomial", poly.to_string()}, {"degree", poly.degree}, {"onset", poly.onset},
                      {"coefficients", coeffs}});
      return kOk;
    };
  });

  // verify all
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->require_subcommand(1);
  RunConfig cfg;
  std::uint32_t vq = 0, vell = 0;
  std::size_t vnmax = 0;
  auto* all = verify->add_subcommand("all", "the default grid and every property suite");
  all->add_option("--seed", cfg.seed, "seed for sampled checks");
  all->add_option("--q", vq, "restrict to one q (1 = symmetric groups only)");
  all->add_option("--ell", vell, "restrict to one prime");
  all->add_option("--tmax", cfg.tmax);
  auto* nmax_opt = all->add_option("--nmax", vnmax);
  all->add_option("--trunc", cfg.truncation, "truncation degree for module suites");
  all->add_option("--samples", cfg.samples, "sampled triples per context for the iterated connection");
  all->add_option("--jobs", cfg.jobs, "grid cells run concurrently")->check(CLI::PositiveNumber);
  all->callback([&] {
    if (all->count("--q")) cfg.q = vq;
    if (all->count("--ell")) cfg.ell = vell;
    if (nmax_opt->count()) cfg.nmax = vnmax;
    cfg.validate();
    action = [&] {
      const Report r = run_verification_grid(cfg);
      std::cout << r.emit(opt.format());
      return r.ok() ? kOk : kFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    std::cerr << "qdp: " << e.what() << "\n";
    return kUsage;
  }
  if (opt.budget) setenv("QDP_GROUP_BUDGET", std::to_string(opt.budget).c_str(), 1);
  try {
    return action ? action() : kUsage;
  } catch (const ParseError& e) {
    std::cerr << "qdp: " << e.what() << "\n";
    return kUsage;
  } catch (const NotInvertible& e) {
    std::cerr << "qdp: " << e.what() << "\n";
    return kUsage;
  } catch (const NotAPartition& e) {
    std::cerr << "qdp: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qdp: " << e.what() << "\n";
    return kComputation;
  }
}
