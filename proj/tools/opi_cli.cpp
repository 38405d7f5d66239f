// Command-line front end: instance estimators, decoder and EEA drivers,
// unranking, target-set tooling, and a desk-scale selftest matrix.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opiw/attacks.hpp"
#include "opiw/dicke.hpp"
#include "opiw/eea_dialog.hpp"
#include "opiw/eea_sync.hpp"
#include "opiw/rs_decode.hpp"

using json = nlohmann::ordered_json;
using namespace opiw;

namespace {

constexpr const char *kVersion = "opi 1.0.0";

// ---------------------------------------------------------------------------
// Config file: TOML-like `key = value` lines overriding field constants.

struct Config {
  fpoly_t irreducible = 0;  // 0 keeps the per-b default
  long long cost_qq_toffoli = -1;
  long long cost_qq_cnot = -1;
  long long cost_qq_pctof = -1;
  long long cost_inv_mults = -1;
};

Config load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
      continue;
    }
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    long long num = 0;
    try {
      num = std::stoll(val, nullptr, 0);  // base 0: decimal or 0x hex
    } catch (const std::exception &) {
      throw std::invalid_argument("config: bad value for " + key);
    }
    if (key == "irreducible")
      cfg.irreducible = (fpoly_t)num;
    else if (key == "cost_qq_toffoli")
      cfg.cost_qq_toffoli = num;
    else if (key == "cost_qq_cnot")
      cfg.cost_qq_cnot = num;
    else if (key == "cost_qq_pctof")
      cfg.cost_qq_pctof = num;
    else if (key == "cost_inv_mults")
      cfg.cost_inv_mults = num;
    else
      throw std::invalid_argument("config: unknown key " + key);
  }
  return cfg;
}

GF make_field(int b, const Config &cfg) {
  GfCosts costs = default_costs(b);
  if (cfg.cost_qq_toffoli >= 0) {
    costs.qq_toffoli = (std::uint32_t)cfg.cost_qq_toffoli;
    costs.known = true;
  }
  if (cfg.cost_qq_cnot >= 0) costs.qq_cnot = (std::uint32_t)cfg.cost_qq_cnot;
  if (cfg.cost_qq_pctof >= 0) costs.qq_pctof = (std::uint32_t)cfg.cost_qq_pctof;
  GF F = cfg.irreducible ? GF(b, cfg.irreducible, costs) : GF(b, fpoly_smallest_irreducible(b), costs);
  if (cfg.cost_inv_mults >= 0) F.set_cost_inv_mults((int)cfg.cost_inv_mults);
  return F;
}

// ---------------------------------------------------------------------------
// Serialization helpers.

// Big quantities as a full-precision decimal string plus a float
// mantissa/exponent pair, since JSON numbers stop at double precision.
json big_json(const Real256 &v) {
  json out;
  out["decimal"] = v.str(30);
  if (v == 0) {
    out["mantissa"] = 0.0;
    out["exponent"] = 0;
    return out;
  }
  long e = (long)boost::multiprecision::floor(boost::multiprecision::log10(v)).convert_to<long>();
  Real256 mant = v / boost::multiprecision::pow(Real256(10), e);
  if (mant >= 10) {
    mant /= 10;
    ++e;
  }
  if (mant < 1) {
    mant *= 10;
    --e;
  }
  out["mantissa"] = mant.convert_to<double>();
  out["exponent"] = e;
  return out;
}

json big_json(double v) { return big_json(Real256(v)); }

json ledger_json(const CostLedger &lg, const GF *F = nullptr) {
  json out;
  out["qq_mult"] = lg.qq_mult;
  out["qc_mult"] = lg.qc_mult;
  out["gf_inverse"] = lg.gf_inverse;
  out["cswap"] = lg.cswap;
  out["cadd"] = lg.cadd;
  if (F && F->costs().known)
    out["toffoli_total"] =
        (lg.qq_mult + lg.gf_inverse * (std::uint64_t)F->cost_inv_mults()) * F->costs().qq_toffoli;
  return out;
}

std::string poly_hex(const Poly &p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << std::hex << p[i];
  }
  return os.str();
}

std::uint64_t default_seed() {
  const char *env = std::getenv("OPI_SEED");
  if (!env || !*env) return 12345;
  try {
    return std::stoull(env);
  } catch (const std::exception &) {
    throw std::invalid_argument("OPI_SEED is not a number");
  }
}

void emit(const json &report, bool as_json, const std::string &out_path,
          const std::string &text) {
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open " + out_path);
    out << report.dump(2) << '\n';
  }
  if (as_json)
    std::cout << report.dump(2) << '\n';
  else
    std::cout << text;
}

// ---------------------------------------------------------------------------
// estimate

// Leading-order decoder ledgers; the dominant terms the gate-count table
// attributes to each architecture, evaluated symbolically at (m, n).
CostLedger symbolic_ledger(long long m, long long n, RsMode mode) {
  CostLedger lg;
  if (mode == RsMode::Explicit) {
    lg.qq_mult = (std::uint64_t)(3 * n * n);
    lg.qc_mult = (std::uint64_t)(m * n);
    lg.gf_inverse = (std::uint64_t)(m + n / 2 + 2);
    lg.cswap = (std::uint64_t)(n * (n + 1) / 2);
  } else {
    lg.qq_mult = (std::uint64_t)(2 * m * n + n * n);
    lg.qc_mult = (std::uint64_t)(m * n / 2);
    lg.gf_inverse = (std::uint64_t)(m + n);
    lg.cswap = (std::uint64_t)(m * n);
  }
  return lg;
}

struct SampledRun {
  long long m = 0, n = 0;
  CostLedger explicit_lg, implicit_lg;
  bool decode_ok = false;
  bool cross_ok = false;
};

// One concrete planted decode per mode, then the sampled counters checked
// against the symbolic formulas at the sampled size. The instance scales as a
// whole: n shrinks with m so the n/m ratio (which the formula bands assume to
// be small) is preserved.
SampledRun sampled_decode(const Config &cfg, int b, long long full_m, long long full_n,
                          std::uint64_t seed) {
  SampledRun out;
  GF F = make_field(b, cfg);
  long long m = (long long)F.q() - 1;
  out.m = m;
  long long n = full_m == m ? full_n : std::llround((double)full_n * (double)m / (double)full_m);
  // the formula bands carry O(1/ell) corrections, so keep ell at 12 or more
  n = std::max<long long>(24, n);
  out.n = std::min<long long>(n - (n & 1), m - 1);
  RSCode code = rs_code(F, (int)m, (int)out.n);
  std::mt19937_64 rng(seed);
  ErrorPattern e;
  while ((int)e.size() < code.ell)
    e[1 + (int)(rng() % m)] = (felt_t)(1 + rng() % (F.q() - 1));
  Poly S = syndrome_compute(F, code, e);
  DecodeResult rx = rs_decode(F, code, S, RsMode::Explicit, &out.explicit_lg);
  DecodeResult ri = rs_decode(F, code, S, RsMode::Implicit, &out.implicit_lg);
  out.decode_ok = rx.ok && ri.ok && rx.pattern == e && ri.pattern == e;

  CostLedger se = symbolic_ledger(out.m, out.n, RsMode::Explicit);
  CostLedger si = symbolic_ledger(out.m, out.n, RsMode::Implicit);
  auto within = [](std::uint64_t got, std::uint64_t want, double tol) {
    double lo = (double)want * (1.0 - tol), hi = (double)want * (1.0 + tol);
    return (double)got >= lo && (double)got <= hi;
  };
  long long nn = out.n, mm = out.m;
  bool bands_ok = out.n < 24 ||  // tiny fields cannot reach the banded regime
                  (out.explicit_lg.qq_mult >= (std::uint64_t)(3 * nn * nn) &&
                   out.explicit_lg.qq_mult <= (std::uint64_t)(3 * nn * nn + 20 * nn) &&
                   (double)out.implicit_lg.qq_mult >= (double)si.qq_mult - 20.0 * (mm + nn) &&
                   (double)out.implicit_lg.qq_mult <= (double)si.qq_mult + 20.0 * (mm + nn) &&
                   within(out.explicit_lg.qc_mult, se.qc_mult, 0.10) &&
                   within(out.implicit_lg.qc_mult, si.qc_mult, 0.10));
  out.cross_ok = out.decode_ok && bands_ok;
  return out;
}

struct EstimateArgs {
  long long m = 0, n = 0, r = 0;
  int b = 0;
  std::uint64_t seed = 0;
  bool full_run = false;
  const Config *cfg = nullptr;
};

json estimate_one(const EstimateArgs &a) {
  if (a.m != (1LL << a.b) - 1)
    throw std::invalid_argument("estimate: m must equal 2^b - 1");
  AttackTarget tg = attack_target(a.m, a.n, a.b, a.r);
  Real256 prange = prange_trials(a.m, a.n, a.r, tg.q, tg.t);
  double xp = xp_trials(a.m, a.n, a.b, a.r);
  double hoeff = hoeffding_trials_lower_bound(a.m, (double)a.n / (double)a.m);
  Real256 frontier_days = prange / Real256(frontier_trials_per_day());

  json rep;
  rep["instance"] = {{"m", a.m}, {"n", a.n}, {"b", a.b}, {"r", a.r}};
  rep["mu"] = tg.mu;
  rep["t"] = tg.t;
  rep["prange_trials"] = big_json(prange);
  rep["xp_trials"] = big_json(xp);
  rep["hoeffding_bound"] = big_json(hoeff);
  rep["frontier_days"] = big_json(frontier_days);

  GF F = make_field(a.b, *a.cfg);
  rep["decoder_ledger_explicit"] = ledger_json(symbolic_ledger(a.m, a.n, RsMode::Explicit), &F);
  rep["decoder_ledger_implicit"] = ledger_json(symbolic_ledger(a.m, a.n, RsMode::Implicit), &F);

  SampledRun sm = sampled_decode(*a.cfg, std::min(a.b, 8), a.m, a.n, a.seed);
  GF Fs = make_field(std::min(a.b, 8), *a.cfg);
  rep["sampled_run"] = {{"m", sm.m},
                        {"n", sm.n},
                        {"explicit", ledger_json(sm.explicit_lg, &Fs)},
                        {"implicit", ledger_json(sm.implicit_lg, &Fs)},
                        {"decode_ok", sm.decode_ok},
                        {"cross_ok", sm.cross_ok}};
  if (a.full_run) {
    GF Ff = make_field(a.b, *a.cfg);
    RSCode code = rs_code(Ff, (int)a.m, (int)a.n);
    std::mt19937_64 rng(a.seed);
    ErrorPattern e;
    while ((int)e.size() < code.ell)
      e[1 + (int)(rng() % a.m)] = (felt_t)(1 + rng() % (Ff.q() - 1));
    Poly S = syndrome_compute(Ff, code, e);
    CostLedger lx, li;
    DecodeResult rx = rs_decode(Ff, code, S, RsMode::Explicit, &lx);
    DecodeResult ri = rs_decode(Ff, code, S, RsMode::Implicit, &li);
    rep["full_run"] = {{"explicit", ledger_json(lx, &Ff)},
                       {"implicit", ledger_json(li, &Ff)},
                       {"decode_ok", rx.ok && ri.ok && rx.pattern == e && ri.pattern == e}};
  }
  rep["toolchain"] = {{"tool", kVersion}, {"compiler", __VERSION__}};
  rep["seed"] = a.seed;
  return rep;
}

std::string estimate_text(const json &rep) {
  std::ostringstream os;
  const json &in = rep["instance"];
  os << "instance m=" << in["m"] << " n=" << in["n"] << " b=" << in["b"] << " r=" << in["r"]
     << "\n";
  os << "  mu             = " << rep["mu"].get<double>() << "\n";
  os << "  t              = " << rep["t"] << "\n";
  auto line = [&](const char *name, const json &v) {
    os << "  " << name << " = " << v["mantissa"].get<double>() << "e" << v["exponent"].get<long>()
       << "  (" << v["decimal"].get<std::string>() << ")\n";
  };
  line("prange_trials ", rep["prange_trials"]);
  line("xp_trials     ", rep["xp_trials"]);
  line("hoeffding     ", rep["hoeffding_bound"]);
  line("frontier_days ", rep["frontier_days"]);
  os << "  sampled decode at m=" << rep["sampled_run"]["m"] << ": "
     << (rep["sampled_run"]["cross_ok"].get<bool>() ? "ledgers cross-check" : "CROSS-CHECK FAILED")
     << "\n";
  return os.str();
}

int cmd_estimate(EstimateArgs a, bool table, int jobs, bool as_json, const std::string &out_path) {
  std::vector<EstimateArgs> batch;
  if (table) {
    for (long long n = 60; n <= 100; n += 10) batch.push_back({1023, n, 496, 10, a.seed, false, a.cfg});
    for (long long n = 60; n <= 100; n += 10) batch.push_back({4095, n, 2016, 12, a.seed, false, a.cfg});
  } else {
    batch.push_back(a);
  }
  std::vector<json> reports(batch.size());
  std::vector<std::string> errors(batch.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= batch.size()) return;
        i = next++;
      }
      try {
        reports[i] = estimate_one(batch[i]);
      } catch (const std::exception &e) {
        errors[i] = e.what();
      }
    }
  };
  jobs = std::max(1, std::min<int>(jobs, (int)batch.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto &th : pool) th.join();
  for (const std::string &err : errors)
    if (!err.empty()) throw std::invalid_argument(err);

  bool all_ok = true;
  std::string text;
  for (const json &rep : reports) {
    text += estimate_text(rep);
    all_ok = all_ok && rep["sampled_run"]["cross_ok"].get<bool>();
  }
  json out = table ? json(reports) : reports[0];
  emit(out, as_json, out_path, text);
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// rs decode

int cmd_rs_decode(const Config &cfg, int b, long long n, long long weight, std::uint64_t seed,
                  const std::string &mode, bool as_json, const std::string &out_path) {
  GF F = make_field(b, cfg);
  long long m = (long long)F.q() - 1;
  RSCode code = rs_code(F, (int)m, (int)n);
  if (weight < 0) weight = code.ell;
  if (weight > code.ell)
    throw std::invalid_argument("rs decode: weight exceeds the correction radius");
  std::mt19937_64 rng(seed);
  ErrorPattern planted;
  while ((long long)planted.size() < weight)
    planted[1 + (int)(rng() % m)] = (felt_t)(1 + rng() % (F.q() - 1));
  Poly S = syndrome_compute(F, code, planted);

  json rep;
  rep["instance"] = {{"b", b}, {"m", m}, {"n", n}, {"weight", weight}};
  rep["seed"] = seed;
  rep["syndrome"] = poly_hex(S);
  std::ostringstream text;
  text << "rs decode b=" << b << " m=" << m << " n=" << n << " weight=" << weight << "\n";
  bool ok = true;
  ErrorPattern first_pattern;
  bool have_first = false;
  for (const std::string &name : {std::string("explicit"), std::string("implicit")}) {
    if (mode != "both" && mode != name) continue;
    CostLedger lg;
    DecodeResult res =
        rs_decode(F, code, S, name == "explicit" ? RsMode::Explicit : RsMode::Implicit, &lg);
    bool match = res.ok && res.pattern == planted;
    if (have_first) match = match && res.pattern == first_pattern;
    if (!have_first) {
      first_pattern = res.pattern;
      have_first = true;
    }
    ok = ok && match;
    json jpat = json::array();
    for (auto &[loc, val] : res.pattern) jpat.push_back({{"j", loc}, {"value", val}});
    rep[name] = {{"recovered", match}, {"pattern", jpat}, {"ledger", ledger_json(lg, &F)}};
    text << "  " << name << ": " << (match ? "recovered" : "FAILED") << "  qq=" << lg.qq_mult
         << " qc=" << lg.qc_mult << " inv=" << lg.gf_inverse << " cswap=" << lg.cswap << "\n";
  }
  rep["ok"] = ok;
  emit(rep, as_json, out_path, text.str());
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// eea trace

int cmd_eea_trace(const Config &cfg, int b, int n, const std::string &arch,
                  const std::string &mode, int ell, std::uint64_t seed, bool as_json,
                  const std::string &out_path) {
  GF F = make_field(b, cfg);
  std::mt19937_64 rng(seed);
  auto rand_poly = [&](int deg, bool monic) {
    Poly p(deg + 1);
    for (int i = 0; i <= deg; ++i) p[i] = (felt_t)(rng() % F.q());
    if (monic)
      p[deg] = 1;
    else if (p[deg] == 0)
      p[deg] = 1 + (felt_t)(rng() % (F.q() - 1));
    return p;
  };
  Poly A = rand_poly(n, true);
  if (A[0] == 0) A[0] = 1;  // the dialog machine needs an invertible constant
  Poly B = rand_poly(n - 1, false);
  json rep;
  rep["instance"] = {{"b", b}, {"n", n}, {"arch", arch}, {"seed", seed}};
  rep["A"] = poly_hex(A);
  rep["B"] = poly_hex(B);
  std::ostringstream text;
  bool ok = true;
  if (arch == "sync") {
    if (ell < 0) ell = n / 2;
    SyncMode sm = mode == "half" ? SyncMode::Half : SyncMode::Full;
    CostLedger lg;
    auto [res, trace] = sync_eea_run(F, A, B, sm, ell, &lg);
    std::uint64_t bound = cycle_bound(n, sm);
    ok = trace.T <= bound;
    if (sm == SyncMode::Full) {
      Poly lhs = poly_add(poly_mul(F, A, res.u), poly_mul(F, B, res.v));
      poly_trim(lhs);
      ok = ok && lhs == res.gcd;
      rep["gcd"] = poly_hex(res.gcd);
    } else {
      rep["sigma"] = poly_hex(res.sigma);
      rep["omega"] = poly_hex(res.omega);
    }
    rep["cycles"] = trace.T;
    rep["cycle_bound"] = bound;
    rep["iterations"] = trace.k;
    rep["peak_cells"] = trace.peak_cells;
    rep["ledger"] = ledger_json(lg, &F);
    rep["ok"] = ok;
    text << "sync eea " << mode << " n=" << n << ": T=" << trace.T << " (bound " << bound
         << "), k=" << trace.k << ", peak_cells=" << trace.peak_cells << ", qq=" << lg.qq_mult
         << (ok ? "" : "  BOUND/BEZOUT FAILED") << "\n";
  } else if (arch == "dialog") {
    CostLedger lg;
    Dialog d = dialog_build(F, A, B, -1, &lg);
    ok = d.size() == (std::size_t)(2 * d.n) && d.budget == 2 * (d.n + 1) &&
         poly_is_zero(d.final_b) && d.peak_live <= d.budget;
    rep["steps"] = d.size();
    rep["budget"] = d.budget;
    rep["peak_live"] = d.peak_live;
    rep["fit_ok"] = d.fit_ok;
    rep["unit_gcd"] = d.unit_gcd;
    rep["ledger"] = ledger_json(lg, &F);
    rep["ok"] = ok;
    text << "dialog eea n=" << d.n << ": steps=" << d.size() << " budget=" << d.budget
         << " peak_live=" << d.peak_live << " unit_gcd=" << (d.unit_gcd ? "yes" : "no")
         << (ok ? "" : "  CONSERVATION/FIT FAILED") << "\n";
  } else {
    throw std::invalid_argument("eea trace: arch must be sync or dialog");
  }
  emit(rep, as_json, out_path, text.str());
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// dicke

int cmd_dicke_unrank(int m, int k, const std::string &rank_str, const std::string &algo,
                     bool as_json, const std::string &out_path) {
  BigCount r;
  try {
    r = BigCount(rank_str);
  } catch (const std::exception &) {
    throw std::invalid_argument("dicke unrank: rank is not a number");
  }
  Combination c = algo == "dc" ? comb_unrank_dc(m, k, r) : comb_unrank_greedy(m, k, r);
  bool ok = comb_rank(c) == r;
  json rep;
  rep["m"] = m;
  rep["k"] = k;
  rep["rank"] = rank_str;
  rep["algo"] = algo;
  rep["combination"] = c;
  rep["rank_roundtrip"] = ok;
  std::ostringstream text;
  for (std::size_t i = 0; i < c.size(); ++i) text << (i ? " " : "") << c[i];
  text << "\n";
  emit(rep, as_json, out_path, text.str());
  return ok ? 0 : 1;
}

int cmd_dicke_selftest(long long max_binom, bool as_json, const std::string &out_path) {
  long long checked = 0, failures = 0;
  for (int m = 0; m <= 64; ++m) {
    for (int k = 0; k <= m; ++k) {
      if (binom(m, k) > max_binom) continue;
      BigCount total = binom(m, k);
      for (BigCount r = 0; r < total; ++r) {
        Combination g = comb_unrank_greedy(m, k, r);
        if (comb_rank(g) != r || comb_unrank_dc(m, k, r) != g) ++failures;
        ++checked;
      }
    }
  }
  std::mt19937_64 rng(7);
  long long ps_checked = 0;
  for (int it = 0; it < 200; ++it) {
    int m1 = 1 + (int)(rng() % 40), m2 = 1 + (int)(rng() % 40);
    int k = (int)(rng() % (m1 + m2 + 1));
    int k1 = (int)(rng() % (k + 2));
    BigCount fast = hypergeometric_prefix_sum(m1, m2, k, k1);
    BigCount slow = 0;  // the sum is exclusive of k1 itself
    for (int i = 0; i < k1; ++i) slow += binom(m1, i) * binom(m2, k - i);
    if (fast != slow) ++failures;
    ++ps_checked;
  }
  json rep;
  rep["roundtrips_checked"] = checked;
  rep["prefix_sums_checked"] = ps_checked;
  rep["failures"] = failures;
  std::ostringstream text;
  text << "dicke selftest: " << checked << " round-trips, " << ps_checked << " prefix sums, "
       << failures << " failures\n";
  emit(rep, as_json, out_path, text.str());
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bent

int cmd_bent_verify(int k, int max_dim, bool as_json, const std::string &out_path) {
  if (max_dim < 0 || max_dim > 2 * k) max_dim = 2 * k;
  json rows = json::array();
  std::ostringstream text;
  text << "d  achieved  bound\n";
  bool ok = true;
  for (int d = 0; d <= max_dim; ++d) {
    long long achieved = max_affine_intersection(k, d);
    long long bound = mm_intersection_bound(k, d);
    ok = ok && achieved <= bound;
    rows.push_back({{"d", d}, {"achieved", achieved}, {"bound", bound}});
    text << d << "  " << achieved << "  " << bound << (achieved > bound ? "  VIOLATION" : "")
         << "\n";
  }
  json rep;
  rep["k"] = k;
  rep["rows"] = rows;
  rep["ok"] = ok;
  emit(rep, as_json, out_path, text.str());
  return ok ? 0 : 1;
}

int cmd_bent_gen(int k, long long n, std::uint64_t seed, bool as_json,
                 const std::string &out_path) {
  if (k > 8) throw std::invalid_argument("bent gen: k > 8 would emit a multi-gigabyte instance");
  long long m = (1LL << (2 * k)) - 1;
  if (n < 0) n = m;
  OPIInstance inst = tbt_opi_generate(k, (int)m, (int)n, seed);
  json targets = json::array();
  for (const TargetSet &t : inst.targets)
    targets.push_back({{"transform", t.transform}, {"offset", t.offset}});
  json rep;
  rep["k"] = inst.k;
  rep["m"] = inst.m;
  rep["n"] = inst.n;
  rep["seed"] = inst.seed;
  rep["targets"] = targets;
  std::ostringstream text;
  text << "generated twisted-target instance k=" << k << " m=" << m << " n=" << n << " ("
       << inst.targets.size() << " transforms)\n";
  emit(rep, as_json, out_path, text.str());
  return 0;
}

// ---------------------------------------------------------------------------
// selftest: desk-scale invariant matrix, one row per module.

bool selftest_gf() {
  for (int b : {4, 8, 10}) {
    GF F(b);
    std::mt19937_64 rng(b);
    for (int it = 0; it < 2000; ++it) {
      felt_t a = (felt_t)(rng() % F.q()), x = (felt_t)(rng() % F.q()), y = (felt_t)(rng() % F.q());
      if (F.mul(a, F.add(x, y)) != F.add(F.mul(a, x), F.mul(a, y))) return false;
      if (F.mul(a, x) != F.mul(x, a)) return false;
      if (a && F.mul(a, F.inv(a)) != 1) return false;
    }
  }
  GfCosts c10 = default_costs(10), c12 = default_costs(12);
  return c10.qq_toffoli == 39 && c10.qq_cnot == 738 && c12.qq_toffoli == 51 &&
         itoh_tsujii_mults(10) == 4;
}

bool selftest_poly() {
  GF F(8);
  std::mt19937_64 rng(8);
  for (int it = 0; it < 200; ++it) {
    Poly a(1 + rng() % 12), b(1 + rng() % 8);
    for (auto &v : a) v = (felt_t)(rng() % F.q());
    for (auto &v : b) v = (felt_t)(rng() % F.q());
    poly_trim(a);
    poly_trim(b);
    if (poly_is_zero(b)) continue;
    auto [q, r] = poly_divmod(F, a, b);
    Poly back = poly_add(poly_mul(F, q, b), r);
    poly_trim(back);
    if (back != a) return false;
    if (poly_deg(r) >= poly_deg(b)) return false;
  }
  return true;
}

bool selftest_eea_sync() {
  GF F(8);
  std::mt19937_64 rng(17);
  for (int n : {4, 8, 16}) {
    for (int it = 0; it < 20; ++it) {
      Poly A(n + 1), B(n);
      for (auto &v : A) v = (felt_t)(rng() % F.q());
      for (auto &v : B) v = (felt_t)(rng() % F.q());
      A[n] = 1;
      poly_trim(B);
      if (poly_is_zero(B)) B = {1};
      auto [res, trace] = sync_eea_run(F, A, B, SyncMode::Full, 0, nullptr);
      if (trace.T > cycle_bound(n, SyncMode::Full)) return false;
      Poly lhs = poly_add(poly_mul(F, A, res.u), poly_mul(F, B, res.v));
      poly_trim(lhs);
      if (lhs != res.gcd) return false;
      auto [hres, htrace] = sync_eea_run(F, A, B, SyncMode::Half, n / 2, nullptr);
      (void)hres;
      if (htrace.T > cycle_bound(n, SyncMode::Half)) return false;
    }
  }
  return true;
}

bool selftest_eea_dialog() {
  GF F(8);
  std::mt19937_64 rng(23);
  for (int n : {4, 8, 16}) {
    for (int it = 0; it < 20; ++it) {
      Poly A(n + 1), B(n);
      for (auto &v : A) v = (felt_t)(rng() % F.q());
      for (auto &v : B) v = (felt_t)(rng() % F.q());
      A[n] = 1;
      if (A[0] == 0) A[0] = 1;
      poly_trim(B);
      if (poly_is_zero(B)) B = {1};
      Dialog d = dialog_build(F, A, B);
      if (d.size() != (std::size_t)(2 * d.n)) return false;
      if (d.budget != 2 * (d.n + 1)) return false;
      if (!poly_is_zero(d.final_b) || d.peak_live > d.budget) return false;
    }
  }
  return true;
}

bool selftest_rs_decode() {
  GF F(6);
  RSCode code = rs_code(F, 63, 8);
  std::mt19937_64 rng(31);
  for (int it = 0; it < 60; ++it) {
    ErrorPattern e;
    int w = (int)(rng() % (code.ell + 1));
    while ((int)e.size() < w) e[1 + (int)(rng() % 63)] = (felt_t)(1 + rng() % 63);
    Poly S = syndrome_compute(F, code, e);
    DecodeResult rx = rs_decode(F, code, S, RsMode::Explicit, nullptr);
    DecodeResult ri = rs_decode(F, code, S, RsMode::Implicit, nullptr);
    if (!rx.ok || !ri.ok || rx.pattern != e || ri.pattern != e) return false;
  }
  return true;
}

bool selftest_dicke() {
  for (int m = 0; m <= 16; ++m)
    for (int k = 0; k <= m; ++k)
      for (BigCount r = 0; r < binom(m, k); ++r) {
        Combination g = comb_unrank_greedy(m, k, r);
        if (comb_rank(g) != r || comb_unrank_dc(m, k, r) != g) return false;
      }
  return hypergeometric_prefix_sum(10, 10, 8, 4) ==
         binom(10, 0) * binom(10, 8) + binom(10, 1) * binom(10, 7) +
             binom(10, 2) * binom(10, 6) + binom(10, 3) * binom(10, 5);
}

bool selftest_bent() {
  for (int k : {1, 2}) {
    for (int d = 0; d <= 2 * k; ++d)
      if (max_affine_intersection(k, d) > mm_intersection_bound(k, d)) return false;
    F2Matrix id(2 * k);
    for (int i = 0; i < 2 * k; ++i) id[i] = 1u << i;
    if (overlap_table_bruteforce({k, id, 0}) != mm_overlap_table(k)) return false;
  }
  return true;
}

bool selftest_attacks() {
  AttackTarget tg = attack_target(1023, 60, 10, 496);
  if (tg.t != 669) return false;
  double pr = (double)prange_trials(1023, 60, 496, 1024, tg.t);
  if (std::abs(pr / 5.4935525387784946e19 - 1.0) > 0.01) return false;
  if (mm_overlap_table(2) != OverlapTable{0.375, 0.5, 0.75, 1.0, 1.0}) return false;
  if (std::abs(hoeffding_rate(0.10557) - 0.02786) > 1e-4) return false;
  OverlapTable P = mm_overlap_table(2);
  for (long long t : {4LL, 6LL}) {
    KnapsackResultExact slow = xp_knapsack_dp_exact(P, 8, 10, t, Comparator::Slow);
    KnapsackResultExact fast = xp_knapsack_dp_exact(P, 8, 10, t, Comparator::Fast);
    if (slow.gamma < fast.gamma) return false;
  }
  return true;
}

bool selftest_cli() {
  json j = big_json(Real256("5.4935525387784946e19"));
  if (j["exponent"].get<long>() != 19) return false;
  double mant = j["mantissa"].get<double>();
  if (mant < 5.49 || mant > 5.50) return false;
  json round = json::parse(j.dump());
  return round == j;
}

int cmd_selftest(bool as_json, const std::string &out_path) {
  struct Row {
    const char *module;
    bool (*fn)();
  };
  const Row rows[] = {
      {"gf", selftest_gf},           {"poly", selftest_poly},
      {"eea_sync", selftest_eea_sync}, {"eea_dialog", selftest_eea_dialog},
      {"rs_decode", selftest_rs_decode}, {"dicke", selftest_dicke},
      {"bent", selftest_bent},       {"attacks", selftest_attacks},
      {"cli", selftest_cli},
  };
  json rep;
  std::ostringstream text;
  bool all = true;
  for (const Row &row : rows) {
    bool pass = row.fn();
    all = all && pass;
    rep[row.module] = pass ? "pass" : "FAIL";
    text << row.module << ": " << (pass ? "pass" : "FAIL") << "\n";
  }
  text << (all ? "all modules pass\n" : "FAILURES PRESENT\n");
  emit(rep, as_json, out_path, text.str());
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"classical workbench: estimators, decoders, unranking, target sets"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  bool as_json = false;
  std::string out_path, config_path;
  app.add_flag("--json", as_json, "emit the JSON report on stdout");
  app.add_option("--out", out_path, "write the JSON report to a file");
  app.add_option("--config", config_path, "key = value file overriding field constants");

  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--seed", seed, "RNG seed (default: OPI_SEED or 12345)")
      ->each([&](const std::string &) { seed_set = true; });

  // estimate
  auto *est = app.add_subcommand("estimate", "attack-cost estimates for an instance");
  long long e_m = 0, e_n = 0, e_r = 0;
  int e_b = 0, e_jobs = 1;
  bool e_table = false, e_full = false;
  est->add_option("--m", e_m, "clause count, 2^b - 1");
  est->add_option("--n", e_n, "polynomial length");
  est->add_option("--b", e_b, "field bits");
  est->add_option("--r", e_r, "target-set size");
  est->add_flag("--table", e_table, "run the whole benchmark table (ignores --m/--b/--r)");
  est->add_option("--jobs", e_jobs, "parallel instances for --table");
  est->add_flag("--full-run", e_full, "decode once at the full instance size too");

  // rs decode
  auto *rs = app.add_subcommand("rs", "Reed-Solomon tools");
  auto *rsd = rs->add_subcommand("decode", "plant a random error and decode it back");
  int d_b = 8;
  long long d_n = 32, d_w = -1;
  std::string d_mode = "both";
  rsd->add_option("--b", d_b, "field bits (block length m = 2^b - 1)");
  rsd->add_option("--n", d_n, "syndrome length");
  rsd->add_option("--weight", d_w, "planted error weight (default: floor(n/2))");
  rsd->add_option("--mode", d_mode, "explicit | implicit | both")
      ->check(CLI::IsMember({"explicit", "implicit", "both"}));

  // eea trace
  auto *eea = app.add_subcommand("eea", "extended Euclidean machines");
  auto *eet = eea->add_subcommand("trace", "run one machine on random inputs");
  int t_b = 8, t_n = 16, t_ell = -1;
  std::string t_arch = "sync", t_mode = "full";
  eet->add_option("--b", t_b, "field bits");
  eet->add_option("--n", t_n, "input degree");
  eet->add_option("--arch", t_arch, "sync | dialog")->check(CLI::IsMember({"sync", "dialog"}));
  eet->add_option("--mode", t_mode, "full | half (sync only)")
      ->check(CLI::IsMember({"full", "half"}));
  eet->add_option("--ell", t_ell, "half-mode halt degree (default: floor(n/2))");

  // dicke
  auto *dicke = app.add_subcommand("dicke", "combination unranking");
  auto *dur = dicke->add_subcommand("unrank", "colex unranking of one rank");
  int u_m = 0, u_k = 0;
  std::string u_rank = "0", u_algo = "greedy";
  dur->add_option("--m", u_m, "universe size")->required();
  dur->add_option("--k", u_k, "combination size")->required();
  dur->add_option("--rank", u_rank, "rank, decimal, may exceed 64 bits")->required();
  dur->add_option("--algo", u_algo, "greedy | dc")->check(CLI::IsMember({"greedy", "dc"}));
  auto *dst = dicke->add_subcommand("selftest", "bijectivity sweep");
  long long u_maxb = 100000;
  dst->add_option("--max-binom", u_maxb, "sweep every (m, k) with C(m, k) at most this");

  // bent
  auto *bent = app.add_subcommand("bent", "quadric target sets");
  auto *bv = bent->add_subcommand("verify", "achieved-vs-bound intersection table");
  int v_k = 2, v_maxd = -1;
  bv->add_option("--k", v_k, "half-dimension (2k variables)");
  bv->add_option("--max-dim", v_maxd, "largest subspace dimension to enumerate");
  auto *bg = bent->add_subcommand("gen", "random twisted-target instance as JSON");
  int g_k = 2;
  long long g_n = -1;
  bg->add_option("--k", g_k, "half-dimension");
  bg->add_option("--n", g_n, "polynomial length (default: m)");

  // selftest
  auto *st = app.add_subcommand("selftest", "desk-scale invariant matrix for every module");

  // let --json / --out / --seed / --config appear after the subcommand name
  for (CLI::App *sub : {est, rs, rsd, eea, eet, dicke, dur, dst, bent, bv, bg, st})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    if (!seed_set) seed = default_seed();
    if (est->parsed()) {
      if (!e_table && (e_b <= 0 || e_m <= 0 || e_r <= 0 || e_n <= 0))
        throw std::invalid_argument("estimate: --m, --n, --b, --r are required without --table");
      return cmd_estimate({e_m, e_n, e_r, e_b, seed, e_full, &cfg}, e_table, e_jobs, as_json,
                          out_path);
    }
    if (rsd->parsed()) return cmd_rs_decode(cfg, d_b, d_n, d_w, seed, d_mode, as_json, out_path);
    if (eet->parsed())
      return cmd_eea_trace(cfg, t_b, t_n, t_arch, t_mode, t_ell, seed, as_json, out_path);
    if (dur->parsed()) return cmd_dicke_unrank(u_m, u_k, u_rank, u_algo, as_json, out_path);
    if (dst->parsed()) return cmd_dicke_selftest(u_maxb, as_json, out_path);
    if (bv->parsed()) return cmd_bent_verify(v_k, v_maxd, as_json, out_path);
    if (bg->parsed()) return cmd_bent_gen(g_k, g_n, seed, as_json, out_path);
    if (st->parsed()) return cmd_selftest(as_json, out_path);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
