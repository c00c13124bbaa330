#pragma once

// mmse-lab command line: argument handling, subcommand dispatch, and output
// formatting. Kept in a header so the tests can drive run() in-process.
//
// Exit codes: 0 success, 2 bad input or usage, 3 numerical or verification
// failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmse_lab/json_io.hpp"
#include "mmse_lab/mmse_lab.hpp"

namespace mmse_lab::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr double kMcZLimit = 4.0;

// Round-trip exact.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

// lin:lo:hi:n, log:lo:hi:n, or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return parse_list(text);
  const std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  for (char& c : rest)
    if (c == ':') c = ',';
  const auto v = parse_list(rest);
  if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) throw InputError("grid must be kind:lo:hi:n");
  const int n = static_cast<int>(v[2]);
  const double lo = v[0];
  const double hi = v[1];
  std::vector<double> g;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    if (kind == "lin")
      g.push_back(lo + (hi - lo) * t);
    else if (kind == "log") {
      if (!(lo > 0.0 && hi > 0.0)) throw InputError("log grid needs positive endpoints");
      g.push_back(lo * std::pow(hi / lo, t));
    } else
      throw InputError("unknown grid kind '" + kind + "'");
  }
  g.back() = hi;
  return g;
}

struct VerifySpec {
  bool fd = false;
  bool mc = false;
  std::uint64_t seed = 1;
  std::uint64_t n = 1'000'000;
};

// "fd", "mc", "mc:seed=S,n=N"; several joined by '+'.
inline VerifySpec parse_verify(const std::string& text, std::uint64_t default_seed) {
  VerifySpec v;
  v.seed = default_seed;
  if (text.empty()) return v;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, '+')) {
    if (part == "fd") {
      v.fd = true;
      continue;
    }
    if (part.rfind("mc", 0) != 0) throw InputError("--verify: expected fd or mc[:seed=S,n=N]");
    v.mc = true;
    if (part.size() == 2) continue;
    if (part[2] != ':') throw InputError("--verify: expected mc:seed=S,n=N");
    std::stringstream kv(part.substr(3));
    std::string item;
    while (std::getline(kv, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("--verify: expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      std::uint64_t val = 0;
      try {
        std::size_t used = 0;
        val = std::stoull(item.substr(eq + 1), &used);
        if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InputError("--verify: bad value in '" + item + "'");
      }
      if (key == "seed")
        v.seed = val;
      else if (key == "n")
        v.n = val;
      else
        throw InputError("--verify: unknown key '" + key + "'");
    }
  }
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& os, bool pretty) const {
    if (!pretty) {
      for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
      os << '\n';
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
        os << '\n';
      }
      return;
    }
    constexpr int w = 14;
    for (const auto& h : header) os << std::setw(w) << h;
    os << '\n';
    for (const auto& r : rows) {
      for (double v : r) os << std::setw(w) << std::setprecision(6) << v;
      os << '\n';
    }
  }
};

inline json mc_json(const McEstimate& e, double reference) {
  return {{"value", e.value},           {"stderr", e.standard_error()}, {"n_samples", e.n_samples},
          {"seed", e.seed},             {"reference", reference},       {"z", e.z_score(reference)},
          {"within_4_stderr", e.z_score(reference) <= kMcZLimit}};
}

// Shared option values; each subcommand reads what it needs.
struct Options {
  std::string dist;
  std::string verify;
  std::string out;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  bool pretty = false;

  std::string snr_grid = "log:1e-3:1e3:200";
  std::string y_grid = "lin:-4:4:17";
  std::string orders = "1,2,3";
  std::string alphas = "0,0.25,0.5,0.75,1";
  std::string family;
  std::string csv;
  std::string corpus = "default";
  std::string check_target = "all";
  double snr = 1.0;
  double snr1 = 0.0;
  double snr2 = 0.0;
  double sigma2 = 1.0;
  double varz = 1.0;
  int kmax = 4;
  int grid_points = 400;
  double gamma_min = 1e-4;
  double gamma_max = 1e4;
  bool entropy = false;
  bool diff_entropy = false;
  bool bits = false;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  // Each returns the exit code; the payload goes to --out or stdout.
  int curve() {
    const auto dist = load_distribution(o_.dist);
    const auto grid = parse_grid(o_.snr_grid);
    const auto v = verify();
    const auto c = mmse_curve(dist, grid);
    Table t{{"snr", "mmse", "quad_err", "upper_bound"}, {}};
    if (v.mc) t.header.insert(t.header.end(), {"mc_mmse", "mc_stderr"});
    bool ok = true;
    for (const auto& p : c.grid) {
      std::vector<double> row{p.snr, p.value, p.quad_err, p.upper_bound};
      if (v.mc) {
        const auto e = mc_mmse(dist, p.snr, v.n, v.seed);
        ok = ok && e.z_score(p.value) <= kMcZLimit;
        row.insert(row.end(), {e.value, e.standard_error()});
      }
      t.rows.push_back(std::move(row));
    }
    emit(t);
    return ok ? kExitOk : kExitNumerical;
  }

  int post() {
    const auto dist = load_distribution(o_.dist);
    const auto ys = parse_grid(o_.y_grid);
    const auto v = verify();
    Table t{{"y", "density", "mean"}, {}};
    for (int k = 2; k <= o_.kmax; ++k) t.header.push_back("M" + std::to_string(k));
    if (v.mc) t.header.insert(t.header.end(), {"mc_mean", "mc_mean_stderr", "mc_M2", "mc_M2_stderr"});
    bool ok = true;
    for (double y : ys) {
      const auto s = posterior_summary(dist, y, o_.snr, o_.kmax);
      std::vector<double> row{y, s.density, s.mean};
      for (int k = 2; k <= o_.kmax; ++k) row.push_back(s.central[k]);
      if (v.mc) {
        const auto e = mc_posterior_slice(dist, y, o_.snr, v.n, v.seed);
        ok = ok && e.mean.z_score(s.mean) <= kMcZLimit && e.m2.z_score(s.central[2]) <= kMcZLimit;
        row.insert(row.end(), {e.mean.value, e.mean.standard_error(), e.m2.value, e.m2.standard_error()});
      }
      t.rows.push_back(std::move(row));
    }
    emit(t);
    return ok ? kExitOk : kExitNumerical;
  }

  int deriv() {
    const auto dist = load_distribution(o_.dist);
    const auto v = verify();
    const double tol = o_.tol.value_or(1e-4);
    json rows = json::array();
    bool ok = true;
    for (double ord : parse_list(o_.orders)) {
      if (ord != std::floor(ord)) throw InputError("--orders: integers expected");
      const int order = static_cast<int>(ord);
      const auto a = mmse_derivative_with_error(dist, o_.snr, order);
      json row{{"order", order}, {"analytic", a.value}, {"quad_err", a.quad_err}};
      if (v.fd) {
        const auto fd = mmse_finite_difference(dist, o_.snr, order);
        const double gap = relative_gap(a.value, fd.value);
        row["finite_diff"] = fd.value;
        row["rel_gap"] = gap;
        ok = ok && gap <= tol;
      }
      rows.push_back(row);
    }
    emit({{"schema", "mmse-lab.deriv/1"}, {"snr", o_.snr}, {"tolerance", tol}, {"rows", rows}, {"passed", ok}});
    return ok ? kExitOk : kExitNumerical;
  }

  int info() {
    const auto dist = load_distribution(o_.dist);
    const auto v = verify();
    const double scale = o_.bits ? 1.0 / kLn2 : 1.0;
    const auto mi = mutual_information(dist, o_.snr);
    json j{{"schema", "mmse-lab.info/1"},
           {"unit", o_.bits ? "bits" : "nats"},
           {"snr", o_.snr},
           {"mutual_information", mi.value * scale},
           {"mutual_information_error", mi.error * scale}};
    if (o_.entropy) {
      const auto h = discrete_entropy(dist);
      j["entropy"] = h.value * scale;
      j["entropy_error"] = h.error * scale;
    }
    if (o_.diff_entropy) {
      const auto h = differential_entropy(dist);
      j["differential_entropy"] = h.value * scale;
      j["differential_entropy_error"] = h.error * scale;
    }
    bool ok = true;
    if (v.mc) {
      const auto e = mc_mutual_information(dist, o_.snr, v.n, v.seed);
      j["mc"] = mc_json(e, mi.value);
      ok = e.z_score(mi.value) <= kMcZLimit;
    }
    emit(j);
    return ok ? kExitOk : kExitNumerical;
  }

  int cross() {
    const auto dist = load_distribution(o_.dist);
    CrossingGrid grid;
    grid.gamma_min = o_.gamma_min;
    grid.gamma_max = o_.gamma_max;
    grid.points = o_.grid_points;
    if (o_.tol) grid.zero_band = *o_.tol;
    const auto r = single_crossing(dist, o_.sigma2, grid);
    json brackets = json::array();
    for (const auto& b : r.crossings) brackets.push_back({{"lo", b.lo}, {"hi", b.hi}});
    json j{{"schema", "mmse-lab.cross/1"},
           {"sigma2", r.sigma2},
           {"f_at_zero", r.f_at_zero},
           {"classification", to_string(r.classification)},
           {"crossings", brackets},
           {"snr0", r.snr0() ? json(*r.snr0()) : json(nullptr)},
           {"statements",
            {{"increasing_where_negative", r.increasing_where_negative},
             {"nonneg_after_crossing", r.nonneg_after_crossing},
             {"tail_vanishes", r.tail_vanishes}}},
           {"gamma", r.gamma},
           {"f", r.f_grid}};
    if (!o_.csv.empty()) {
      std::ofstream f(o_.csv);
      if (!f) throw InputError("cannot write " + o_.csv);
      Table t{{"gamma", "f"}, {}};
      for (std::size_t i = 0; i < r.gamma.size(); ++i) t.rows.push_back({r.gamma[i], r.f_grid[i]});
      t.write(f, false);
    }
    emit(j);
    return kExitOk;
  }

  int wiretap() {
    json j{{"schema", "mmse-lab.capacity.wiretap/1"},
           {"snr1", o_.snr1},
           {"snr2", o_.snr2},
           {"secrecy_capacity", secrecy_capacity(o_.snr1, o_.snr2)}};
    if (!o_.dist.empty()) {
      const double gap = secrecy_gap(load_distribution(o_.dist), o_.snr1, o_.snr2);
      j["secrecy_gap"] = gap;
      j["slack"] = secrecy_capacity(o_.snr1, o_.snr2) - gap;
    }
    emit(j);
    return kExitOk;
  }

  int broadcast() {
    const auto alphas = parse_list(o_.alphas);
    json region = json::array();
    for (const auto& s : broadcast_region(o_.snr1, o_.snr2, alphas))
      region.push_back({{"alpha", s.alpha}, {"r1", s.r1}, {"r2", s.r2}});
    json j{{"schema", "mmse-lab.capacity.broadcast/1"}, {"snr1", o_.snr1}, {"snr2", o_.snr2}, {"region", region}};
    if (!o_.family.empty()) {
      const auto r = broadcast_converse_check(load_family(o_.family), o_.snr1, o_.snr2);
      j["converse"] = {{"alpha", r.alpha},
                       {"snr0", r.snr0},
                       {"i_xz_given_u", r.i_xz_given_u},
                       {"i_xy_given_u", r.i_xy_given_u},
                       {"i_xz", r.i_xz},
                       {"r1", r.r1},
                       {"r2", r.r2},
                       {"bound_r1", r.bound.r1},
                       {"bound_r2", r.bound.r2},
                       {"exug_max_violation", r.exug_max_violation},
                       {"inside_region", r.inside_region}};
    }
    emit(j);
    return kExitOk;
  }

  int epi() {
    const auto r = epi_gaussian_check(load_distribution(o_.dist), o_.varz);
    const double tol = o_.tol.value_or(1e-3);
    const bool ok = r.margin >= -tol;
    emit({{"schema", "mmse-lab.capacity.epi/1"},
          {"var_z", o_.varz},
          {"h_x", r.h_x},
          {"h_xz", r.h_xz},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"margin", r.margin},
          {"relative_margin", r.relative_margin},
          {"a2", r.a2},
          {"ha_snr", r.ha_snr},
          {"ha_values", r.ha_values},
          {"ha_min", r.ha_min},
          {"passed", ok}});
    return ok ? kExitOk : kExitNumerical;
  }

  int check() {
    if (o_.check_target != "all") throw InputError("check: only 'all' is supported");
    const auto corpus = o_.corpus == "default" ? inputs::corpus() : load_corpus(o_.corpus);
    const auto v = verify();
    const std::uint64_t mc_n = v.mc ? v.n : 200'000;
    json checks = json::array();
    int failed = 0;
    auto record = [&](const std::string& name, const std::string& subject, double value, double tol, bool passed) {
      checks.push_back({{"name", name}, {"subject", subject}, {"value", value}, {"tolerance", tol}, {"passed", passed}});
      if (!passed) ++failed;
    };
    // A check that throws counts as failed rather than aborting the suite.
    auto guarded = [&](const std::string& name, const std::string& subject, const std::function<void()>& body) {
      try {
        body();
      } catch (const std::exception& e) {
        checks.push_back({{"name", name}, {"subject", subject}, {"passed", false}, {"error", e.what()}});
        ++failed;
      }
    };
    const std::vector<double> grid{0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
    for (const auto& [name, d] : corpus) {
      guarded("upper_bound", name, [&] {
        const auto c = mmse_curve(d, grid);
        double worst = 0.0;
        double rise = 0.0;
        for (std::size_t i = 0; i < c.grid.size(); ++i) {
          worst = std::max(worst, c.grid[i].value - c.grid[i].upper_bound);
          if (i) rise = std::max(rise, c.grid[i].value - c.grid[i - 1].value);
        }
        record("upper_bound", name, worst, 1e-12, worst <= 1e-12);
        record("monotone", name, rise, 1e-12, rise <= 1e-12);
      });
      guarded("incremental", name, [&] {
        const double gap = std::abs(incremental_mmse(d, 0.5, 0.7).value - mmse_at(d, 1.2).value);
        record("incremental", name, gap, 1e-6, gap <= 1e-6);
      });
      guarded("derivative_fd", name, [&] {
        for (int order = 1; order <= 3; ++order) {
          const auto r = derivative_report(d, 1.0, order);
          record("derivative_fd_" + std::to_string(order), name, r.rel_gap, 1e-4, r.rel_gap <= 1e-4);
        }
      });
      guarded("i_mmse", name, [&] {
        const auto fd = finite_difference([&](double s) { return mutual_information(d, s).value; }, 1.0, 1);
        const double gap = relative_gap(0.5 * mmse_at(d, 1.0).value, fd.value);
        record("i_mmse", name, gap, 1e-5, gap <= 1e-5);
      });
      guarded("gaussian_dominance", name, [&] {
        const auto r = check_gaussian_dominance(d, grid);
        record("gaussian_dominance", name, r.max_violation, 1e-9, r.max_violation <= 1e-9);
      });
      guarded("single_crossing", name, [&] {
        const auto r = single_crossing(d, 1.0);
        record("single_crossing", name, static_cast<double>(r.crossings.size()), 1.0, r.crossings.size() <= 1);
      });
      guarded("mc_mmse", name, [&] {
        const double ref = mmse_at(d, 1.0).value;
        const auto e = mc_mmse(d, 1.0, mc_n, v.seed);
        record("mc_mmse", name, e.z_score(ref), kMcZLimit, e.z_score(ref) <= kMcZLimit);
      });
    }
    const auto g = inputs::standard_gaussian();
    const auto b = inputs::binary();
    guarded("structure", "binary/gaussian", [&] {
      const double conc = check_concavity(g, b, 0.5, 1.0);
      record("concavity", "gaussian+binary", conc, 1e-7, conc >= -1e-7);
      const double cosr = check_cosine_mix(b, b, std::numbers::pi / 4, 1.0);
      record("cosine_mix", "binary", cosr, 1e-7, cosr >= -1e-7);
      const double tv = check_tv_inequality({b, b, b}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0);
      record("tv_inequality", "binary", tv, 1e-7, tv >= -1e-7);
      const auto sm = check_sum_monotonicity(b, 4, 1.0);
      const double worst = *std::min_element(sm.gaps.begin(), sm.gaps.end());
      record("sum_monotonicity", "binary", worst, 1e-7, worst >= -1e-7);
      const Family fam{{g, 0.5}, {b, 0.5}};
      const double cond = check_conditioning(fam, 1.0);
      record("conditioning", "gaussian|binary", cond, 1e-7, cond >= -1e-7);
    });
    guarded("capacity", "wiretap/broadcast/epi", [&] {
      const double gap = std::abs(secrecy_gap(g, 3.0, 1.0) - secrecy_capacity(3.0, 1.0));
      record("secrecy_gaussian", "gaussian", gap, 1e-8, gap <= 1e-8);
      const double alpha = 0.3;
      const Family fam{{make_gaussian(-std::sqrt(1 - alpha), alpha), 0.5}, {make_gaussian(std::sqrt(1 - alpha), alpha), 0.5}};
      const auto bc = broadcast_converse_check(fam, 4.0, 1.0);
      record("broadcast_converse", "gaussian_family", std::abs(bc.alpha - alpha), 1e-6, bc.inside_region);
      const auto ep = epi_gaussian_check(mix({{make_gaussian(-1, 0.25), 0.5}, {make_gaussian(1, 0.25), 0.5}}), 1.0);
      record("epi", "gaussian_mixture", ep.margin, 1e-3, ep.margin >= -1e-3);
    });
    emit({{"schema", "mmse-lab.check/1"},
          {"corpus", o_.corpus},
          {"checks", checks},
          {"passed", static_cast<int>(checks.size()) - failed},
          {"failed", failed}});
    return failed == 0 ? kExitOk : kExitNumerical;
  }

 private:
  VerifySpec verify() const { return parse_verify(o_.verify, o_.seed); }

  template <class F>
  void with_output(F&& write) {
    if (o_.out.empty()) {
      write(out_);
      return;
    }
    std::ofstream f(o_.out);
    if (!f) throw InputError("cannot write " + o_.out);
    write(f);
  }

  void emit(const Table& t) {
    with_output([&](std::ostream& os) { t.write(os, o_.pretty); });
  }
  void emit(const json& j) {
    with_output([&](std::ostream& os) { os << (o_.pretty ? j.dump(2) : j.dump()) << '\n'; });
  }

  const Options& o_;
  std::ostream& out_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"MMSE of inputs in Gaussian noise: curves, derivatives, information measures, structure checks"};
  app.name("mmse-lab");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--verify", o.verify, "fd, mc or mc:seed=S,n=N (join with '+')");
  app.add_option("--out", o.out, "write results here instead of stdout");
  app.add_option("--tol", o.tol, "tolerance override");
  app.add_option("--seed", o.seed, "default Monte Carlo seed");
  app.add_flag("--pretty", o.pretty, "human-readable output");

  auto add_dist = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--dist", o.dist, "distribution JSON file or inline JSON");
    if (required) opt->required();
  };

  auto* curve = app.add_subcommand("curve", "mmse over an SNR grid (CSV)");
  add_dist(curve, true);
  curve->add_option("--snr-grid", o.snr_grid, "lin:lo:hi:n, log:lo:hi:n or a list");

  auto* post = app.add_subcommand("post", "posterior mean and central moments over a y grid (CSV)");
  add_dist(post, true);
  post->add_option("--snr", o.snr)->required();
  post->add_option("--y-grid", o.y_grid);
  post->add_option("--kmax", o.kmax)->check(CLI::Range(2, 8));

  auto* deriv = app.add_subcommand("deriv", "derivatives of mmse in snr (JSON)");
  add_dist(deriv, true);
  deriv->add_option("--snr", o.snr)->required();
  deriv->add_option("--orders", o.orders);

  auto* info = app.add_subcommand("info", "mutual information and entropies (JSON)");
  add_dist(info, true);
  info->add_option("--snr", o.snr);
  info->add_flag("--entropy", o.entropy, "entropy of a discrete input");
  info->add_flag("--diff-entropy", o.diff_entropy, "differential entropy of a continuous input");
  info->add_flag("--bits", o.bits, "report in bits");

  auto* cross = app.add_subcommand("cross", "single-crossing analysis against N(0, sigma2) (JSON)");
  add_dist(cross, true);
  cross->add_option("--sigma2", o.sigma2);
  cross->add_option("--grid-points", o.grid_points);
  cross->add_option("--gamma-min", o.gamma_min);
  cross->add_option("--gamma-max", o.gamma_max);
  cross->add_option("--csv", o.csv, "also write gamma,f to this file");

  auto* cap = app.add_subcommand("capacity", "wiretap, broadcast and EPI applications (JSON)");
  cap->require_subcommand(1);
  auto* wiretap = cap->add_subcommand("wiretap", "secrecy capacity and gap");
  wiretap->add_option("--snr1", o.snr1)->required();
  wiretap->add_option("--snr2", o.snr2)->required();
  add_dist(wiretap, false);
  auto* broadcast = cap->add_subcommand("broadcast", "Gaussian broadcast region and converse check");
  broadcast->add_option("--snr1", o.snr1)->required();
  broadcast->add_option("--snr2", o.snr2)->required();
  broadcast->add_option("--alphas", o.alphas);
  broadcast->add_option("--family", o.family, "X|U family JSON: [{dist, weight}, ...]");
  auto* epi = cap->add_subcommand("epi", "entropy power inequality, Gaussian perturbation");
  add_dist(epi, true);
  epi->add_option("--varz", o.varz)->required();

  auto* check = app.add_subcommand("check", "invariant suite over a corpus (JSON)");
  check->add_option("target", o.check_target, "all");
  check->add_option("--corpus", o.corpus, "default or a corpus JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  Runner r(o, out);
  try {
    if (curve->parsed()) return r.curve();
    if (post->parsed()) return r.post();
    if (deriv->parsed()) return r.deriv();
    if (info->parsed()) return r.info();
    if (cross->parsed()) return r.cross();
    if (wiretap->parsed()) return r.wiretap();
    if (broadcast->parsed()) return r.broadcast();
    if (epi->parsed()) return r.epi();
    if (check->parsed()) return r.check();
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << " (best estimate " << fmt(e.best_estimate()) << ", error "
        << fmt(e.error_estimate()) << ")\n";
    return kExitNumerical;
  }
  err << app.help();
  return kExitInput;
}

}  // namespace mmse_lab::cli
