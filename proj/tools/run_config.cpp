#include "run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "rvs/constsym.hpp"
#include "rvs/frozen.hpp"
#include "rvs/lopatinskii.hpp"
#include "rvs/parallel.hpp"
#include "rvs/suite.hpp"

namespace rvs::cli {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_value(std::ostream& os, const ojson& j, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ojson(it.key()).dump() << ": ";
        write_value(os, it.value(), depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ", ";
        first = false;
        write_value(os, v, depth + 1);
      }
      os << "]";
      return;
    }
    case ojson::value_t::number_float: {
      double x = j.get<double>();
      os << (std::isfinite(x) ? fmt17(x) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

template <class T>
T get_or(const ojson& j, const char* key, T dflt) {
  if (!j.contains(key) || j.at(key).is_null()) return dflt;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw CliError(kInvalid, std::string("config: bad value for '") + key + "'");
  }
}

std::optional<double> get_opt(const ojson& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw CliError(kInvalid, std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

ojson read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kIo, "cannot read " + path.string());
  try {
    return ojson::parse(in);
  } catch (const ojson::parse_error& e) {
    throw CliError(kInvalid, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

bool is_linear(const SheetParams& p) { return get_or<std::string>(p.eos, "kind", "linear") == "linear"; }

std::optional<double> node_c_bar(const SheetParams& p) {
  if (p.c_bar) return p.c_bar;
  if (is_linear(p) && p.eos.contains("sigma")) {
    double s = p.eos.at("sigma").get<double>();
    if (s > 0.0) return std::sqrt(s);
  }
  return std::nullopt;
}

void apply_param(SheetParams& p, const std::string& name, double x) {
  if (name == "v_bar") {
    p.v_bar = x;
    p.M.reset();
  } else if (name == "M") {
    p.M = x;
    p.v_bar.reset();
  } else if (name == "c_bar") {
    p.c_bar = x;
  } else if (name == "epsilon") {
    p.epsilon = x;
  } else if (name == "eps_c") {
    p.c_bar = x / p.epsilon;
  }
}

ojson cd_json(cd z) { return ojson::array({z.real(), z.imag()}); }

ojson nullable(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

FrozenPoint read_frozen_point(const SheetConfig& cfg, const ojson& j) {
  for (const char* k : {"side", "p", "hw1", "hw2", "phi_t", "phi_1", "phi_2"})
    if (!j.contains(k)) throw CliError(kInvalid, std::string("frozen point: missing '") + k + "'");
  const int side = j.at("side").get<int>();
  UState u{j.at("p").get<double>(), j.at("hw1").get<double>(), j.at("hw2").get<double>()};
  const double pt = j.at("phi_t").get<double>(), p1 = j.at("phi_1").get<double>(), p2 = j.at("phi_2").get<double>();
  PrimState s = u_to_prim(cfg.eos(), cfg.params(), u);
  const double res = std::abs(pt + s.v1 * p1 - s.v2);
  if (!(res <= kEikonalInputTol))
    throw CliError(kInvalid, "frozen point: eikonal constraint violated (residual " + fmt17(res) + ")");
  return make_frozen_point(cfg, side, s.rho, s.v1, pt, p1, p2);
}

ojson side_json(const SheetConfig& cfg, const FrozenPoint& fp, const Frequency& f) {
  FrozenLocal L = frozen_local(cfg, fp);
  FrozenInterior S = frozen_interior_symbol(cfg, fp, f);
  CFit c = frozen_cfit(cfg, fp);
  ojson o;
  o["rho"] = L.s.rho;
  o["v1"] = L.s.v1;
  o["v2"] = L.s.v2;
  o["varrho"] = L.varrho;
  o["varsigma"] = L.varsigma;
  o["m1"] = m1_coef(L, cfg.eps());
  o["m2"] = m2_coef(L);
  o["F1"] = S.F1;
  o["F2"] = S.F2;
  o["F3"] = S.F3;
  o["C0"] = c.C0;
  o["C1"] = c.C1;
  o["C2_plus"] = c.C2_plus;
  o["C2_minus"] = c.C2_minus;
  o["C_fit_residual"] = c.residual;
  return o;
}

void emit(const RunConfig& rc, std::ostream& out, const std::string& text) {
  if (rc.out) {
    std::ofstream f(*rc.out, std::ios::binary);
    if (!f) throw CliError(kIo, "cannot write " + *rc.out);
    f << text;
    if (!f) throw CliError(kIo, "write failed for " + *rc.out);
  } else {
    out << text;
  }
}

}  // namespace

std::vector<double> Grid::nodes() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v[i] = log ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  if (count > 1) v.back() = max;
  return v;
}

void write_json(std::ostream& os, const ojson& j) {
  write_value(os, j, 0);
  os << "\n";
}

RunConfig parse_run_config(const ojson& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw CliError(kInvalid, "config: top level must be an object");
  RunConfig rc;
  SheetParams& p = rc.sheet;
  p.epsilon = get_or(j, "epsilon", 0.0);
  p.rho_bar = get_or(j, "rho_bar", 1.0);
  p.c_bar = get_opt(j, "c_bar");
  p.v_bar = get_opt(j, "v_bar");
  p.M = get_opt(j, "M");
  p.eos = j.contains("eos") ? j.at("eos") : ojson{{"kind", "linear"}};
  const std::string kind = get_or<std::string>(p.eos, "kind", "linear");
  if (kind != "linear" && kind != "gamma_law") throw CliError(kInvalid, "config: unknown eos kind '" + kind + "'");
  if (kind == "linear" && !p.c_bar && !p.eos.contains("sigma"))
    throw CliError(kInvalid, "config: linear eos needs c_bar or eos.sigma");
  if (kind == "gamma_law" && p.c_bar) throw CliError(kInvalid, "config: c_bar is fixed by a gamma_law eos");
  if (p.v_bar && p.M) throw CliError(kInvalid, "config: give v_bar or M, not both");

  if (j.contains("sweep")) {
    const ojson& s = j.at("sweep");
    const ojson& grids = s.contains("grids") ? s.at("grids") : s;
    if (!grids.is_array() || grids.empty() || grids.size() > 2)
      throw CliError(kInvalid, "config: sweep needs one or two grids");
    for (const auto& g : grids) {
      Grid G;
      G.param = get_or<std::string>(g, "param", "");
      if (G.param != "v_bar" && G.param != "c_bar" && G.param != "epsilon" && G.param != "M" && G.param != "eps_c")
        throw CliError(kInvalid, "config: unknown sweep parameter '" + G.param + "'");
      if ((G.param == "c_bar" || G.param == "eps_c") && kind != "linear")
        throw CliError(kInvalid, "config: " + G.param + " sweeps need the linear eos");
      if (G.param == "eps_c" && !(p.epsilon > 0.0))
        throw CliError(kInvalid, "config: eps_c sweeps need epsilon > 0");
      G.min = get_or(g, "min", 0.0);
      G.max = get_or(g, "max", 0.0);
      G.count = get_or(g, "count", 2);
      G.log = get_or<std::string>(g, "scale", "linear") == "log";
      if (G.count < 1) throw CliError(kInvalid, "config: grid count must be >= 1");
      if (G.count == 1 && G.min != G.max) throw CliError(kInvalid, "config: a 1-point grid needs min == max");
      if (G.log && !(G.min > 0.0 && G.max > 0.0)) throw CliError(kInvalid, "config: log grid needs positive bounds");
      rc.grids.push_back(G);
    }
  }
  if (j.contains("scan")) {
    const ojson& s = j.at("scan");
    rc.scan_res = get_or(s, "resolution", rc.scan_res);
    rc.scan_gamma = get_or(s, "gamma", rc.scan_gamma);
    if (rc.scan_res < 2) throw CliError(kInvalid, "config: scan resolution must be >= 2");
  }
  if (j.contains("tolerances")) {
    const ojson& t = j.at("tolerances");
    rc.scan_tol_factor = get_or(t, "scan_tol_factor", rc.scan_tol_factor);
    rc.scan_max_cells = get_or(t, "scan_max_cells", rc.scan_max_cells);
  }
  if (j.contains("suite")) rc.suite_samples = get_or(j.at("suite"), "samples", rc.suite_samples);
  if (j.contains("frozen")) {
    const ojson& f = j.at("frozen");
    rc.frozen = f.is_string() ? read_json_file(base_dir / f.get<std::string>()) : f;
  }
  if (j.contains("out")) {
    std::filesystem::path o = j.at("out").get<std::string>();
    rc.out = (o.is_relative() ? base_dir / o : o).string();
  }
  rc.seed = get_or<std::uint64_t>(j, "seed", 1);
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_json_file(path), path.parent_path());
}

SheetConfig build_sheet(const SheetParams& p) {
  try {
    const std::string kind = get_or<std::string>(p.eos, "kind", "linear");
    double c_bar;
    std::optional<Eos> eos;
    if (kind == "linear") {
      auto c = node_c_bar(p);
      if (!c || !(*c > 0.0)) throw DomainError("c_bar must be > 0");
      c_bar = *c;
      if (!(p.epsilon * c_bar < 1.0)) throw DomainError("sound speed exceeds light speed");
      double lo = get_or(p.eos, "rho_min", 1e-3 * p.rho_bar), hi = get_or(p.eos, "rho_max", 1e3 * p.rho_bar);
      eos = Eos::linear(c_bar * c_bar, lo, hi, p.rho_bar);
    } else {
      double lo = get_or(p.eos, "rho_min", 0.1 * p.rho_bar), hi = get_or(p.eos, "rho_max", 10.0 * p.rho_bar);
      eos = Eos::gamma_law(get_or(p.eos, "K", 1.0), get_or(p.eos, "gamma", 2.0), lo, hi, p.rho_bar);
      c_bar = std::sqrt(eos->dp(p.rho_bar));
    }
    double v = p.v_bar ? *p.v_bar : (p.M ? *p.M * c_bar : std::numeric_limits<double>::quiet_NaN());
    if (std::isnan(v)) throw DomainError("v_bar or M is required");
    return SheetConfig(*eos, FluidParams{p.epsilon}, p.rho_bar, v);
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kInvalid, e.what());
  }
}

ojson classify_json(const SheetConfig& cfg) {
  ThresholdReport t = classify_threshold(cfg);
  RootPoly rp = root_polynomial(cfg);
  ojson o;
  o["M"] = t.M;
  o["M_c"] = t.Mc;
  o["regime"] = regime_name(t.regime);
  const bool stable = t.regime == Regime::WeaklyStable;
  o["z1"] = stable && rp.z1 ? ojson(*rp.z1) : ojson(nullptr);
  o["z2"] = rp.z2 ? ojson(*rp.z2) : ojson(nullptr);
  o["Cbar"] = ojson::array({cfg.C0(), cfg.C1(), cfg.C2()});
  if (stable) {
    OrderingReport r = verify_orderings(cfg);
    ojson chain;
    chain["ok"] = r.ok;
    chain["slack_min"] = r.slack_min;
    ojson links;
    for (const auto& l : r.links) links[l.name] = l.slack;
    chain["links"] = links;
    o["ordering_chain"] = chain;
  } else {
    o["ordering_chain"] = nullptr;
  }
  return o;
}

int cmd_classify(const RunConfig& rc, std::ostream& out) {
  SheetConfig cfg = build_sheet(rc.sheet);
  std::ostringstream os;
  write_json(os, classify_json(cfg));
  emit(rc, out, os.str());
  return kOk;
}

int cmd_sweep(const RunConfig& rc, std::ostream& out) {
  if (rc.grids.empty()) throw CliError(kInvalid, "sweep: config has no grids");
  const std::vector<double> g1 = rc.grids[0].nodes();
  const std::vector<double> g2 = rc.grids.size() > 1 ? rc.grids[1].nodes() : std::vector<double>{0.0};
  const std::size_t n = g1.size() * g2.size();
  std::vector<std::string> rows(n);
  parallel_for(n, [&](std::size_t idx) {
    const double x1 = g1[idx / g2.size()], x2 = g2[idx % g2.size()];
    SheetParams p = rc.sheet;
    apply_param(p, rc.grids[0].param, x1);
    if (rc.grids.size() > 1) apply_param(p, rc.grids[1].param, x2);
    std::string row = fmt17(x1) + "," + (rc.grids.size() > 1 ? fmt17(x2) : std::string()) + ",";
    try {
      SheetConfig cfg = build_sheet(p);
      ThresholdReport t = classify_threshold(cfg);
      RootPoly rp = root_polynomial(cfg);
      const bool stable = t.regime == Regime::WeaklyStable;
      row += fmt17(t.M) + "," + fmt17(t.Mc) + "," + regime_name(t.regime) + ",";
      row += (stable && rp.z1 ? fmt17(*rp.z1) : "") + ",";
      row += (rp.z2 ? fmt17(*rp.z2) : "") + ",";
      row += (stable ? fmt17(verify_orderings(cfg).slack_min) : "") + ",ok";
    } catch (const CliError&) {
      // M and Mc stay recoverable whenever epsilon and c_bar are meaningful
      auto c = node_c_bar(p);
      std::string M, Mc;
      if (c && *c > 0.0) {
        double v = p.v_bar ? *p.v_bar : (p.M ? *p.M * *c : std::numeric_limits<double>::quiet_NaN());
        if (std::isfinite(v)) M = fmt17(v / *c);
      }
      if (c && p.epsilon >= 0.0) Mc = fmt17(critical_mach(p.epsilon, *c));
      row += M + "," + Mc + ",,,,,invalid";
    }
    rows[idx] = row + "\n";
  });
  std::string text = "param1,param2,M,Mc,regime,z1,z2,slack_min,status\n";
  for (const auto& r : rows) text += r;
  emit(rc, out, text);
  return kOk;
}

int cmd_scan_delta(const RunConfig& rc, std::ostream& out) {
  SheetConfig cfg = build_sheet(rc.sheet);
  auto rows = hemisphere_scan(cfg, rc.scan_gamma, rc.scan_res);
  std::string text = "gamma,delta,eta,re_delta,im_delta,abs_delta\n";
  text.reserve(rows.size() * 120);
  for (const auto& r : rows) {
    text += fmt17(r.gamma) + "," + fmt17(r.delta) + "," + fmt17(r.eta) + "," + fmt17(r.value.real()) + "," +
            fmt17(r.value.imag()) + "," + fmt17(std::abs(r.value)) + "\n";
  }
  emit(rc, out, text);
  return kOk;
}

int cmd_frozen(const RunConfig& rc, std::ostream& out) {
  if (!rc.frozen) throw CliError(kInvalid, "frozen: config has no 'frozen' entry");
  SheetConfig cfg = build_sheet(rc.sheet);
  const ojson& fj = *rc.frozen;
  const ojson& pts = fj.is_array() ? fj : fj.value("points", ojson::array());
  if (!pts.is_array() || pts.size() != 2) throw CliError(kInvalid, "frozen: need exactly two points");
  ojson o;
  try {
    FrozenPoint a = read_frozen_point(cfg, pts[0]), b = read_frozen_point(cfg, pts[1]);
    FrozenPair pair = a.side > 0 ? FrozenPair{a, b} : FrozenPair{b, a};
    check_boundary_pair(cfg, pair);
    Frequency f{0.3, 0.2, 0.9};
    if (fj.is_object() && fj.contains("frequency")) {
      const ojson& q = fj.at("frequency");
      f = Frequency{get_or(q, "gamma", 0.0), get_or(q, "delta", 0.0), get_or(q, "eta", 0.0)};
    }
    if (!(f.k() > 0.0) || f.gamma < 0.0) throw CliError(kInvalid, "frozen: invalid frequency");
    f = f.normalized();
    o["frequency"] = ojson{{"gamma", f.gamma}, {"delta", f.delta}, {"eta", f.eta}};
    o["plus"] = side_json(cfg, pair.plus, f);
    o["minus"] = side_json(cfg, pair.minus, f);
    FrozenDelta d = frozen_delta(cfg, pair, f);
    o["Delta"] = cd_json(d.Delta);
    o["Delta1"] = cd_json(d.D1);
    o["Delta2"] = cd_json(d.D2);
    o["Delta3"] = cd_json(d.D3);
    o["det_form"] = cd_json(d.det_form);
    if (classify_threshold(cfg).regime == Regime::WeaklyStable) {
      FrozenPoly p = frozen_root_polynomial(cfg, pair);
      o["Pring_coefficients"] = p.coeffs;
      o["fit_residual"] = p.fit_residual;
      ojson roots = ojson::array();
      for (const cd& r : p.roots) roots.push_back(cd_json(r));
      o["roots"] = roots;
      o["zq"] = ojson::array({nullable(p.zq[0]), nullable(p.zq[1]), nullable(p.zq[2])});
    } else {
      o["Pring_coefficients"] = nullptr;
      o["fit_residual"] = nullptr;
      o["roots"] = nullptr;
      o["zq"] = nullptr;
    }
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kInvalid, e.what());
  }
  std::ostringstream os;
  write_json(os, o);
  emit(rc, out, os.str());
  return kOk;
}

int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  SheetConfig cfg = build_sheet(rc.sheet);
  SuiteOptions opt;
  opt.seed = rc.seed;
  opt.scan_res = rc.scan_res;
  opt.scan_tol_factor = rc.scan_tol_factor;
  opt.scan_max_cells = rc.scan_max_cells;
  opt.samples = rc.suite_samples;
  auto results = run_property_suite(cfg, opt);
  std::ostringstream os;
  const PropertyResult* first_fail = nullptr;
  for (const auto& r : results) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-28s %-4s ", r.name.c_str(), r.passed ? "PASS" : "FAIL");
    os << buf << r.detail << "\n";
    if (!r.passed && !first_fail) first_fail = &r;
  }
  emit(rc, out, os.str());
  if (first_fail) {
    err << "first failing property: " << first_fail->name << "\n";
    return kVerifyFailed;
  }
  return kOk;
}

int run_command(const std::string& command, const std::filesystem::path& config,
                const std::optional<std::string>& out_path, const std::optional<std::uint64_t>& seed,
                std::ostream& out, std::ostream& err) {
  try {
    RunConfig rc = load_run_config(config);
    if (out_path) rc.out = *out_path;
    if (seed) rc.seed = *seed;
    if (command == "classify") return cmd_classify(rc, out);
    if (command == "sweep") return cmd_sweep(rc, out);
    if (command == "scan-delta") return cmd_scan_delta(rc, out);
    if (command == "frozen") return cmd_frozen(rc, out);
    if (command == "verify") return cmd_verify(rc, out, err);
    throw CliError(kInvalid, "unknown command '" + command + "'");
  } catch (const CliError& e) {
    ojson msg;
    msg["error"] = e.what();
    msg["exit_code"] = e.code;
    err << msg.dump() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    ojson msg;
    msg["error"] = e.what();
    msg["exit_code"] = static_cast<int>(kInvalid);
    err << msg.dump() << "\n";
    return kInvalid;
  }
}

}  // namespace rvs::cli
