#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rothaff/approx.hpp"
#include "rothaff/auxpoly.hpp"
#include "rothaff/errors.hpp"
#include "rothaff/disc_example.hpp"
#include "rothaff/heights.hpp"
#include "rothaff/simred.hpp"
#include "rothaff/text.hpp"
#include "rothaff/volume.hpp"

namespace rothaff::cli {

namespace {

using nlohmann::json;

struct Common {
  std::string pol = "qt";
  double tol = 1e-3;
  long budget = 10'000'000;
  std::uint64_t seed = 1;
  std::string out;
  bool json = false;
  bool csv = false;
  bool bits = false;
  std::string config;

  Polarization polarization() const { return parse_polarization(pol); }
  QuadOptions quad() const {
    QuadOptions o;
    o.tol = tol;
    o.budget = budget;
    return o;
  }
  // Logs are stored in nats; --bits rescales display only.
  double log_scale() const { return bits ? 1 / std::numbers::ln2 : 1.0; }
  const char* unit() const { return bits ? "bits" : "nats"; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sci(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 2);
  return std::string(buf, r.ptr);
}

std::string fixed6(double x) { return format_fixed(x, 6); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<BigRat> parse_rat_list(const std::string& s) {
  std::vector<BigRat> out;
  for (const auto& f : split(s, ',')) out.push_back(parse_rat(trim(f)));
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& f : split(s, ',')) {
    BigRat r = parse_rat(trim(f));
    if (r.get_den() != 1 || !r.get_num().fits_sint_p()) throw ParseError("expected integers in '" + s + "'");
    out.push_back(static_cast<int>(r.get_num().get_si()));
  }
  return out;
}

// "a,b;c,d" -> points
std::vector<std::vector<BigRat>> parse_points(const std::string& s) {
  std::vector<std::vector<BigRat>> out;
  for (const auto& p : split(s, ';'))
    if (!trim(p).empty()) out.push_back(parse_rat_list(p));
  return out;
}

Place parse_cli_place(const std::string& s) {
  if (trim(s) == "arch") return ArchSample{};
  return parse_place(s);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// Flat "key = value" file; '#' comments.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, value);
  }
  return out;
}

std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

bool user_sets(const std::vector<std::string>& args, const std::string& key) {
  for (const auto& a : args)
    if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
  return false;
}

bool truthy(const std::string& v) { return v == "true" || v == "1" || v == "yes" || v == "on"; }

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--pol", c.pol, "polarization: q or qt")->check(CLI::IsMember({"q", "qt"}))->capture_default_str();
  sub->add_option("--tol", c.tol, "absolute quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--budget", c.budget, "quadrature evaluation budget")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--out", c.out, "write output to this file instead of stdout");
  sub->add_flag("--json", c.json, "machine-readable JSON output");
  sub->add_flag("--csv", c.csv, "CSV output where tabular");
  sub->add_flag("--bits", c.bits, "display logarithms in bits");
  sub->add_option("--config", c.config, "flat key = value file; flags override it");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heights, Weil functions and Roth-type inequalities over Q and Q(t)", "rothaff"};
  app.require_subcommand(1);
  Common c;

  // Per-subcommand state.
  std::vector<std::string> xis, alphas, sets;
  std::string xi, alpha, place, mode, set_file, tau = "1", d_list, poly_file, point, zeta, verify_file;
  std::string places_file, values_file, heights_file, t0_file, dump_dir;
  bool infinity = false;
  double eps = 1, cconst = 0, strength = 3, eps10 = 0.05, eps11 = 0.05, c9 = 0.5, r_min = 2,
         eps_pp = std::numeric_limits<double>::quiet_NaN(), c_pp = 0, eps5 = 1, eps_prime = 1, c_prime = 0;
  int max_deg = 1, nmax = 10, n = 2, q = 2, n_select = 2, example_n = 0;
  long max_coeff = 2;
  int n_places = 200, n_cells = 20, n_xis = 40;

  auto* height = app.add_subcommand("height", "naive height h_K(xi) with error bound");
  height->add_option("--xi", xis, "rational function, e.g. \"(t^2+1)/(2*t)\"")->required();
  auto* pf = app.add_subcommand("pf-check", "product formula defect int log||xi||_v");
  pf->add_option("--xi", xis, "nonzero rational function")->required();
  mode = "closed";
  pf->add_option("--mode", mode, "closed or quad")->check(CLI::IsMember({"closed", "quad"}))->capture_default_str();
  auto* weil = app.add_subcommand("weil", "Weil function -log^- ||xi - alpha||_v at one place");
  weil->add_option("--alpha", alpha, "target point, or 'inf'")->required();
  weil->add_option("--xi", xi, "rational function")->required();
  weil->add_option("--place", place, "p:<prime>, f:<poly>, inf, z:re,im[,inv] or arch")->required();

  auto add_divisor = [&](CLI::App* s) {
    s->add_option("--alpha", alphas, "divisor target (repeatable)");
    s->add_flag("--infinity", infinity, "include the point at infinity in D");
    s->add_option("--set", set_file, "set S document; default is all archimedean places");
    s->add_option("--eps", eps, "epsilon > 0")->capture_default_str();
    s->add_option("--c", cconst, "constant c")->capture_default_str();
    s->add_option("--mode", mode, "sum or max of the Weil functions")->check(CLI::IsMember({"sum", "max"}));
  };
  auto* roth_eval = app.add_subcommand("roth-eval", "proximity, counting and Roth defect of one xi");
  add_divisor(roth_eval);
  roth_eval->add_option("--xi", xi, "rational function")->required();
  auto* roth_scan = app.add_subcommand("roth-scan", "Roth defect over a coefficient box, CSV sorted by defect");
  add_divisor(roth_scan);
  roth_scan->add_option("--max-deg", max_deg, "degree bound (Q(t) only)")->capture_default_str();
  roth_scan->add_option("--max-coeff", max_coeff, "coefficient bound")->capture_default_str();

  auto* disc_cmd = app.add_subcommand("example412", "discs S_n with beta choices beating 3 h(n)");
  disc_cmd->add_option("--nmax", nmax, "largest n")->capture_default_str();
  disc_cmd->add_option("--strength", strength, "threshold factor, at least 3")->capture_default_str();
  disc_cmd->add_option("--verify", verify_file, "re-verify a saved JSON construction");

  auto* volume = app.add_subcommand("volume", "exact Vol_n(tau)");
  volume->add_option("--n", n, "dimension")->required();
  volume->add_option("--tau", tau, "rational tau")->required();
  auto* jcount = app.add_subcommand("jcount", "J_d(tau) = #{k : sum k_i/d_i < tau}");
  jcount->add_option("--d", d_list, "weights, e.g. 2,2")->required();
  jcount->add_option("--tau", tau, "rational tau")->required();
  auto* index_cmd = app.add_subcommand("index", "index t_d(P, xi)");
  index_cmd->add_option("--poly", poly_file, "polynomial file")->required();
  index_cmd->add_option("--point", point, "point, e.g. 1,2")->required();
  index_cmd->add_option("--d", d_list, "weights, e.g. 2,1")->required();
  auto* params = app.add_subcommand("params", "n0, tau, sigma for q and eps'");
  params->add_option("--q", q, "number of targets, at least 2")->required();
  params->add_option("--eps", eps, "eps' > 0")->required();
  auto* aux = app.add_subcommand("auxpoly", "auxiliary polynomial of index >= tau on the diagonals");
  std::string alpha_list;
  aux->add_option("--alpha", alpha_list, "distinct rationals, e.g. 0,1")->required();
  aux->add_option("--n", n, "number of variables")->required();
  aux->add_option("--d", d_list, "degree bounds, e.g. 8,8")->required();
  aux->add_option("--tau", tau, "index target")->required();
  auto* dyson = app.add_subcommand("dyson-check", "Dyson's lemma inequality for P and points");
  dyson->add_option("--poly", poly_file, "polynomial file")->required();
  dyson->add_option("--zeta", zeta, "points, e.g. \"0,0;1,1\"")->required();
  dyson->add_option("--d", d_list, "weights d_1 >= ... >= d_n")->required();

  auto* reduce = app.add_subcommand("reduce-sim", "pigeonhole reduction and simultaneous selection");
  reduce->add_option("--places-file", places_file, "lines 'place_id weight cell'");
  reduce->add_option("--values", values_file, "lines 'xi_id j place_id value'");
  reduce->add_option("--heights", heights_file, "lines 'xi_id height'");
  reduce->add_option("--t0", t0_file, "lines 'xi_id place_id' listing T0");
  reduce->add_option("--eps10", eps10, "bucket width parameter")->capture_default_str();
  reduce->add_option("--eps11", eps11, "excluded measure budget")->capture_default_str();
  reduce->add_option("--c9", c9, "height slack")->capture_default_str();
  reduce->add_option("--places", n_places, "synthetic: number of places")->capture_default_str();
  reduce->add_option("--cells", n_cells, "synthetic: number of cells")->capture_default_str();
  reduce->add_option("--xis", n_xis, "synthetic: number of xi")->capture_default_str();
  reduce->add_option("--q", q, "synthetic: number of targets")->capture_default_str();
  reduce->add_option("--n", n_select, "chain length")->capture_default_str();
  reduce->add_option("--rmin", r_min, "height ratio along the chain")->capture_default_str();
  reduce->add_option("--eps-pp", eps_pp, "selection tolerance; default is the derived bound");
  reduce->add_option("--c-pp", c_pp, "selection constant")->capture_default_str();
  reduce->add_option("--eps5", eps5, "measure budget for T")->capture_default_str();
  reduce->add_option("--dump", dump_dir, "write the instance files into this directory");

  auto* parts_cmd = app.add_subcommand("check811", "sum_j int_{T_j} min_i lambda_ij/h_i against 2 + eps' + c'/h_1");
  parts_cmd->add_option("--example", example_n, "use the disc S_N instance (N >= 2)");
  parts_cmd->add_option("--xi", xis, "xi_1..xi_n in increasing height (repeatable)");
  parts_cmd->add_option("--alpha", alphas, "targets alpha_j (repeatable)");
  parts_cmd->add_option("--set", sets, "set document T_j per target (repeatable)");
  parts_cmd->add_option("--eps-prime", eps_prime, "eps'")->capture_default_str();
  parts_cmd->add_option("--c-prime", c_prime, "c'")->capture_default_str();
  parts_cmd->add_option("--rmin", r_min, "height ratio")->capture_default_str();

  for (auto* s : app.get_subcommands({})) add_common(s, c);

  std::string text;
  try {
    // Config values are injected ahead of the user's flags so the flags win.
    std::vector<std::string> args = raw_args;
    if (std::string cfg = find_config(raw_args); !cfg.empty() && !args.empty()) {
      CLI::App* sub = nullptr;
      try {
        sub = app.get_subcommand(args[0]);
      } catch (const CLI::OptionNotFound&) {
        throw UsageError("unknown subcommand '" + args[0] + "'");
      }
      std::vector<std::string> injected;
      for (const auto& [key, value] : read_config(cfg)) {
        if (key == "config" || user_sets(raw_args, key)) continue;
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt) throw UsageError("config key '" + key + "' is not an option of " + args[0]);
        if (opt->get_expected_max() == 0) {
          if (truthy(value)) injected.push_back("--" + key);
        } else {
          injected.push_back("--" + key);
          injected.push_back(value);
        }
      }
      args.insert(args.begin() + 1, injected.begin(), injected.end());
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    const double ls = c.log_scale();
    auto check_json_csv = [&] {
      if (c.json && c.csv) throw UsageError("--json and --csv are exclusive");
    };
    check_json_csv();
    auto load_set = [&](const std::string& path) { return path.empty() ? SetS::archimedean() : parse_set(read_file(path)); };
    auto divisor = [&] {
      DivisorSpec d;
      for (const auto& a : alphas) d.targets.push_back(parse_rat_func(a));
      d.include_infinity = infinity;
      return d;
    };
    auto prox_mode = [&] { return mode == "max" ? ProximityMode::Max : ProximityMode::Sum; };

    if (*height || *pf) {
      bool is_height = static_cast<bool>(*height);
      const char* field = is_height ? "height" : "defect";
      json rows = json::array();
      std::ostringstream os;
      if (c.csv) os << "xi," << field << ",error_bound\n";
      for (const auto& s : xis) {
        RatFunc x = parse_rat_func(s);
        Estimate e = is_height ? naive_height(x, c.polarization(), c.quad())
                               : product_formula_defect(x, c.polarization(),
                                                        mode == "quad" ? DefectMode::Quadrature : DefectMode::ClosedForm,
                                                        c.quad());
        double v = e.value * ls, eb = e.error_bound * ls;
        rows.push_back({{"xi", x.to_string()}, {field, v}, {"error_bound", eb}, {"unit", c.unit()}});
        if (c.csv) os << csv_field(x.to_string()) << ',' << format_fixed(v, 9) << ',' << sci(eb) << '\n';
        else os << (is_height ? "h(" : "defect(") << x.to_string() << ") = " << fixed6(v) << " ± " << sci(eb) << ' '
                << c.unit() << '\n';
      }
      text = c.json ? dump(rows) : os.str();
    } else if (*weil) {
      RatFunc x = parse_rat_func(xi);
      Place v = parse_cli_place(place);
      double val = trim(alpha) == "inf" ? weil_lambda_infinity(x, v, c.polarization())
                                        : weil_lambda(parse_rat_func(alpha), x, v, c.polarization());
      val *= ls;
      if (c.json)
        text = dump({{"alpha", alpha}, {"xi", x.to_string()}, {"place", place_to_string(v)}, {"lambda", val},
                     {"unit", c.unit()}});
      else
        text = "lambda = " + format_shortest(val) + " " + c.unit() + "\n";
    } else if (*roth_eval) {
      DivisorSpec d = divisor();
      SetS s = load_set(set_file);
      RatFunc x = parse_rat_func(xi);
      RothParams rp{eps, cconst};
      auto h = naive_height(x, c.polarization(), c.quad());
      auto prox = proximity(d, x, s, prox_mode(), c.polarization(), c.quad());
      auto cnt = counting(d, x, s, c.polarization(), c.quad());
      auto def = roth_defect(d, x, s, rp, prox_mode(), c.polarization(), c.quad());
      if (c.json) {
        text = dump({{"xi", x.to_string()},
                     {"height", h.value * ls},
                     {"proximity", prox.value * ls},
                     {"counting", cnt.value * ls},
                     {"defect", def.value * ls},
                     {"error_bound", def.error_bound * ls},
                     {"inequality_holds", def.value + def.error_bound <= 0},
                     {"unit", c.unit()}});
      } else if (c.csv) {
        text = "xi,height,proximity,counting,defect,error_bound\n" + csv_field(x.to_string()) + ',' +
               format_fixed(h.value * ls, 9) + ',' + format_fixed(prox.value * ls, 9) + ',' +
               format_fixed(cnt.value * ls, 9) + ',' + format_fixed(def.value * ls, 9) + ',' +
               sci(def.error_bound * ls) + '\n';
      } else {
        std::ostringstream os;
        os << "xi = " << x.to_string() << "\n"
           << "height = " << fixed6(h.value * ls) << " ± " << sci(h.error_bound * ls) << ' ' << c.unit() << "\n"
           << "proximity = " << fixed6(prox.value * ls) << " ± " << sci(prox.error_bound * ls) << "\n"
           << "counting = " << fixed6(cnt.value * ls) << " ± " << sci(cnt.error_bound * ls) << "\n"
           << "defect = " << fixed6(def.value * ls) << " ± " << sci(def.error_bound * ls) << "\n"
           << "inequality_holds = " << bool_str(def.value + def.error_bound <= 0) << "\n";
        text = os.str();
      }
    } else if (*roth_scan) {
      DivisorSpec d = divisor();
      SetS s = load_set(set_file);
      auto rows = scan_roth(d, s, RothParams{eps, cconst}, ScanRange{max_deg, max_coeff}, c.polarization(),
                            prox_mode(), c.quad());
      for (auto& r : rows) {
        r.height *= ls;
        r.proximity *= ls;
        r.counting *= ls;
        r.defect *= ls;
        r.error_bound *= ls;
      }
      if (c.json) {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"xi", r.xi.to_string()},
                         {"height", r.height},
                         {"proximity", r.proximity},
                         {"counting", r.counting},
                         {"defect", r.defect},
                         {"error_bound", r.error_bound}});
        text = dump(arr);
      } else {
        text = scan_to_csv(rows);
      }
    } else if (*disc_cmd) {
      DiscExample ex;
      if (!verify_file.empty()) {
        ex = disc_example_from_json(read_file(verify_file));
        ex.tol = c.tol;
        verify_disc_example(ex);
      } else {
        ex = build_disc_example(nmax, strength, c.tol);
      }
      if (c.json) {
        text = disc_example_to_json(ex);
      } else {
        std::ostringstream os;
        if (c.csv) os << "n,lattice_exponent,measure,integral,error_bound,target,holds\n";
        for (const auto& p : ex.parts) {
          if (c.csv)
            os << p.n << ',' << p.lattice_exponent << ',' << format_fixed(p.measure, 9) << ','
               << format_fixed(p.integral * ls, 9) << ',' << sci(p.error_bound * ls) << ','
               << format_fixed(3 * p.height * ls, 9) << ',' << bool_str(p.holds) << '\n';
          else
            os << "n=" << p.n << " k=" << p.lattice_exponent << " mu=" << sci(p.measure)
               << " integral=" << fixed6(p.integral * ls) << " ± " << sci(p.error_bound * ls)
               << " target=" << fixed6(3 * p.height * ls) << " holds=" << bool_str(p.holds) << '\n';
        }
        if (!c.csv) os << "all_hold=" << bool_str(ex.all_hold()) << '\n';
        text = os.str();
      }
    } else if (*volume) {
      BigRat t = parse_rat(tau);
      BigRat v = vol_n(n, t);
      text = c.json ? dump({{"n", n}, {"tau", to_string(t)}, {"volume", to_string(v)}, {"volume_approx", v.get_d()}})
                    : to_string(v) + "\n";
    } else if (*jcount) {
      IndexWeights d{parse_int_list(d_list)};
      BigRat t = parse_rat(tau);
      BigInt j = count_j(d, t);
      text = c.json ? dump({{"d", d.d}, {"tau", to_string(t)}, {"count", to_string(j)}}) : to_string(j) + "\n";
    } else if (*index_cmd) {
      MultiPoly p = parse_multipoly(read_file(poly_file));
      IndexWeights d{parse_int_list(d_list)};
      auto pt = parse_rat_list(point);
      BigRat t = index(p, pt, d);
      json jp = json::array();
      for (const auto& x : pt) jp.push_back(to_string(x));
      text = c.json ? dump({{"point", jp}, {"d", d.d}, {"index", to_string(t)}, {"index_approx", t.get_d()}})
                    : to_string(t) + "\n";
    } else if (*params) {
      auto cp = choose_params(q, eps);
      if (c.json) {
        text = dump({{"q", cp.q},
                     {"eps_prime", cp.eps_prime},
                     {"n0", cp.n0},
                     {"tau", to_string(cp.tau)},
                     {"tau_approx", cp.tau.get_d()},
                     {"sigma", cp.sigma},
                     {"residual", cp.residual},
                     {"volume_ok", cp.volume_ok},
                     {"gap_ok", cp.gap_ok}});
      } else {
        std::ostringstream os;
        os << "n0=" << cp.n0 << " tau=" << format_fixed(cp.tau.get_d(), 12) << " sigma=" << cp.sigma
           << " residual=" << sci(cp.residual) << " volume_ok=" << bool_str(cp.volume_ok)
           << " gap_ok=" << bool_str(cp.gap_ok) << '\n';
        text = os.str();
      }
    } else if (*aux) {
      auto al = parse_rat_list(alpha_list);
      IndexWeights d{parse_int_list(d_list)};
      BigRat t = parse_rat(tau);
      auto r = build_aux_poly(al, n, t, d);
      if (c.json) {
        text = auxpoly_to_json(r, al, t, d);
      } else {
        std::ostringstream os;
        os << "# equations=" << r.equations << " unknowns=" << r.unknowns << " kernel_dim=" << r.kernel_dim
           << " coefficient_log_height=" << format_shortest(r.coefficient_log_height * ls)
           << " entry_log_max=" << format_shortest(r.entry_log_max * ls)
           << " entry_log_bound=" << format_shortest(r.entry_log_bound * ls) << ' ' << c.unit() << '\n';
        for (const auto& a : al)
          os << "# index at diagonal " << to_string(a) << " = "
             << to_string(index(r.p, std::vector<BigRat>(d.size(), a), d)) << '\n';
        os << serialize_multipoly(r.p);
        text = os.str();
      }
    } else if (*dyson) {
      MultiPoly p = parse_multipoly(read_file(poly_file));
      IndexWeights d{parse_int_list(d_list)};
      auto pts = parse_points(zeta);
      auto r = dyson_check(p, pts, d);
      if (c.json) {
        text = dyson_to_json(r, pts, d);
      } else {
        std::ostringstream os;
        for (std::size_t j = 0; j < r.t.size(); ++j) os << "t_" << j + 1 << " = " << to_string(r.t[j]) << '\n';
        os << "lhs = " << to_string(r.lhs) << " (" << format_shortest(r.lhs.get_d()) << ")\n"
           << "rhs = " << to_string(r.rhs) << " (" << format_shortest(r.rhs.get_d()) << ")\n"
           << "holds = " << bool_str(r.holds) << '\n';
        text = os.str();
      }
    } else if (*reduce) {
      SyntheticInstance inst;
      bool from_files = !places_file.empty() || !values_file.empty() || !heights_file.empty();
      if (from_files) {
        if (places_file.empty() || values_file.empty() || heights_file.empty())
          throw UsageError("--places-file, --values and --heights go together");
        inst.space = parse_discretized(read_file(places_file));
        inst.table = parse_lambda_table(read_file(values_file), read_file(heights_file), inst.space);
        inst.t0.assign(inst.table.num_xi(), {});
        if (!t0_file.empty()) {
          std::map<long, std::size_t> xi_index;
          for (std::size_t x = 0; x < inst.table.num_xi(); ++x) xi_index[inst.table.xi_ids[x]] = x;
          std::istringstream is(read_file(t0_file));
          std::string line;
          while (std::getline(is, line)) {
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            if (trim(line).empty()) continue;
            std::istringstream ls2(line);
            long xid, pid;
            if (!(ls2 >> xid >> pid)) throw ParseError("expected 'xi_id place_id' in T0 file: '" + line + "'");
            if (!xi_index.count(xid)) throw ParseError("unknown xi id " + std::to_string(xid) + " in T0 file");
            inst.t0[xi_index[xid]].push_back(inst.space.index_of(pid));
          }
        }
        inst.params = ReduceParams{eps10, eps11, c9};
      } else {
        inst = make_synthetic_instance(c.seed, n_places, n_cells, n_xis, q);
      }
      if (!dump_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dump_dir, ec);
        auto write = [&](const std::string& name, const std::string& body) {
          std::ofstream f(dump_dir + "/" + name, std::ios::binary);
          if (!f) throw UsageError("cannot write into '" + dump_dir + "'");
          f << body;
        };
        write("places.txt", serialize_discretized(inst.space));
        write("values.txt", serialize_lambda_values(inst.table, inst.space));
        write("heights.txt", serialize_heights(inst.table));
        std::ostringstream t0s;
        t0s << "# xi_id place_id\n";
        for (std::size_t x = 0; x < inst.t0.size(); ++x)
          for (int v : inst.t0[x]) t0s << inst.table.xi_ids[x] << ' ' << inst.space.ids[v] << '\n';
        write("t0.txt", t0s.str());
      }
      auto r = pigeonhole_reduce(inst.table, inst.space, inst.t0, inst.params);
      auto pc = check_pigeonhole(inst.table, inst.space, r, inst.params);
      SelectParams sp{n_select, r_min, std::numeric_limits<double>::infinity(), c_pp, eps5};
      auto sel = simultaneous_select(inst.table, inst.space, r, sp);
      double bound = selection_bound(inst.table, inst.space, sel, inst.params, sp);
      sp.eps_pp = std::isnan(eps_pp) ? bound : eps_pp;
      sel.holds = true;
      for (double l : sel.lhs) sel.holds = sel.holds && l <= sp.eps_pp + 1e-9;
      bool exhaustive = check_selection(inst.table, inst.space, sel, sp);
      json doc = json::parse(reduce_to_json(inst.table, inst.space, r, &sel));
      doc["params"] = {{"eps10", inst.params.eps10}, {"eps11", inst.params.eps11}, {"c9", inst.params.c9},
                       {"n", sp.n}, {"r_min", sp.r_min}, {"eps_pp", sp.eps_pp}, {"c_pp", sp.c_pp}, {"eps5", sp.eps5}};
      doc["pair_check"] = {{"holds", pc.holds}, {"worst_margin", pc.worst_margin}, {"checks", pc.checks}};
      doc["selection"]["derived_bound"] = bound;
      doc["selection"]["exhaustive_check"] = exhaustive;
      if (c.json) {
        text = dump(doc);
      } else {
        std::ostringstream os;
        os << "kept " << r.kept.size() << " of " << inst.table.num_xi() << " xi\n"
           << "pairwise inequality: holds=" << bool_str(pc.holds) << " checks=" << pc.checks
           << " worst_margin=" << sci(pc.worst_margin) << '\n'
           << "chain:";
        for (auto x : sel.chain) os << ' ' << inst.table.xi_ids[x];
        os << "\nmu(T) = " << format_shortest(sel.measure_T) << '\n';
        for (std::size_t i = 0; i < sel.lhs.size(); ++i)
          os << "lhs_" << i + 1 << " = " << fixed6(sel.lhs[i]) << '\n';
        os << "eps'' = " << fixed6(sp.eps_pp) << " (derived bound " << fixed6(bound) << ")\n"
           << "selection: holds=" << bool_str(sel.holds) << " exhaustive_check=" << bool_str(exhaustive) << '\n';
        text = os.str();
      }
    } else if (*parts_cmd) {
      PartsCheck r;
      if (example_n > 0) {
        if (!xis.empty() || !alphas.empty() || !sets.empty()) throw UsageError("--example excludes --xi/--alpha/--set");
        auto ex = build_disc_example(example_n, 3, c.tol);
        r = check_parts_disc(ex.parts.back(), c.quad());
      } else {
        if (xis.empty() || alphas.empty()) throw UsageError("check811 needs --example or --xi and --alpha");
        if (sets.size() != alphas.size()) throw UsageError("give one --set per --alpha");
        std::vector<RatFunc> xs;
        for (const auto& s : xis) xs.push_back(parse_rat_func(s));
        std::vector<SetS> parts;
        for (const auto& s : sets) parts.push_back(parse_set(read_file(s)));
        r = check_parts(xs, parts, divisor(), eps_prime, c_prime, r_min, c.polarization(), c.quad());
      }
      if (c.json) {
        text = dump({{"lhs", r.lhs}, {"rhs", r.rhs}, {"error_bound", r.error_bound},
                     {"holds_ratio", r.holds_ratio}, {"holds_integral", r.holds_integral}});
      } else {
        std::ostringstream os;
        os << "lhs = " << fixed6(r.lhs) << " ± " << sci(r.error_bound) << "\nrhs = " << fixed6(r.rhs)
           << "\nholds_ratio = " << bool_str(r.holds_ratio) << "\nholds_integral = " << bool_str(r.holds_integral)
           << '\n';
        text = os.str();
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << " (estimate " << format_shortest(e.estimate()) << ", error bound "
        << format_shortest(e.error_bound()) << ")\n";
    return kDomainError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }

  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f || !(f << text)) {
      err << "error: cannot write '" << c.out << "'\n";
      return kUsageError;
    }
  }
  return kOk;
}

}  // namespace rothaff::cli
