#include "phasebound/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "phasebound/bounds.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/numerics.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/qfi_oracle.hpp"
#include "phasebound/waveform.hpp"

namespace phasebound::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string out_path;
  std::string plot_path;
  double tol_rel = kDefaultQuadratureRelTol;
  int seed = 0;  // reserved; nothing here is random
  int threads = 1;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct GridArgs {
  double n_min;
  double n_max;
  int points;
};

struct Fig1Args {
  double eta = 0.8;
  std::vector<double> nT_list = {10.0, 100.0};
  GridArgs grid{0.1, 100.0, 50};
};

struct Fig2Args {
  double eta = 0.95;
  double lambda = 0.1;
  GridArgs grid{0.1, 1e4, 50};
  bool oracle = false;
  double oracle_r_max = 0.8;
};

struct Fig3Args {
  std::vector<double> eta_list = {0.95, 1.0};
  GridArgs grid{1e2, 1e8, 25};
  double kappa = 1.0;
  double lambda_c = 1.0;
  double r_prefactor = 16.0;
  double r_exponent = 1.0 / 3.0;
};

std::vector<double> make_grid(const GridArgs& g) {
  if (!(g.n_min > 0.0) || !(g.n_max >= g.n_min) || g.points < 1 || !std::isfinite(g.n_max)) {
    throw UsageError("grid needs 0 < n-min <= n-max and points >= 1");
  }
  if (g.points > 1 && g.n_max == g.n_min) throw UsageError("grid with several points needs n-min < n-max");
  if (g.points == 1 && g.n_max != g.n_min) throw UsageError("a one-point grid needs n-min = n-max");
  return logspace(g.n_min, g.n_max, g.points);
}

std::string render_csv(const Table& table) {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return s;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  f << contents;
  if (!f) throw UsageError("failed writing " + path);
}

void emit(const Table& table, const CommonOptions& common, const std::string& plot_body,
          std::ostream& out) {
  if (!common.plot_path.empty() && common.out_path.empty()) {
    throw UsageError("--plot needs --out so the script has a file to read");
  }
  const std::string csv = render_csv(table);
  if (common.out_path.empty()) {
    out << csv;
  } else {
    write_file(common.out_path, csv);
  }
  if (!common.plot_path.empty()) {
    std::ostringstream script;
    script << "# gnuplot script for " << common.out_path << "\n"
           << "set datafile separator ','\n"
           << "set key autotitle columnhead\n"
           << "csv = '" << common.out_path << "'\n"
           << plot_body;
    write_file(common.plot_path, script.str());
  }
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw UsageError("eta must lie in (0, 1]");
}

// ---------------------------------------------------------------------------
// fig1: loss at finite temperature

Table fig1_table(const Fig1Args& args) {
  check_eta(args.eta);
  if (args.nT_list.empty()) throw UsageError("fig1 needs at least one n_T");
  const std::vector<double> grid = make_grid(args.grid);
  Table t{{"mean_n", "n_T", "cq_min", "exact_qfi"}, {}};
  for (double nT : args.nT_list) {
    if (!(nT >= 0.0)) throw UsageError("n_T values must be >= 0");
    for (double n : grid) {
      const InputMoments m = squeezed_vacuum_moments(squeezing_for_mean(n));
      const double cq = cq_min_loss_thermal(InputMoments{n, m.var_n}, args.eta, nT);
      const double fq = exact_qfi_squeezed(squeezing_for_mean(n), args.eta, nT);
      t.rows.push_back({format_number(n), format_number(nT), format_number(cq), format_number(fq)});
    }
  }
  return t;
}

std::string fig1_plot(const Fig1Args& args) {
  std::ostringstream s;
  s << "set logscale xy\nset xlabel '<n>'\nset ylabel 'Fisher information'\nplot \\\n";
  for (std::size_t i = 0; i < args.nT_list.size(); ++i) {
    const std::string nt = format_number(args.nT_list[i]);
    s << "  csv using 1:(abs($2-" << nt << ")<1e-9 ? $3 : 1/0) with lines title 'C_Q min, n_T=" << nt
      << "', \\\n"
      << "  csv using 1:(abs($2-" << nt << ")<1e-9 ? $4 : 1/0) with lines dt 2 title 'exact QFI, n_T="
      << nt << "'" << (i + 1 < args.nT_list.size() ? ", \\\n" : "\n");
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// fig2: loss plus diffusion sandwich

Table fig2_table(const Fig2Args& args, const CommonOptions& common, std::ostream& err) {
  check_eta(args.eta);
  if (!(args.lambda >= 0.0)) throw UsageError("lambda must be >= 0");
  const std::vector<double> grid = make_grid(args.grid);
  Table t{{"mean_n", "cq_min", "im_opt"}, {}};
  if (args.oracle) t.header.push_back("oracle_qfi");

  std::vector<std::optional<double>> oracle(grid.size());
  std::vector<std::string> warnings(grid.size());
  if (args.oracle) {
    parallel_for(grid.size(), common.threads, [&](std::size_t i) {
      const double r = squeezing_for_mean(grid[i]);
      if (r > args.oracle_r_max) return;
      try {
        oracle[i] = oracle_qfi_squeezed(r, NoiseParams{args.eta, 0.0, args.lambda});
      } catch (const TruncationError& e) {
        warnings[i] = e.what();
      }
    });
    bool beyond = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!warnings[i].empty()) err << "warning: oracle skipped at mean_n=" << format_number(grid[i])
                                    << ": " << warnings[i] << "\n";
      if (squeezing_for_mean(grid[i]) > args.oracle_r_max) beyond = true;
    }
    if (beyond) {
      err << "warning: oracle column left empty for r > " << format_number(args.oracle_r_max)
          << " (beyond the truncation-safe range)\n";
    }
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double n = grid[i];
    const double r = squeezing_for_mean(n);
    const InputMoments m{n, squeezed_vacuum_moments(r).var_n};
    std::vector<std::string> row = {format_number(n),
                                    format_number(cq_min_loss_diffusion(m, args.eta, args.lambda)),
                                    format_number(im_opt_squeezed(r, args.eta, args.lambda))};
    if (args.oracle) row.push_back(oracle[i] ? format_number(*oracle[i]) : "");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string fig2_plot(const Fig2Args& args) {
  std::ostringstream s;
  s << "set logscale x\nset xlabel '<n>'\nset ylabel 'Fisher information'\nplot \\\n"
    << "  csv using 1:2 with lines title 'C_Q min', \\\n"
    << "  csv using 1:3 with lines dt 2 title 'I_M opt'";
  if (args.oracle) s << ", \\\n  csv using 1:4 with points title 'oracle QFI'";
  s << "\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// fig3: waveform estimation

Table fig3_table(const Fig3Args& args, const CommonOptions& common, bool& any_failed) {
  if (args.eta_list.empty()) throw UsageError("fig3 needs at least one eta");
  for (double eta : args.eta_list) check_eta(eta);
  if (!(common.tol_rel > 0.0)) throw UsageError("--tol-rel must be positive");
  const std::vector<double> grid = make_grid(args.grid);
  const PriorSpectrum prior = PriorSpectrum::lorentzian(args.kappa, args.lambda_c);
  const SqueezingRule rule{args.r_prefactor, args.r_exponent};

  const std::size_t n = args.eta_list.size() * grid.size();
  std::vector<std::vector<std::string>> rows(n);
  std::vector<char> failed(n, 0);
  parallel_for(n, common.threads, [&](std::size_t k) {
    const double eta = args.eta_list[k / grid.size()];
    const double flux = grid[k % grid.size()];
    try {
      const Fig3Point p = fig3_point(eta, flux, rule, prior, common.tol_rel);
      rows[k] = {format_number(flux), format_number(eta), format_number(p.bound),
                 format_number(p.beta_star), ""};
    } catch (const Error& e) {
      std::string msg = e.what();
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      rows[k] = {format_number(flux), format_number(eta), "", "", msg};
      failed[k] = 1;
    }
  });
  any_failed = std::find(failed.begin(), failed.end(), 1) != failed.end();
  return Table{{"flux_N", "eta", "mse_bound", "beta_star", "error"}, std::move(rows)};
}

std::string fig3_plot(const Fig3Args& args) {
  std::ostringstream s;
  s << "set logscale xy\nset xlabel 'N (photons/s)'\nset ylabel 'MSE bound'\nplot \\\n";
  for (std::size_t i = 0; i < args.eta_list.size(); ++i) {
    const std::string e = format_number(args.eta_list[i]);
    s << "  csv using 1:(abs($2-" << e << ")<1e-12 ? $3 : 1/0) with lines title 'eta=" << e << "'"
      << (i + 1 < args.eta_list.size() ? ", \\\n" : "\n");
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// bound / oracle one-shot reports

struct KeyValues {
  std::vector<std::pair<std::string, double>> ordered;
  std::map<std::string, double> lookup;

  std::optional<double> get(const std::string& key) const {
    const auto it = lookup.find(key);
    return it == lookup.end() ? std::nullopt : std::optional<double>(it->second);
  }
  double get_or(const std::string& key, double fallback) const { return get(key).value_or(fallback); }
};

KeyValues parse_key_values(const std::vector<std::string>& items,
                           const std::vector<std::string>& allowed) {
  KeyValues kv;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string valid;
      for (const auto& a : allowed) valid += (valid.empty() ? "" : ", ") + a;
      throw UsageError("unknown parameter '" + key + "'; valid: " + valid);
    }
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty()) throw UsageError("bad number in '" + item + "'");
    if (kv.lookup.count(key)) throw UsageError("parameter '" + key + "' given twice");
    kv.ordered.emplace_back(key, value);
    kv.lookup[key] = value;
  }
  return kv;
}

InputMoments moments_from(const KeyValues& kv) {
  const auto mean = kv.get("mean_n");
  const auto var = kv.get("var_n");
  const auto r = kv.get("r");
  if (r && (mean || var)) throw UsageError("give either r or mean_n/var_n, not both");
  if (r) return squeezed_vacuum_moments(*r);
  if (!mean || !var) throw UsageError("probe moments need mean_n and var_n (or r)");
  return InputMoments::checked(*mean, *var);
}

double require_key(const KeyValues& kv, const std::string& key) {
  const auto v = kv.get(key);
  if (!v) throw UsageError("missing parameter '" + key + "'");
  return *v;
}

const std::vector<std::string> kBoundNames = {"eq15", "eq16", "eq17", "eq21", "eq22", "eq25"};

std::string report(const std::string& name, const KeyValues& kv, double value) {
  std::string s = name;
  for (const auto& [k, v] : kv.ordered) s += " " + k + "=" + format_number(v);
  s += " value=" + format_number(value) + "\n";
  return s;
}

std::string bound_report(const std::string& name, const std::vector<std::string>& params) {
  const std::vector<std::string> moment_keys = {"mean_n", "var_n", "r"};
  auto with = [&](std::vector<std::string> extra) {
    extra.insert(extra.end(), moment_keys.begin(), moment_keys.end());
    return extra;
  };
  if (name == "eq15") {
    const KeyValues kv = parse_key_values(params, with({"eta", "nT"}));
    return report(name, kv,
                  cq_min_loss_thermal(moments_from(kv), kv.get_or("eta", 1.0), kv.get_or("nT", 0.0)));
  }
  if (name == "eq16") {
    const KeyValues kv = parse_key_values(params, with({"eta"}));
    return report(name, kv, cq_min_loss_zero_T(moments_from(kv), kv.get_or("eta", 1.0)));
  }
  if (name == "eq17") {
    const KeyValues kv = parse_key_values(params, {"r", "eta", "nT"});
    return report(name, kv,
                  exact_qfi_squeezed(require_key(kv, "r"), kv.get_or("eta", 1.0), kv.get_or("nT", 0.0)));
  }
  if (name == "eq21") {
    const KeyValues kv = parse_key_values(params, with({"eta", "lambda"}));
    return report(name, kv,
                  cq_min_loss_diffusion(moments_from(kv), kv.get_or("eta", 1.0),
                                        kv.get_or("lambda", 0.0)));
  }
  if (name == "eq22") {
    const KeyValues kv = parse_key_values(params, with({"eta", "nT", "lambda"}));
    return report(name, kv,
                  phase_variance_bound_full(moments_from(kv), kv.get_or("eta", 1.0),
                                            kv.get_or("nT", 0.0), kv.get_or("lambda", 0.0)));
  }
  if (name == "eq25") {
    const KeyValues kv = parse_key_values(params, {"r", "eta", "lambda"});
    return report(name, kv,
                  im_opt_squeezed(require_key(kv, "r"), kv.get_or("eta", 1.0), kv.get_or("lambda", 0.0)));
  }
  std::string valid;
  for (const auto& n : kBoundNames) valid += (valid.empty() ? "" : "|") + n;
  throw UsageError("unknown bound '" + name + "'; valid names: " + valid);
}

std::string oracle_report(const std::vector<std::string>& params) {
  const KeyValues kv = parse_key_values(params, {"r", "eta", "nT", "lambda"});
  const NoiseParams noise{kv.get_or("eta", 1.0), kv.get_or("nT", 0.0), kv.get_or("lambda", 0.0)};
  return report("oracle", kv, oracle_qfi_squeezed(require_key(kv, "r"), noise));
}

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--out", common.out_path, "Write the CSV here instead of standard output");
  sub->add_option("--plot", common.plot_path, "Also write a gnuplot script that plots --out");
  sub->add_option("--tol-rel", common.tol_rel, "Relative quadrature tolerance")
      ->capture_default_str();
  sub->add_option("--seed", common.seed, "Reserved; no computation here is random");
  sub->add_option("--threads", common.threads, "Worker threads for row computations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_grid(CLI::App* sub, GridArgs& grid, const char* what) {
  sub->add_option("--n-min", grid.n_min, std::string("Smallest ") + what)->capture_default_str();
  sub->add_option("--n-max", grid.n_max, std::string("Largest ") + what)->capture_default_str();
  sub->add_option("--points", grid.points, "Number of log-spaced grid points")->capture_default_str();
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational quantum Fisher information bounds for noisy optical phase estimation",
               "phasebound"};
  app.set_config("--config", "", "Read defaults from a key=value file ([fig1] style sections)");
  app.require_subcommand(1, 1);

  CommonOptions common;
  Fig1Args f1;
  Fig2Args f2;
  Fig3Args f3;
  std::string bound_name;
  std::vector<std::string> params;

  auto* fig1 = app.add_subcommand("fig1", "Loss at finite temperature: C_Q min versus exact QFI");
  fig1->add_option("--eta", f1.eta, "Transmission")->capture_default_str();
  fig1->add_option("--nT-list", f1.nT_list, "Comma-separated thermal occupations")
      ->delimiter(',')
      ->capture_default_str();
  add_grid(fig1, f1.grid, "mean photon number");
  add_common(fig1, common);

  auto* fig2 = app.add_subcommand("fig2", "Loss plus diffusion: C_Q min versus I_M opt");
  fig2->add_option("--eta", f2.eta, "Transmission")->capture_default_str();
  fig2->add_option("--lambda", f2.lambda, "Diffusion strength")->capture_default_str();
  fig2->add_flag("--oracle", f2.oracle, "Add the Fock-space oracle QFI column");
  fig2->add_option("--oracle-r-max", f2.oracle_r_max, "Largest squeezing r given to the oracle")
      ->capture_default_str();
  add_grid(fig2, f2.grid, "mean photon number");
  add_common(fig2, common);

  auto* fig3 = app.add_subcommand("fig3", "Waveform estimation: MSE bound versus photon flux");
  fig3->add_option("--eta-list", f3.eta_list, "Comma-separated transmissions")
      ->delimiter(',')
      ->capture_default_str();
  fig3->add_option("--kappa", f3.kappa, "Prior phase-noise scale")->capture_default_str();
  fig3->add_option("--lambda-c", f3.lambda_c, "Prior Lorentzian cutoff")->capture_default_str();
  fig3->add_option("--r-prefactor", f3.r_prefactor, "R+ = prefactor * N^exponent")
      ->capture_default_str();
  fig3->add_option("--r-exponent", f3.r_exponent, "R+ = prefactor * N^exponent")
      ->capture_default_str();
  add_grid(fig3, f3.grid, "photon flux");
  add_common(fig3, common);

  auto* bound = app.add_subcommand("bound", "Evaluate one closed-form bound");
  bound->add_option("name", bound_name, "eq15|eq16|eq17|eq21|eq22|eq25")->required();
  bound->add_option("params", params, "key=value parameters");

  auto* oracle = app.add_subcommand("oracle", "Fock-space QFI of a noisy squeezed vacuum");
  oracle->add_option("params", params, "r=... eta=... nT=... lambda=...");

  std::vector<const char*> argv = {"phasebound"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fig1->parsed()) {
      emit(fig1_table(f1), common, fig1_plot(f1), out);
    } else if (fig2->parsed()) {
      emit(fig2_table(f2, common, err), common, fig2_plot(f2), out);
    } else if (fig3->parsed()) {
      bool any_failed = false;
      emit(fig3_table(f3, common, any_failed), common, fig3_plot(f3), out);
      if (any_failed) {
        err << "error: some fig3 rows failed; see the error column\n";
        return kExitNumerical;
      }
    } else if (bound->parsed()) {
      out << bound_report(bound_name, params);
    } else if (oracle->parsed()) {
      out << oracle_report(params);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace phasebound::cli
