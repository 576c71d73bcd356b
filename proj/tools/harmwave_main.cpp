// harmwave command-line tool: parameter sweeps, figure datasets, Fisher
// reports, Wigner grids, oracle self-checks, and width-extrema tables.
//
// Exit codes: 0 success, 1 validation/parse error, 2 numerical check failure,
// 3 I/O failure.

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "harmwave/harmwave.hpp"

namespace {

using namespace harmwave;

void usage() {
  std::cout <<
      "usage: harmwave <command> [options]\n"
      "\n"
      "commands\n"
      "  sweep --scenario FILE        run a parameter sweep from a scenario file\n"
      "  figure --id ID               emit the dataset(s) of one figure recipe\n"
      "                               (fig1 fig2 fig3 fig4 fig5 fig6 fig7 figA)\n"
      "  fisher                       Fisher-information sweep at resonance\n"
      "  wigner                       Wigner grid (x, p, w) on [-4,4]^2\n"
      "  oracle-check                 closed form vs propagator quadrature battery\n"
      "  extrema                      wavepacket width extrema in a time window\n"
      "\n"
      "global options\n"
      "  --out PATH        output file (sweep/fisher/wigner/extrema; default stdout)\n"
      "                    or output directory (figure; default .)\n"
      "  --format F        csv or json (default csv; scenario file may set it)\n"
      "  --unwrapped       emit the time-accumulated Gouy phase instead of the\n"
      "                    principal branch (figure fig1; sweep mu columns)\n"
      "\n"
      "fisher options:  --omega W (=1) --gamma G (=1) --t-lo A (=0) --t-hi B (=pi/W)\n"
      "                 --samples N (=201); --coincidence emits the CFI-peak /\n"
      "                 Gouy-sign-change report over [t-lo, t-hi] instead\n"
      "wigner options:  --gamma G (=0) | --squeeze R --phi PHI | --time T (evolved,\n"
      "                 resonant omega0=omega=1); grid 201x201 on [-4,4]^2\n"
      "extrema options: --omega0 W0 (=1) --omega W (=1) --gamma G (=0)\n"
      "                 --t-lo A (=0) --t-hi B (=2pi/W)\n"
      "oracle-check:    --panels N (=64) --nodes N (=32) --cut-radius R (=12)\n"
      "                 --time T (repeatable; default battery times 0.3 1.1 2.6)\n"
      "figure options:  --fig7c-rescale  divide the gamma=3 parametric trace by 9\n"
      "\n"
      "scenario file: line-oriented `key = value`, '#' comments. keys:\n"
      "  omega0 omega gamma   frequencies (rad/time) and correlation parameter\n"
      "  hbar mass            unit constants (default 1)\n"
      "  sweep                t | omega | gamma\n"
      "  lo hi samples        sweep axis (samples >= 2)\n"
      "  time                 evaluation time for omega/gamma sweeps\n"
      "  outputs              comma list of B,u,mu_principal,mu_unwrapped,\n"
      "                       gouy_rate,wigner,cfi,qfi,covariance\n"
      "                       (default B,mu_principal)\n"
      "  format unwrap        csv|json (default csv), true|false (default false)\n";
}

struct Args {
  std::vector<std::string> positional;
  std::vector<std::pair<std::string, std::string>> options;

  bool has(const std::string& k) const {
    for (const auto& [key, val] : options)
      if (key == k) return true;
    return false;
  }
  std::string get(const std::string& k, const std::string& dflt = "") const {
    for (const auto& [key, val] : options)
      if (key == k) return val;
    return dflt;
  }
  double get_num(const std::string& k, double dflt) const {
    const std::string v = get(k);
    if (v.empty()) return dflt;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
      fail(Errc::validation_error, "option " + k + " expects a number");
    return x;
  }
  long get_int(const std::string& k, long dflt) const {
    return static_cast<long>(get_num(k, static_cast<double>(dflt)));
  }
};

const char* kFlagOptions[] = {"--unwrapped", "--fig7c-rescale", "--coincidence",
                              "--help", "-h"};

Args parse_args(int argc, char** argv) {
  Args args;
  for (int i = 2; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--", 0) == 0 || a == "-h") {
      bool is_flag = false;
      for (const char* f : kFlagOptions)
        if (a == f) is_flag = true;
      if (is_flag) {
        args.options.emplace_back(a, "");
      } else {
        if (i + 1 >= argc)
          fail(Errc::validation_error, "option " + a + " expects a value");
        args.options.emplace_back(a, argv[++i]);
      }
    } else {
      args.positional.push_back(a);
    }
  }
  return args;
}

OutputFormat format_from(const Args& args, OutputFormat dflt) {
  const std::string f = args.get("--format");
  if (f.empty()) return dflt;
  if (f == "csv") return OutputFormat::csv;
  if (f == "json") return OutputFormat::json;
  fail(Errc::validation_error, "--format must be csv or json");
}

void write_output(const Table& table, const std::string& out_path,
                  OutputFormat format, const std::string& echo) {
  if (out_path.empty()) {
    if (format == OutputFormat::csv) write_csv(table, std::cout);
    else write_json(table, echo, std::cout);
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) fail(Errc::io_failure, "cannot open '" + out_path + "'");
  if (format == OutputFormat::csv) write_csv(table, os);
  else write_json(table, echo, os);
  if (!os.flush()) fail(Errc::io_failure, "write to '" + out_path + "' failed");
}

int cmd_sweep(const Args& args) {
  const std::string path = args.get("--scenario");
  if (path.empty()) fail(Errc::validation_error, "sweep requires --scenario FILE");
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario(buf.str());
  if (args.has("--format")) sc.format = format_from(args, sc.format);
  if (args.has("--unwrapped")) sc.unwrap = true;
  const Table table = run_sweep(sc);
  write_output(table, args.get("--out"), sc.format, scenario_json(sc));
  return 0;
}

int cmd_figure(const Args& args) {
  const std::string name = args.get("--id");
  const auto id = figure_id_from_name(name);
  if (!id) fail(Errc::validation_error, "unknown figure id '" + name + "'");
  std::string dir = args.get("--out", ".");
  std::filesystem::create_directories(dir);
  const auto files = emit_figure(*id, dir, format_from(args, OutputFormat::csv),
                                 args.has("--unwrapped"), args.has("--fig7c-rescale"));
  for (const std::string& f : files) std::cout << f << "\n";
  return 0;
}

int cmd_fisher(const Args& args) {
  const double omega = args.get_num("--omega", 1.0);
  const double gamma = args.get_num("--gamma", 1.0);
  const WavepacketSpec spec = make_spec(omega, omega, gamma, {});
  const double t_lo = args.get_num("--t-lo", 0.0);
  const double t_hi = args.get_num("--t-hi", pi / omega);
  if (args.has("--coincidence")) {
    const CoincidenceReport rep = cfi_gouy_coincidence(spec, t_lo, t_hi);
    Table table;
    table.columns = {"t_cfi_max", "t_mu_signchange", "separation",
                     "ratio_at_peak", "separation_ok", "ratio_ok"};
    table.rows.push_back({rep.t_cfi_max, rep.t_mu_signchange, rep.separation,
                          rep.ratio_at_peak, rep.separation_ok ? 1.0 : 0.0,
                          rep.ratio_ok ? 1.0 : 0.0});
    table.flags.push_back(rep.zero_information ? "ZeroInformation" : "");
    write_output(table, args.get("--out"), format_from(args, OutputFormat::csv),
                 "null");
    return 0;
  }
  const long n = args.get_int("--samples", 201);
  if (n < 2 || !(t_lo < t_hi))
    fail(Errc::validation_error, "need --samples >= 2 and --t-lo < --t-hi");
  Table table;
  table.columns = {"t", "omega_t", "cfi_closed", "cfi_numeric",
                   "qfi_closed", "qfi_general", "crlb_single_shot"};
  for (long i = 0; i < n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (n - 1);
    std::string flag;
    std::vector<std::optional<double>> row{t, omega * t};
    try {
      const FisherReport rep = fisher_report(spec, t);
      row.insert(row.end(), {rep.cfi_closed, rep.cfi_numeric, rep.qfi_closed,
                             rep.qfi_general});
      if (std::isfinite(rep.crlb_single_shot)) row.push_back(rep.crlb_single_shot);
      else row.push_back(std::nullopt);
      if (!rep.diagnostics.empty()) flag = rep.diagnostics.front();
    } catch (const Error& e) {
      row.resize(table.columns.size());
      flag = errc_name(e.code());
    }
    table.rows.push_back(std::move(row));
    table.flags.push_back(flag);
  }
  write_output(table, args.get("--out"), format_from(args, OutputFormat::csv), "null");
  return 0;
}

int cmd_wigner(const Args& args) {
  CovarianceState cov;
  if (args.has("--squeeze")) {
    cov = squeezed_covariance(
        make_squeeze(args.get_num("--squeeze", 0.0), args.get_num("--phi", 0.0)));
  } else {
    const double gamma = args.get_num("--gamma", 0.0);
    if (args.has("--time")) {
      const WavepacketSpec spec = make_spec(1.0, 1.0, gamma, {});
      cov = evolved_covariance(spec, args.get_num("--time", 0.0));
    } else {
      cov = initial_covariance(gamma);
    }
  }
  Table table;
  table.columns = {"x", "p", "w"};
  const long n = 201;
  for (long i = 0; i < n; ++i) {
    const double x = -4.0 + 8.0 * static_cast<double>(i) / (n - 1);
    for (long j = 0; j < n; ++j) {
      const double p = -4.0 + 8.0 * static_cast<double>(j) / (n - 1);
      table.rows.push_back({x, p, wigner_gaussian(cov, x, p)});
      table.flags.emplace_back();
    }
  }
  write_output(table, args.get("--out"), format_from(args, OutputFormat::csv), "null");
  return 0;
}

int cmd_oracle_check(const Args& args) {
  QuadratureConfig cfg;
  cfg.panels = static_cast<int>(args.get_int("--panels", cfg.panels));
  cfg.nodes_per_panel = static_cast<int>(args.get_int("--nodes", cfg.nodes_per_panel));
  cfg.cut_radius_in_widths = args.get_num("--cut-radius", cfg.cut_radius_in_widths);
  std::vector<double> times;
  for (const auto& [k, v] : args.options)
    if (k == "--time") times.push_back(std::strtod(v.c_str(), nullptr));
  if (times.empty()) times = {0.3, 1.1, 2.6};

  const OracleCheckReport report = oracle_check(oracle_default_battery(), times, cfg);
  Table table;
  table.columns = {"omega", "gamma", "t", "rel_l2", "width_rel_err",
                   "inv_curv_abs_err", "gouy_abs_err"};
  for (const OracleCheckRow& r : report.rows) {
    table.rows.push_back({r.omega, r.gamma, r.t, r.rel_l2, r.width_rel_err,
                          r.inv_curv_abs_err, r.gouy_abs_err});
    table.flags.push_back(r.flag);
  }
  write_output(table, args.get("--out"), format_from(args, OutputFormat::csv), "null");
  std::cerr << "oracle-check: worst rel L2 = " << report.worst_l2
            << (report.ok ? " (ok)" : " (FAIL: above 1e-6)") << "\n";
  return report.ok ? 0 : 2;
}

int cmd_extrema(const Args& args) {
  const WavepacketSpec spec =
      make_spec(args.get_num("--omega0", 1.0), args.get_num("--omega", 1.0),
                args.get_num("--gamma", 0.0), {});
  const double lo = args.get_num("--t-lo", 0.0);
  const double hi = args.get_num("--t-hi", 2.0 * pi / spec.omega);
  Table table;
  table.columns = {"t", "kind", "B"};
  for (const WidthExtremum& ex : find_width_extrema(spec, lo, hi)) {
    table.rows.push_back(
        {ex.t, ex.kind == ExtremumKind::maximum ? 1.0 : 0.0, ex.width});
    table.flags.emplace_back();
  }
  write_output(table, args.get("--out"), format_from(args, OutputFormat::csv), "null");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage();
    return 1;
  }
  const std::string cmd = argv[1];
  if (cmd == "--help" || cmd == "-h" || cmd == "help") {
    usage();
    return 0;
  }
  try {
    const Args args = parse_args(argc, argv);
    if (args.has("--help") || args.has("-h")) {
      usage();
      return 0;
    }
    if (cmd == "sweep") return cmd_sweep(args);
    if (cmd == "figure") return cmd_figure(args);
    if (cmd == "fisher") return cmd_fisher(args);
    if (cmd == "wigner") return cmd_wigner(args);
    if (cmd == "oracle-check") return cmd_oracle_check(args);
    if (cmd == "extrema") return cmd_extrema(args);
    std::cerr << "unknown command '" << cmd << "'\n";
    usage();
    return 1;
  } catch (const harmwave::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == harmwave::Errc::io_failure ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
