#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "harmwave/estimation.hpp"
#include "harmwave/oracle.hpp"
#include "harmwave/phase_space.hpp"
#include "harmwave/scenario.hpp"

namespace harmwave {

// Column-ordered dataset with one flag per row ("" when clean). Missing
// values (quantity undefined at that sample) are emitted as empty CSV fields
// and JSON nulls; rows are never dropped.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
  std::vector<std::string> flags;
};

inline void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << table.columns[c];
  }
  os << ",flag\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      if (c) os << ',';
      if (table.rows[r][c]) os << detail::format_double(*table.rows[r][c]);
    }
    os << ',' << table.flags[r] << '\n';
  }
}

inline void write_json(const Table& table, const std::string& scenario_echo,
                       std::ostream& os) {
  os << "{\"scenario\":" << (scenario_echo.empty() ? "null" : scenario_echo)
     << ",\"rows\":[";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (r) os << ',';
    os << '{';
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      os << '"' << table.columns[c] << "\":";
      if (table.rows[r][c]) os << detail::format_double(*table.rows[r][c]);
      else os << "null";
      os << ',';
    }
    os << "\"flag\":\"" << table.flags[r] << "\"}";
  }
  os << "]}\n";
}

// JSON echo of a scenario (object; keys in canonical order).
inline std::string scenario_json(const Scenario& sc) {
  std::string j = "{";
  auto kv = [&](const char* k, const std::string& v, bool quote) {
    j += '"';
    j += k;
    j += "\":";
    if (quote) j += '"';
    j += v;
    if (quote) j += '"';
    j += ',';
  };
  kv("omega0", detail::format_double(sc.omega0), false);
  kv("omega", detail::format_double(sc.omega), false);
  kv("gamma", detail::format_double(sc.gamma), false);
  kv("hbar", detail::format_double(sc.hbar), false);
  kv("mass", detail::format_double(sc.mass), false);
  kv("sweep", sweep_name(sc.sweep), true);
  kv("lo", detail::format_double(sc.lo), false);
  kv("hi", detail::format_double(sc.hi), false);
  kv("samples", std::to_string(sc.samples), false);
  kv("time", detail::format_double(sc.time), false);
  std::string outs;
  for (std::size_t i = 0; i < sc.outputs.size(); ++i) {
    if (i) outs += ',';
    outs += quantity_name(sc.outputs[i]);
  }
  kv("outputs", outs, true);
  kv("format", sc.format == OutputFormat::csv ? "csv" : "json", true);
  j += "\"unwrap\":";
  j += sc.unwrap ? "true" : "false";
  j += '}';
  return j;
}

namespace detail {

// Accumulates the continuous Gouy phase along increasing times, subdividing
// internally to honor the dt <= pi/(8 omega) contract. Anchored at the
// principal value of the first queried time.
class GouyAccumulator {
 public:
  GouyAccumulator(const WavepacketSpec& spec, double t0)
      : spec_(spec),
        max_step_(pi / (8.0 * spec.omega)),
        t_(t0),
        principal_(gouy_principal(spec, t0)),
        offset_(0.0) {}

  double advance_to(double t) {
    while (t_ < t) {
      const double next = std::min(t, t_ + max_step_);
      const double p = gouy_principal(spec_, next);
      if (p - principal_ < -1e-12) offset_ += 0.5 * pi;
      principal_ = p;
      t_ = next;
    }
    return principal_ + offset_;
  }

 private:
  WavepacketSpec spec_;
  double max_step_;
  double t_;
  double principal_;
  double offset_;
};

// Continuous Gouy phase accumulated from t = 0, stepping in either time
// direction (backward steps reverse the branch correction).
inline double unwrapped_from_zero(const WavepacketSpec& spec, double t) {
  const double max_step = pi / (8.0 * spec.omega);
  double cur = 0.0;
  double prev = gouy_principal(spec, 0.0);
  double offset = 0.0;
  const bool forward = t >= 0.0;
  while (forward ? cur < t : cur > t) {
    const double next = forward ? std::min(t, cur + max_step)
                                : std::max(t, cur - max_step);
    const double p = gouy_principal(spec, next);
    if (forward && p - prev < -1e-12) offset += 0.5 * pi;
    if (!forward && p - prev > 1e-12) offset -= 0.5 * pi;
    prev = p;
    cur = next;
  }
  return prev + offset;
}

}  // namespace detail

// One row per sample of the scenario's sweep axis; requested quantities in
// declaration order. Domain errors at a sample flag the row instead of
// aborting the sweep. `unwrap = true` promotes requested mu_principal
// columns to the continuous mu_unwrapped.
inline Table run_sweep(const Scenario& scenario) {
  Scenario sc = scenario;
  if (sc.unwrap) {
    for (Quantity& q : sc.outputs)
      if (q == Quantity::mu_principal) q = Quantity::mu_unwrapped;
    sc.outputs.erase(std::unique(sc.outputs.begin(), sc.outputs.end()),
                     sc.outputs.end());
  }
  Table table;
  table.columns.push_back(sweep_name(sc.sweep));
  for (Quantity q : sc.outputs) {
    if (q == Quantity::covariance) {
      table.columns.push_back("sxx");
      table.columns.push_back("sxp");
      table.columns.push_back("spp");
    } else {
      table.columns.push_back(quantity_name(q));
    }
  }

  std::optional<detail::GouyAccumulator> acc;  // time sweeps share one trace
  const bool has_unwrapped =
      std::find(sc.outputs.begin(), sc.outputs.end(), Quantity::mu_unwrapped) !=
      sc.outputs.end();

  for (long i = 0; i < sc.samples; ++i) {
    const double v = sc.lo + (sc.hi - sc.lo) * static_cast<double>(i) /
                                 static_cast<double>(sc.samples - 1);
    std::vector<std::optional<double>> row;
    row.push_back(v);
    std::string flag;
    auto note = [&](const Error& e) {
      if (flag.empty()) flag = errc_name(e.code());
    };

    std::optional<WavepacketSpec> spec;
    double t_eval = sc.time;
    try {
      switch (sc.sweep) {
        case SweepVariable::time:
          spec = make_spec(sc.omega0, sc.omega, sc.gamma, {sc.hbar, sc.mass});
          t_eval = v;
          break;
        case SweepVariable::omega:
          spec = make_spec(sc.omega0, v, sc.gamma, {sc.hbar, sc.mass});
          break;
        case SweepVariable::gamma:
          spec = make_spec(sc.omega0, sc.omega, v, {sc.hbar, sc.mass});
          break;
      }
    } catch (const Error& e) {
      note(e);
    }

    if (spec && sc.sweep == SweepVariable::time && has_unwrapped && !acc)
      acc.emplace(*spec, sc.lo);

    for (Quantity q : sc.outputs) {
      const std::size_t arity = (q == Quantity::covariance) ? 3 : 1;
      if (!spec) {
        for (std::size_t k = 0; k < arity; ++k) row.push_back(std::nullopt);
        continue;
      }
      try {
        switch (q) {
          case Quantity::width:
            row.push_back(width(*spec, t_eval));
            break;
          case Quantity::inv_curvature:
            row.push_back(inv_curvature(*spec, t_eval));
            break;
          case Quantity::mu_principal:
            row.push_back(gouy_principal(*spec, t_eval));
            break;
          case Quantity::mu_unwrapped:
            if (sc.sweep == SweepVariable::time)
              row.push_back(acc->advance_to(t_eval));
            else
              row.push_back(detail::unwrapped_from_zero(*spec, t_eval));
            break;
          case Quantity::gouy_rate:
            row.push_back(gouy_rate(*spec, t_eval));
            break;
          case Quantity::wigner:
            row.push_back(wigner_gaussian(evolved_covariance(*spec, t_eval), 0.0, 0.0));
            break;
          case Quantity::cfi:
            row.push_back(cfi_closed_form(*spec, t_eval));
            break;
          case Quantity::qfi:
            row.push_back(qfi_closed_form(*spec, t_eval));
            break;
          case Quantity::covariance: {
            const CovarianceState cov = evolved_covariance(*spec, t_eval);
            row.push_back(cov.sxx);
            row.push_back(cov.sxp);
            row.push_back(cov.spp);
            break;
          }
        }
      } catch (const Error& e) {
        note(e);
        for (std::size_t k = 0; k < arity; ++k) row.push_back(std::nullopt);
      }
    }
    table.rows.push_back(std::move(row));
    table.flags.push_back(flag);
  }
  return table;
}

enum class FigureId { fig1, fig2, fig3, fig4, fig5, fig6, fig7, figA };

inline std::optional<FigureId> figure_id_from_name(const std::string& name) {
  if (name == "fig1") return FigureId::fig1;
  if (name == "fig2") return FigureId::fig2;
  if (name == "fig3") return FigureId::fig3;
  if (name == "fig4") return FigureId::fig4;
  if (name == "fig5") return FigureId::fig5;
  if (name == "fig6") return FigureId::fig6;
  if (name == "fig7") return FigureId::fig7;
  if (name == "figA" || name == "figa") return FigureId::figA;
  return std::nullopt;
}

// Base time-axis scenario for the recipes that are plain t-sweeps, with the
// recipe's published parameters frozen in. gamma is a free argument so the
// same axis can be re-run at any correlation value.
inline Scenario figure_scenario(FigureId id, double gamma) {
  Scenario sc;
  sc.sweep = SweepVariable::time;
  sc.gamma = gamma;
  switch (id) {
    case FigureId::fig2:
      sc.omega0 = 1.0;
      sc.omega = 0.1;
      sc.lo = 0.0;
      sc.hi = 70.0;
      sc.samples = 70001;
      sc.outputs = {Quantity::width, Quantity::mu_principal, Quantity::mu_unwrapped};
      return sc;
    case FigureId::fig3:
      sc.omega0 = 1.0;
      sc.omega = 10.0;
      sc.lo = 0.0;
      sc.hi = 2.0 * pi / 10.0;  // two width periods; grid hits the quarter points
      sc.samples = 2001;
      sc.outputs = {Quantity::width, Quantity::mu_principal};
      return sc;
    case FigureId::fig4:
      sc.omega0 = 1.0;
      sc.omega = 1.0;
      sc.lo = 0.0;
      sc.hi = 2.0 * pi;
      sc.samples = 4001;
      sc.outputs = {Quantity::width, Quantity::mu_principal, Quantity::mu_unwrapped};
      return sc;
    case FigureId::fig6:
      sc.omega0 = 1.0;
      sc.omega = 1.0;
      sc.lo = 0.0;
      sc.hi = pi;
      sc.samples = 1001;
      sc.outputs = {Quantity::width, Quantity::mu_unwrapped};
      return sc;
    case FigureId::fig7:
      sc.omega0 = 1.0;
      sc.omega = 1.0;
      sc.lo = 0.0;
      sc.hi = pi;
      sc.samples = 501;
      sc.outputs = {Quantity::cfi, Quantity::qfi, Quantity::mu_principal};
      return sc;
    default:
      fail(Errc::validation_error, "figure has no single time-sweep scenario");
  }
}

namespace detail {

inline void write_table_file(const Table& table, const std::string& path,
                             OutputFormat format, const std::string& echo) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io_failure, "cannot open '" + path + "' for writing");
  if (format == OutputFormat::csv) write_csv(table, os);
  else write_json(table, echo, os);
  os.flush();
  if (!os) fail(Errc::io_failure, "write to '" + path + "' failed");
}

inline std::string file_ext(OutputFormat f) {
  return f == OutputFormat::csv ? ".csv" : ".json";
}

}  // namespace detail

// Emits the plottable dataset(s) behind one published figure into out_dir and
// returns the written paths. Datasets are deterministic: identical inputs
// give byte-identical files.
//
// fig1  three files (gamma = -1, 0, 1): gouy phase and width vs omega-omega0
//       at omega0 = 10, t = 1; 2001 samples over [-10, 30]. The omega = 0 row
//       is flagged. mu is the principal branch unless `unwrapped` is set.
// fig2  per-gamma short-time (t in [0, 1.5]) and long-time (t in [0, 70])
//       files at omega = 0.1, omega0 = 1.
// fig3  three files (gamma = -10, 0, 10) at omega = 10, omega0 = 1.
// fig4  two files (gamma = -1, 1) at resonance omega = omega0 = 1.
// fig5  mu and width grids over gamma in [-3, 3] x t in [0, pi], resonance.
// fig6  three files (gamma = 0, 0.1, 0.5): exact and weak-correlation values.
// fig7  per-gamma (1, 3) Fisher columns (omega_t, cfi, qfi, mu_principal)
//       plus the parametric (mu, cfi) dataset; fig7c_rescale divides the
//       gamma = 3 parametric trace by 9 as in the published panel.
// figA  Wigner grids (x, p, w) on [-4, 4]^2, 201 x 201, gamma = -1, 0, 1.
inline std::vector<std::string> emit_figure(FigureId id, const std::string& out_dir,
                                            OutputFormat format = OutputFormat::csv,
                                            bool unwrapped = false,
                                            bool fig7c_rescale = false) {
  std::vector<std::string> written;
  const std::string ext = detail::file_ext(format);
  auto emit = [&](const Table& t, const std::string& stem) {
    const std::string path = out_dir + "/" + stem + ext;
    detail::write_table_file(t, path, format, "");
    written.push_back(path);
  };

  switch (id) {
    case FigureId::fig1: {
      const double omega0 = 10.0, t = 1.0;
      const struct { double gamma; const char* tag; } panels[] = {
          {-1.0, "gamma_m1"}, {0.0, "gamma_0"}, {1.0, "gamma_p1"}};
      for (const auto& pnl : panels) {
        Table tab;
        tab.columns = {"omega_minus_omega0", "mu", "B"};
        const long n = 2001;
        for (long i = 0; i < n; ++i) {
          const double delta = -10.0 + 40.0 * static_cast<double>(i) / (n - 1);
          std::vector<std::optional<double>> row{delta, std::nullopt, std::nullopt};
          std::string flag;
          try {
            const WavepacketSpec spec =
                make_spec(omega0, omega0 + delta, pnl.gamma, {});
            row[1] = unwrapped ? detail::unwrapped_from_zero(spec, t)
                               : gouy_principal(spec, t);
            row[2] = width(spec, t);
          } catch (const Error& e) {
            flag = errc_name(e.code());
          }
          tab.rows.push_back(std::move(row));
          tab.flags.push_back(flag);
        }
        emit(tab, std::string("fig1_") + pnl.tag);
      }
      break;
    }
    case FigureId::fig2: {
      const struct { double gamma; const char* tag; } short_panels[] = {
          {-1.0, "gamma_m1"}, {0.0, "gamma_0"}, {1.0, "gamma_p1"}};
      for (const auto& pnl : short_panels) {
        Scenario sc = figure_scenario(FigureId::fig2, pnl.gamma);
        sc.lo = 0.0;
        sc.hi = 1.5;
        sc.samples = 1501;
        emit(run_sweep(sc), std::string("fig2_short_") + pnl.tag);
      }
      for (double g : {0.0, 1.0}) {
        const Scenario sc = figure_scenario(FigureId::fig2, g);
        emit(run_sweep(sc), g == 0.0 ? "fig2_long_gamma_0" : "fig2_long_gamma_p1");
      }
      break;
    }
    case FigureId::fig3: {
      const struct { double gamma; const char* tag; } panels[] = {
          {-10.0, "gamma_m10"}, {0.0, "gamma_0"}, {10.0, "gamma_p10"}};
      for (const auto& pnl : panels)
        emit(run_sweep(figure_scenario(FigureId::fig3, pnl.gamma)),
             std::string("fig3_") + pnl.tag);
      break;
    }
    case FigureId::fig4: {
      const struct { double gamma; const char* tag; } panels[] = {
          {-1.0, "gamma_m1"}, {1.0, "gamma_p1"}};
      for (const auto& pnl : panels)
        emit(run_sweep(figure_scenario(FigureId::fig4, pnl.gamma)),
             std::string("fig4_") + pnl.tag);
      break;
    }
    case FigureId::fig5: {
      const WavepacketSpec base = make_spec(1.0, 1.0, 0.0, {});
      const long ng = 121, nt = 201;
      Table mu_tab, b_tab;
      mu_tab.columns = {"gamma", "t", "mu"};
      b_tab.columns = {"gamma", "t", "B"};
      for (long gi = 0; gi < ng; ++gi) {
        const double g = -3.0 + 6.0 * static_cast<double>(gi) / (ng - 1);
        const WavepacketSpec spec = make_spec(base.omega0, base.omega, g, {});
        for (long ti = 0; ti < nt; ++ti) {
          const double t = pi * static_cast<double>(ti) / (nt - 1);
          mu_tab.rows.push_back({g, t, gouy_principal(spec, t)});
          mu_tab.flags.emplace_back();
          b_tab.rows.push_back({g, t, width(spec, t)});
          b_tab.flags.emplace_back();
        }
      }
      emit(mu_tab, "fig5_mu");
      emit(b_tab, "fig5_width");
      break;
    }
    case FigureId::fig6: {
      const struct { double gamma; const char* tag; } panels[] = {
          {0.0, "gamma_0"}, {0.1, "gamma_0p1"}, {0.5, "gamma_0p5"}};
      for (const auto& pnl : panels) {
        const Scenario sc = figure_scenario(FigureId::fig6, pnl.gamma);
        const WavepacketSpec spec =
            make_spec(sc.omega0, sc.omega, sc.gamma, {sc.hbar, sc.mass});
        Table tab = run_sweep(sc);
        tab.columns.push_back("B_weak");
        tab.columns.push_back("mu_weak");
        for (auto& row : tab.rows) {
          const double t = *row[0];
          const ExpansionValues weak = expand_weak_correlation(spec, t);
          row.push_back(weak.width);
          row.push_back(weak.gouy);
        }
        emit(tab, std::string("fig6_") + pnl.tag);
      }
      break;
    }
    case FigureId::fig7: {
      const struct { double gamma; const char* tag; } panels[] = {
          {1.0, "gamma_1"}, {3.0, "gamma_3"}};
      for (const auto& pnl : panels) {
        const Scenario sc = figure_scenario(FigureId::fig7, pnl.gamma);
        const WavepacketSpec spec =
            make_spec(sc.omega0, sc.omega, sc.gamma, {sc.hbar, sc.mass});
        Table tab;
        tab.columns = {"omega_t", "cfi", "qfi", "mu_principal"};
        for (long i = 0; i < sc.samples; ++i) {
          const double t = sc.lo + (sc.hi - sc.lo) * static_cast<double>(i) /
                                       static_cast<double>(sc.samples - 1);
          tab.rows.push_back({spec.omega * t, cfi_closed_form(spec, t),
                              qfi_closed_form(spec, t), gouy_principal(spec, t)});
          tab.flags.emplace_back();
        }
        emit(tab, std::string("fig7_") + pnl.tag);
      }
      {  // parametric panel: CFI against the Gouy phase over one period
        Table tab;
        tab.columns = {"omega_t", "mu_principal", "cfi_gamma_1", "cfi_gamma_3"};
        const WavepacketSpec s1 = make_spec(1.0, 1.0, 1.0, {});
        const WavepacketSpec s3 = make_spec(1.0, 1.0, 3.0, {});
        const long n = 501;
        for (long i = 0; i < n; ++i) {
          const double t = pi * static_cast<double>(i) / (n - 1);
          const double scale3 = fig7c_rescale ? 1.0 / 9.0 : 1.0;
          tab.rows.push_back({t, gouy_principal(s1, t), cfi_closed_form(s1, t),
                              scale3 * cfi_closed_form(s3, t)});
          tab.flags.emplace_back();
        }
        emit(tab, "fig7_parametric");
      }
      break;
    }
    case FigureId::figA: {
      const struct { double gamma; const char* tag; } panels[] = {
          {-1.0, "gamma_m1"}, {0.0, "gamma_0"}, {1.0, "gamma_p1"}};
      for (const auto& pnl : panels) {
        const CovarianceState cov = initial_covariance(pnl.gamma);
        Table tab;
        tab.columns = {"x", "p", "w"};
        const long n = 201;
        for (long xi = 0; xi < n; ++xi) {
          const double x = -4.0 + 8.0 * static_cast<double>(xi) / (n - 1);
          for (long pj = 0; pj < n; ++pj) {
            const double p = -4.0 + 8.0 * static_cast<double>(pj) / (n - 1);
            tab.rows.push_back({x, p, wigner_gaussian(cov, x, p)});
            tab.flags.emplace_back();
          }
        }
        emit(tab, std::string("figA_") + pnl.tag);
      }
      break;
    }
  }
  return written;
}

// Closed-form vs quadrature self-check battery.
struct OracleCheckRow {
  double omega = 0.0;
  double gamma = 0.0;
  double t = 0.0;
  std::optional<double> rel_l2;
  std::optional<double> width_rel_err;
  std::optional<double> inv_curv_abs_err;
  std::optional<double> gouy_abs_err;  // circular distance modulo pi/2
  std::string flag;
};

struct OracleCheckReport {
  std::vector<OracleCheckRow> rows;
  double worst_l2 = 0.0;
  bool ok = true;  // every unflagged rel_l2 <= 1e-6
};

inline std::vector<WavepacketSpec> oracle_default_battery() {
  std::vector<WavepacketSpec> specs;
  for (double omega : {0.3, 0.7, 1.0, 2.5})
    for (double gamma : {-1.0, 0.0, 1.0})
      specs.push_back(make_spec(1.0, omega, gamma, {}));
  return specs;
}

inline OracleCheckReport oracle_check(const std::vector<WavepacketSpec>& specs,
                                      const std::vector<double>& times,
                                      const QuadratureConfig& cfg = {}) {
  OracleCheckReport report;
  for (const WavepacketSpec& spec : specs) {
    for (double t : times) {
      OracleCheckRow row;
      row.omega = spec.omega;
      row.gamma = spec.gamma;
      row.t = t;
      try {
        const double b = width(spec, t);
        const double half = 10.0 * std::max(spec.sigma0, b);
        const std::vector<double> xs = linspace(-half, half, 257);
        const ComplexField numeric = evolve_numeric(spec, t, xs, cfg);
        const ComplexField closed = closed_form_state(spec, t, xs);
        row.rel_l2 = relative_l2_distance(numeric, closed);
        const GaussianFit fit = fit_gaussian_params(numeric, spec.units);
        row.width_rel_err = std::fabs(fit.width - b) / b;
        try {
          row.inv_curv_abs_err = std::fabs(fit.inv_curvature - inv_curvature(spec, t));
        } catch (const Error&) {
          // focal-adjacent plane-phase handling; leave empty
        }
        row.gouy_abs_err = std::fabs(
            std::remainder(fit.gouy_raw - gouy_principal(spec, t), 0.5 * pi));
        report.worst_l2 = std::max(report.worst_l2, *row.rel_l2);
        if (*row.rel_l2 > 1e-6) report.ok = false;
      } catch (const Error& e) {
        row.flag = errc_name(e.code());
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace harmwave
