#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "harmwave/dataset.hpp"

using namespace harmwave;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t column_index(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  FAIL("missing column " + name);
  return 0;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("slow-trap sweep reproduces the width landmarks") {
  const Scenario sc = figure_scenario(FigureId::fig2, 0.0);
  const Table tab = run_sweep(sc);
  REQUIRE(tab.rows.size() == static_cast<std::size_t>(sc.samples));
  const auto bcol = column_index(tab, "B");
  // grid argmax of the B column around each landmark
  auto argmax_in = [&](double lo, double hi) {
    double best_t = lo, best = -1.0;
    for (const auto& row : tab.rows) {
      const double t = *row[0];
      if (t < lo || t > hi) continue;
      if (*row[bcol] > best) {
        best = *row[bcol];
        best_t = t;
      }
    }
    return best_t;
  };
  CHECK(argmax_in(5.0, 25.0) == Approx(15.70796).margin(1e-3));
  CHECK(argmax_in(40.0, 55.0) == Approx(47.12389).margin(1e-3));
}

TEST_CASE("resonant sweep unwraps the linear gouy phase") {
  const Scenario sc = figure_scenario(FigureId::fig4, 0.0);
  const Table tab = run_sweep(sc);
  const auto mu_col = column_index(tab, "mu_unwrapped");
  for (const auto& row : tab.rows)
    CHECK(*row[mu_col] == Approx(0.5 * *row[0]).margin(1e-9));
  for (const auto& f : tab.flags) CHECK(f.empty());
}

TEST_CASE("fast-trap sweep reaches the squeezing floor omega0/omega") {
  const Scenario sc = figure_scenario(FigureId::fig3, 0.0);
  const Table tab = run_sweep(sc);
  const auto bcol = column_index(tab, "B");
  double bmin = 1e300;
  for (const auto& row : tab.rows) bmin = std::min(bmin, *row[bcol]);
  CHECK(bmin == Approx(0.1).margin(1e-9));
}

TEST_CASE("sweep rows flag domain errors instead of aborting") {
  Scenario sc;
  sc.omega0 = 1.0;
  sc.omega = 1.0;
  sc.gamma = 0.0;
  sc.sweep = SweepVariable::time;
  sc.lo = 0.0;
  sc.hi = 2.0 * pi;
  sc.samples = 9;  // hits t = 0 and t = pi: curvature singularities
  sc.outputs = {Quantity::width, Quantity::inv_curvature};
  const Table tab = run_sweep(sc);
  REQUIRE(tab.rows.size() == 9);
  int flagged = 0;
  for (std::size_t r = 0; r < tab.rows.size(); ++r) {
    CHECK(tab.rows[r][1].has_value());  // width always fine
    if (!tab.flags[r].empty()) {
      ++flagged;
      CHECK(tab.flags[r] == "CurvatureSingular");
      CHECK_FALSE(tab.rows[r][2].has_value());
    }
  }
  CHECK(flagged == 3);  // t = 0, pi, 2 pi
}

TEST_CASE("non-resonant fisher columns flag NotResonant") {
  Scenario sc;
  sc.omega0 = 1.0;
  sc.omega = 0.5;
  sc.gamma = 1.0;
  sc.sweep = SweepVariable::time;
  sc.lo = 0.1;
  sc.hi = 1.0;
  sc.samples = 4;
  sc.outputs = {Quantity::cfi, Quantity::qfi};
  const Table tab = run_sweep(sc);
  for (const auto& f : tab.flags) CHECK(f == "NotResonant");
}

TEST_CASE("omega sweep flags the non-positive frequency row") {
  Scenario sc;
  sc.omega0 = 10.0;
  sc.gamma = 0.0;
  sc.sweep = SweepVariable::omega;
  sc.lo = 0.0;  // first row omega = 0 is invalid by construction
  sc.hi = 40.0;
  sc.samples = 5;
  sc.time = 1.0;
  sc.outputs = {Quantity::width};
  const Table tab = run_sweep(sc);
  REQUIRE(tab.rows.size() == 5);
  CHECK(tab.flags[0] == "NonPositiveFrequency");
  CHECK_FALSE(tab.rows[0][1].has_value());
  for (std::size_t r = 1; r < 5; ++r) CHECK(tab.flags[r].empty());
}

TEST_CASE("unwrap promotes principal mu columns") {
  Scenario sc = figure_scenario(FigureId::fig4, 0.0);
  sc.outputs = {Quantity::width, Quantity::mu_principal};
  sc.unwrap = true;
  const Table tab = run_sweep(sc);
  REQUIRE(tab.columns.size() == 3);
  CHECK(tab.columns[2] == "mu_unwrapped");
  CHECK(*tab.rows.back()[2] == Approx(pi).margin(1e-9));  // t = 2 pi, mu = t/2
}

TEST_CASE("unwrapped phase accumulates backward for negative times") {
  Scenario sc;
  sc.omega0 = 1.0;
  sc.omega = 1.0;
  sc.gamma = 0.0;
  sc.sweep = SweepVariable::gamma;
  sc.lo = 0.0;
  sc.hi = 1.0;
  sc.samples = 2;
  sc.time = -2.0;  // mu = omega t / 2 = -1 for the uncorrelated row
  sc.outputs = {Quantity::mu_unwrapped};
  const Table tab = run_sweep(sc);
  CHECK(*tab.rows[0][1] == Approx(-1.0).margin(1e-9));
}

TEST_CASE("csv shape: fixed header, LF endings, 17 significant digits") {
  Table t;
  t.columns = {"t", "B"};
  t.rows.push_back({0.1, 1.2345678901234567});
  t.rows.push_back({std::nullopt, 2.0});
  t.flags = {"", "CurvatureSingular"};
  std::ostringstream os;
  write_csv(t, os);
  const std::string text = os.str();
  CHECK(text == "t,B,flag\n0.10000000000000001,1.2345678901234567,\n,2,CurvatureSingular\n");
  // the printed value round-trips to the same double
  CHECK(std::stod("1.2345678901234567") == 1.2345678901234567);
}

TEST_CASE("json payload carries the scenario echo and null gaps") {
  Table t;
  t.columns = {"t", "B"};
  t.rows.push_back({0.5, std::nullopt});
  t.flags = {"KernelSingular"};
  std::ostringstream os;
  write_json(t, "{\"omega0\":1}", os);
  const std::string text = os.str();
  CHECK(text.find("\"scenario\":{\"omega0\":1}") != std::string::npos);
  CHECK(text.find("\"B\":null") != std::string::npos);
  CHECK(text.find("\"flag\":\"KernelSingular\"") != std::string::npos);
}

TEST_CASE("figure emission is deterministic") {
  const auto dir1 = fresh_dir("harmwave_det_run1");
  const auto dir2 = fresh_dir("harmwave_det_run2");
  for (FigureId id : {FigureId::fig4, FigureId::fig7}) {
    const auto files1 = emit_figure(id, dir1.string());
    const auto files2 = emit_figure(id, dir2.string());
    REQUIRE(files1.size() == files2.size());
    for (std::size_t i = 0; i < files1.size(); ++i)
      CHECK(slurp(files1[i]) == slurp(files2[i]));
  }
}

TEST_CASE("fig7 files carry the published column set") {
  const auto dir = fresh_dir("harmwave_fig7");
  const auto files = emit_figure(FigureId::fig7, dir.string());
  REQUIRE(files.size() == 3);
  const std::string head = slurp(files[0]).substr(0, 64);
  CHECK(head.rfind("omega_t,cfi,qfi,mu_principal,flag\n", 0) == 0);
}

TEST_CASE("figA wigner grids tilt with the correlation sign") {
  const auto dir = fresh_dir("harmwave_figA");
  const auto files = emit_figure(FigureId::figA, dir.string());
  REQUIRE(files.size() == 3);
  // re-read gamma = +1 panel and compare W(1,1) vs W(1,-1)
  const std::string text = slurp(dir.string() + "/figA_gamma_p1.csv");
  double w_pp = -1.0, w_pm = -1.0;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    double x, p, w;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &p, &w) == 3) {
      if (std::fabs(x - 1.0) < 1e-12 && std::fabs(p - 1.0) < 1e-12) w_pp = w;
      if (std::fabs(x - 1.0) < 1e-12 && std::fabs(p + 1.0) < 1e-12) w_pm = w;
    }
  }
  REQUIRE(w_pp > 0.0);
  REQUIRE(w_pm > 0.0);
  CHECK(w_pp > w_pm);
}

TEST_CASE("fig1 covers the frequency sweep with a flagged omega = 0 row") {
  const auto dir = fresh_dir("harmwave_fig1");
  const auto files = emit_figure(FigureId::fig1, dir.string());
  REQUIRE(files.size() == 3);
  const std::string text = slurp(dir.string() + "/fig1_gamma_0.csv");
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  CHECK(line == "omega_minus_omega0,mu,B,flag");
  std::getline(is, line);  // first row: omega - omega0 = -10 -> omega = 0
  CHECK(line.find("NonPositiveFrequency") != std::string::npos);
  std::size_t rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2001);
}

TEST_CASE("oracle battery passes and flags focal times") {
  // one time per spec keeps this fast; the acceptance suite runs the full set
  const auto report = oracle_check(oracle_default_battery(), {1.1});
  REQUIRE(report.rows.size() == 12);
  CHECK(report.ok);
  CHECK(report.worst_l2 <= 1e-8);
  for (const auto& row : report.rows) {
    CHECK(row.flag.empty());
    CHECK(*row.width_rel_err < 1e-6);
    CHECK(*row.gouy_abs_err < 1e-6);
  }

  // pi is focal for the omega = 1 specs only; those rows are flagged
  const auto report2 = oracle_check({make_spec(1.0, 1.0, 0.0, {})}, {pi, 1.4});
  REQUIRE(report2.rows.size() == 2);
  CHECK(report2.rows[0].flag == "KernelSingular");
  CHECK(report2.rows[1].flag.empty());
  CHECK(report2.ok);

  // tightening the rule must not hurt
  QuadratureConfig tight;
  tight.panels = 128;
  const auto report3 = oracle_check({make_spec(1.0, 0.7, 1.0, {})}, {1.1}, tight);
  CHECK(report3.worst_l2 <= report.worst_l2 * 10.0 + 1e-12);
  CHECK(report3.ok);
}

TEST_CASE("figure scenarios exist only for time-axis recipes") {
  CHECK_THROWS_AS(figure_scenario(FigureId::fig1, 0.0), Error);
  CHECK_THROWS_AS(figure_scenario(FigureId::fig5, 0.0), Error);
  CHECK_THROWS_AS(figure_scenario(FigureId::figA, 0.0), Error);
  CHECK(figure_id_from_name("fig3").has_value());
  CHECK(figure_id_from_name("figA").has_value());
  CHECK_FALSE(figure_id_from_name("fig9").has_value());
}
