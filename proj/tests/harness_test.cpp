#include "fvlab/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fvlab/io.hpp"
#include "fvlab/report.hpp"

using namespace fvlab;

TEST(FormatDouble, ShortestRoundTripForm) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(0.1), "0.1");
  for (double v : {1.0 / 3.0, 1e-12, 6.02e23, -0.0625, 3.141592653589793})
    EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Fnv1a64, ReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(fnv1a64("hello world"), 0x779a65e7023cd2e7ULL);
}

TEST(Hex64, FixedWidthLowercase) {
  EXPECT_EQ(hex64(0), "0000000000000000");
  EXPECT_EQ(hex64(0xdeadbeefULL), "00000000deadbeef");
  EXPECT_EQ(hex64(0xffffffffffffffffULL), "ffffffffffffffff");
}

TEST(ConvergenceReport, ObservedOrderExamples) {
  ConvergenceReport rep;
  rep.add_row({1.0, 0.1, {}, 1.0});
  rep.add_row({0.5, 0.05, {}, 0.5});
  rep.add_row({0.25, 0.025, {}, 0.5});
  const std::vector<double> orders = rep.observed_orders();
  ASSERT_EQ(orders.size(), 2u);
  EXPECT_DOUBLE_EQ(orders[0], 1.0);
  EXPECT_DOUBLE_EQ(orders[1], 0.0);
}

TEST(ConvergenceReport, NonpositiveValuesGiveNanOrders) {
  ConvergenceReport rep;
  rep.add_row({1.0, 0.1, {}, 1.0});
  rep.add_row({0.5, 0.05, {}, 0.0});
  rep.add_row({0.5, 0.05, {}, 2.0});
  const std::vector<double> orders = rep.observed_orders();
  ASSERT_EQ(orders.size(), 2u);
  EXPECT_TRUE(std::isnan(orders[0]));  // zero value
  EXPECT_TRUE(std::isnan(orders[1]));  // equal h
}

TEST(ConvergenceReport, CsvLayoutAndExtrasChecking) {
  ConvergenceReport rep;
  rep.value_name = "sup_error";
  rep.extra_names = {"residual", "mass_drift"};
  rep.add_row({0.5, 0.1, {1.5, 1e-15}, 0.25});
  rep.add_row({0.25, 0.05, {1.4, 2e-15}, 0.125});
  const std::string csv = rep.to_csv();
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "h,dt,residual,mass_drift,sup_error,observed_order");
  std::getline(lines, line);
  EXPECT_EQ(line, "0.5,0.1,1.5,1e-15,0.25,");  // no order on the first row
  std::getline(lines, line);
  EXPECT_EQ(line, "0.25,0.05,1.4,2e-15,0.125,1");
  EXPECT_THROW(rep.add_row({0.1, 0.01, {1.0}, 0.05}), std::invalid_argument);
}

TEST(ConvergenceReport, JsonCarriesNamedExtrasAndNullNan) {
  ConvergenceReport rep;
  rep.experiment = "demo";
  rep.extra_names = {"alpha"};
  rep.add_row({1.0, 0.1, {2.0}, 1.0});
  rep.add_row({0.5, 0.05, {3.0}, -1.0});
  const nlohmann::json j = rep.to_json();
  EXPECT_EQ(j.at("experiment"), "demo");
  EXPECT_DOUBLE_EQ(j.at("rows")[0].at("extras").at("alpha").get<double>(), 2.0);
  EXPECT_TRUE(j.at("observed_orders")[0].is_null());
}

TEST(MeshJson, RoundTripsThroughTextExactly) {
  const Mesh1D mesh = random_mesh(0.0, 1.0, 17, 3.0, 7);
  const nlohmann::json parsed = nlohmann::json::parse(mesh_to_json(mesh).dump());
  const Mesh1D back = mesh_from_json(parsed);
  ASSERT_EQ(back.faces.size(), mesh.faces.size());
  for (std::size_t k = 0; k < mesh.faces.size(); ++k)
    EXPECT_EQ(back.faces[k], mesh.faces[k]);
  for (std::size_t k = 0; k < mesh.points.size(); ++k)
    EXPECT_EQ(back.points[k], mesh.points[k]);
  nlohmann::json bad = mesh_to_json(mesh);
  bad["points"] = std::vector<double>{0.5};
  EXPECT_THROW(mesh_from_json(bad), std::invalid_argument);
}

TEST(MacJson, GridAndStateRoundTrip) {
  const MacGrid g = MacGrid::build({0.0, 0.25, 1.0}, {0.0, 0.5, 0.75, 1.0});
  const MacGrid gback =
      mac_grid_from_json(nlohmann::json::parse(mac_grid_to_json(g).dump()));
  EXPECT_EQ(gback.nx(), g.nx());
  EXPECT_EQ(gback.ny(), g.ny());
  for (int i = 0; i <= g.nx(); ++i) EXPECT_EQ(gback.x_faces[i], g.x_faces[i]);

  MacState s;
  s.time = 0.375;
  s.rho.assign(g.cell_count(), 1.25);
  s.u.assign(g.vedge_count(), -0.5);
  s.v.assign(g.hedge_count(), 0.75);
  const MacState sback =
      mac_state_from_json(nlohmann::json::parse(mac_state_to_json(s).dump()));
  EXPECT_EQ(sback.time, s.time);
  EXPECT_EQ(sback.rho, s.rho);
  EXPECT_EQ(sback.u, s.u);
  EXPECT_EQ(sback.v, s.v);
}

TEST(SchemeRunCsv, OneRowPerTimeLevelAndCell) {
  MeshPtr mesh = share(uniform_mesh(0.0, 1.0, 4));
  const TimeGrid tg = TimeGrid::with_steps(0.5, 2);
  const SchemeRun run = run_upwind_scheme(SchemeKind::FdUpwind, 1.0, mesh, tg,
                                          {1.0, 0.0, 0.0, 0.0});
  const std::string csv = scheme_run_to_csv(run);
  std::istringstream lines(csv);
  std::string line;
  int count = 0;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,i,x_i,value");
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 3 * 4);
}

TEST(ExperimentConfig, ValidationAndDefaults) {
  ExperimentConfig c;
  c.experiment = "poincare";
  EXPECT_NO_THROW(c.validate());
  c.levels = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.levels = 3;
  c.cfl_safety = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.cfl_safety = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.cfl_safety = 1.0;
  c.params = nlohmann::json::array();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.params = nlohmann::json::object();
  c.experiment.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);

  const ExperimentConfig d = ExperimentConfig::from_json(
      nlohmann::json::parse(R"({"experiment":"tvd","seed":7})"));
  EXPECT_EQ(d.experiment, "tvd");
  EXPECT_EQ(d.levels, 4);
  EXPECT_EQ(d.seed, 7u);
  EXPECT_DOUBLE_EQ(d.cfl_safety, 0.9);
  EXPECT_TRUE(d.params.is_object());
}

TEST(ExperimentConfig, HashTracksOnlyTheNumbers) {
  ExperimentConfig a;
  a.experiment = "poincare";
  a.params = {{"alpha", 1.0}, {"beta", 2.0}};
  ExperimentConfig b = a;
  b.params = {{"beta", 2.0}, {"alpha", 1.0}};  // same content, other insertion order
  b.out = "/tmp/somewhere-else";
  EXPECT_EQ(a.hash(), b.hash());
  b.seed = a.seed + 1;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(RunExperiment, UnknownIdIsRejectedAndCatalogIsComplete) {
  ExperimentConfig c;
  c.experiment = "no-such-study";
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  const auto catalog = experiment_catalog();
  EXPECT_EQ(catalog.size(), 10u);
  for (const auto& [id, description] : catalog) {
    EXPECT_FALSE(id.empty());
    EXPECT_FALSE(description.empty());
  }
}

TEST(RunExperiment, PoincareStudyPassesAndIsByteStable) {
  ExperimentConfig c;
  c.experiment = "poincare";
  c.levels = 3;
  const ExperimentResult first = run_experiment(c);
  EXPECT_TRUE(first.pass) << nlohmann::json(first.failures).dump();
  ASSERT_EQ(first.report.rows.size(), 3u);
  for (const ReportRow& row : first.report.rows) EXPECT_LE(row.value, 1.0);

  const ExperimentResult again = run_experiment(c);
  EXPECT_EQ(first.report.to_csv(), again.report.to_csv());
  EXPECT_EQ(first.summary.dump(), again.summary.dump());

  ExperimentConfig other = c;
  other.seed = c.seed + 1;
  const ExperimentResult differ = run_experiment(other);
  EXPECT_NE(first.report.to_csv(), differ.report.to_csv());
}

TEST(RunExperiment, WritesCsvAndJsonNextToThePrefix) {
  ExperimentConfig c;
  c.experiment = "poincare";
  c.levels = 3;
  c.out = ::testing::TempDir() + "poincare_report";
  const ExperimentResult result = run_experiment(c);
  const std::string csv = read_text_file(c.out + ".csv");
  EXPECT_EQ(csv, result.report.to_csv());
  const nlohmann::json summary = nlohmann::json::parse(read_text_file(c.out + ".json"));
  EXPECT_EQ(summary.at("experiment"), "poincare");
  EXPECT_EQ(summary.at("config_hash"), c.hash());
  EXPECT_EQ(summary.at("pass"), result.pass);
  std::remove((c.out + ".csv").c_str());
  std::remove((c.out + ".json").c_str());
}

TEST(RunExperiment, SummaryEmbedsTheReport) {
  ExperimentConfig c;
  c.experiment = "poincare";
  c.levels = 3;
  const ExperimentResult result = run_experiment(c);
  EXPECT_EQ(result.summary.at("report").at("experiment"), "poincare");
  EXPECT_EQ(result.summary.at("report").at("rows").size(), 3u);
  EXPECT_EQ(result.report.config_hash, c.hash());
}
