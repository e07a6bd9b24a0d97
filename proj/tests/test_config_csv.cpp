#include <sstream>

#include "doctest.h"
#include "enaqt/csv.hpp"
#include "enaqt/sweep_config.hpp"

using namespace enaqt;

TEST_CASE("grid expressions") {
  CHECK(parse_grid("0:1:0.25") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_grid("0.1, 0.5,2") == std::vector<double>{0.1, 0.5, 2.0});
  CHECK(parse_grid("0.3") == std::vector<double>{0.3});
  const auto l = parse_grid("log:0.01:100:5");
  REQUIRE(l.size() == 5);
  CHECK(l[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_grid(""), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("a,b"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("0:1"), InvalidArgument);
}

TEST_CASE("config defaults") {
  const SweepConfig config;
  const auto grid = config.grid();
  CHECK(grid.disorder_values.size() == 26);
  CHECK(grid.dephasing_values.size() == 25);
  CHECK(grid.n_realizations == 100);
  const auto setup = config.setup();
  CHECK(setup.topology.n_sites() == 31);
  CHECK(setup.initial.kind == InitialState::leaf_mixture().kind);
  CHECK(setup.trap_rate == 1.0);
  CHECK(setup.recomb_rate == 0.01);
  CHECK(setup.convention == DephasingConvention::kHalfRate);
}

TEST_CASE("config files") {
  const std::string text =
      "# hypercube run\n"
      "graph = hypercube\n"
      "dimension = 3\n"
      "kappa = 0.5   # slower trap\n"
      "gamma_recomb = 1e-3\n"
      "disorder = 0,0.5\n"
      "dephasing = 0:0.2:0.1\n"
      "realizations = 7\n"
      "convention = lindblad\n"
      "seed = 99\n"
      "solver = dense\n";
  const auto config = parse_sweep_config(text);
  const auto setup = config.setup();
  CHECK(setup.topology.kind() == GraphKind::kHypercube);
  CHECK(setup.topology.n_sites() == 8);
  CHECK(setup.initial.kind == InitialState::uniform_mixture().kind);
  CHECK(setup.trap_rate == 0.5);
  CHECK(setup.recomb_rate == 1e-3);
  CHECK(setup.master_seed == 99);
  CHECK(setup.solver == SolverKind::kLiouvillianDense);
  CHECK(setup.convention == DephasingConvention::kLindblad);
  CHECK(config.grid().dephasing_values.size() == 3);
  CHECK(config.grid().n_realizations == 7);

  CHECK_THROWS_AS(parse_sweep_config("colour = blue\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_sweep_config("kappa = fast\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_sweep_config("kappa\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_sweep_config("gamma_recomb = -1\n"), InvalidArgument);
  CHECK_THROWS_AS(load_sweep_config("/nonexistent/sweep.cfg"), InvalidArgument);
}

TEST_CASE("trap and init settings") {
  SweepConfig config;
  apply_setting(config, "trap", "4");
  apply_setting(config, "init", "site:30");
  const auto setup = config.setup();
  CHECK(setup.trap.resolve(setup.topology) == 4);
  CHECK(setup.initial.site == 30);
  CHECK_THROWS_AS(parse_trap("-1"), InvalidArgument);
  CHECK(parse_trap("root").vertex == std::nullopt);
}

TEST_CASE("number formatting") {
  CHECK(csv::format(0.5) == "0.5");
  CHECK(csv::format(1e-12) == "1e-12");
  CHECK(csv::parse_double("2.5e-3") == 2.5e-3);
  CHECK_THROWS_AS(csv::parse_double("2.5x"), InvalidArgument);
  CHECK(csv::split("a,,b") == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("sweep CSV round trip") {
  SweepTable table;
  table.rows.push_back({0.0, 0.1, 0.304123456789, 0.0, 1, 0.69});
  table.rows.push_back({0.8, 0.1, 0.466, 0.0041, 100, 0.52});
  std::stringstream buffer;
  csv::write_sweep(buffer, table);
  std::string first;
  std::string second;
  std::getline(buffer, first);
  std::getline(buffer, second);
  CHECK(first == csv::kUnitsComment);
  CHECK(second == csv::kSweepHeader);
  buffer.seekg(0);
  const auto back = csv::read_sweep(buffer);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].eta_mean == doctest::Approx(0.304123456789).epsilon(1e-12));
  CHECK(back.rows[1].n == 100);
  CHECK(back.rows[1].eta_stderr == 0.0041);

  std::istringstream bad("delta,gamma\n0,0\n");
  CHECK_THROWS_AS(csv::read_sweep(bad), InvalidArgument);
}

TEST_CASE("trajectory and delta max CSV") {
  TrapObservables obs{{0.0, 0.5}, {0.0, 0.1}, {0.0, -0.2}, {0.0, 0.05}, {1.0, 0.99}};
  std::stringstream out;
  csv::write_trap_observables(out, obs);
  CHECK(out.str() == std::string(csv::kUnitsComment) + "\n" + csv::kTrajectoryHeader +
                         "\n0,0,0,0,1\n0.5,0.1,-0.2,0.05,0.99\n");
  std::stringstream dm;
  csv::write_delta_max(dm, {DeltaMax{0.2, 0.17, 0.8, 0.3, 0.47, 0.004}});
  CHECK(dm.str().find("0.2,0.17,0.8,0.3,0.47,0.004") != std::string::npos);
}
