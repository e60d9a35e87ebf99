#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "frpfrac/scenario.hpp"
#include "frpfrac/simulation.hpp"

using namespace frpfrac;

namespace {
const std::string kTable1Path = std::string(FRPFRAC_SOURCE_DIR) + "/configs/table1_tension_uni_30deg.cfg";
}

TEST_CASE("config: the shipped reference file carries the composite material data") {
  std::vector<std::string> defaults;
  SimulationConfig c = load_config(kTable1Path, &defaults);
  CHECK(c.type == "tension_uni");
  CHECK(c.fiber_angle_deg == 30.0);
  CHECK(c.mu == std::vector<double>{1630.0});
  CHECK(c.alpha == std::vector<double>{2.0});
  CHECK(c.kappa == 6250.0);
  CHECK(c.beta == -2.0);
  CHECK(c.zeta == 0.53);
  CHECK(c.a == 79000.0);
  CHECK(c.b == 0.0);
  CHECK(c.c_par == 16.46);
  CHECK(c.y0 == 22.0);
  CHECK(c.y1 == 56.8);
  CHECK(c.y2 == 30.0);
  CHECK(c.omega_p1 == 1.0);
  CHECK(c.omega_p2 == 115.0);
  CHECK(c.eta_p == 5000.0);
  CHECK(c.n_p == 1.0);
  CHECK(c.l_p == 3.1);
  CHECK(c.f0 == 0.01);
  CHECK(c.q1 == 3.0);
  CHECK(c.q2 == 0.8);
  CHECK(c.gc_e == 500.0);
  CHECK(c.gc_p == 50.0);
  CHECK(c.omega_f == 3.0);
  CHECK(c.eta_f == 1e-7);
  CHECK(c.l_f == 3.1);
  CHECK(c.a_g == 0.001);
  CHECK(c.c_mat == 1860.0);
  CHECK(c.c_fib == 2080.0);
  CHECK(c.epsilon == 106e-6);
  CHECK(c.upsilon == 5e-6);
  CHECK(c.gamma_exp == 1.0);
  CHECK(c.conductivity == 0.25);
  CHECK(c.convection == 0.0);
  CHECK(c.theta_ref == 293.0);
  CHECK(c.nu_p == 0.9);

  // unit conversions into the working system
  PhysicsParams p = c.to_physics();
  CHECK(p.matrix.c_mat == Catch::Approx(1.86));
  CHECK(p.fiber.c_fib == Catch::Approx(2.08));
  CHECK(p.fracture.gce == 500.0);  // kJ/m^2 is N/mm one-to-one
  CHECK(p.thermal.K_mat == 0.25);  // W/(m K) is N/(s K) one-to-one
  CHECK(p.fiber.L[0] == Catch::Approx(std::cos(M_PI / 6)));
  CHECK(p.fiber.wL == Catch::Approx(0.47));
  CHECK(p.fiber.wM == 0.0);
}

TEST_CASE("config: error paths") {
  std::istringstream empty("");
  CHECK_THROWS_WITH(parse_config(empty), Catch::Matchers::ContainsSubstring("missing required keys"));

  std::istringstream unknown("[scenario]\ntype = tension_uni\nfoo = 1\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);

  std::istringstream badsec("[nonsense]\nx = 1\n");
  CHECK_THROWS_AS(parse_config(badsec), ConfigError);

  // l_f > l_p violates the regularization requirement
  std::string base = "[scenario]\ntype = tension_uni\n[matrix]\nmu=1630\nalpha=2\nkappa=6250\nbeta=-2\n"
                     "zeta=0.53\n[fiber]\na=79000\nc_par=16.46\nc_perp=16.46\n";
  std::istringstream badlen(base + "[plastic]\nl_p = 1.0\n[fracture]\nl_f = 3.1\n");
  CHECK_THROWS_WITH(parse_config(badlen), Catch::Matchers::ContainsSubstring("l_p"));

  std::istringstream badnum(base + "[plastic]\ny0 = twelve\n");
  CHECK_THROWS_AS(parse_config(badnum), ConfigError);
}

TEST_CASE("config: serialize-parse round trip is exact") {
  SimulationConfig c = load_config(kTable1Path);
  c.fiber_angle_deg = 33.33333333333333;
  c.eta_f = 1.2345678901234567e-7;
  const std::string text = serialize_config(c);
  std::istringstream in(text);
  SimulationConfig c2 = parse_config(in);
  CHECK(serialize_config(c2) == text);
  CHECK(c2.fiber_angle_deg == c.fiber_angle_deg);
  CHECK(c2.eta_f == c.eta_f);
  CHECK(c2.mu == c.mu);
  CHECK(c2.elements == c.elements);
}

TEST_CASE("scenario: generators produce the documented geometries and boundary sets") {
  std::vector<std::string> geom_defaults = {"geometry.length", "geometry.width", "geometry.height",
                                            "geometry.elements"};
  {
    SimulationConfig c;
    c.type = "in_plane_bending";
    Scenario sc = build_scenario(c, geom_defaults);
    CHECK(sc.patch.n_elem == std::array<int, 3>{8, 2, 1});
    CHECK(sc.patch.control.back()[0] == Catch::Approx(10.0));
    CHECK(sc.patch.control.back()[1] == Catch::Approx(1.0));
    CHECK(sc.patch.control.back()[2] == Catch::Approx(0.5));
    CHECK(sc.layout.grad_bcs.size() == 1);
    CHECK_FALSE(sc.physics.plasticity_on);
  }
  {
    SimulationConfig c;
    c.type = "four_point_bending";
    Scenario sc = build_scenario(c, geom_defaults);
    CHECK(sc.patch.n_elem == std::array<int, 3>{25, 5, 2});
    CHECK(sc.patch.control.back()[2] == Catch::Approx(0.5));
    CHECK(sc.reaction_comp == 2);
    CHECK_FALSE(sc.layout.reaction_dofs.empty());
  }
  {
    SimulationConfig c;
    c.type = "tension_uni";
    c.fiber_angle_deg = 0.0;
    Scenario sc = build_scenario(c, geom_defaults);
    CHECK(sc.patch.n_elem == std::array<int, 3>{16, 4, 1});
    // grip volumes: all three components constrained over 20 mm
    int fixed_left = 0, ramped = 0;
    for (const auto& bc : sc.layout.disp.bcs) {
      if (bc.rate != 0.0) ++ramped;
      if (sc.patch.control[bc.entity][0] <= 20.0 + 1e-9 && bc.rate == 0.0) ++fixed_left;
    }
    CHECK(ramped > 0);
    CHECK(fixed_left > 0);
    CHECK(sc.physics.fiber.wL == Catch::Approx(0.47));
    CHECK(sc.physics.fiber.wM == 0.0);
  }
}

TEST_CASE("output: reference snapshot, node count oracle and the fixed CSV header") {
  const std::string dir = "io_test_out";
  std::filesystem::remove_all(dir);
  auto patch = make_box_patch(Vec3(10, 1, 0.5), {8, 2, 1});
  PhysicsParams phys;
  phys.plasticity_on = false;
  phys.fracture_on = false;
  phys.fiber.wL = phys.fiber.wM = 0.0;
  DofLayout layout;
  MultifieldSolver solver(patch, phys, layout, SolverOptions{});
  RunWriter writer(dir, solver);
  writer.write_row({0, 0, 0, 0, 0, 0, 0, 293, 293});
  writer.emit_fields(solver, 0);

  // independent reader: pull the point count and assert zero fields
  std::ifstream vtu(dir + "/fields_00000.vtu");
  REQUIRE(vtu.good());
  std::stringstream ss;
  ss << vtu.rdbuf();
  const std::string text = ss.str();
  const auto pos = text.find("NumberOfPoints=\"");
  REQUIRE(pos != std::string::npos);
  const int npts = std::stoi(text.substr(pos + 16));
  CHECK(npts == 54);  // 9 x 3 x 2 lattice of the 8x2x1 patch
  const auto dpos = text.find("Name=\"displacement\"");
  REQUIRE(dpos != std::string::npos);

  std::ifstream csv(dir + "/run.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,u,F,max_s,max_sL,max_sM,max_alpha,theta_min,theta_max");
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: short tension run writes a deterministic trace and fields") {
  SimulationConfig cfg = load_config(kTable1Path);
  cfg.elements = {6, 2, 1};
  cfg.total_displacement = 0.6;
  cfg.dt = 0.4;
  cfg.cadence = 2;

  auto run_once = [&](const std::string& dir) {
    std::filesystem::remove_all(dir);
    Scenario sc = build_scenario(cfg);
    MultifieldSolver solver(sc.patch, sc.physics, sc.layout, sc.options);
    RunResult rr = run_simulation(sc, solver, dir, cfg.cadence);
    return rr;
  };
  RunResult r1 = run_once("io_run_a");
  RunResult r2 = run_once("io_run_b");
  CHECK(r1.steps == 3);

  std::ifstream a("io_run_a/run.csv"), b("io_run_b/run.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());  // bitwise identical traces
  // row count: accepted steps + 1 reference row + header
  int lines = 0;
  std::string line;
  std::istringstream cnt(sa.str());
  while (std::getline(cnt, line)) ++lines;
  CHECK(lines == r1.steps + 2);
  CHECK(std::filesystem::exists("io_run_a/fields_00002.vtu"));
  std::filesystem::remove_all("io_run_a");
  std::filesystem::remove_all("io_run_b");
}
