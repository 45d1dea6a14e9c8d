#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "lmg/error.hpp"
#include "lmg/experiment.hpp"
#include "lmg/selftest.hpp"
#include "oracles.hpp"

namespace ex = lmg::experiment;
using std::numbers::pi;

namespace {

// Drops the timestamp line so two renderings can be compared byte for byte.
std::string without_timestamp(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp:", 0) == 0) continue;
    out += line + '\n';
  }
  return out;
}

std::string metadata(const ex::FigureDataset& d, const std::string& key) {
  for (const auto& [k, v] : d.metadata) {
    if (k == key) return v;
  }
  return {};
}

double field(const std::string& record, const std::string& name) {
  const auto pos = record.find(name + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(record.substr(pos + name.size() + 1));
}

ex::RunConfig coarse_config() {
  ex::RunConfig c;
  c.chi.step = 0.05;
  return c;
}

}  // namespace

TEST_CASE("configuration") {
  SUBCASE("defaults") {
    const ex::RunConfig c;
    CHECK(c.n_particles == 10);
    CHECK(c.chi == ex::ChiRange{0.0, 3.0, 0.005});
    CHECK(c.dt == 0.1);
    CHECK(c.steps == 1200);
    CHECK(c.chi_list == std::vector<double>{0.0, 1.2, 1.8, 2.5});
    CHECK_NOTHROW(ex::validate(c));
  }
  SUBCASE("round trip") {
    ex::RunConfig c;
    c.n_particles = 14;
    c.chi = {0.1, 2.9, 0.0123456789};
    c.chi_list = {0.3, 1.0 / 3.0};
    c.phi_points = 101;
    c.dt = 0.05;
    c.steps = 77;
    c.level_i = 2;
    c.level_j = 5;
    c.sign = lmg::phase::CombinationSign::antisymmetric;
    c.output_dir = "some/dir";
    c.mean_phase = lmg::phase::MeanPhaseMode::circular;
    c.kernel = lmg::gcm::KernelNormalization::exact;
    c.tolerance = 3e-13;
    CHECK(ex::parse_config(ex::serialize_config(c)) == c);
    CHECK(ex::parse_config(ex::serialize_config(ex::RunConfig{})) == ex::RunConfig{});
  }
  SUBCASE("partial files layer over the base") {
    const auto c = ex::parse_config("# comment\n\n np = 6 \nchi-list = 0.5, 1.5\nlevels = 1 3\n");
    CHECK(c.n_particles == 6);
    CHECK(c.chi_list == std::vector<double>{0.5, 1.5});
    CHECK(c.level_i == 1);
    CHECK(c.level_j == 3);
    CHECK(c.steps == 1200);
    ex::RunConfig base;
    base.steps = 5;
    CHECK(ex::parse_config("dt = 0.2\n", base).steps == 5);
  }
  SUBCASE("malformed input") {
    CHECK_THROWS_AS(ex::parse_config("np 10\n"), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::parse_config("particles = 10\n"), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::parse_config("dt = fast\n"), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::parse_config("steps = 1.5\n"), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::parse_config("sign = +\n"), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::parse_config("levels = 1\n"), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::load_config_file("/nonexistent/config.txt"), lmg::InvalidArgument);
  }
  SUBCASE("validation") {
    auto bad = [](auto mutate) {
      ex::RunConfig c;
      mutate(c);
      return c;
    };
    CHECK_THROWS_AS(ex::validate(bad([](auto& c) { c.chi.step = 0.0; })), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::validate(bad([](auto& c) { c.chi.stop = c.chi.start; })), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::validate(bad([](auto& c) { c.dt = -0.1; })), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::validate(bad([](auto& c) { c.steps = 0; })), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::validate(bad([](auto& c) { c.n_particles = 7; })), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::validate(bad([](auto& c) { c.level_j = c.level_i; })), lmg::InvalidArgument);
    CHECK_THROWS_AS(ex::validate(bad([](auto& c) { c.level_j = 11; })), lmg::InvalidArgument);
  }
  SUBCASE("worker count from the environment") {
    ::unsetenv("LMG_WORKERS");
    CHECK(ex::workers_from_env() == 1);
    ::setenv("LMG_WORKERS", "3", 1);
    CHECK(ex::workers_from_env() == 3);
    ::setenv("LMG_WORKERS", "zero", 1);
    CHECK_THROWS_AS(ex::workers_from_env(), lmg::InvalidArgument);
    ::unsetenv("LMG_WORKERS");
  }
}

TEST_CASE("csv rendering") {
  ex::FigureDataset d{7, {"a", "b"}, {{0.1, 2.0}, {1.0 / 3.0, -4e-20}}, {{"note", "x"}}};
  const std::string csv = ex::to_csv(d, ex::RunConfig{}, "T");
  CHECK(csv.rfind("# figure: 7\n# tool: lmg-tunnel ", 0) == 0);
  CHECK(csv.find("# timestamp: T\n") != std::string::npos);
  CHECK(csv.find("# config: np = 10; chi-start = 0;") != std::string::npos);
  CHECK(csv.find("# note: x\na,b\n0.10000000000000001,2\n0.33333333333333331,-3.9999999999999998e-20\n") !=
        std::string::npos);
  CHECK(ex::format_double(std::stod(ex::format_double(0.1 + 0.2))) == ex::format_double(0.1 + 0.2));
}

TEST_CASE("spectrum dataset") {
  const auto c = coarse_config();
  const auto d = ex::cmd_spectrum(c);
  CHECK(d.figure_id == 1);
  CHECK(d.columns == std::vector<std::string>{"chi", "level_index", "energy"});
  CHECK(d.rows.size() == 61 * 11);
  for (int k = 0; k < 11; ++k) CHECK(d.rows[static_cast<std::size_t>(k)][2] == doctest::Approx(k - 5.0));
  for (std::size_t block = 0; block < 61; ++block) {
    for (std::size_t k = 0; k < 11; ++k) {
      const auto& row = d.rows[block * 11 + k];
      const auto& mirror = d.rows[block * 11 + 10 - k];
      CHECK(row[0] == mirror[0]);
      CHECK(std::abs(row[2] + mirror[2]) < 1e-10);
    }
  }
  CHECK_THROWS_AS(ex::cmd_spectrum([] {
                    ex::RunConfig bad;
                    bad.chi.step = -1.0;
                    return bad;
                  }()),
                  lmg::InvalidArgument);
}

TEST_CASE("gap datasets") {
  const auto g = ex::cmd_gap(ex::RunConfig{});
  CHECK(g.fig2.columns == std::vector<std::string>{"chi", "gap", "d1", "d2", "d3"});
  CHECK(g.fig3.rows == g.fig2.rows);
  CHECK(g.fig3.figure_id == 3);
  CHECK(g.fig2.rows.front()[1] == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& row : g.fig2.rows) CHECK(row[2] <= 1e-12);
  CHECK(std::abs(g.boundaries.first - 1.2) < 0.15);
  CHECK(std::abs(g.boundaries.second - 1.8) < 0.15);
  CHECK(std::stod(metadata(g.fig2, "boundary_first")) == g.boundaries.first);
  CHECK(std::stod(metadata(g.fig2, "boundary_second")) == g.boundaries.second);

  ex::RunConfig tiny;
  tiny.chi = {0.0, 0.02, 0.005};
  CHECK_THROWS_AS(ex::cmd_gap(tiny), lmg::InvalidArgument);
}

TEST_CASE("potential dataset") {
  const auto d = ex::cmd_potential(ex::RunConfig{});
  CHECK(d.columns == std::vector<std::string>{"chi", "phi", "V"});
  CHECK(d.rows.size() == 4 * 88);
  std::vector<std::string> records;
  for (const auto& [k, v] : d.metadata) {
    if (k == "record") records.push_back(v);
  }
  REQUIRE(records.size() == 4);
  for (std::size_t c = 0; c < 4; ++c) {
    const auto begin = d.rows.begin() + static_cast<long>(c * 88);
    for (std::size_t i = 0; i < 88; ++i) CHECK(std::abs(begin[static_cast<long>(i)][2] - begin[static_cast<long>(87 - i)][2]) < 1e-8);
  }
  // chi = 0: lowest point at phi = 0, of the order of -(N_p - 1)/2.
  auto lowest = d.rows.begin();
  for (auto it = d.rows.begin(); it != d.rows.begin() + 88; ++it) {
    if ((*it)[2] < (*lowest)[2]) lowest = it;
  }
  CHECK(std::abs((*lowest)[1]) < 0.05);
  CHECK((*lowest)[2] < -4.0);
  CHECK((*lowest)[2] > -7.0);
  // chi = 2.5: the barrier top lies above both levels.
  const auto e = oracle::lmg_spectrum(10, 2.5);
  CHECK(field(records[3], "chi") == 2.5);
  CHECK(field(records[3], "E0") == doctest::Approx(e(0)).epsilon(1e-12));
  CHECK(field(records[3], "E1") == doctest::Approx(e(1)).epsilon(1e-12));
  double v0 = 0.0;
  double best = 1e9;
  for (auto it = d.rows.begin() + 3 * 88; it != d.rows.end(); ++it) {
    if (std::abs((*it)[1]) < best) {
      best = std::abs((*it)[1]);
      v0 = (*it)[2];
    }
  }
  CHECK(v0 > field(records[3], "E1"));
}

TEST_CASE("evolution datasets") {
  SUBCASE("default run") {
    const auto d = ex::cmd_evolve(ex::RunConfig{});
    CHECK(d.fig5.columns == std::vector<std::string>{"chi", "t", "P", "mean_phase"});
    CHECK(d.fig5.rows.size() == 4 * 1201);
    CHECK(d.fig6.rows == d.fig5.rows);
    REQUIRE(d.summary.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& s = d.summary[i];
      if (s.chi < 2.0) CHECK(std::abs(s.omega / s.reference - 1.0) < 0.01);
      if (i > 0) CHECK(s.omega < d.summary[i - 1].omega);
    }
  }
  SUBCASE("zero coupling returns with period 2 pi") {
    ex::RunConfig c;
    c.chi_list = {0.0};
    c.dt = pi / 50;
    c.steps = 250;
    const auto d = ex::cmd_evolve(c);
    CHECK(std::abs(d.fig5.rows[0][2] - 1.0) < 1e-6);
    CHECK(std::abs(d.fig5.rows[50][2]) < 1e-6);
    CHECK(std::abs(d.fig5.rows[100][2] - 1.0) < 1e-6);
    CHECK(d.summary[0].omega == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("too short to hold two periods") {
    ex::RunConfig c;
    c.chi_list = {2.5};
    c.steps = 100;
    CHECK_THROWS_AS(ex::cmd_evolve(c), lmg::InvalidArgument);
  }
}

TEST_CASE("determinism") {
  auto c = coarse_config();
  c.chi_list = {0.0, 1.2};
  c.steps = 400;
  const auto render = [&](int workers) {
    std::string all;
    all += ex::to_csv(ex::cmd_spectrum(c, workers), c, "A");
    all += ex::to_csv(ex::cmd_gap(c, workers).fig2, c, "A");
    all += ex::to_csv(ex::cmd_potential(c, workers), c, "A");
    all += ex::to_csv(ex::cmd_evolve(c, workers).fig5, c, "A");
    return all;
  };
  const std::string once = render(1);
  CHECK(once == render(1));
  CHECK(once == render(3));
  const auto d = ex::cmd_spectrum(c);
  CHECK(without_timestamp(ex::to_csv(d, c, "2020-01-01T00:00:00Z")) ==
        without_timestamp(ex::to_csv(d, c, ex::utc_timestamp())));
}

TEST_CASE("selftest") {
  const auto report = lmg::run_selftest();
  CHECK(report.passed());
  CHECK(report.format() == lmg::run_selftest().format());

  SUBCASE("a sign error in J_+^2 is caught") {
    const auto broken = lmg::run_selftest([](const lmg::QuasiSpinBasis& b, double chi) {
      auto h = lmg::build_hamiltonian(b, chi);
      for (int i = 0; i + 2 < b.dimension(); ++i) h.matrix(i + 2, i) = -h.matrix(i + 2, i);
      return h;
    });
    CHECK_FALSE(broken.passed());
    bool oracle_failed = false;
    bool symmetry_failed = false;
    for (const auto& c : broken.checks) {
      if (c.passed) continue;
      if (c.name.find("projected kernel") != std::string::npos) oracle_failed = true;
      if (c.name.find("symmetric [") != std::string::npos) symmetry_failed = true;
    }
    CHECK(oracle_failed);
    CHECK(symmetry_failed);
    CHECK(broken.format().find("FAIL") != std::string::npos);
  }
}
