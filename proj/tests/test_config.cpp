#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "teletraffic/config.hpp"

using namespace teletraffic;

TEST_CASE("scalars, sections and comments") {
  const Config c = Config::parse(
      "# header\n"
      "model = des   # trailing comment\n"
      "lambda = 0.5\n"
      "servers = 3\n"
      "\n"
      "[links]\n"
      "id=A capacity=10\n"
      "id=B capacity=5\n"
      "[routing]\n"
      "0.5 0 0.5\n",
      "t.cfg");
  CHECK(c.text("model") == "des");
  CHECK(c.number("lambda") == 0.5);
  CHECK(c.integer("servers") == 3);
  CHECK(c.number_or("mu", 2.0) == 2.0);
  CHECK(c.integer_or("servers", 9) == 3);
  CHECK(c.text_or("missing", "x") == "x");
  REQUIRE(c.list("links").size() == 2);
  CHECK(c.list("links")[1].text("id") == "B");
  CHECK(c.list("links")[1].integer("capacity") == 5);
  CHECK(c.list("links")[1].line == 8);
  CHECK(c.list("routing")[0].values == std::vector<double>{0.5, 0.0, 0.5});
  CHECK(c.where("lambda") == "t.cfg:3: ");
  CHECK(c.source() == "t.cfg");
}

TEST_CASE("list values") {
  const Config c = Config::parse("xs = 1,2,3.5\n[routes]\nlinks=A,B offered=2\n");
  CHECK(c.numbers("xs") == std::vector<double>{1.0, 2.0, 3.5});
  CHECK(c.list("routes")[0].words("links") == std::vector<std::string>{"A", "B"});
  CHECK(c.list("routes")[0].numbers("offered") == std::vector<double>{2.0});
}

TEST_CASE("syntax errors carry the line number") {
  CHECK_THROWS_WITH_AS(Config::parse("a = 1\nb\n", "f"), doctest::Contains("f:2:"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("a = 1\na = 2\n", "f"), doctest::Contains("f:2: duplicate key"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("[s\n", "f"), doctest::Contains("f:1:"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("[s]\n[s]\n", "f"), doctest::Contains("f:2: duplicate section"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("[s]\nx=1 x=2\n", "f"), doctest::Contains("duplicate field"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("[s]\nx=1 3\n", "f"), doctest::Contains("cannot mix"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse("a =\n", "f"), doctest::Contains("empty value"), ConfigError);
  CHECK_THROWS_AS(Config::parse("bad key = 1\n"), ConfigError);
}

TEST_CASE("type errors and unknown keys") {
  const Config c = Config::parse("a = x\nb = 1.5\n[s]\nk=abc\n", "f");
  CHECK_THROWS_WITH_AS(c.number("a"), doctest::Contains("f:1:"), ConfigError);
  CHECK_THROWS_WITH_AS(c.integer("b"), doctest::Contains("expects an integer"), ConfigError);
  CHECK_THROWS_WITH_AS(c.number("zz"), doctest::Contains("missing key"), ConfigError);
  CHECK_THROWS_WITH_AS(c.list("t"), doctest::Contains("missing section"), ConfigError);
  CHECK_THROWS_WITH_AS(c.list("s")[0].number("k"), doctest::Contains("f:4:"), ConfigError);
  CHECK_THROWS_WITH_AS(c.allow_only({"a"}, {"s"}), doctest::Contains("f:2: unknown key 'b'"), ConfigError);
  CHECK_THROWS_WITH_AS(c.allow_only({"a", "b"}), doctest::Contains("unknown section [s]"), ConfigError);
  CHECK_NOTHROW(c.allow_only({"a", "b"}, {"s"}));
  CHECK_THROWS_WITH_AS(c.list("s")[0].allow_only({"q"}), doctest::Contains("unknown field 'k'"), ConfigError);
  // Config errors are parameter errors.
  CHECK_THROWS_AS(c.number("a"), ParameterError);
}

TEST_CASE("load from disk") {
  const auto path = (std::filesystem::temp_directory_path() / "tt_config_test.cfg").string();
  {
    std::ofstream out(path);
    out << "x = 4\n";
  }
  const Config c = Config::load(path);
  CHECK(c.number("x") == 4.0);
  CHECK(c.where("x") == path + ":1: ");
  std::remove(path.c_str());
  CHECK_THROWS_AS(Config::load(path), ConfigError);
}

TEST_CASE("circuit network builder") {
  const CircuitNetworkSpec s = circuit_network_from_config(Config::parse(
      "[links]\nid=L1 capacity=5\nid=L2 capacity=6\n[routes]\nlinks=L1,L2 offered=3\nlinks=L2 offered=2.5\n"));
  REQUIRE(s.links.size() == 2);
  CHECK(s.links[1].capacity == 6);
  CHECK(s.routes[0].links == std::vector<std::size_t>{0, 1});
  CHECK(s.routes[1].offered == 2.5);
  CHECK_THROWS_WITH_AS(circuit_network_from_config(Config::parse("[links]\nid=L1 capacity=5\n[routes]\nlinks=L9 offered=1\n", "n")),
                       doctest::Contains("n:4: route references unknown link"), ConfigError);
  CHECK_THROWS_AS(circuit_network_from_config(Config::parse("[links]\nid=L1 capacity=5\nid=L1 capacity=2\n[routes]\nlinks=L1 offered=1\n")),
                  ConfigError);
}

TEST_CASE("Jackson builder") {
  const JacksonSpec s = jackson_from_config(Config::parse("[queues]\nmu=2 external_rate=1\nmu=3\n[routing]\n0 1\n0 0\n"));
  CHECK(s.service_rates == std::vector<double>{2.0, 3.0});
  CHECK(s.external_rates == std::vector<double>{1.0, 0.0});
  CHECK(s.routing[0][1] == 1.0);
  CHECK_THROWS_AS(jackson_from_config(Config::parse("[queues]\nmu=2\nmu=3\n[routing]\n0 1\n")), ConfigError);
  CHECK_THROWS_WITH_AS(jackson_from_config(Config::parse("[queues]\nmu=2\nmu=3\n[routing]\n0 1\n0\n", "j")),
                       doctest::Contains("j:6:"), ConfigError);
}

TEST_CASE("source class builder") {
  const auto cls = source_classes_from_config(
      Config::parse("[classes]\ncount=20 peak=10 p=0.1\ncount=80 peak=1 p=0.05\nrates=0,1,4 probs=0.5,0.3,0.2\n"));
  REQUIRE(cls.size() == 3);
  CHECK(cls[0].count == 20);
  CHECK(cls[0].peak() == 10.0);
  CHECK(cls[2].count == 1);
  CHECK(cls[2].mean() == doctest::Approx(1.1));
  CHECK(dim_link_heterogeneous({cls[0], cls[1]}).capacity == doctest::Approx(64.67186).epsilon(1e-6));
  CHECK_THROWS_AS(source_classes_from_config(Config::parse("[classes]\npeak=1 p=0.1 rates=1 probs=1\n")), ConfigError);
  CHECK_THROWS_AS(source_classes_from_config(Config::parse("[classes]\npeak=1 p=1.5\n")), ParameterError);
}

TEST_CASE("cellular builder") {
  const CellularSpec s = cellular_from_config(
      Config::parse("channels = 5\nmu = 2\n[cells]\nlambda=3 handover=1\nlambda=2 handover=1\n[routing]\n0 1\n1 0\n"));
  CHECK(s.cells == 2);
  CHECK(s.channels == 5);
  CHECK(s.mu == 2.0);
  CHECK(s.handover_rate == std::vector<double>{1.0, 1.0});
  const CellularSpec lone = cellular_from_config(Config::parse("channels = 5\n[cells]\nlambda=3\n"));
  CHECK(lone.mu == 1.0);
  CHECK(lone.routing == std::vector<std::vector<double>>{{0.0}});
  CHECK_THROWS_AS(cellular_from_config(Config::parse("[cells]\nlambda=3\n")), ConfigError);
}
