#include "lsinf/io.hpp"
#include "lsinf/pipeline.hpp"
#include "lsinf/simulate.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace lsinf;

namespace {

LoadedNetwork parse_network(const std::string& text) {
  std::istringstream in(text);
  return load_network(in);
}

ItemResponseData parse_responses(const std::string& text, std::vector<std::string>* ids = nullptr) {
  std::istringstream in(text);
  return load_responses(in, ids);
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lsinf_test_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("a single edge sets both adjacency cells") {
    const auto loaded = parse_network("# nodes=3 index_base=1\nsource,target\n1,2\n");
    BinaryMatrix want = BinaryMatrix::Zero(3, 3);
    want(0, 1) = want(1, 0) = 1;
    CHECK(loaded.net.adjacency() == want);
    CHECK(loaded.self_loops_dropped == 0);
  }

  TEST_CASE("reciprocal nominations give the same adjacency") {
    const auto one = parse_network("# nodes=3 index_base=1\n1,2\n");
    const auto both = parse_network("# nodes=3 index_base=1\nsource,target\n1,2\n2,1\n");
    CHECK(one.net == both.net);
    CHECK(both.net.edge_count() == 1);
  }

  TEST_CASE("self-loops are dropped and counted") {
    const auto loaded = parse_network("# nodes=3 index_base=1\nsource,target\n1,2\n3,3\n");
    CHECK(loaded.self_loops_dropped == 1);
    CHECK(loaded.net.edge_count() == 1);
    CHECK(loaded.net.adjacency()(2, 2) == 0);
  }

  TEST_CASE("zero-based ids") {
    const auto loaded = parse_network("# nodes=2 index_base=0\n0,1\n");
    CHECK(loaded.net.tie(0, 1));
  }

  TEST_CASE("edge list errors name the line") {
    CHECK_THROWS_WITH_AS(parse_network("# nodes=3 index_base=1\nsource,target\n1,2\n1;3\n"),
                         doctest::Contains("line 4"), InputError);
    CHECK_THROWS_WITH_AS(parse_network("# nodes=3 index_base=1\n1,x\n"), doctest::Contains("line 2"),
                         InputError);
    CHECK_THROWS_WITH_AS(parse_network("# nodes=3 index_base=1\n1,4\n"), doctest::Contains("out of range"),
                         InputError);
    CHECK_THROWS_WITH_AS(parse_network("# nodes=3 index_base=0\n0,3\n"), doctest::Contains("out of range"),
                         InputError);
    CHECK_THROWS_AS(parse_network("1,2\n"), InputError);
    CHECK_THROWS_AS(parse_network("# nodes=3 index_base=2\n1,2\n"), InputError);
    CHECK_THROWS_AS(load_network(std::filesystem::path("/nonexistent/edges.csv")), InputError);
  }

  TEST_CASE("responses parse with item ids") {
    std::vector<std::string> ids;
    const auto resp = parse_responses("q1,q2,q3\n1,0,1\n0,0,1\n", &ids);
    CHECK(ids == std::vector<std::string>{"q1", "q2", "q3"});
    REQUIRE(resp.respondents() == 2);
    REQUIRE(resp.items() == 3);
    CHECK(resp.responses()(0, 2) == 1);
    CHECK(resp.responses()(1, 0) == 0);
  }

  TEST_CASE("missing and malformed responses are rejected") {
    CHECK_THROWS_WITH_AS(parse_responses("a,b\n1,\n"), doctest::Contains("missing value"), InputError);
    CHECK_THROWS_WITH_AS(parse_responses("a,b\n1,NA\n"), doctest::Contains("line 2"), InputError);
    CHECK_THROWS_WITH_AS(parse_responses("a,b\n1,0\n1,2\n"), doctest::Contains("line 3"), InputError);
    CHECK_THROWS_WITH_AS(parse_responses("a,b\n1,0,1\n"), doctest::Contains("expected 2 values"), InputError);
    CHECK_THROWS_AS(parse_responses(""), InputError);
  }

  TEST_CASE("network and responses round-trip through text") {
    const auto pair = generate_pair(ScenarioSpec::make(Scenario::s1_1, 3));
    for (int base : {0, 1}) {
      std::stringstream net_text;
      write_network(net_text, pair.net, base);
      CHECK(load_network(net_text).net == pair.net);
    }
    std::stringstream resp_text;
    write_responses(resp_text, pair.resp);
    CHECK(load_responses(resp_text) == pair.resp);
  }

  TEST_CASE("generated files reload into identical data") {
    const auto pair = generate_pair(ScenarioSpec::make(Scenario::s2, 5));
    const auto dir = scratch_dir("roundtrip");
    const auto files = write_generated_pair(pair, dir);
    CHECK(files.size() == 4);
    const auto net = load_network(dir / "network.csv");
    const auto resp = load_responses(dir / "responses.csv");
    CHECK(net.net == pair.net);
    CHECK(net.self_loops_dropped == 0);
    CHECK(resp == pair.resp);
    CHECK(net.net.adjacency().data() != pair.net.adjacency().data());

    std::ifstream truth_in(dir / "truth.txt");
    const auto truth = SummaryReport::read(truth_in);
    CHECK(truth.number("alpha") == pair.truth.alpha);
    CHECK(truth.number("beta.30") == pair.truth.beta(29));
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("format_number round-trips doubles exactly") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 10000) {
      const std::uint64_t b = bits(rng);
      double x;
      std::memcpy(&x, &b, sizeof x);
      if (!std::isfinite(x)) continue;
      const std::string text = format_number(x);
      double back = 0.0;
      std::from_chars(text.data(), text.data() + text.size(), back);
      CHECK(back == x);
      ++checked;
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0) == "1");
  }

  TEST_CASE("summary report keeps insertion order and round-trips") {
    SummaryReport r;
    r.add("delta.mean", 1.056);
    r.add("delta.hpd_low", 0.954);
    r.add("scenario", "1.1");
    r.add("delta.mean", 1.05);  // replaces in place
    std::stringstream text;
    r.write(text);
    CHECK(text.str() == "delta.mean=1.05\ndelta.hpd_low=0.954\nscenario=1.1\n");
    const auto back = SummaryReport::read(text);
    CHECK(back.entries() == r.entries());
    CHECK(back.number("delta.hpd_low") == 0.954);
    CHECK_THROWS_AS(back.at("gamma.mean"), InputError);
    CHECK_THROWS_AS(back.number("scenario.name"), InputError);
    std::istringstream bad("delta.mean 1\n");
    CHECK_THROWS_WITH_AS(SummaryReport::read(bad), doctest::Contains("line 1"), InputError);
  }

  TEST_CASE("draw tables have headers and one row per value") {
    LsmDraws d;
    d.alpha = Eigen::Vector2d(0.5, 0.25);
    d.gamma = Eigen::Vector2d(1.0, 2.0);
    d.log_posterior = Eigen::Vector2d(-3.0, -4.0);
    d.z = {LatentConfig::Zero(3, 2), LatentConfig::Ones(3, 2)};
    std::stringstream scalars, latent;
    write_lsm_scalars(scalars, {d});
    CHECK(scalars.str() == "chain,draw,alpha,gamma,log_posterior\n0,0,0.5,1,-3\n0,1,0.25,2,-4\n");
    write_latent_draws(latent, {&d.z});
    std::string line;
    int rows = 0;
    std::getline(latent, line);
    CHECK(line == "chain,draw,entity,dim,value");
    while (std::getline(latent, line)) ++rows;
    CHECK(rows == 2 * 3 * 2);
  }
}
