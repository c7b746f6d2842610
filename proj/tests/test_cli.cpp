#include "support.hpp"

#include "json.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>

using json = nlohmann::json;
using support::cli;
using support::fixture_arg;

namespace {
auto tmpdir() -> std::filesystem::path {
  auto d = std::filesystem::temp_directory_path() / ("abelext_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(d);
  return d;
}
} // namespace

TEST_SUITE("cli") {
  TEST_CASE("extension group") {
    auto r = cli("ext-group " + fixture_arg() + " -a Z2 -m T2 --json");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["invariant_factors"] == json::array({2}));
    CHECK(j.contains("meta"));
    auto o = cli("ext-group " + fixture_arg() + " -m T2 --oracle --json --no-meta");
    CHECK(json::parse(o.out)["oracle"]["agrees"] == true);
    CHECK_FALSE(json::parse(o.out).contains("meta"));
  }

  TEST_CASE("validate and usage errors") {
    CHECK(cli("validate " + fixture_arg()).code == 0);
    CHECK(cli("frobnicate " + fixture_arg()).code == 2);
    CHECK(cli("ext-group " + fixture_arg()).code == 2);
    CHECK(cli("ext-group " + fixture_arg() + " -m T2 --depth x").code == 2);
    auto missing = cli("ext-group " + fixture_arg() + " -m NOPE --json");
    CHECK(missing.code == 1);
    CHECK(json::parse(missing.out)["error"]["kind"] == "unknown_symbol");
    auto absent = cli("validate /nonexistent/file.alx --json");
    CHECK(absent.code == 1);
  }

  TEST_CASE("commutator of S3") {
    auto r = cli("commutator " + fixture_arg() + " -a S3 --theta top --psi top --json --no-meta");
    REQUIRE(r.code == 0);
    auto c = json::parse(r.out)["commutator"];
    REQUIRE(c.size() == 2);
    CHECK(c[0].size() == 3);
    CHECK(c[1].size() == 3);
    auto g = cli("commutator " + fixture_arg() + " -a D8 --theta 0-1 --psi bot --json --no-meta");
    CHECK(json::parse(g.out)["commutator"].size() == 8);
  }

  TEST_CASE("every verb is reachable") {
    std::vector<std::string> cmds = {
        "congruences -a V4", "difference-check -a S3 -a Z4", "abelianize -q Top2", "free-abelian -q Kap4",
        "factor-set XZ4", "build-extension -m T2 1", "equivalent XV4 XV4b", "pullback XZ4 u12",
        "pushforward XZ4 zeroT2", "baer-sum XZ4 XZ4", "outer-product T2 T2", "module-bridge XZ4ab",
        "cohomology -m T2 --depth 1 --arity 2", "relative-cohomology GRP GRPAB -m T2c --depth 1 --arity 2",
        "oracle ext -m T2", "oracle module-ext 2 2", "oracle group-h2 -a V4 2"};
    for (const auto &c : cmds) {
      CAPTURE(c);
      auto sp = c.find(' ');
      auto r = cli(c.substr(0, sp) + " " + fixture_arg() + c.substr(sp) + " --json --no-meta");
      CHECK(r.code == 0);
      CHECK_FALSE(json::parse(r.out, nullptr, false).is_discarded());
    }
    auto h2 = json::parse(cli("oracle " + fixture_arg() + " group-h2 -a V4 2 --json --no-meta").out);
    CHECK(h2["invariant_factors"] == json::array({2, 2, 2}));
  }

  TEST_CASE("batch manifests") {
    auto dir = tmpdir();
    std::filesystem::copy_file(ABELEXT_FIXTURE, dir / "grp.alx", std::filesystem::copy_options::overwrite_existing);
    {
      std::ofstream(dir / "empty.txt") << "# nothing\n";
      std::ofstream(dir / "good.txt") << "ext-group grp.alx -m T2\ncongruences grp.alx -a Z4  # lattice\n";
      std::ifstream in(ABELEXT_FIXTURE);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      auto at = text.find("chi at 0 = [0, 2]");
      REQUIRE(at != std::string::npos);
      text.replace(at, 17, "chi at 0 = [2, 0]");
      std::ofstream(dir / "bad.alx") << text;
      std::ofstream(dir / "mixed.txt") << "validate grp.alx\nvalidate bad.alx\n";
    }
    auto e = cli("batch '" + (dir / "empty.txt").string() + "' --json --no-meta");
    CHECK(e.code == 0);
    CHECK(json::parse(e.out)["count"] == 0);
    auto g = cli("batch '" + (dir / "good.txt").string() + "' --json --no-meta");
    CHECK(g.code == 0);
    CHECK(json::parse(g.out)["commands"][1]["result"]["count"] == 3);
    auto m = cli("batch '" + (dir / "mixed.txt").string() + "' --json --no-meta");
    CHECK(m.code == 1);
    auto mj = json::parse(m.out);
    CHECK(mj["failed"] == 1);
    CHECK(mj["commands"][0]["exit"] == 0);
    CHECK(mj["commands"][1]["exit"] == 1);
    CHECK(mj["commands"][1]["result"]["error"]["kind"] == "invariant_violation");
    CHECK(cli("batch '" + (dir / "none.txt").string() + "'").code == 1);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("output is independent of thread count") {
    auto base = "cohomology " + fixture_arg() + " -m K2 --depth 1 --arity 2 --max-dim 1 --json --no-meta";
    auto a = cli(base + " --jobs 1"), b = cli(base + " --jobs 3"), c = cli(base + " --jobs 1");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}
