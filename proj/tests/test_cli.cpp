#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  auto out_path = std::filesystem::temp_directory_path() /
                  ("hmfd-cli-out-" + std::to_string(counter++) + ".txt");
  std::string cmd = std::string(HMFD_CLI_PATH) + " " + args + " > " + out_path.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::filesystem::remove(out_path);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, buf.str()};
}

std::string fixture(const std::string& label) {
  return std::string(HMFD_FIXTURES_DIR) + "/" + label + ".hmf";
}

}  // namespace

TEST_CASE("group-verify: full GL2(F_3) sweep exits 0") {
  RunResult r = run_cli("group-verify --group q=3,d=1,detOrder=2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("# group_order: 48") != std::string::npos);
  CHECK(r.output.find("bound_verdict: pass") != std::string::npos);
}

TEST_CASE("group-verify: 1440-element sweep with literal violations logged") {
  RunResult r = run_cli("group-verify --group q=3,d=2,detOrder=2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("# group_order: 1440") != std::string::npos);
  CHECK(r.output.find(",yes") != std::string::npos);  // literal reading violated somewhere
}

TEST_CASE("group-verify: malformed descriptor is a usage error") {
  CHECK(run_cli("group-verify --group q=3,detOrder=2").exit_code == 2);
  CHECK(run_cli("group-verify --group banana").exit_code == 2);
  CHECK(run_cli("group-verify").exit_code == 2);
}

TEST_CASE("group-verify: oversized field is an input error") {
  CHECK(run_cli("group-verify --group q=5,d=2,detOrder=1").exit_code == 2);
}

TEST_CASE("split: cubic at X=100000 meets the 0.01 tolerance") {
  RunResult r = run_cli("split --poly x^3-x^2-2x+1 --r 3 --max-prime 100000 --tolerance 0.01");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("tolerance_verdict: pass") != std::string::npos);
}

TEST_CASE("split: r=2 for a cubic is a precondition failure") {
  CHECK(run_cli("split --poly x^3-x^2-2x+1 --r 2 --max-prime 10000").exit_code == 2);
}

TEST_CASE("split: tiny X misses tolerance but still emits data") {
  RunResult r = run_cli("split --poly x^3-x^2-2x+1 --r 3 --max-prime 100 --tolerance 0.001");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("r,count,total,estimate,predicted") != std::string::npos);
  CHECK(r.output.find("3,") != std::string::npos);
}

TEST_CASE("inert-both finds primes for the paper fields") {
  RunResult r =
      run_cli("inert-both --poly1 x^3-x^2-2x+1 --poly2 x^3-x^2-4x-1 --max-prime 10000");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("# count: ") != std::string::npos);
}

TEST_CASE("analyze: twist fixture reports the order-2 group, exit 0") {
  RunResult r = run_cli("analyze --fixture " + fixture("2.2.8.1-41.1-a"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("gamma_count: 2") != std::string::npos);
  CHECK(r.output.find("ff_degree=1") != std::string::npos);
  CHECK(r.output.find("ok=true") != std::string::npos);
}

TEST_CASE("analyze: cubic fixture shows trivial twists and high generation") {
  RunResult r = run_cli("analyze --fixture " + fixture("3.3.49.1-167.1-a"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("gamma_count: 1") != std::string::npos);
  CHECK(r.output.find("non-CM-consistent") != std::string::npos);
}

TEST_CASE("analyze: truncated fixture is an input error with location") {
  auto path = std::filesystem::temp_directory_path() / "hmfd-truncated.hmf";
  {
    std::ifstream in(fixture("2.2.8.1-41.1-a"));
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::ofstream out(path);
    out << text.substr(0, text.size() / 2);
  }
  RunResult r = run_cli("analyze --fixture " + path.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("line") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("twists subcommand") {
  RunResult r = run_cli("twists --fixture " + fixture("2.2.8.1-41.1-a"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("gamma_count: 2") != std::string::npos);
  CHECK(r.output.find("ff_minpoly: ") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical reports") {
  std::string args = "analyze --fixture " + fixture("2.2.8.1-41.1-a");
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  CHECK(a.output == b.output);
  std::string gv = "group-verify --group q=3,d=1,detOrder=2 --samples 20000 --seed 7";
  CHECK(run_cli(gv).output == run_cli(gv).output);
}

TEST_CASE("seed changes the sampled table but not the verdict") {
  std::string base = "group-verify --group q=3,d=1,detOrder=2 --samples 20000 --seed ";
  RunResult a = run_cli(base + "7");
  RunResult b = run_cli(base + "8");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(a.output != b.output);
}

TEST_CASE("config file supplies defaults, flags override") {
  auto path = std::filesystem::temp_directory_path() / "hmfd-test.conf";
  {
    std::ofstream out(path);
    out << "tolerance = 0.5\nmax_prime = 2000\n";
  }
  // config alone: sloppy tolerance passes even at small X
  RunResult loose =
      run_cli("--config " + path.string() + " split --poly x^3-x^2-2x+1 --r 3");
  CHECK(loose.exit_code == 0);
  CHECK(loose.output.find("max_prime=2000") != std::string::npos);
  // flag overrides the config tolerance
  RunResult strict = run_cli("--config " + path.string() +
                             " --tolerance 0.000001 split --poly x^3-x^2-2x+1 --r 3");
  CHECK(strict.exit_code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("fetch: warm cache works offline, cold cache fails with exit 1") {
  auto cache = std::filesystem::temp_directory_path() / "hmfd-cli-cache";
  std::filesystem::remove_all(cache);
  std::filesystem::create_directories(cache);
  // seed the cache with a committed fixture, point the endpoint nowhere
  std::filesystem::copy_file(fixture("2.2.8.1-41.1-a"), cache / "2.2.8.1-41.1-a.hmf");
  auto conf = std::filesystem::temp_directory_path() / "hmfd-cli-fetch.conf";
  {
    std::ofstream out(conf);
    out << "base_url = http://127.0.0.1:1\n";
  }
  std::string base = "--config " + conf.string() + " --cache " + cache.string() + " fetch";
  RunResult warm = run_cli(base + " --label 2.2.8.1-41.1-a");
  CHECK(warm.exit_code == 0);
  RunResult cold = run_cli(base + " --label 2.2.12.1-13.1-a");
  CHECK(cold.exit_code == 1);
  CHECK(cold.output.find("cache is cold") != std::string::npos);
  std::filesystem::remove_all(cache);
  std::filesystem::remove(conf);
}

TEST_CASE("--out writes the report to a file") {
  auto path = std::filesystem::temp_directory_path() / "hmfd-out.csv";
  std::filesystem::remove(path);
  RunResult r = run_cli("--out " + path.string() +
                        " split --poly x^3-x^2-2x+1 --r 1 --max-prime 20000");
  CHECK(r.exit_code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("predicted") != std::string::npos);
  std::filesystem::remove(path);
}
