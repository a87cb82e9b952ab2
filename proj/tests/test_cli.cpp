#include "fairmatch/instances.hpp"
#include "fairmatch/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using namespace fairmatch;
using fairmatch::testing::q;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const char* bin = std::getenv("FAIRMATCH_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "FAIRMATCH_BIN is not set");
  Run r;
  FILE* pipe = popen((std::string(bin) + " " + args + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("fairmatch_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  auto path = temp_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("list prints every catalog key") {
  Run r = run("list");
  CHECK(r.code == 0);
  for (const auto& key : catalog_keys()) CHECK(contains(r.out, key));
}

TEST_CASE("reproduce a composition entry") {
  Run r = run("reproduce gs-doctor-compose");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "PIIF: FAIL (i1, i2)"));
  CHECK_FALSE(contains(r.out, "MISMATCH"));
  CHECK(run("reproduce no-such-key").code == 2);
}

TEST_CASE("solve then verify through a file") {
  const std::string alloc = (temp_dir() / "alloc.json").string();
  Run solve = run("solve --instance algs-differ --alg doctors-first --tau 1/64 --output " + alloc);
  REQUIRE(solve.code == 0);
  Run verify = run("verify --instance algs-differ --property tau-contract --tau 1/64 --allocation " + alloc);
  CHECK(verify.code == 0);
  CHECK(contains(verify.out, "PASS"));

  Instance inst = build("algs-differ").only_case().instance;
  MatchingDistribution md = parse_allocation(read_file(alloc), inst);
  CHECK_NOTHROW(md.validate(inst.n()));
}

TEST_CASE("an unfair allocation fails piif with a witness") {
  // Two doctors in one cluster with the same favourite; one of them always gets it.
  Instance inst;
  inst.doctors = {"a", "b"};
  inst.hospitals = {"X", "Y"};
  inst.metric = Metric::proto({{0, 1}}, 2);
  inst.doctor_prefs = {{0, 1}, {0, 1}};
  inst.hospital_prefs = {HospitalPrefModel::strict_if({0}, {{0, 1}}), HospitalPrefModel::strict_if({0}, {{0, 1}})};
  inst.finalize();
  const std::string in = write_file("unfair.json", serialize_instance(inst));
  const std::string alloc =
      write_file("unfair_alloc.json", serialize_allocation(MatchingDistribution{{{q(1), {1, 0}}}}, inst));
  Run r = run("verify --property piif --input " + in + " --allocation " + alloc);
  CHECK(r.code == 1);
  CHECK(contains(r.out, "PIIF: FAIL (a, b) deficit 1"));

  Run j = run("--json verify --property piif --input " + in + " --allocation " + alloc);
  CHECK(j.code == 1);
  Json parsed = Json::parse(j.out);
  CHECK(parsed["pass"] == false);
  CHECK(parsed["witness"].is_object());

  Run fair = run("verify --property if --input " + in + " --allocation " + alloc);
  CHECK(fair.code == 1);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run("solve --instance algs-differ --alg bogus").code == 2);
  CHECK(run("solve --instance algs-differ --alg doctors-first --tau 0").code == 2);
  CHECK(run("solve --instance algs-differ --alg doctors-first --tau 1/0").code == 2);
  CHECK(run("solve --input /nonexistent/instance.json --alg global").code == 2);
  CHECK(run("verify --instance algs-differ --property local --allocation /nonexistent/a.json").code == 2);
  CHECK(run("solve --instance algs-differ --alg gs").code == 2);
  CHECK(run("solve --alg global").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--help").code == 0);
  const std::string bad = write_file("bad.json", "{\"doctors\": [\"a\"]}");
  Run r = run("solve --alg global --input " + bad);
  CHECK(r.code == 2);
  CHECK(contains(r.out, "hospitals"));
}

TEST_CASE("json output parses back into an allocation") {
  Run r = run("--json solve --instance gs-doctor-compose --alg sampled-gs");
  REQUIRE(r.code == 0);
  Instance inst = build("gs-doctor-compose").only_case().instance;
  MatchingDistribution md = parse_allocation(r.out, inst);
  CHECK(marginals(md, inst.n()) == marginals(compose_sample_gs(inst, ProposingSide::Doctors), inst.n()));
}

TEST_CASE("output is byte-identical across runs") {
  for (const char* args : {"--json solve --instance algs-differ --alg hospitals-first --trace",
                           "solve --instance imposs-metric-lahp --case case-1 --alg global",
                           "reproduce tilde-prefs"}) {
    CAPTURE(args);
    Run a = run(args);
    Run b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("decompose") {
  const std::string m = write_file("m.txt", "1/2 1/2\n1/2 1/2\n");
  Run r = run("decompose " + m);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "1/2"));
  Run j = run("--json decompose " + m);
  REQUIRE(j.code == 0);
  Json parsed = Json::parse(j.out);
  CHECK(parsed["matchings"].size() == 2);
  const std::string bad = write_file("bad.txt", "1/2 1/2\n1/2 1/4\n");
  CHECK(run("decompose " + bad).code == 2);
}

TEST_CASE("the enumeration cap is read from the environment") {
  const char* bin = std::getenv("FAIRMATCH_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd =
      std::string("FAIRMATCH_MAX_ENUM=1 ") + bin + " solve --instance gs-doctor-compose --alg sampled-gs >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
