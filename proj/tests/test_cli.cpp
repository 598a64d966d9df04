#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(BESSELCM_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const char* name) { return std::string(BESSELCM_FIXTURES) + "/" + name; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("certify-poly on F4") {
    const Run r = cli("certify-poly --file f4.coeffs --interval 0,6 --step 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("certified") != std::string::npos);
    CHECK(r.out.find("b0 = 4038947756777593110528000000") != std::string::npos);
    const Run j = cli("--format json certify-poly --file f4.coeffs --interval 0,6 --step 1");
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["verdict"] == "certified");
    CHECK(doc["pieces"].size() == 6);
    CHECK(doc["b0"] == "4038947756777593110528000000");
  }

  TEST_CASE("certify-poly verdict codes") {
    CHECK(cli("certify-poly --file " + fixture("negative.coeffs")).code == 1);
    CHECK(cli("certify-poly --file " + fixture("quadratic.coeffs") + " --interval 0,3 --step 1").code == 0);
    CHECK(cli("certify-poly --file " + fixture("quadratic.coeffs") + " --interval 0,3 --step 1 --max-depth 0")
              .code == 0);
  }

  TEST_CASE("kernel-ineq k = 5") {
    const Run r = cli("--format json kernel-ineq --k 5 --grid geometric:0.01,6,40");
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["rows"].size() == 40);
    CHECK(doc["ray"]["holds"] == true);
    CHECK(doc["ray"]["a"] == "7");
  }

  TEST_CASE("kernel-ineq k = 6 is falsified") {
    CHECK(cli("kernel-ineq --k 6 --grid geometric:0.01,1,20").code == 1);
  }

  TEST_CASE("cm-check exit codes") {
    CHECK(cli("cm-check --alpha 1 --beta 1 --r 4").code == 0);
    CHECK(cli("cm-check --alpha 1 --beta 1 --r 5 --N 3 --grid geometric:1,100,5").code == 1);
    CHECK(cli("cm-check --alpha 1 --beta 1 --r 9/2 --falsify").code == 1);
  }

  TEST_CASE("csv scan output") {
    const Run r = cli("--format csv ratio-mono --kind G --beta 1/2 --grid geometric:0.01,100,12");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("u,lo,hi,verdict\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 13);
    CHECK(cli("--format csv ladder --kmax 6").code == 64);
  }

  TEST_CASE("reports are identical across thread counts") {
    for (const std::string args : {"--format json cm-check --alpha 2 --beta 1 --r 1 --N 4",
                                   "--format csv kernel-ineq --k 4 --grid geometric:0.01,6,20",
                                   "--format json conjecture-scan --mode kernel --k 6 --grid geometric:0.01,1,16"}) {
      const Run a = cli("--threads 1 " + args), b = cli("--threads 4 " + args);
      CHECK(a.code == b.code);
      CHECK(a.out == b.out);
    }
  }

  TEST_CASE("other subcommands run") {
    CHECK(cli("shift-chain --file f4.coeffs").code == 0);
    CHECK(cli("lemma1-bounds --m 2 --n 3 --u 1,2,3").code == 0);
    CHECK(cli("bessel --k 2 --u 1,2").code == 0);
    CHECK(cli("polygamma --n 2 --x 1/2").code == 0);
    CHECK(cli("ktail --l 4 --a 7").code == 0);
    CHECK(cli("ratio-mono --kind C --beta 1/2 --K 40").code == 0);
    CHECK(cli("ratio-mono --kind c --beta 1/2 --K 5").code == 1);
    CHECK(cli("ladder --kmax 12").code == 0);
    CHECK(cli("unimodal-max --function F --beta 1/2").code == 0);
    CHECK(cli("p-limit --t 100,1000").code == 0);
    CHECK(cli("verify-identity --k 3 --N 20").code == 0);
    CHECK(cli("reproduce-paper --criterion 1").code == 0);
  }

  TEST_CASE("exact rendering") {
    const Run r = cli("--exact --format json bessel --k 0 --u 0");
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["values"][0]["value"]["lo"] == "1");
    CHECK(doc["values"][0]["value"]["hi"] == "1");
  }

  TEST_CASE("usage errors exit 64") {
    CHECK(cli("").code == 64);
    CHECK(cli("no-such-command").code == 64);
    CHECK(cli("--precision 5 ladder").code == 64);
    CHECK(cli("kernel-ineq --grid nonsense").code == 64);
    CHECK(cli("ladder --kmax abc").code == 64);
    CHECK(cli("certify-poly --file /nonexistent.coeffs").code == 64);
  }

  TEST_CASE("config files") {
    const Run ok = cli("--config " + fixture("good.conf") + " ladder");
    CHECK(ok.code == 0);
    CHECK(nlohmann::json::parse(ok.out)["k_max"] == 7);
    CHECK(cli("--config " + fixture("bad_syntax.conf") + " ladder").code == 65);
    CHECK(cli("--config " + fixture("bad_value.conf") + " ladder").code == 65);
    CHECK(cli("--config " + fixture("unknown_key.conf") + " ladder").code == 65);
    CHECK(cli("--config /nonexistent.conf ladder").code == 65);
    // flags override the file
    CHECK(cli("--config " + fixture("bad_value.conf") + " --precision 20 ladder --kmax 6").code == 0);
  }
}
