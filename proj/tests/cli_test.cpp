#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(PYRSTS_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) {
    res.output.append(buf.data(), n);
    if (n < buf.size()) break;
  }
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "pyrsts-cli-test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(run_cli("check --f 7 --v 15").exit_code, 0);
  auto res = run_cli("check --f 7 --v 16");
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("1,3 (mod 6)"), std::string::npos);
  auto half = run_cli("check --f 15 --v 15");
  EXPECT_EQ(half.exit_code, 1);
  EXPECT_NE(half.output.find("f < v/2"), std::string::npos);
  EXPECT_EQ(run_cli("check --f 7").exit_code, 2);       // missing --v
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);        // unknown subcommand
}

TEST(Cli, ConstructVerifyRoundTrip) {
  auto dir = temp_dir();
  auto path = (dir / "sts15.json").string();
  auto res = run_cli("construct --f 7 --v 15 --no-cache --out " + path);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("blocks=35"), std::string::npos);

  EXPECT_EQ(run_cli("verify " + path).exit_code, 0);

  // tamper: drop one block
  std::string text = slurp(path);
  auto pos = text.find("],[\"");
  ASSERT_NE(pos, std::string::npos);
  auto end = text.find("],[\"", pos + 4);
  ASSERT_NE(end, std::string::npos);
  text.erase(pos + 1, end - pos);
  {
    std::ofstream out(path, std::ios::binary);
    out << text;
  }
  auto bad = run_cli("verify " + path);
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.output.find("FAIL"), std::string::npos);
}

TEST(Cli, ConstructInadmissibleExits1) {
  EXPECT_EQ(run_cli("construct --f 7 --v 27 --no-cache").exit_code, 1);
}

TEST(Cli, VerifyDifferenceFamilyFile) {
  auto dir = temp_dir();
  auto path = (dir / "df.json").string();
  auto res = run_cli("df-solve --group 2,2,8 --spread-type 2^7 --no-cache --out " + path);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_EQ(run_cli("verify " + path).exit_code, 0);
}

TEST(Cli, VerifyRejectsGarbage) {
  auto dir = temp_dir();
  auto path = (dir / "garbage.json").string();
  {
    std::ofstream out(path);
    out << "{\"unrelated\": true}";
  }
  EXPECT_EQ(run_cli("verify " + path).exit_code, 2);
  EXPECT_EQ(run_cli("verify /nonexistent/file.json").exit_code, 2);
}

TEST(Cli, DfSolveProvenAbsentExits1) {
  auto res = run_cli("df-solve --group 9 --spread-type 3 --no-cache");
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_NE(res.output.find("no such"), std::string::npos);
}

TEST(Cli, DmCommand) {
  EXPECT_EQ(run_cli("dm --group 2,2,9").exit_code, 0);
  EXPECT_EQ(run_cli("dm --group 4").exit_code, 1);
}

TEST(Cli, LangfordCommand) {
  auto res = run_cli("langford --k 4 --a 6 --b 3");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(run_cli("langford --k 2 --a 4 --b 1").exit_code, 1);
  EXPECT_EQ(run_cli("langford --k 99 --a 4 --b 1").exit_code, 2);
}

TEST(Cli, EnumerateMatchesKnownSpectrum) {
  auto res = run_cli("enumerate --max-v 100 --f 7");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output, "f=7 v=15\nf=7 v=39\nf=7 v=63\nf=7 v=79\nf=7 v=87\n");

  auto res15 = run_cli("enumerate --max-v 31 --f 15");
  EXPECT_EQ(res15.output, "f=15 v=31\n");

  auto empty = run_cli("enumerate --max-v 14 --f 7");
  EXPECT_EQ(empty.exit_code, 0);
  EXPECT_TRUE(empty.output.empty());
}

TEST(Cli, EnumerateBuildReportsRows) {
  auto res = run_cli("enumerate --max-v 40 --f 7 --build --no-cache");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("f=7 v=15 group=2,2,2 case=A e=0 blocks=35"), std::string::npos);
  EXPECT_NE(res.output.find("f=7 v=39 group=2,2,8 case=A e=0 blocks=247"), std::string::npos);
  EXPECT_NE(res.output.find("verified=PASS"), std::string::npos);
}

TEST(Cli, DeterministicConstructOutput) {
  auto dir = temp_dir();
  auto a = (dir / "a.json").string();
  auto b = (dir / "b.json").string();
  ASSERT_EQ(run_cli("construct --f 7 --v 79 --no-cache --deterministic --out " + a).exit_code, 0);
  ASSERT_EQ(run_cli("construct --f 7 --v 79 --no-cache --deterministic --out " + b).exit_code, 0);
  EXPECT_EQ(slurp(a), slurp(b));

  // same bytes when a warm cache is involved
  auto cache = (dir / "cache").string();
  auto c = (dir / "c.json").string();
  auto d = (dir / "d.json").string();
  ASSERT_EQ(run_cli("construct --f 7 --v 79 --cache " + cache + " --out " + c).exit_code, 0);
  ASSERT_EQ(run_cli("construct --f 7 --v 79 --cache " + cache + " --out " + d).exit_code, 0);
  EXPECT_EQ(slurp(c), slurp(d));
  EXPECT_EQ(slurp(a), slurp(c));
}
