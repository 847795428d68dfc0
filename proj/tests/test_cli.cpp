#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string command = env + (env.empty() ? "" : " ") + "'" LEGENDRE_CLI_PATH "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, FfactSequences) {
  const CliRun id = run("ffact --f x --n 0..5 --format csv");
  ASSERT_EQ(id.code, 0);
  for (const char* row : {"x,0,1,", "x,1,1,", "x,2,2,", "x,3,6,", "x,4,24,", "x,5,120,"}) {
    EXPECT_NE(id.out.find(row), std::string::npos) << row;
  }
  const CliRun logs = run("ffact --f 'log(x)' --n 3");
  ASSERT_EQ(logs.code, 0);
  EXPECT_NE(logs.out.find("value: 1862340480"), std::string::npos) << logs.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("ffact --f 'abs(sin(x))' --n 3").code, 2);
  EXPECT_EQ(run("ffact --n 3").code, 1);
  EXPECT_EQ(run("ffact --f 'y+1' --n 3").code, 1);
  EXPECT_EQ(run("nonsense").code, 1);
  EXPECT_EQ(run("verify nope").code, 1);
  EXPECT_EQ(run("constant beta_f --f x-1 --alpha 1 --M 1").code, 2);
  EXPECT_EQ(run("bhargava --set 1,1 --n 2").code, 2);
}

TEST(Cli, Bhargava) {
  const CliRun r = run("bhargava --set primes --n 5 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"value\": \"5760\""), std::string::npos) << r.out;
  const CliRun z = run("bhargava --set 0,1,2,3,4,5,6,7,8,9 --n 5");
  EXPECT_NE(z.out.find("value: 120"), std::string::npos) << z.out;
}

TEST(Cli, ConstantJson) {
  const CliRun r = run("constant beta_f --f x --alpha 1 --M 0 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"value_lo\""), std::string::npos);
  EXPECT_NE(r.out.find("\"mode\": \"rigorous\""), std::string::npos) << r.out;
}

TEST(Cli, TableRowAndFormats) {
  const CliRun text = run("table 2 --rows 1");
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("1.7917..."), std::string::npos) << text.out;
  EXPECT_NE(text.out.find("1.7607..."), std::string::npos) << text.out;
  const CliRun json = run("table 1 --rows 3 --format json");
  ASSERT_EQ(json.code, 0);
  EXPECT_NE(json.out.find("\"lo\""), std::string::npos);
  const CliRun csv = run("table 1 --rows 3 --format csv");
  EXPECT_EQ(csv.out.rfind("n,lhs_lo,lhs_hi,rhs_lo,rhs_hi,residual\r\n", 0), 0u) << csv.out;
}

TEST(Cli, OutputIsDeterministicAcrossThreadCounts) {
  for (const char* args : {"table 2 --rows 1..6,50 --format csv", "table 1 --rows 2,40 --format json",
                           "ffact --f 'ceil((x-1)/2)' --n 0..20 --format json", "bhargava --set primes --n 7",
                           "verify bhargava --seed 7"}) {
    const CliRun one = run(std::string("--threads 1 ") + args);
    const CliRun again = run(std::string("--threads 1 ") + args);
    const CliRun four = run(std::string("--threads 4 ") + args);
    EXPECT_EQ(one.code, 0) << args;
    EXPECT_EQ(one.out, again.out) << args;
    EXPECT_EQ(one.out, four.out) << args;
  }
}

TEST(Cli, VerifyReportsSeed) {
  const CliRun r = run("verify legendre --seed 42");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("verify legendre seed=42", 0), 0u) << r.out;
}

TEST(Cli, CacheDirectoryFromEnvironment) {
  const auto dir = std::filesystem::temp_directory_path() / ("legendre-cli-cache-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  const CliRun r = run("ffact --f x --n 100", "LEGENDRE_CACHE_DIR='" + dir.string() + "'");
  ASSERT_EQ(r.code, 0);
  bool found = false;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    found = found || entry.path().filename().string().rfind("primes-", 0) == 0;
  }
  EXPECT_TRUE(found);
  std::filesystem::remove_all(dir);
}
