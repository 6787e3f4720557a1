#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tbl/digraph.hpp"
#include "tbl/generators.hpp"
#include "tbl/subdivision.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run tbl_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(TBL_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_graph(const std::string& name, const tbl::Digraph& d) {
  auto path = std::filesystem::temp_directory_path() / ("tbl_cli_" + name + ".txt");
  std::ofstream(path) << tbl::serialize(d);
  return path.string();
}

std::string write_text(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("tbl_cli_" + name + ".txt");
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Cli, Girth) {
  EXPECT_EQ(tbl_cli("girth " + write_graph("c5", tbl::directed_cycle(5))).out, "5\n");
  EXPECT_EQ(tbl_cli("girth " + write_text("dag", "3 2\n0 1\n1 2\n")).out, "inf\n");
}

TEST(Cli, DistanceExitCodes) {
  auto f = write_text("path", "3 2\n0 1\n1 2\n");
  auto ok = tbl_cli("distance " + f + " 0 2");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "2\n");
  auto neg = tbl_cli("distance " + f + " 2 0");
  EXPECT_EQ(neg.code, 1);
  EXPECT_EQ(neg.out, "inf\n");
  EXPECT_EQ(tbl_cli("distance " + f + " 0 9").code, 2);
}

TEST(Cli, UsageAndInputErrors) {
  EXPECT_EQ(tbl_cli("").code, 2);
  EXPECT_EQ(tbl_cli("frobnicate").code, 2);
  EXPECT_EQ(tbl_cli("girth /nonexistent/file").code, 2);
  EXPECT_EQ(tbl_cli("girth " + write_text("loop", "2 1\n0 0\n")).code, 2);
  EXPECT_EQ(tbl_cli("find " + write_text("ok", "2 1\n0 1\n")).code, 2);
  EXPECT_EQ(tbl_cli("--help").code, 0);
}

TEST(Cli, Scc) {
  auto r = tbl_cli("scc " + write_text("two", "4 4\n0 1\n1 0\n1 2\n2 3\n"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0 1\n2\n3\n");
}

TEST(Cli, MengerAndCutverts) {
  auto f = write_graph("theta", tbl::theta(2, 3));
  auto m = tbl_cli("menger " + f + " 0 1");
  EXPECT_EQ(m.code, 0);
  EXPECT_EQ(m.out.substr(0, 2), "2\n");
  auto c = tbl_cli("cutverts " + write_graph("c6", tbl::directed_cycle(6)) + " 0 3");
  EXPECT_EQ(c.out, "1 2\n");
}

TEST(Cli, FindVerdicts) {
  auto found = tbl_cli("find " + write_graph("k4", tbl::complete_biorientation(4)) + " -k 2");
  EXPECT_EQ(found.code, 0);
  auto j = nlohmann::json::parse(found.out);
  EXPECT_EQ(j["k"], 2);
  EXPECT_EQ(j["l"], 2);
  auto none = tbl_cli("find " + write_graph("k3", tbl::complete_biorientation(3)) + " -k 2");
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(none.out, "none\n");
  auto dk = write_graph("d4", tbl::construct_dk(4));
  auto budget = tbl_cli("find " + dk + " -k 4 --budget 1");
  EXPECT_EQ(budget.code, 3);
  EXPECT_EQ(budget.out, "budget_exceeded\n");
  EXPECT_EQ(tbl_cli("find " + dk + " -k 4", "TBL_BUDGET=1").code, 3);
}

TEST(Cli, FindReadsStdin) {
  auto r = tbl_cli("find - -k 1 -l 2 < " + write_graph("th", tbl::theta(1, 2)));
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, GenRoundTrips) {
  EXPECT_EQ(tbl_cli("gen dk -k 3").out, tbl::serialize(tbl::construct_dk(3)));
  EXPECT_EQ(tbl_cli("gen biorient -n 4").out, tbl::serialize(tbl::complete_biorientation(4)));
  auto a = tbl_cli("gen random -n 14 -g 6 --seed 3");
  auto b = tbl_cli("gen random -n 14 -g 6 --seed 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto d = tbl::parse_digraph(a.out);
  EXPECT_GE(tbl::girth(d).value(), 6);
  EXPECT_EQ(tbl_cli("gen random -n 10 -g 9 --seed 3").code, 2);
  EXPECT_NE(tbl_cli("gen --dot dk -k 2").out.find("digraph"), std::string::npos);
  auto chosen = tbl_cli("gen dk -k 3 --choices 0,1 0,1 1,2");
  EXPECT_EQ(chosen.code, 0);
  EXPECT_EQ(tbl_cli("gen dk -k 3 --choices 0,0 0,1 0,1").code, 2);
}

TEST(Cli, VerifyTheoremDeterministic) {
  const std::string args = "verify-theorem -k 1 --trials 8 --nmin 12 --nmax 16 --seed 4";
  auto a = tbl_cli(args);
  auto b = tbl_cli(args + " -j 3");
  ASSERT_EQ(a.code, 0);
  auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
  EXPECT_EQ(ja["summary"]["trials"], 8);
  for (auto* j : {&ja, &jb}) {
    for (auto& t : (*j)["trials"]) t.erase("elapsed_ms");
  }
  EXPECT_EQ(ja, jb);
  EXPECT_EQ(tbl_cli("verify-theorem -k 1 --trials 1 --nmin 3 --nmax 4 --seed 0").code, 2);
}

TEST(Cli, VerifyConstruction) {
  auto r = tbl_cli("verify-construction -k 3");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["trials"][0]["verdict"], "none");
}

TEST(Cli, ExploreGap) {
  auto dir = std::filesystem::temp_directory_path() / "tbl_cli_gap";
  std::filesystem::remove_all(dir);
  auto r = tbl_cli("explore-gap -k 3 -g 3 --budget 10 --seed 1 -o " + dir.string());
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_FALSE(j["candidates"].empty());
  EXPECT_TRUE(std::filesystem::exists(dir / j["candidates"][0]["file"].get<std::string>()));
  EXPECT_EQ(tbl_cli("explore-gap -k 3 -g 3 --budget 0 --seed 1 -o " + dir.string()).code, 1);
  EXPECT_EQ(tbl_cli("explore-gap -k 3 -g 20 --budget 5 --seed 1 -o " + dir.string()).code, 2);
}

TEST(Cli, Probe) {
  auto f = write_graph("c14", tbl::directed_cycle(14));
  auto r = tbl_cli("probe " + f + " -k 3 --arc 13 0");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 9u);
  EXPECT_EQ(tbl_cli("probe " + f + " -k 3 --arc 0 13").code, 2);
  EXPECT_EQ(tbl_cli("probe " + f + " -k 3 --root 99").code, 2);
}
