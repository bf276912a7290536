// Copyright 2026 The embalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the installed binary end to end on small generated fixtures.

#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "embalign/alignment.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "embalign_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_lines(const std::string& p, const std::vector<std::string>& lines) {
  std::ofstream out(p);
  for (const auto& l : lines) out << l << '\n';
}

// Exit status of the CLI; stdout goes to `stdout_file`.
int run(const std::string& args, const std::string& stdout_file = "last.out") {
  std::string cmd = std::string(EMBALIGN_CLI_PATH) + " " + args + " > " + path(stdout_file) +
                    " 2> " + path("last.err");
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Fixture {
  Fixture() {
    synthetic::BitextSpec spec;
    spec.lines = 120;
    spec.frequent_words = 20;
    spec.rare_pairs = 4;
    spec.rare_singles = 4;
    spec.distractors = 20;
    auto b = synthetic::make_dictionary_bitext(spec);
    write_lines(path("c.src"), b.source_lines);
    write_lines(path("c.tgt"), b.target_lines);
    embalign::save_vectors(path("x.vec"), b.source_space);
    embalign::save_vectors(path("y.vec"), b.target_space);
    std::ofstream seeds(path("seeds.txt"));
    for (const auto& [s, t] : b.seeds) seeds << s << ' ' << t << '\n';
    std::ofstream gold(path("gold.txt"));
    for (std::size_t s = 0; s < b.gold.size(); ++s)
      for (const auto& k : b.gold.sentences[s].sure)
        gold << s + 1 << ' ' << k.src + 1 << ' ' << k.tgt + 1 << " S\n";
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

std::string map_args() {
  return "map --src-vectors " + path("x.vec") + " --tgt-vectors " + path("y.vec") +
         " --seeds " + path("seeds.txt") + " --out-src " + path("xm.vec") + " --out-tgt " +
         path("ym.vec");
}

std::string align_args(const std::string& out) {
  return "align --src " + path("c.src") + " --tgt " + path("c.tgt") + " --out " + path(out);
}

std::string vectors() {
  return " --src-vectors " + path("xm.vec") + " --tgt-vectors " + path("ym.vec");
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  fixture();
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("map --src-vectors " + path("x.vec") + " --tgt-vectors " + path("y.vec") +
            " --seeds " + path("missing.txt") + " --out-src a --out-tgt b") == 2);
  CHECK(run(align_args("o.txt") + " --lambda -1") == 2);
  CHECK(run(align_args("o.txt") + " --neighborhood sideways") == 2);
}

TEST_CASE("map reports a small residual for a rotated space") {
  fixture();
  REQUIRE(run(map_args(), "map.out") == 0);
  std::string out = slurp(path("map.out"));
  auto pos = out.find("relative_residual=");
  REQUIRE(pos != std::string::npos);
  // Noisy latent copies: the residual is small but not zero.
  CHECK(std::stod(out.substr(pos + 18)) < 0.5);
  CHECK(out.rfind("seeds=40/40", 0) == 0);
  CHECK(fs::exists(path("xm.vec")));

  // Identical spaces with identity seeds.
  std::ofstream ident(path("ident.txt"));
  synthetic::Rng rng(1);
  auto s = synthetic::random_space(rng, 12, 4, "w");
  embalign::save_vectors(path("same.vec"), s);
  for (const auto& w : s.words()) ident << w << ' ' << w << '\n';
  ident.close();
  REQUIRE(run("map --src-vectors " + path("same.vec") + " --tgt-vectors " + path("same.vec") +
                  " --seeds " + path("ident.txt") + " --out-src " + path("s1.vec") +
                  " --out-tgt " + path("s2.vec"),
              "ident.out") == 0);
  std::string id = slurp(path("ident.out"));
  CHECK(std::stod(id.substr(id.find(" residual=") + 10)) <= 1e-6);
}

TEST_CASE("align writes one Pharaoh line per pair and run artifacts") {
  fixture();
  REQUIRE(run(map_args()) == 0);
  REQUIRE(run(align_args("base.txt") + " --run-dir " + path("runs") + " --tag base") == 0);
  std::ifstream in(path("base.txt"));
  auto set = embalign::read_pharaoh(in);
  CHECK(set.size() == 120);
  for (const char* f : {"config.txt", "fwd.table", "bwd.table", "fwd.log", "bwd.log",
                        "fwd.align", "bwd.align", "sym.align"})
    CHECK(fs::exists(workdir() / "runs" / "base" / f));
  CHECK(slurp(path("runs/base/sym.align")) == slurp(path("base.txt")));
  CHECK(slurp(path("last.err")).find("lambda=10000") != std::string::npos);
}

TEST_CASE("lambda zero is byte-identical to the baseline") {
  fixture();
  REQUIRE(run(map_args()) == 0);
  REQUIRE(run(align_args("b0.txt")) == 0);
  REQUIRE(run(align_args("l0.txt") + vectors() + " --lambda 0") == 0);
  CHECK(slurp(path("b0.txt")) == slurp(path("l0.txt")));
}

TEST_CASE("end-to-end runs are deterministic") {
  fixture();
  REQUIRE(run(map_args()) == 0);
  REQUIRE(run(align_args("d1.txt") + vectors() + " --parallel-directions") == 0);
  REQUIRE(run(align_args("d2.txt") + vectors()) == 0);
  CHECK(slurp(path("d1.txt")) == slurp(path("d2.txt")));
  CHECK_FALSE(slurp(path("d1.txt")).empty());
}

TEST_CASE("config precedence: flag over file over default") {
  fixture();
  std::ofstream(path("cfg.txt")) << "# comment\nlambda = 5\nhmm_iters=2\n";
  REQUIRE(run(align_args("c1.txt") + " --config " + path("cfg.txt") + " --lambda 7") == 0);
  std::string err = slurp(path("last.err"));
  CHECK(err.find("lambda=7\n") != std::string::npos);
  CHECK(err.find("hmm_iters=2\n") != std::string::npos);
  CHECK(err.find("m1_iters=5\n") != std::string::npos);
  std::ofstream(path("bad.txt")) << "no_such_key=1\n";
  CHECK(run(align_args("c2.txt") + " --config " + path("bad.txt")) == 2);
}

TEST_CASE("eval prints the metrics line") {
  fixture();
  std::ofstream(path("g.txt")) << "1 1 1 S\n1 2 2 P\n2 1 1 S\n";
  std::ofstream(path("perfect.txt")) << "0-0 1-1\n0-0\n";
  std::ofstream(path("empty.txt")) << "\n\n";
  REQUIRE(run("eval --pred " + path("perfect.txt") + " --gold " + path("g.txt"), "e1.out") == 0);
  CHECK(slurp(path("e1.out")).rfind("AER=0.0000 ", 0) == 0);
  REQUIRE(run("eval --pred " + path("empty.txt") + " --gold " + path("g.txt"), "e2.out") == 0);
  CHECK(slurp(path("e2.out")).rfind("AER=1.0000 ", 0) == 0);
  std::ofstream(path("short.txt")) << "0-0\n";
  CHECK(run("eval --pred " + path("short.txt") + " --gold " + path("g.txt")) != 0);
  REQUIRE(run("eval --pred " + path("short.txt") + " --gold " + path("g.txt") + " --limit 1",
              "e3.out") == 0);
  CHECK(slurp(path("e3.out")).rfind("AER=0.0000 ", 0) == 0);
}

TEST_CASE("baseline alignment of the fixture scores well") {
  fixture();
  REQUIRE(run(align_args("q.txt")) == 0);
  REQUIRE(run("eval --pred " + path("q.txt") + " --gold " + path("gold.txt"), "q.out") == 0);
  std::string out = slurp(path("q.out"));
  CHECK(std::stod(out.substr(4)) < 0.2);
}
