#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfno/nn/models.hpp"
#include "pfno/snapshot.hpp"
#include "pfno_cli/config.hpp"
#include "pfno_cli/run_command.hpp"

namespace fs = std::filesystem;
using namespace pfno;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = cli::run_command(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "pfno_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string l; std::getline(in, l);) ++n;
  return n;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

const std::vector<std::string> kCoarseAc{"--set", "ac.eps=0.0625", "--set", "ac.dt=1e-3"};

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate-ac writes snapshots, metrics and a manifest") {
  const auto out = scratch("sim");
  const auto r = run({"simulate-ac", "--n", "128", "--steps", "50", "--seed", "7", "--out", out.string()});
  REQUIRE(r.code == 0);
  int snaps = 0;
  for (const auto& e : fs::directory_iterator(out)) snaps += e.path().extension() == ".snap";
  CHECK(snaps == 51);
  CHECK(count_lines(out / "metrics.csv") == 52);
  const std::string manifest = slurp(out / "run_manifest.txt");
  CHECK(manifest.find("command=simulate-ac") != std::string::npos);
  CHECK(manifest.find("status=ok") != std::string::npos);
  CHECK(manifest.find("config.seed=7") != std::string::npos);
  CHECK(manifest.find("sha256.metrics.csv=") != std::string::npos);
  CHECK(manifest.find("sha256.state_000050.snap=") != std::string::npos);
}

TEST_CASE("ivantsov prints the tip Peclet number") {
  const auto r = run({"ivantsov", "--kappa", "-0.3"});
  REQUIRE(r.code == 0);
  const auto pos = r.out.find("peclet=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 7)) == doctest::Approx(4.48e-2).epsilon(0.02));
  CHECK(run({"ivantsov", "--kappa", "0.2"}).code == 1);
}

TEST_CASE("validation errors exit 1 without outputs") {
  const auto out = scratch("bad");
  const auto r = run({"train", "--loss", "deepritz", "--arch", "rdno", "--dataset", "missing/", "--out", out.string()});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(out));

  const auto u = run({"simulate-ac", "--bogus", "1"});
  CHECK(u.code == 1);
  CHECK(u.err.find("Usage") != std::string::npos);
  CHECK(run({"no-such-command"}).code == 1);
  CHECK(run({"simulate-ac", "--set", "ac.nope=1", "--out", out.string()}).code == 1);
  CHECK(run({"simulate-ac", "--steps", "ten", "--out", out.string()}).code == 1);
  CHECK(run({"simulate-ac", "--set", "ac.beta=1.5", "--out", out.string()}).code == 1);
  CHECK(run({"simulate-ac", "--steps", "5"}).code == 1);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("config file with sections, overridden by flags") {
  const auto dir = scratch("cfg");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "# coarse run\nsteps = 3\n[ac]\neps = 0.0625\ndt = 1e-3\n";
  }
  const auto out = dir / "out";
  REQUIRE(run({"simulate-ac", "--config", (dir / "run.cfg").string(), "--n", "32", "--steps", "4", "--out", out.string()})
              .code == 0);
  const std::string m = slurp(out / "run_manifest.txt");
  CHECK(m.find("config.steps=4") != std::string::npos);
  CHECK(m.find("config.ac.eps=0.0625") != std::string::npos);
  CHECK(count_lines(out / "metrics.csv") == 6);

  cli::RunConfig c;
  c.load_file(dir / "run.cfg");
  CHECK(c.real("ac.dt") == 1e-3);
  CHECK(c.integer("steps") == 3);
  CHECK_THROWS(c.set("steps", "1.5"));
  CHECK_THROWS(c.set("plots", "maybe"));
}

TEST_CASE("PFNO_THREADS sets the default thread count") {
  const auto out = scratch("threads");
  setenv("PFNO_THREADS", "3", 1);
  REQUIRE(run(std::vector<std::string>{"simulate-ac", "--n", "32", "--steps", "1", "--out", out.string()} + kCoarseAc)
              .code == 0);
  CHECK(slurp(out / "run_manifest.txt").find("config.threads=3") != std::string::npos);
  REQUIRE(run(std::vector<std::string>{"simulate-ac", "--n", "32", "--steps", "1", "--threads", "2", "--out",
                                       out.string()} +
              kCoarseAc)
              .code == 0);
  CHECK(slurp(out / "run_manifest.txt").find("config.threads=2") != std::string::npos);
  unsetenv("PFNO_THREADS");
}

TEST_CASE("identical runs are bit-identical") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const std::vector<std::string> args{"simulate-ac", "--n", "32", "--steps", "5", "--seed", "3", "--ic-kind", "ood_random"};
  REQUIRE(run(args + kCoarseAc + std::vector<std::string>{"--out", a.string()}).code == 0);
  REQUIRE(run(args + kCoarseAc + std::vector<std::string>{"--out", b.string()}).code == 0);
  CHECK(tree(a) == tree(b));
}

TEST_CASE("data, train, rollout and evaluate pipeline") {
  const auto root = scratch("pipe");
  const auto data = root / "data", tr = root / "train", ro = root / "ro", ref = root / "ref", ev = root / "ev";
  REQUIRE(run(std::vector<std::string>{"gen-data", "--model", "ac", "--n", "32", "--count", "4", "--out", data.string()} +
              kCoarseAc)
              .code == 0);
  const auto before = tree(data);
  const auto t = run(std::vector<std::string>{"train", "--dataset", data.string(), "--arch", "rdno", "--epochs", "3",
                                              "--batch", "2", "--set", "arch.rdno.diffusion_kernel=5", "--plots",
                                              "--out", tr.string()} +
                     kCoarseAc);
  REQUIRE(t.code == 0);
  CHECK(tree(data) == before);
  CHECK(fs::exists(tr / "model.ckpt"));
  CHECK(count_lines(tr / "loss_history.csv") == 4);
  CHECK(slurp(tr / "loss.png").substr(1, 3) == "PNG");

  CHECK(run(std::vector<std::string>{"train", "--dataset", data.string(), "--loss", "residual", "--out",
                                     (root / "res").string()} +
            kCoarseAc)
            .code == 1);
  CHECK(run(std::vector<std::string>{"train", "--dataset", data.string(), "--loss", "data", "--out",
                                     (root / "dl").string()} +
            kCoarseAc)
            .code == 1);

  REQUIRE(run(std::vector<std::string>{"rollout", "--ckpt", (tr / "model.ckpt").string(), "--n", "32", "--steps", "4",
                                       "--seed", "1", "--out", ro.string()} +
              kCoarseAc)
              .code == 0);
  REQUIRE(run(std::vector<std::string>{"simulate-ac", "--n", "32", "--steps", "4", "--seed", "1", "--out",
                                       ref.string()} +
              kCoarseAc)
              .code == 0);
  // Same seed, same initial condition.
  CHECK(slurp(ro / "state_000000.snap") == slurp(ref / "state_000000.snap"));
  const auto e = run({"evaluate", "--ref", ref.string(), "--pred", ro.string(), "--out", ev.string()});
  REQUIRE(e.code == 0);
  CHECK(count_lines(ev / "report.csv") == 6);

  const auto self = run({"evaluate", "--ref", ref.string(), "--pred", ref.string(), "--out", (root / "self").string()});
  REQUIRE(self.code == 0);
  CHECK(self.out.find("mean_rel_err_perimeter=0.000000e+00") != std::string::npos);
}

TEST_CASE("numerical failure exits 2 and records it") {
  const auto root = scratch("blowup");
  fs::create_directories(root);
  auto spec = nn::ac_rdno_spec();
  std::mt19937_64 rng(0);
  auto w = nn::init_weights(spec, rng);
  w.ptr("proj.b")[0] = 1e308;
  w.ptr("proj.w")[0] = 1e308;
  nn::checkpoint_write(w, root / "bad.ckpt");
  const auto out = root / "out";
  const auto r = run(std::vector<std::string>{"rollout", "--ckpt", (root / "bad.ckpt").string(), "--n", "32",
                                              "--steps", "3", "--out", out.string()} +
                     kCoarseAc);
  CHECK(r.code == 2);
  CHECK(slurp(out / "run_manifest.txt").find("status=numerical_failure") != std::string::npos);
}

TEST_CASE("gradcheck and simulate-dendrite") {
  CHECK(run({"gradcheck", "--arch", "rdno"}).code == 0);
  const auto out = scratch("dend");
  const auto r = run({"simulate-dendrite", "--n", "64", "--length", "0.16", "--steps", "6", "--stride", "3", "--plots",
                      "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(count_lines(out / "metrics.csv") == 4);
  CHECK(snapshot_read(out / "state_000006.snap", 0.16).size() == 2);
  CHECK(fs::exists(out / "phi_final.png"));
}

}
