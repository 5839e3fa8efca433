#include "pfno_cli/run_command.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>
#include <spdlog/spdlog.h>

#include "pfno/digest.hpp"
#include "pfno/error.hpp"
#include "pfno/metrics/ivantsov.hpp"
#include "pfno/metrics/report.hpp"
#include "pfno/nn/grad_check.hpp"
#include "pfno/snapshot.hpp"
#include "pfno/train/dataset.hpp"
#include "pfno/train/rollout.hpp"
#include "pfno/train/trainer.hpp"
#include "pfno_cli/config.hpp"
#include "pfno_cli/plots.hpp"

namespace fs = std::filesystem;

namespace pfno::cli {

namespace {

// Output directory of one run. Nothing touches the disk before create();
// every written file is recorded for the manifest.
class RunDir {
 public:
  bool active() const { return !root_.empty(); }
  const fs::path& root() const { return root_; }

  void create(const fs::path& root) {
    root_ = root;
    created_ = !fs::exists(root);
    fs::create_directories(root);
  }

  fs::path file(const std::string& rel) {
    files_.push_back(rel);
    return root_ / rel;
  }

  void write_manifest(const std::string& command, const RunConfig& cfg, const std::string& status) {
    auto f = fmt::output_file((root_ / "run_manifest.txt").string());
    f.print("command={}\nstatus={}\n", command, status);
    std::istringstream echo(cfg.echo());
    for (std::string line; std::getline(echo, line);) f.print("config.{}\n", line);
    std::vector<std::string> sorted = files_;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& rel : sorted) {
      if (!fs::exists(root_ / rel)) continue;
      const auto bytes = read_file(root_ / rel);
      f.print("sha256.{}={}\n", rel, sha256_hex(std::string_view(bytes.data(), bytes.size())));
    }
  }

  // Undo a run that failed validation after create().
  void rollback() {
    if (!active()) return;
    std::error_code ec;
    for (const auto& rel : files_) fs::remove(root_ / rel, ec);
    if (created_ && fs::is_empty(root_, ec)) fs::remove(root_, ec);
  }

 private:
  fs::path root_;
  bool created_ = false;
  std::vector<std::string> files_;
};

struct Context {
  std::string command;
  RunConfig cfg;
  fs::path out;  // empty when --out was not given
  RunDir dir;
  std::ostream* out_stream = nullptr;
};

void require_out(const Context& c) {
  if (c.out.empty()) throw InvalidArgument(c.command + ": --out is required");
}

void require_dir(const std::string& what, const std::string& path) {
  if (path.empty()) throw InvalidArgument("missing --" + what);
  if (!fs::is_directory(path)) throw InvalidArgument(what + " directory not found: " + path);
}

std::string snap_name(int step) { return fmt::format("state_{:06d}.snap", step); }

Physics physics(const RunConfig& cfg, PhysModel model) {
  Physics p;
  p.model = model;
  p.ac = ac_params(cfg);
  p.dendrite = dendrite_params(cfg);
  return p;
}

PhysModel parse_model(const std::string& s) {
  if (s == "ac") return PhysModel::ac;
  if (s == "dendrite") return PhysModel::dendrite;
  throw InvalidArgument("unknown model: " + s + " (expected ac or dendrite)");
}

int grid_n(const RunConfig& cfg, PhysModel m) {
  const long n = cfg.has("n") ? cfg.integer("n") : (m == PhysModel::ac ? 128 : 200);
  if (n < 4 || n > 8192) throw InvalidArgument("--n must lie in [4, 8192]");
  return static_cast<int>(n);
}

double domain_length(const RunConfig& cfg, PhysModel m) {
  return m == PhysModel::ac ? 1.0 : cfg.real("dendrite.length");
}

int positive(const RunConfig& cfg, const std::string& key, int lo = 1) {
  const long v = cfg.integer(key);
  if (v < lo) throw InvalidArgument(fmt::format("{} must be >= {}", key, lo));
  return static_cast<int>(v);
}

State initial_state(const RunConfig& cfg, const Physics& phys, int n) {
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  const double L = domain_length(cfg, phys.model);
  State s;
  if (const std::string path = cfg.text_value("ic"); !path.empty()) {
    if (!fs::is_regular_file(path)) throw InvalidArgument("initial condition not found: " + path);
    const Meta meta = snapshot_meta(path);
    const double len = meta.count("length") ? std::stod(meta.at("length")) : L;
    auto ch = snapshot_read(path, len);
    if (phys.model == PhysModel::dendrite && ch.size() < 2) throw InvalidArgument("dendrite initial condition needs (phi, U)");
    s.phi = ch[0];
    if (phys.model == PhysModel::dendrite) s.U = ch[1];
    return s;
  }
  if (phys.model == PhysModel::ac) {
    AcDatasetSpec spec;
    spec.count = 1;
    spec.n = n;
    spec.variant = parse_ac_variant(cfg.text_value("ic.kind"));
    spec.params = phys.ac;
    s.phi = gen_ac_dataset(spec, seed).inputs[0];
    return s;
  }
  const int grains = positive(cfg, "dendrite.grains");
  std::vector<Point> centers{{L / 2, L / 2}};
  if (grains > 1) {
    std::mt19937_64 rng(seed);
    centers = sample_grain_centers(rng, grains, L, 20.0 * phys.dendrite.eps);
  }
  auto [phi, U] = ic_dendrite(make_grid(n, L), centers, phys.dendrite);
  s.phi = std::move(phi);
  s.U = std::move(U);
  return s;
}

void validate_physics(const Physics& phys, const Grid2D& g) {
  if (phys.model == PhysModel::ac) validate(phys.ac, g);
  else validate(phys.dendrite);
}

void write_trajectory(Context& c, const TrajectoryRecord& t, const Physics& phys) {
  const double L = t.states.front().phi.grid.length;
  for (const auto& s : t.states) {
    std::vector<Field2D> ch{s.phi};
    if (s.has_U()) ch.push_back(s.U);
    const std::string name = snap_name(s.step);
    snapshot_write(ch, c.dir.file(name),
                   {{"step", std::to_string(s.step)},
                    {"time", fmt::format("{:.17g}", s.time)},
                    {"length", fmt::format("{:.17g}", L)},
                    {"model", phys.model == PhysModel::ac ? "ac" : "dendrite"}});
    c.dir.file(name + ".meta");
  }
  write_metrics_csv(c.dir.file("metrics.csv"), t.rows);
  if (c.cfg.flag("plots")) {
    write_field_png(c.dir.file("phi_final.png"), t.states.back().phi);
    std::vector<double> e;
    for (const auto& r : t.rows) e.push_back(r.energy);
    write_curve_png(c.dir.file("energy.png"), e);
  }
}

struct LoadedTrajectory {
  TrajectoryRecord record;
  PhysModel model = PhysModel::ac;
};

std::vector<fs::path> snapshot_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("state_", 0) == 0 && e.path().extension() == ".snap") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidArgument("no state_*.snap files in " + dir.string());
  return files;
}

LoadedTrajectory load_trajectory(const fs::path& dir, const RunConfig& cfg) {
  LoadedTrajectory out;
  const auto files = snapshot_files(dir);
  for (const auto& f : files) {
    const Meta meta = snapshot_meta(f);
    if (!meta.count("time") || !meta.count("step")) throw InvalidArgument("snapshot without time metadata: " + f.string());
    const double len = meta.count("length") ? std::stod(meta.at("length")) : 1.0;
    auto ch = snapshot_read(f, len);
    State s;
    s.step = std::stoi(meta.at("step"));
    s.time = std::stod(meta.at("time"));
    s.phi = ch[0];
    if (ch.size() > 1) s.U = ch[1];
    out.record.states.push_back(std::move(s));
  }
  out.model = out.record.states.front().has_U() ? PhysModel::dendrite : PhysModel::ac;
  out.record.model = out.model;
  const Physics phys = physics(cfg, out.model);
  for (const auto& s : out.record.states) {
    out.record.rows.push_back(state_metrics(s, phys));
    out.record.rows.back().step = s.step;
    out.record.rows.back().time = s.time;
  }
  return out;
}

// Physical parameters recorded by the run that produced `dir`, where not set explicitly.
void inherit_physics(RunConfig& cfg, const fs::path& dir) {
  std::ifstream in(dir / "run_manifest.txt");
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("config.", 0) != 0) continue;
    const auto kv = line.substr(7);
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const auto key = kv.substr(0, eq);
    if (key.rfind("ac.", 0) == 0 || key.rfind("dendrite.", 0) == 0) cfg.default_to(key, kv.substr(eq + 1));
  }
}

int cmd_simulate(Context& c, PhysModel model) {
  require_out(c);
  const Physics phys = physics(c.cfg, model);
  const int n = grid_n(c.cfg, model);
  validate_physics(phys, make_grid(n, domain_length(c.cfg, model)));
  const RolloutOptions opt{positive(c.cfg, "steps", 0), positive(c.cfg, "stride"), model == PhysModel::dendrite};
  const State ic = initial_state(c.cfg, phys, n);

  c.dir.create(c.out);
  const TrajectoryRecord t = reference_rollout(ic, phys, opt);
  write_trajectory(c, t, phys);
  const auto& last = t.rows.back();
  *c.out_stream << fmt::format("steps={} energy={:.10g} perimeter={:.10g} solid_fraction={:.10g}\n", last.step,
                               last.energy, last.perimeter, last.solid_fraction);
  if (t.blowup_step >= 0) throw NumericalError(fmt::format("solver failed at step {}", t.blowup_step));
  return kExitOk;
}

int cmd_gen_data(Context& c) {
  require_out(c);
  const PhysModel model = parse_model(c.cfg.text_value("model"));
  const Physics phys = physics(c.cfg, model);
  const int n = grid_n(c.cfg, model);
  validate_physics(phys, make_grid(n, domain_length(c.cfg, model)));
  const std::uint64_t seed = static_cast<std::uint64_t>(c.cfg.integer("seed"));
  const bool targets = c.cfg.flag("data.targets");

  std::function<Dataset()> gen;
  if (model == PhysModel::ac) {
    AcDatasetSpec spec;
    spec.count = positive(c.cfg, "data.count");
    spec.n = n;
    spec.variant = parse_ac_variant(c.cfg.text_value("data.variant"));
    spec.with_targets = targets;
    spec.params = phys.ac;
    gen = [spec, seed] { return gen_ac_dataset(spec, seed); };
  } else {
    DendriteDatasetSpec spec;
    spec.n = n;
    spec.length = domain_length(c.cfg, model);
    spec.arrangements = positive(c.cfg, "data.arrangements");
    spec.states = positive(c.cfg, "data.states");
    spec.stride = positive(c.cfg, "data.stride");
    spec.with_targets = targets;
    spec.threads = positive(c.cfg, "threads");
    spec.params = phys.dendrite;
    gen = [spec, seed] { return gen_dendrite_dataset(spec, seed); };
  }
  const Dataset d = gen();
  c.dir.create(c.out);
  write_dataset(d, c.out);
  for (std::size_t k = 0; k < d.size(); ++k) c.dir.file(fmt::format("sample_{:06d}.snap", k));
  c.dir.file("manifest.txt");
  *c.out_stream << fmt::format("samples={} digest={}\n", d.size(), d.digest());
  return kExitOk;
}

int cmd_train(Context& c) {
  require_out(c);
  require_dir("dataset", c.cfg.text_value("dataset"));
  const LossKind loss = parse_loss_kind(c.cfg.text_value("train.loss"));
  const std::string ckpt = c.cfg.text_value("ckpt");
  if (loss == LossKind::residual && ckpt.empty())
    throw InvalidArgument("residual training is a refinement and needs a deepritz checkpoint (--ckpt)");
  if (!ckpt.empty() && !fs::is_regular_file(ckpt)) throw InvalidArgument("checkpoint not found: " + ckpt);

  const Dataset data = read_dataset(c.cfg.text_value("dataset"));
  const std::string model_name = data.model == PhysModel::ac ? "ac" : "dendrite";
  const Physics phys = physics(c.cfg, data.model);
  validate_physics(phys, data.grid());
  const nn::ArchitectureSpec spec = ckpt.empty() ? architecture(c.cfg, model_name) : nn::checkpoint_arch(ckpt);
  spec.validate(data.grid().n);
  if (spec.input_channels() == 2 && data.model != PhysModel::dendrite)
    throw InvalidArgument("a (phi, U) architecture needs a dendrite dataset");

  TrainConfig tc;
  tc.loss = loss;
  tc.batch_size = c.cfg.has("train.batch_size") ? positive(c.cfg, "train.batch_size")
                                                 : (data.model == PhysModel::ac ? 32 : 16);
  tc.lr = c.cfg.real("train.lr");
  tc.max_epochs = positive(c.cfg, "train.max_epochs");
  tc.window = positive(c.cfg, "train.window");
  tc.threshold = c.cfg.real("train.threshold");
  tc.seed = static_cast<std::uint64_t>(c.cfg.integer("seed"));
  tc.threads = positive(c.cfg, "threads");
  tc.time_budget_s = c.cfg.real("train.time_budget_s");
  tc.validate();
  if (tc.loss == LossKind::data && !data.has_targets()) throw InvalidArgument("data loss needs a dataset with targets");

  const nn::Network net(spec, phys.dendrite);
  nn::ModelWeights init;
  if (ckpt.empty()) {
    std::mt19937_64 rng(tc.seed);
    init = nn::init_weights(spec, rng);
  } else {
    init = nn::checkpoint_read(ckpt, spec);
  }

  c.dir.create(c.out);
  const TrainResult r = train(net, std::move(init), data, tc, phys);
  write_loss_history_csv(c.dir.file("loss_history.csv"), r.history);
  if (c.cfg.flag("plots")) {
    std::vector<double> l;
    for (const auto& h : r.history) l.push_back(h.train_loss);
    write_curve_png(c.dir.file("loss.png"), l);
  }
  if (r.diverged()) {
    nn::checkpoint_write(r.weights, c.dir.file("diagnostic.ckpt"));
    throw NumericalError(fmt::format("non-finite loss after {} epochs", r.history.size()));
  }
  nn::checkpoint_write(r.weights, c.dir.file("model.ckpt"));
  const double final_loss = r.history.empty() ? kNaN : r.history.back().train_loss;
  *c.out_stream << fmt::format("epochs={} stop={} loss={:.10g}\n", r.history.size(), r.stop_reason, final_loss);
  return kExitOk;
}

int cmd_rollout(Context& c) {
  require_out(c);
  const std::string ckpt = c.cfg.text_value("ckpt");
  if (ckpt.empty()) throw InvalidArgument("rollout needs --ckpt");
  if (!fs::is_regular_file(ckpt)) throw InvalidArgument("checkpoint not found: " + ckpt);
  const nn::ArchitectureSpec spec = nn::checkpoint_arch(ckpt);
  const PhysModel model = spec.input_channels() == 2 ? PhysModel::dendrite : parse_model(c.cfg.text_value("model"));
  const Physics phys = physics(c.cfg, model);
  const int n = grid_n(c.cfg, model);
  const State ic = initial_state(c.cfg, phys, n);
  validate_physics(phys, ic.phi.grid);
  spec.validate(ic.phi.grid.n);
  const nn::ModelWeights w = nn::checkpoint_read(ckpt, spec);
  const nn::Network net(spec, phys.dendrite);
  const RolloutOptions opt{positive(c.cfg, "steps", 0), positive(c.cfg, "stride"), model == PhysModel::dendrite};

  c.dir.create(c.out);
  const TrajectoryRecord t = rollout(net, w, ic, phys, opt);
  write_trajectory(c, t, phys);
  if (t.blowup_step >= 0) throw NumericalError(fmt::format("rollout blew up at step {}", t.blowup_step));
  const auto& last = t.rows.back();
  *c.out_stream << fmt::format("steps={} energy={:.10g} perimeter={:.10g}\n", last.step, last.energy, last.perimeter);
  return kExitOk;
}

int cmd_evaluate(Context& c) {
  require_out(c);
  const std::string ref = c.cfg.text_value("ref"), pred = c.cfg.text_value("pred");
  require_dir("ref", ref);
  require_dir("pred", pred);
  inherit_physics(c.cfg, ref);
  LoadedTrajectory r = load_trajectory(ref, c.cfg);
  LoadedTrajectory p = load_trajectory(pred, c.cfg);
  if (r.model != p.model) throw InvalidArgument("ref and pred trajectories are of different models");
  const Physics phys = physics(c.cfg, r.model);
  if (r.model == PhysModel::dendrite) {
    fill_tip_columns(r.record, phys);
    fill_tip_columns(p.record, phys);
  }
  const MetricsReport rep = error_metrics(p.record, r.record, r.model, c.cfg.flag("plots"));

  c.dir.create(c.out);
  write_report_csv(c.dir.file("report.csv"), rep);
  write_metrics_csv(c.dir.file("ref_metrics.csv"), r.record.rows);
  write_metrics_csv(c.dir.file("pred_metrics.csv"), p.record.rows);
  if (c.cfg.flag("plots") && !rep.abs_err_fields.empty())
    write_field_png(c.dir.file("abs_err_final.png"), rep.abs_err_fields.back(), -1.0, 1.0);
  *c.out_stream << fmt::format(
      "records={} mean_rel_err_perimeter={:.6e} mean_rel_err_energy={:.6e} mean_rel_err_solid_fraction={:.6e} "
      "max_abs_err_field={:.6e}\n",
      rep.rows.size(), rep.mean_rel_err_perimeter, rep.mean_rel_err_energy, rep.mean_rel_err_solid_fraction,
      rep.max_abs_err_field);
  return kExitOk;
}

int cmd_ivantsov(Context& c) {
  const double kappa = c.cfg.real("kappa");
  const double pe = ivantsov_peclet(kappa);
  const std::string line = fmt::format("kappa={:.6g} peclet={:.6e} residual={:.3e}\n", kappa, pe,
                                       ivantsov_residual(pe, kappa));
  if (!c.out.empty()) {
    c.dir.create(c.out);
    auto f = fmt::output_file(c.dir.file("ivantsov.txt").string());
    f.print("{}", line);
  }
  *c.out_stream << line;
  return kExitOk;
}

int cmd_gradcheck(Context& c) {
  const PhysModel model = parse_model(c.cfg.text_value("model"));
  const Physics phys = physics(c.cfg, model);
  const nn::ArchitectureSpec spec = architecture(c.cfg, model == PhysModel::ac ? "ac" : "dendrite");
  // Default: the smallest grid the architecture accepts (at least 8).
  int n = 8;
  if (spec.kind == nn::ModelKind::unet || spec.kind == nn::ModelKind::prescribed_rdno) n = std::max(n, 1 << spec.unet.levels);
  if (spec.kind == nn::ModelKind::fno) n = std::max(n, 2 * spec.fno.modes);
  if (c.cfg.has("n")) n = static_cast<int>(c.cfg.integer("n"));
  spec.validate(n);
  const std::uint64_t seed = static_cast<std::uint64_t>(c.cfg.integer("seed"));
  std::mt19937_64 rng(seed);
  const nn::ModelWeights w = nn::init_weights(spec, rng);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  nn::Tensor4 x(1, spec.input_channels(), n, n);
  for (double& v : x.v) v = u(rng);
  const nn::Network net(spec, phys.dendrite);
  const auto r = nn::grad_check(net, w, x, seed, positive(c.cfg, "gradcheck.samples"));
  const double tol = c.cfg.real("gradcheck.tolerance");
  const std::string line =
      fmt::format("arch={} max_rel_error={:.3e} worst={}\n", nn::to_string(spec.kind), r.max_rel_error, r.worst);
  if (!c.out.empty()) {
    c.dir.create(c.out);
    auto f = fmt::output_file(c.dir.file("gradcheck.txt").string());
    f.print("{}", line);
  }
  *c.out_stream << line;
  if (!(r.max_rel_error < tol)) throw NumericalError(fmt::format("gradient check above tolerance {:.1e}", tol));
  return kExitOk;
}

struct Subcommand {
  std::string name;
  std::string help;
  std::function<int(Context&)> run;
  // flag name -> config key
  std::vector<std::pair<std::string, std::string>> options;
  std::vector<std::pair<std::string, std::string>> switches;
};

std::vector<Subcommand> subcommands() {
  const std::vector<std::pair<std::string, std::string>> sim = {
      {"steps", "steps"}, {"n", "n"}, {"stride", "stride"}, {"ic", "ic"}};
  auto with = [](std::vector<std::pair<std::string, std::string>> a,
                 const std::vector<std::pair<std::string, std::string>>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  return {
      {"simulate-ac", "Allen-Cahn reference run (convex-concave splitting)",
       [](Context& c) { return cmd_simulate(c, PhysModel::ac); }, with(sim, {{"ic-kind", "ic.kind"}}), {}},
      {"simulate-dendrite", "Dendrite reference run (SAV)",
       [](Context& c) { return cmd_simulate(c, PhysModel::dendrite); },
       with(sim, {{"sigma", "dendrite.sigma"}, {"kappa", "dendrite.kappa"}, {"grains", "dendrite.grains"},
                  {"length", "dendrite.length"}}),
       {}},
      {"gen-data", "Generate a training dataset", cmd_gen_data,
       {{"model", "model"}, {"n", "n"}, {"count", "data.count"}, {"variant", "data.variant"}, {"states", "data.states"},
        {"data-stride", "data.stride"}, {"arrangements", "data.arrangements"}, {"sigma", "dendrite.sigma"},
        {"length", "dendrite.length"}},
       {{"targets", "data.targets"}}},
      {"train", "Train a neural operator", cmd_train,
       {{"dataset", "dataset"}, {"loss", "train.loss"}, {"arch", "arch.kind"}, {"ckpt", "ckpt"},
        {"epochs", "train.max_epochs"}, {"batch", "train.batch_size"}, {"lr", "train.lr"},
        {"time-budget", "train.time_budget_s"}, {"sigma", "dendrite.sigma"}},
       {}},
      {"rollout", "Iterate a trained operator from an initial condition", cmd_rollout,
       with(sim, {{"ckpt", "ckpt"}, {"model", "model"}, {"ic-kind", "ic.kind"}, {"sigma", "dendrite.sigma"}}), {}},
      {"evaluate", "Compare a predicted trajectory with a reference", cmd_evaluate,
       {{"ref", "ref"}, {"pred", "pred"}}, {}},
      {"ivantsov", "Tip Peclet number from the Ivantsov relation", cmd_ivantsov, {{"kappa", "kappa"}}, {}},
      {"gradcheck", "Central-difference check of network gradients", cmd_gradcheck,
       {{"arch", "arch.kind"}, {"n", "n"}, {"model", "model"}, {"samples", "gradcheck.samples"}}, {}},
  };
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-field solvers and neural operators"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config_path, out_dir;
  std::vector<std::string> sets;
  bool plots = false;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  std::vector<std::pair<CLI::Option*, std::string>> bound;  // option -> config key
  std::vector<std::pair<CLI::Option*, std::string>> bound_switches;

  const auto cmds = subcommands();
  std::vector<CLI::App*> apps;
  for (const auto& s : cmds) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--out", out_dir, "output directory");
    bound.emplace_back(sub->add_option("--seed", values[s.name + ":seed"], "random seed"), "seed");
    bound.emplace_back(sub->add_option("--threads", values[s.name + ":threads"], "worker threads"), "threads");
    sub->add_flag("--plots", plots, "write PNG plots");
    sub->add_option("--set", sets, "config override key=value (repeatable)");
    for (const auto& [flag, key] : s.options)
      bound.emplace_back(sub->add_option("--" + flag, values[s.name + ":" + flag], key), key);
    for (const auto& [flag, key] : s.switches)
      bound_switches.emplace_back(sub->add_flag("--" + flag, switches[s.name + ":" + flag], key), key);
    apps.push_back(sub);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitInvalid;
  }

  const std::size_t which = static_cast<std::size_t>(
      std::find(apps.begin(), apps.end(), app.get_subcommands().front()) - apps.begin());
  Context ctx;
  ctx.command = cmds[which].name;
  ctx.out = out_dir;
  ctx.out_stream = &out;

  try {
    if (const char* env = std::getenv("PFNO_THREADS"); env && *env) ctx.cfg.set("threads", env);
    if (!config_path.empty()) ctx.cfg.load_file(config_path);
    for (const auto& s : sets) ctx.cfg.set_pair(s);
    for (const auto& [opt, key] : bound)
      if (opt->count() > 0) ctx.cfg.set(key, opt->as<std::string>());
    for (const auto& [opt, key] : bound_switches)
      if (opt->count() > 0) ctx.cfg.set(key, "true");
    if (plots) ctx.cfg.set("plots", "true");

    const int code = cmds[which].run(ctx);
    if (ctx.dir.active()) ctx.dir.write_manifest(ctx.command, ctx.cfg, "ok");
    return code;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    if (ctx.dir.active()) ctx.dir.write_manifest(ctx.command, ctx.cfg, std::string("numerical_failure: ") + e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    ctx.dir.rollback();
    return kExitInvalid;
  } catch (const FormatError& e) {
    err << "malformed input: " << e.what() << '\n';
    ctx.dir.rollback();
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << '\n';
    ctx.dir.rollback();
    return kExitInvalid;
  }
}

}  // namespace pfno::cli
