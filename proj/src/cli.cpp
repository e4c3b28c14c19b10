#include "tacdss/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "tacdss/domain.hpp"
#include "tacdss/error.hpp"
#include "tacdss/genetic_tuner.hpp"
#include "tacdss/gradient_tuner.hpp"
#include "tacdss/model_io.hpp"
#include "tacdss/service.hpp"
#include "tacdss/wang_mendel.hpp"

namespace tacdss::cli {

namespace fs = std::filesystem;

namespace {

struct GenDataArgs {
  long long n = 500;
  double noise = 0.02;
  std::uint64_t seed = 42;
  std::string out;
};

struct LearnArgs {
  std::string data;
  std::string mfs = "3,3,3,3";
  std::size_t out_mfs = 5;
  std::string profile = "trainable";
  std::string out;
};

struct GdArgs {
  std::string model;
  std::string data;
  double lr = 0.1;
  double momentum = 0.8;
  int epochs = 10;
  std::string tunable = "both";
  std::string gradient = "auto";
  double fd_step = 1e-6;
  std::string trace;
  std::string out;
};

struct GaArgs {
  std::string model;
  std::string data;
  std::size_t pop = 50;
  int gen = 50;
  double mutation = 0.01;
  double sigma = 0.1;
  std::size_t tournament = 2;
  std::size_t elitism = 1;
  double crossover = 0.9;
  std::uint64_t seed = 7;
  std::string trace;
  std::string out;
};

struct InferArgs {
  std::string model;
  double fuel = 0.0;
  double time = 0.0;
  double weapon = 0.0;
  double danger = 0.0;
  bool raw_units = false;
  bool explain = false;
};

struct EvalArgs {
  std::string model;
  std::string data;
};

struct ServeArgs {
  std::string model;
  std::string addr = "127.0.0.1:8080";
  std::string static_dir;
};

struct ReproArgs {
  std::string out_dir;
  long long n = 500;
  double noise = 0.02;
  std::uint64_t data_seed = 42;
  std::uint64_t ga_seed = 7;
  std::size_t out_mfs = 5;
  bool sweep = true;
};

std::string num(double v) { return io::format_number(v); }

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::array<std::size_t, 4> parse_mfs(const std::string& text) {
  std::array<std::size_t, 4> mfs{};
  std::stringstream in(text);
  std::string cell;
  std::size_t i = 0;
  while (std::getline(in, cell, ',')) {
    if (i == 4) throw ConfigError("--mfs needs exactly 4 comma-separated counts");
    try {
      std::size_t used = 0;
      const long v = std::stol(cell, &used);
      if (used != cell.size() || v < 2) throw std::invalid_argument("");
      mfs[i++] = static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw ConfigError("--mfs entries must be integers >= 2, got '" + cell + "'");
    }
  }
  if (i != 4) throw ConfigError("--mfs needs exactly 4 comma-separated counts");
  return mfs;
}

InferenceConfig parse_profile(const std::string& name) {
  if (name == "trainable") return InferenceConfig::trainable();
  if (name == "classic") return InferenceConfig::classic();
  throw ConfigError("--profile must be 'trainable' or 'classic'");
}

std::vector<TrainingSample> load_nonempty(const std::string& path) {
  auto data = io::read_dataset(fs::path(path));
  if (data.empty()) throw DataError("dataset '" + path + "' has no rows");
  return data;
}

// Shared by `tune gd` and `repro-paper`.
gradient::GdConfig gd_config(const GdArgs& a, const FuzzySystem& model) {
  gradient::GdConfig c;
  c.learning_rate = a.lr;
  c.momentum = a.momentum;
  c.epochs = a.epochs;
  c.fd_step = a.fd_step;
  if (a.tunable == "both") {
    c.tunable = gradient::Tunable::both;
  } else if (a.tunable == "inputs") {
    c.tunable = gradient::Tunable::input_centers;
  } else if (a.tunable == "outputs") {
    c.tunable = gradient::Tunable::output_centers;
  } else {
    throw ConfigError("--tunable must be 'both', 'inputs' or 'outputs'");
  }
  if (a.gradient == "auto") {
    c.gradient_mode = model.config().is_differentiable()
                          ? gradient::GradientMode::analytic
                          : gradient::GradientMode::finite_difference;
  } else if (a.gradient == "analytic") {
    c.gradient_mode = gradient::GradientMode::analytic;
  } else if (a.gradient == "fd") {
    c.gradient_mode = gradient::GradientMode::finite_difference;
  } else {
    throw ConfigError("--gradient must be 'auto', 'analytic' or 'fd'");
  }
  c.validate();
  return c;
}

genetic::GaConfig ga_config(const GaArgs& a) {
  genetic::GaConfig c;
  c.population_size = a.pop;
  c.generations = a.gen;
  c.mutation_rate = a.mutation;
  c.mutation_sigma = a.sigma;
  c.tournament_size = a.tournament;
  c.elitism = a.elitism;
  c.crossover_rate = a.crossover;
  c.seed = a.seed;
  c.validate();
  return c;
}

int gen_data(const GenDataArgs& a, std::ostream& out) {
  if (a.n < 1) throw ConfigError("--n must be at least 1");
  if (!(a.noise >= 0.0)) throw ConfigError("--noise must be non-negative");
  const auto data = domain::generate_dataset(static_cast<std::size_t>(a.n), a.noise, a.seed);
  io::write_dataset(data, fs::path(a.out));
  out << "wrote " << data.size() << " rows to " << a.out << '\n';
  return kExitOk;
}

int learn(const LearnArgs& a, std::ostream& out) {
  const auto mfs = parse_mfs(a.mfs);
  if (a.out_mfs < 2) throw ConfigError("--out-mfs must be at least 2");
  const InferenceConfig config = parse_profile(a.profile);
  const auto data = load_nonempty(a.data);
  const FuzzySystem system =
      wang_mendel::learn_rules(domain::make_skeleton(mfs, a.out_mfs, config), data);
  io::save_model(system, fs::path(a.out));
  out << "learned " << system.rules().size() << " rules\n";
  return kExitOk;
}

int tune_gd(const GdArgs& a, std::ostream& out) {
  const FuzzySystem model = io::load_model(fs::path(a.model));
  const gradient::GdConfig config = gd_config(a, model);
  const auto data = load_nonempty(a.data);
  const double initial = rmse(model, data);
  auto [tuned, report] = gradient::train(model, data, config);
  io::save_model(tuned, fs::path(a.out));
  if (!a.trace.empty()) io::write_trace(report.per_epoch, fs::path(a.trace));
  out << "initial rmse " << num(initial) << '\n'
      << "final rmse " << num(report.rmse) << '\n';
  return kExitOk;
}

int tune_ga(const GaArgs& a, std::ostream& out) {
  const genetic::GaConfig config = ga_config(a);
  const FuzzySystem model = io::load_model(fs::path(a.model));
  const auto data = load_nonempty(a.data);
  const double initial = rmse(model, data);
  const auto result = genetic::evolve(model, data, config);
  io::save_model(result.best, fs::path(a.out));
  if (!a.trace.empty()) io::write_trace(result.per_generation, fs::path(a.trace));
  out << "initial rmse " << num(initial) << '\n'
      << "final rmse " << num(result.best_rmse) << '\n';
  return kExitOk;
}

int infer_cmd(const InferArgs& a, std::ostream& out) {
  const FuzzySystem model = io::load_model(fs::path(a.model));
  if (model.input_count() != 4) {
    throw ValidationError("model must have the four tactical inputs");
  }
  domain::NormalizedFactors n;
  if (a.raw_units) {
    n = domain::normalize({a.fuel, a.time, a.weapon, a.danger});
  } else {
    n = {a.fuel, a.time, a.weapon, a.danger};
    domain::validate(n);
  }
  const auto x = n.as_array();
  const InferenceResult r = infer(model, x);
  out << "score " << num(r.crisp) << '\n';
  if (a.explain) {
    if (r.trace.fallback) out << "no rule fired; returned the output midpoint\n";
    for (std::size_t j = 0; j < model.input_count(); ++j) {
      const auto& var = model.inputs()[j];
      out << var.name() << " = " << num(x[j]) << ':';
      for (std::size_t m = 0; m < var.size(); ++m) {
        out << ' ' << var.labels()[m] << '=' << num(r.trace.memberships[j][m]);
      }
      out << '\n';
    }
    for (std::size_t i = 0; i < r.trace.firings.size(); ++i) {
      if (r.trace.firings[i] <= 0.0) continue;
      out << "rule " << i << " firing " << num(r.trace.firings[i]) << "  "
          << service::describe_rule(model, i) << '\n';
    }
  }
  return kExitOk;
}

int eval_cmd(const EvalArgs& a, std::ostream& out) {
  const FuzzySystem model = io::load_model(fs::path(a.model));
  const auto data = load_nonempty(a.data);
  out << "rmse " << num(rmse(model, data)) << '\n';
  return kExitOk;
}

int serve(const ServeArgs& a, std::ostream& out) {
  const auto colon = a.addr.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--addr must look like host:port");
  const std::string host = a.addr.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(a.addr.substr(colon + 1), &used);
    if (used != a.addr.size() - colon - 1 || port < 0 || port > 65535) {
      throw std::invalid_argument("");
    }
  } catch (const std::logic_error&) {
    throw ConfigError("--addr port must be an integer in [0, 65535]");
  }
  const service::InferenceService svc(io::load_model(fs::path(a.model)));
  std::optional<fs::path> static_dir;
  if (!a.static_dir.empty()) static_dir = a.static_dir;
  service::HttpServer server(svc, static_dir);
  const int bound = server.bind(host, port);
  out << "serving on http://" << host << ':' << bound << std::endl;
  server.listen();
  return kExitOk;
}

int repro(const ReproArgs& a, std::ostream& out) {
  if (a.n < 1) throw ConfigError("--n must be at least 1");
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  std::ostringstream summary;
  summary << "TACDSS experiment summary\n"
          << "Training data is synthetic. Reference values are shown for comparison\n"
          << "only and are not expected to match.\n\n";

  const auto data = domain::generate_dataset(static_cast<std::size_t>(a.n), a.noise, a.data_seed);
  io::write_dataset(data, dir / "data.csv");
  summary << "dataset: n=" << a.n << " noise=" << num(a.noise) << " seed=" << a.data_seed
          << '\n';

  const FuzzySystem rules = wang_mendel::learn_rules(
      domain::make_skeleton({3, 3, 3, 3}, a.out_mfs, InferenceConfig::trainable()), data);
  io::save_model(rules, dir / "rules.json");
  const double initial = rmse(rules, data);
  summary << "rule induction: 3 MFs per input, " << a.out_mfs << " output MFs, "
          << rules.rules().size() << " rules, rmse " << fixed(initial) << "\n\n";

  summary << "gradient descent (momentum 0.8, 10 epochs)     reference rmse\n";
  std::vector<double> gd_final;
  for (const auto& [lr, tag, reference] :
       {std::tuple{0.1, "0.1", "0.5775"}, std::tuple{0.3, "0.3", "0.2889"}}) {
    GdArgs g;
    g.lr = lr;
    const auto config = gd_config(g, rules);
    auto [tuned, report] = gradient::train(rules, data, config);
    io::save_model(tuned, dir / (std::string("gd_lr") + tag + ".json"));
    io::write_trace(report.per_epoch, dir / (std::string("gd_lr") + tag + "_trace.csv"));
    gd_final.push_back(report.rmse);
    summary << "  lr " << tag << ": rmse " << fixed(report.rmse) << "                    "
            << reference << '\n';
  }

  GaArgs ga;
  ga.seed = a.ga_seed;
  const auto result = genetic::evolve(rules, data, ga_config(ga));
  io::save_model(result.best, dir / "ga.json");
  io::write_trace(result.per_generation, dir / "ga_trace.csv");
  summary << "\ngenetic algorithm (pop 50, gen 50, mutation 0.01, tournament 2, elitism 1)\n"
          << "  rmse " << fixed(result.best_rmse) << " (initial best "
          << fixed(result.initial_best_rmse) << ")    reference rmse 0.05934\n";

  if (a.sweep) {
    std::ofstream grid(dir / "ga_sweep.csv", std::ios::binary);
    if (!grid) throw IoError("cannot write ga_sweep.csv");
    grid << "population,generations,best_rmse\n";
    summary << "\npopulation x generations sweep (best rmse)\n        gen 10    gen 30    gen 50\n";
    for (std::size_t pop : {10, 30, 50}) {
      summary << "pop " << std::setw(2) << pop;
      for (int gen : {10, 30, 50}) {
        GaArgs s = ga;
        s.pop = pop;
        s.gen = gen;
        const double best = pop == 50 && gen == 50
                                ? result.best_rmse
                                : genetic::evolve(rules, data, ga_config(s)).best_rmse;
        grid << pop << ',' << gen << ',' << num(best) << '\n';
        summary << "  " << fixed(best);
      }
      summary << '\n';
    }
    if (!grid) throw IoError("failed writing ga_sweep.csv");
  }

  summary << "\nscenarios (GA-tuned model)    score     reference score\n";
  for (const auto& p : domain::presets()) {
    const auto x = p.factors.as_array();
    summary << "  " << std::left << std::setw(6) << p.name << std::right
            << "                      " << fixed(predict(result.best, x), 3) << "     "
            << (p.recorded_score ? fixed(*p.recorded_score, 3) : std::string("-"));
    if (p.expected_score) summary << " (desired " << fixed(*p.expected_score, 3) << ")";
    summary << '\n';
  }
  summary << "\ndirection checks: lr 0.3 below lr 0.1: "
          << (gd_final[1] < gd_final[0] ? "yes" : "no")
          << "; GA below both GD runs: "
          << (result.best_rmse < std::min(gd_final[0], gd_final[1]) ? "yes" : "no") << '\n';

  std::ofstream file(dir / "summary.txt", std::ios::binary);
  file << summary.str();
  if (!file) throw IoError("failed writing summary.txt");
  out << summary.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive Mamdani fuzzy decision support for tactical air combat", "tacdss"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic training dataset");
  gen_cmd->add_option("--n", gen.n, "Number of samples")->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Gaussian target noise sigma")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

  LearnArgs learn_args;
  auto* learn_cmd = app.add_subcommand("learn-rules", "Induce a rule base from data");
  learn_cmd->add_option("--data", learn_args.data, "Dataset CSV")->required();
  learn_cmd->add_option("--mfs", learn_args.mfs, "MF counts for fuel,time,weapon,danger")
      ->capture_default_str();
  learn_cmd->add_option("--out-mfs", learn_args.out_mfs, "Output MF count")->capture_default_str();
  learn_cmd->add_option("--profile", learn_args.profile, "trainable | classic")
      ->capture_default_str();
  learn_cmd->add_option("--out", learn_args.out, "Model file to write")->required();

  auto* tune_cmd = app.add_subcommand("tune", "Tune MF centers");
  tune_cmd->require_subcommand(1);
  GdArgs gd;
  auto* gd_cmd = tune_cmd->add_subcommand("gd", "Gradient descent with momentum");
  gd_cmd->add_option("--model", gd.model, "Input model")->required();
  gd_cmd->add_option("--data", gd.data, "Training dataset")->required();
  gd_cmd->add_option("--lr", gd.lr, "Learning rate")->capture_default_str();
  gd_cmd->add_option("--momentum", gd.momentum, "Momentum")->capture_default_str();
  gd_cmd->add_option("--epochs", gd.epochs, "Epochs")->capture_default_str();
  gd_cmd->add_option("--tunable", gd.tunable, "both | inputs | outputs")->capture_default_str();
  gd_cmd->add_option("--gradient", gd.gradient, "auto | analytic | fd")->capture_default_str();
  gd_cmd->add_option("--fd-step", gd.fd_step, "Finite-difference step")->capture_default_str();
  gd_cmd->add_option("--trace", gd.trace, "Per-epoch RMSE CSV");
  gd_cmd->add_option("--out", gd.out, "Tuned model")->required();

  GaArgs ga;
  auto* ga_cmd = tune_cmd->add_subcommand("ga", "Real-coded genetic algorithm");
  ga_cmd->add_option("--model", ga.model, "Input model")->required();
  ga_cmd->add_option("--data", ga.data, "Training dataset")->required();
  ga_cmd->add_option("--pop", ga.pop, "Population size")->capture_default_str();
  ga_cmd->add_option("--gen", ga.gen, "Generations")->capture_default_str();
  ga_cmd->add_option("--mutation", ga.mutation, "Per-gene mutation rate")->capture_default_str();
  ga_cmd->add_option("--sigma", ga.sigma, "Mutation std as a fraction of domain width")
      ->capture_default_str();
  ga_cmd->add_option("--tournament", ga.tournament, "Tournament size")->capture_default_str();
  ga_cmd->add_option("--elitism", ga.elitism, "Elite count")->capture_default_str();
  ga_cmd->add_option("--crossover", ga.crossover, "Crossover rate")->capture_default_str();
  ga_cmd->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
  ga_cmd->add_option("--trace", ga.trace, "Per-generation best RMSE CSV");
  ga_cmd->add_option("--out", ga.out, "Tuned model")->required();

  InferArgs inf;
  auto* infer_sub = app.add_subcommand("infer", "Score one tactical situation");
  infer_sub->add_option("--model", inf.model, "Model file")->required();
  infer_sub->add_option("--fuel", inf.fuel, "Fuel status")->required();
  infer_sub->add_option("--time", inf.time, "Interrupt time")->required();
  infer_sub->add_option("--weapon", inf.weapon, "Weapon status")->required();
  infer_sub->add_option("--danger", inf.danger, "Danger situation")->required();
  infer_sub->add_flag("--raw-units", inf.raw_units,
                      "Factors in litres / minutes / percent / points");
  infer_sub->add_flag("--explain", inf.explain, "Print memberships and rule firings");

  EvalArgs ev;
  auto* eval_sub = app.add_subcommand("eval", "RMSE of a model on a dataset");
  eval_sub->add_option("--model", ev.model, "Model file")->required();
  eval_sub->add_option("--data", ev.data, "Dataset CSV")->required();

  ServeArgs sv;
  auto* serve_sub = app.add_subcommand("serve", "Serve the inference API");
  serve_sub->add_option("--model", sv.model, "Model file")->required();
  serve_sub->add_option("--addr", sv.addr, "host:port")->capture_default_str();
  serve_sub->add_option("--static-dir", sv.static_dir, "Directory of console assets");

  ReproArgs rp;
  auto* repro_sub =
      app.add_subcommand("repro-paper", "Run the full experiment protocol end to end");
  repro_sub->add_option("--out-dir", rp.out_dir, "Output directory")->required();
  repro_sub->add_option("--n", rp.n, "Dataset size")->capture_default_str();
  repro_sub->add_option("--noise", rp.noise, "Target noise sigma")->capture_default_str();
  repro_sub->add_option("--data-seed", rp.data_seed, "Dataset seed")->capture_default_str();
  repro_sub->add_option("--ga-seed", rp.ga_seed, "GA seed")->capture_default_str();
  repro_sub->add_option("--out-mfs", rp.out_mfs, "Output MF count")->capture_default_str();
  bool no_sweep = false;
  repro_sub->add_flag("--no-sweep", no_sweep, "Skip the population x generation sweep");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return gen_data(gen, out);
    if (learn_cmd->parsed()) return learn(learn_args, out);
    if (gd_cmd->parsed()) return tune_gd(gd, out);
    if (ga_cmd->parsed()) return tune_ga(ga, out);
    if (infer_sub->parsed()) return infer_cmd(inf, out);
    if (eval_sub->parsed()) return eval_cmd(ev, out);
    if (serve_sub->parsed()) return serve(sv, out);
    if (repro_sub->parsed()) {
      rp.sweep = !no_sweep;
      return repro(rp, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace tacdss::cli
