// Command-line front end: paint one image, benchmark a corpus, or re-render a
// saved pin sequence.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "threadtone/image.hpp"
#include "threadtone/pipeline.hpp"
#include "threadtone/quality_metrics.hpp"

namespace fs = std::filesystem;
using namespace threadtone;

namespace {

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what) {}
};

template <typename F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

struct Options {
  std::string input;
  std::string mask;
  std::string shape = "circle";
  int pins = 300;
  std::optional<int> chords;
  double alpha = 0.0;
  double beta = 5.0;
  double gamma = 10.0;
  double temperature = 30.0;
  int eps = 2;
  std::string sampler = "connected";
  std::optional<int> start_pin;
  std::optional<unsigned> seed;
  std::string out = "painting.png";
  std::string out_seq = "painting.seq";
  std::string out_errmap;
  std::string out_fitness;
  int out_size = 1001;
  double tol = 1e-6;
  int max_iter = 500;
  std::optional<int> center_x;
  std::optional<int> center_y;
  std::optional<int> radius;
  int min_span = 1;
  int greedy_min_span = 5;
  int greedy_reduction = 15;

  // bench
  std::string corpus;
  std::string csv = "ssim_report.csv";
  std::string table;

  // render
  std::string seq_file;
  std::string config_file;
  int render_radius = 200;
};

void add_model_options(CLI::App& app, Options& o) {
  app.add_option("--shape", o.shape, "Canvas shape: circle or square")
      ->check(CLI::IsMember({"circle", "square"}))
      ->capture_default_str();
  app.add_option("--pins", o.pins, "Pin count P (default 300)")
      ->check(CLI::Range(3, 100000))
      ->capture_default_str();
  app.add_option("--chords", o.chords,
                 "Chord budget k (default: 500 + 10*(255 - mean gray of the region))")
      ->check(CLI::PositiveNumber);
  app.add_option("--alpha", o.alpha,
                 "Edge blend in the target, 0 = gray only (default 0; 0.5 for edge enhancement)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--beta", o.beta, "Short-chord penalty weight (default 5.0)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--gamma", o.gamma, "Edge-crossing penalty weight (default 10.0)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--temperature,-T", o.temperature,
                 "Sharpness temperature of the tanh map (default 30.0)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--eps", o.eps, "Error-diffusion neighbourhood radius in pins (default 2)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--start-pin", o.start_pin, "First pin of the thread (default 0, or random with --seed)");
  app.add_option("--seed", o.seed, "Seed for drawing a random start pin");
  app.add_option("--out-size", o.out_size, "Side of the rendered canvas, odd (default 1001)")
      ->capture_default_str();
  app.add_option("--tol", o.tol, "Relative residual tolerance of the solver")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "Solver iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--center-x", o.center_x, "Region center column (default: image center)");
  app.add_option("--center-y", o.center_y, "Region center row (default: image center)");
  app.add_option("--radius", o.radius, "Region radius or half side (default: largest that fits)");
  app.add_option("--min-span", o.min_span, "Drop chords spanning fewer pins than this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--greedy-min-span", o.greedy_min_span,
                 "Greedy baseline: smallest allowed chord span (small-loop exclusion)")
      ->capture_default_str();
  app.add_option("--greedy-reduction", o.greedy_reduction,
                 "Greedy baseline: gray decrement per covered pixel (reference implementation: 15)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

PipelineParams pipeline_params(const Options& o) {
  PipelineParams p;
  p.crop.shape = parse_shape(o.shape);
  p.crop.center_x = o.center_x;
  p.crop.center_y = o.center_y;
  p.crop.radius = o.radius;
  p.pins = o.pins;
  p.min_span = o.min_span;
  p.alpha = o.alpha;
  p.beta = o.beta;
  p.gamma = o.gamma;
  p.temperature = o.temperature;
  p.eps = o.eps;
  p.solver.tol = o.tol;
  p.solver.max_iter = o.max_iter;
  p.greedy.min_span = o.greedy_min_span;
  p.greedy.reduction = o.greedy_reduction;
  p.validate();
  return p;
}

RenderConfig render_config(const Options& o) {
  RenderConfig config;
  config.output_size = o.out_size;
  config.validate();
  return config;
}

int pick_start_pin(const Options& o, std::mt19937& rng) {
  if (o.start_pin) {
    if (*o.start_pin < 0 || *o.start_pin >= o.pins)
      throw std::invalid_argument("--start-pin must lie in [0, pins)");
    return *o.start_pin;
  }
  if (o.seed) return std::uniform_int_distribution<int>(0, o.pins - 1)(rng);
  return 0;
}

int run(const Options& o) {
  const auto started = std::chrono::steady_clock::now();
  const PipelineParams params = stage("config", [&] { return pipeline_params(o); });
  const RenderConfig config = stage("config", [&] { return render_config(o); });
  const Sampler sampler = stage("config", [&] { return parse_sampler(o.sampler); });
  std::mt19937 rng(o.seed.value_or(0));
  const int start_pin = stage("config", [&] { return pick_start_pin(o, rng); });

  const GrayImage image = stage("load", [&] { return load_grayscale(o.input); });
  std::optional<GrayImage> mask;
  if (!o.mask.empty()) mask = stage("load mask", [&] { return load_grayscale(o.mask); });

  const Problem problem = stage("prepare", [&] { return prepare_problem(image, params, mask); });
  const int k = o.chords.value_or(estimate_chord_count(problem.cropped.image, problem.region()));
  std::cout << "region: " << to_string(params.crop.shape) << " radius " << problem.region().radius
            << ", " << problem.region().n() << " pixels, " << problem.space.size() << " chords\n";
  std::cout << "chords: " << k << (o.chords ? "" : " (estimated from mean gray)") << '\n';

  FitnessVector fitness = FitnessVector::Zero(problem.space.size());
  SolveResult solved;
  if (sampler != Sampler::greedy || !o.out_errmap.empty() || !o.out_fitness.empty()) {
    solved = stage("solve", [&] { return solve_fitness(problem.system, params.solver); });
    fitness = solved.f;
    std::cout << "solver: " << solved.iterations << " iterations, relative residual "
              << solved.residual << (solved.converged ? "" : " (not converged)") << '\n';
  }

  const Painting painting =
      stage("sample", [&] { return paint(problem, fitness, sampler, k, start_pin, params); });
  if (painting.terminated_early)
    std::cout << "greedy baseline stopped early after " << painting.chord_count() << " chords\n";
  const GrayImage canvas = stage("render", [&] { return render(problem, painting, config); });

  stage("write", [&] {
    save_grayscale(canvas, o.out);
    if (!o.out_seq.empty()) {
      if (sampler == Sampler::disconnected) {
        std::cerr << "warning: disconnected selections have no pin sequence; skipping "
                  << o.out_seq << '\n';
      } else {
        export_sequence(painting.sequence, params.pins, params.crop.shape, o.out_seq);
      }
    }
    if (!o.out_errmap.empty())
      save_grayscale(reconstruct(problem.system, problem.region(), solved.f).error_map,
                     o.out_errmap);
    if (!o.out_fitness.empty()) {
      std::ofstream out(o.out_fitness);
      if (!out) throw std::runtime_error("cannot write " + o.out_fitness);
      dump_fitness(out, problem.space, solved);
    }
    return 0;
  });

  const GrayImage reference =
      fill_outside(problem.cropped.image, problem.region(), config.background);
  const double s0 = evaluate_pair(reference, canvas, false);
  const double s1 = evaluate_pair(reference, canvas, true);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cout << "ssim: " << s0 << " (blurred " << s1 << ")\n";
  std::cout << "drew " << painting.chord_count() << " chords in " << secs << " s -> " << o.out
            << '\n';
  return 0;
}

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

int bench(const Options& o) {
  const PipelineParams params = stage("config", [&] { return pipeline_params(o); });
  const RenderConfig config = stage("config", [&] { return render_config(o); });
  std::vector<fs::path> files = stage("corpus", [&] {
    if (!fs::is_directory(o.corpus)) throw std::runtime_error("not a directory: " + o.corpus);
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(o.corpus))
      if (entry.is_regular_file() && is_image(entry.path())) found.push_back(entry.path());
    std::sort(found.begin(), found.end());
    return found;
  });
  if (files.empty()) std::cerr << "warning: no images found in " << o.corpus << '\n';

  std::mt19937 rng(o.seed.value_or(0));
  SSIMReport report;
  for (const auto& file : files) {
    CompareParams cp;
    cp.pipeline = params;
    cp.chords = o.chords;
    cp.render = config;
    cp.start_pin = stage("config", [&] { return pick_start_pin(o, rng); });
    const std::string name = file.stem().string();
    const GrayImage image = stage("load " + name, [&] { return load_grayscale(file); });
    auto rows = stage("compare " + name, [&] { return compare_methods(name, image, cp); });
    std::cerr << name << ": done\n";
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  report.sort_rows();

  stage("write", [&] {
    std::ofstream csv(o.csv, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + o.csv);
    write_csv(csv, report);
    if (!o.table.empty()) {
      std::ofstream table(o.table);
      if (!table) throw std::runtime_error("cannot write " + o.table);
      write_table(table, report);
    }
    return 0;
  });
  write_table(std::cout, report);
  return 0;
}

int render_file(const Options& o) {
  const RenderConfig config = stage("config", [&] { return render_config(o); });
  const SequenceFile file = stage("load", [&] { return import_sequence(o.seq_file); });
  const GrayImage canvas = stage("render", [&] {
    const Region region = make_region(file.shape, o.render_radius);
    const PinLayout layout = place_pins(file.pins, file.shape, region);
    PinSequence seq = file.sequence;
    if (o.chords && *o.chords + 1 < static_cast<int>(seq.pins.size())) seq.pins.resize(*o.chords + 1);
    return render_sequence(seq, layout, region, config);
  });
  stage("write", [&] {
    save_grayscale(canvas, o.out);
    return 0;
  });
  return 0;
}

// Subcommand config files are not read by CLI11 itself, so apply them here.
// Only options left unset on the command line are filled in.
void apply_config(CLI::App& cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StageError("config", "cannot read " + path);
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;
    CLI::Option* op = cmd.get_option_no_throw("--" + item.name);
    if (op == nullptr || item.name == "config")
      throw StageError("config", "unknown key '" + item.name + "' in " + path);
    if (op->count() > 0) continue;
    try {
      op->add_result(item.inputs);
      op->run_callback();
    } catch (const CLI::Error& e) {
      throw StageError("config", item.name + ": " + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Generates string-art paintings: a pin sequence whose chords approximate an image."};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Paint one image");
  run_cmd->add_option("--config", o.config_file, "key=value file; command-line flags take precedence");
  run_cmd->add_option("--input,-i", o.input, "Input image (PNG or PGM/PPM)")->required();
  run_cmd->add_option("--mask", o.mask, "Importance mask, same size as the cropped region; >127 marks important pixels");
  run_cmd->add_option("--sampler", o.sampler, "connected, disconnected or greedy")
      ->check(CLI::IsMember({"connected", "disconnected", "greedy"}))
      ->capture_default_str();
  run_cmd->add_option("--out,-o", o.out, "Painting image (.png or .pgm)")->capture_default_str();
  run_cmd->add_option("--out-seq", o.out_seq, "Pin sequence file")->capture_default_str();
  run_cmd->add_option("--out-errmap", o.out_errmap, "Error map of the full-chord-set reconstruction");
  run_cmd->add_option("--out-fitness", o.out_fitness, "Plain-text dump of the raw chord fitness");
  add_model_options(*run_cmd, o);

  auto* bench_cmd = app.add_subcommand("bench", "Score all three samplers over a directory of images");
  bench_cmd->add_option("--config", o.config_file, "key=value file; command-line flags take precedence");
  bench_cmd->add_option("--corpus", o.corpus, "Directory of input images")->required();
  bench_cmd->add_option("--csv", o.csv, "CSV report path")->capture_default_str();
  bench_cmd->add_option("--table", o.table, "Also write the text table here");
  add_model_options(*bench_cmd, o);

  auto* render_cmd = app.add_subcommand("render", "Re-render a saved pin sequence");
  render_cmd->add_option("--seq", o.seq_file, "Sequence file")->required();
  render_cmd->add_option("--out,-o", o.out, "Output image")->capture_default_str();
  render_cmd->add_option("--out-size", o.out_size, "Canvas side, odd")->capture_default_str();
  render_cmd->add_option("--chords", o.chords, "Only draw the first N chords");

  CLI11_PARSE(app, argc, argv);

  try {
    for (CLI::App* cmd : {run_cmd, bench_cmd})
      if (*cmd && !o.config_file.empty()) apply_config(*cmd, o.config_file);
    if (*run_cmd) return run(o);
    if (*bench_cmd) return bench(o);
    if (*render_cmd) return render_file(o);
  } catch (const StageError& e) {
    std::cerr << "error in " << e.what() << '\n';
    return 1;
  }
  return 0;
}
