#include "fuzzydr/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <thread>

#include <Eigen/Core>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/filtrations.hpp"
#include "fuzzydr/io.hpp"
#include "fuzzydr/posetlab.hpp"
#include "fuzzydr/svg.hpp"
#include "fuzzydr/synth.hpp"

namespace fuzzydr {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kMaxFiltrationCommandPoints = 60;

struct InputOptions {
  std::string in;
  std::string params;
  std::string label;
  std::string header = "auto";
  std::uint64_t seed = 0;
};

struct LoadedInput {
  Dataset data;
  nlohmann::json description;
};

void add_input_options(CLI::App* sub, InputOptions& o) {
  sub->add_option("--in", o.in, "CSV path or one of blobs, circle, swiss_lite");
  sub->add_option("--params", o.params, "Synthetic dataset parameters, e.g. n=500,sep=10");
  sub->add_option("--label", o.label, "Label column of a CSV input (name or zero-based index)");
  sub->add_option("--header", o.header, "CSV header: auto, yes or no")->check(CLI::IsMember({"auto", "yes", "no"}));
  sub->add_option("--seed", o.seed, "Random seed");
}

LoadedInput load_input(const InputOptions& o) {
  if (o.in.empty()) throw Error(ErrorCode::Usage, "--in is required");
  LoadedInput out;
  if (is_synth_kind(o.in) && !fs::exists(o.in)) {
    if (!o.label.empty()) throw Error(ErrorCode::BadParams, "--label applies to CSV input only");
    const SynthKind kind = parse_synth_kind(o.in);
    const SynthParams params = resolve_synth_params(kind, parse_synth_params(o.params));
    out.data = synth(kind, params, o.seed);
    out.description = {{"source", to_string(kind)}, {"params", params}, {"seed", o.seed}};
  } else {
    if (!o.params.empty()) throw Error(ErrorCode::BadParams, "--params applies to synthetic input only");
    CsvOptions csv;
    csv.header = o.header == "yes" ? HeaderMode::Present : o.header == "no" ? HeaderMode::Absent : HeaderMode::Auto;
    if (!o.label.empty()) csv.label_column = o.label;
    out.data = ingest_csv(o.in, csv);
    out.description = {{"source", "csv"}, {"path", o.in}};
  }
  out.description["n"] = out.data.points.rows();
  out.description["d"] = out.data.points.cols();
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<int>& labels, const std::string& prefix) {
  std::string header;
  for (Eigen::Index c = 0; c < m.cols(); ++c) header += (c ? "," : "") + prefix + std::to_string(c);
  if (!labels.empty()) header += ",label";
  return header + "\n" + format_csv(m, labels);
}

std::string number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void require_parent_dir(const std::string& path, const char* flag) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw Error(ErrorCode::Io, std::string(flag) + ": directory " + parent.string() + " does not exist");
  }
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::Io, "cannot create output directory " + dir);
}

// JSON config values fill options that were not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config " + path + " is not a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw Error(ErrorCode::Usage, "unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_boolean()) {
      text = value.get<bool>() ? "true" : "false";
    } else if (value.is_number()) {
      text = value.dump();
    } else {
      throw Error(ErrorCode::Usage, "config key '" + key + "' must be a string, number or boolean");
    }
    try {
      opt->add_result(text);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(ErrorCode::Usage, "config key '" + key + "': " + e.what());
    }
  }
}

Mode parse_mode(const std::string& s) { return s == "edge" ? Mode::Edge : Mode::Triplet; }
Init parse_init(const std::string& s) { return s == "random" ? Init::Random : Init::Pca; }
RadiusMode parse_radius(const std::string& s) {
  if (s == "intrinsic") return RadiusMode::Intrinsic;
  if (s == "intrinsic-soft") return RadiusMode::IntrinsicSoft;
  return RadiusMode::Extrinsic;
}

FiltrationKind parse_kind(const std::string& s) {
  if (s == "cech") return FiltrationKind::CechExtrinsic;
  if (s == "cech-intrinsic") return FiltrationKind::CechIntrinsic;
  return FiltrationKind::VR;
}

struct EmbedOptions {
  InputOptions input;
  std::string mode = "triplet";
  int k = 15;
  int d_o = 2;
  int epochs = 200;
  int batch = 64;
  int neg_rate = 5;
  double learning_rate = 1.0;
  std::string phi_x;
  std::string phi_y;
  std::string init = "pca";
  std::string radius = "extrinsic";
  bool local_scaling = true;
  double grad_clip = 4.0;
  std::string out;
  std::string svg;
  std::string config;
};

int cmd_embed(CLI::App* sub, const EmbedOptions& o, std::ostream& out) {
  apply_config(sub, o.config);
  if (o.out.empty()) throw Error(ErrorCode::Usage, "--out is required");
  TrainConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.k = o.k;
  cfg.d_o = o.d_o;
  cfg.epochs = o.epochs;
  cfg.batch = o.batch;
  cfg.neg_rate = o.neg_rate;
  cfg.learning_rate = o.learning_rate;
  if (!o.phi_x.empty()) cfg.phi_x = ScaleDistribution::parse(o.phi_x);
  if (!o.phi_y.empty()) cfg.phi_y = ScaleDistribution::parse(o.phi_y);
  cfg.seed = o.input.seed;
  cfg.init = parse_init(o.init);
  cfg.radius = parse_radius(o.radius);
  cfg.local_scaling = o.local_scaling;
  cfg.grad_clip = o.grad_clip;
  if (!o.svg.empty()) {
    if (cfg.d_o < 2) throw Error(ErrorCode::BadParams, "--svg needs d_o >= 2");
    require_parent_dir(o.svg, "--svg");
  }
  LoadedInput input = load_input(o.input);
  ensure_out_dir(o.out);

  const TrainResult result = train(input.data, cfg);

  const fs::path dir(o.out);
  write_text((dir / "embedding.csv").string(), matrix_csv(result.y, input.data.labels, "y"));
  std::string loss = "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_trace.size(); ++e) {
    loss += std::to_string(e) + "," + number(result.loss_trace[e]) + "\n";
  }
  write_text((dir / "loss.csv").string(), loss);
  if (!o.svg.empty()) {
    write_text(o.svg, render_svg(result.y, input.data.labels, {600, 600, 2.5, "embedding " + to_string(cfg.mode)}));
  }
  nlohmann::json config{{"mode", to_string(cfg.mode)},
                        {"k", cfg.k},
                        {"d_o", cfg.d_o},
                        {"epochs", cfg.epochs},
                        {"batch", cfg.batch},
                        {"negRate", cfg.neg_rate},
                        {"learningRate", cfg.learning_rate},
                        {"phiX", (cfg.phi_x ? *cfg.phi_x : default_phi_x(cfg.mode)).to_string()},
                        {"phiY", (cfg.phi_y ? *cfg.phi_y : default_phi_y(cfg.mode)).to_string()},
                        {"init", to_string(cfg.init)},
                        {"radius", to_string(cfg.radius)},
                        {"localScaling", cfg.local_scaling},
                        {"gradClip", cfg.grad_clip}};
  nlohmann::json manifest{{"command", "embed"},
                          {"input", input.description},
                          {"config", config},
                          {"seed", cfg.seed},
                          {"pcaFallback", result.pca_fallback},
                          {"finalLoss", result.loss_trace.empty() ? 0.0 : result.loss_trace.back()},
                          {"outputs", {{"embedding", "embedding.csv"}, {"loss", "loss.csv"}}},
                          {"versions", version_info()}};
  if (!o.svg.empty()) manifest["outputs"]["svg"] = o.svg;
  write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  out << "wrote " << (dir / "embedding.csv").string() << ", " << (dir / "loss.csv").string() << ", "
      << (dir / "manifest.json").string() << "\n";
  return kExitOk;
}

struct EvalOptions {
  InputOptions input;
  std::string embedding;
  int k = 15;
  int subsample = 200;
  int repeats = 30;
  std::string out;
  std::string svg;
  std::string config;
};

int cmd_eval(CLI::App* sub, const EvalOptions& o, std::ostream& out) {
  apply_config(sub, o.config);
  if (o.embedding.empty()) throw Error(ErrorCode::Usage, "--embedding is required");
  if (!o.out.empty()) require_parent_dir(o.out, "--out");
  if (!o.svg.empty()) require_parent_dir(o.svg, "--svg");
  const LoadedInput input = load_input(o.input);
  const Dataset y = ingest_csv(o.embedding);
  if (!o.svg.empty() && y.points.cols() < 2) throw Error(ErrorCode::ShapeMismatch, "--svg needs two embedding columns");
  EvalConfig cfg;
  cfg.k = o.k;
  cfg.subsample = o.subsample;
  cfg.repeats = o.repeats;
  cfg.seed = o.input.seed;
  cfg.threads = worker_threads();
  const MetricReport report = evaluate(input.data.points, y.points, cfg);
  const std::string text = to_json(report).dump(2) + "\n";
  if (!o.out.empty()) write_text(o.out, text);
  if (!o.svg.empty()) {
    const auto& labels = y.labels.empty() ? input.data.labels : y.labels;
    write_text(o.svg, render_svg(y.points, labels.size() == static_cast<std::size_t>(y.points.rows()) ? labels
                                                                                                       : std::vector<int>{},
                                 {600, 600, 2.5, "embedding"}));
  }
  out << text;
  return kExitOk;
}

struct PosetlabOptions {
  std::string law;
  std::uint64_t seed = 0;
  bool json = false;
  std::string marginal;
  std::string preimage;
  std::string out;
  std::string config;
};

int cmd_posetlab(CLI::App* sub, const PosetlabOptions& o, std::ostream& out) {
  apply_config(sub, o.config);
  if (!o.out.empty()) require_parent_dir(o.out, "--out");
  const int modes = !o.law.empty() + !o.marginal.empty() + !o.preimage.empty();
  if (modes > 1) throw Error(ErrorCode::Usage, "choose one of --law, --marginal, --preimage");
  auto emit = [&](const std::string& text) {
    if (!o.out.empty()) write_text(o.out, text);
    out << text;
  };
  auto load_json = [](const std::string& path) {
    try {
      return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
  };
  if (!o.marginal.empty()) {
    emit(to_json(marginal(complex_measure_from_json(load_json(o.marginal)))).dump(2) + "\n");
    return kExitOk;
  }
  if (!o.preimage.empty()) {
    emit(to_json(level_set_preimage(fuzzy_complex_from_json(load_json(o.preimage)))).dump(2) + "\n");
    return kExitOk;
  }
  const std::vector<LawResult> results =
      o.law.empty() ? run_all_laws(o.seed) : std::vector<LawResult>{run_law(o.law, o.seed)};
  emit(o.json ? to_json(results).dump(2) + "\n" : format_law_report(results));
  const bool ok = std::all_of(results.begin(), results.end(), [](const LawResult& r) { return r.passed; });
  return ok ? kExitOk : kExitLawFailure;
}

struct FiltrationOptions {
  InputOptions input;
  std::string kind = "vr";
  int maxdim = 2;
  std::string phi = "exponential:nu=1";
  bool measure = false;
  std::string out;
  std::string config;
};

int cmd_filtration(CLI::App* sub, const FiltrationOptions& o, std::ostream& out) {
  apply_config(sub, o.config);
  if (!o.out.empty()) require_parent_dir(o.out, "--out");
  if (o.maxdim < 0) throw Error(ErrorCode::BadParams, "--maxdim must be nonnegative");
  const ScaleDistribution phi = ScaleDistribution::parse(o.phi);
  const FiltrationKind kind = parse_kind(o.kind);
  const LoadedInput input = load_input(o.input);
  const auto n = static_cast<std::size_t>(input.data.points.rows());
  if (n > kMaxFiltrationCommandPoints) {
    throw Error(ErrorCode::CapExceeded, "filtration dumps are limited to " +
                                            std::to_string(kMaxFiltrationCommandPoints) + " points");
  }
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = input.data.points;
  const DistanceMatrix d = DistanceMatrix::from_points({rm.data(), static_cast<std::size_t>(rm.size())}, n,
                                                       static_cast<std::size_t>(rm.cols()));
  nlohmann::json values = nlohmann::json::array();
  for (const auto& [s, scale] : filtration_values(d, o.maxdim, kind)) {
    values.push_back({{"simplex", to_json(s)}, {"scale", scale}});
  }
  nlohmann::json doc{{"kind", o.kind},
                     {"maxdim", o.maxdim},
                     {"phi", phi.to_string()},
                     {"input", input.description},
                     {"values", values},
                     {"fuzzy", to_json(fuzzy_from_filtration(d, phi, o.maxdim, kind))}};
  if (o.measure) doc["measure"] = to_json(filtration_measure(d, phi, o.maxdim, kind));
  const std::string text = doc.dump(2) + "\n";
  if (!o.out.empty()) write_text(o.out, text);
  out << text;
  return kExitOk;
}

struct SynthOptions {
  std::string kind;
  std::string params;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  if (!o.out.empty()) require_parent_dir(o.out, "--out");
  const Dataset data = synth(parse_synth_kind(o.kind), parse_synth_params(o.params), o.seed);
  const std::string text = matrix_csv(data.points, data.labels, "x");
  if (o.out.empty()) {
    out << text;
  } else {
    write_text(o.out, text);
  }
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Usage:
    case ErrorCode::BadParams:
    case ErrorCode::NonPositiveParam:
    case ErrorCode::NonPositiveScale:
      return kExitUsage;
    case ErrorCode::ParseError:
    case ErrorCode::RaggedRows:
    case ErrorCode::EmptyFile:
    case ErrorCode::Io:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::InvalidDistanceMatrix:
    case ErrorCode::KTooLarge:
    case ErrorCode::CapExceeded:
    case ErrorCode::InvalidSimplex:
    case ErrorCode::NotFaceClosed:
    case ErrorCode::NonMonotoneInput:
    case ErrorCode::InvalidMeasure:
    case ErrorCode::TriangleInequalityViolation:
    case ErrorCode::ReflexivityViolation:
    case ErrorCode::AntisymmetryViolation:
    case ErrorCode::TransitivityViolation:
      return kExitData;
    case ErrorCode::DimensionZero:
    case ErrorCode::NoPreimage:
    case ErrorCode::NotLocallyMarkov:
    case ErrorCode::DegenerateGromovProduct:
    case ErrorCode::NegativeScale:
    case ErrorCode::DegenerateNeighborhood:
    case ErrorCode::NaNGuard:
    case ErrorCode::ZeroNorm:
    case ErrorCode::DegreeMismatch:
      return kExitNumeric;
  }
  return kExitNumeric;
}

nlohmann::json to_json(const MetricReport& r) {
  return {{"trustworthiness", r.trustworthiness},
          {"procrustesG", r.procrustesG},
          {"wassersteinH0", r.wassersteinH0},
          {"wassersteinH1", r.wassersteinH1},
          {"k", r.k},
          {"subsample", r.subsample},
          {"repeats", r.repeats},
          {"seed", r.seed}};
}

nlohmann::json version_info() {
  return {{"fuzzydr", kVersion},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION}};
}

int worker_threads() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("FUZZYDR_THREADS"); env != nullptr && *env != '\0') {
    int cap = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, cap);
    if (ec != std::errc() || ptr != end || cap < 1) {
      throw Error(ErrorCode::BadParams, "FUZZYDR_THREADS must be a positive integer");
    }
    n = std::min(n, cap);
  }
  return n;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy simplicial embeddings, evaluation and exact measure checks", "fuzzydr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.failure_message(CLI::FailureMessage::help);

  EmbedOptions embed;
  CLI::App* embed_cmd = app.add_subcommand("embed", "Train an embedding and write CSV, loss trace and manifest");
  add_input_options(embed_cmd, embed.input);
  embed_cmd->add_option("--mode", embed.mode, "edge or triplet")->check(CLI::IsMember({"edge", "triplet"}));
  embed_cmd->add_option("--k", embed.k, "Nearest neighbours");
  embed_cmd->add_option("--d_o", embed.d_o, "Output dimension");
  embed_cmd->add_option("--epochs", embed.epochs, "Training epochs");
  embed_cmd->add_option("--batch", embed.batch, "Minibatch size");
  embed_cmd->add_option("--neg-rate", embed.neg_rate, "Negative samples per positive");
  embed_cmd->add_option("--lr", embed.learning_rate, "Initial learning rate");
  embed_cmd->add_option("--phiX", embed.phi_x, "Input scale distribution, e.g. exponential:nu=1");
  embed_cmd->add_option("--phiY", embed.phi_y, "Output scale distribution, e.g. weibull:lambda=1,k=0.5");
  embed_cmd->add_option("--init", embed.init, "pca or random")->check(CLI::IsMember({"pca", "random"}));
  embed_cmd->add_option("--radius", embed.radius, "extrinsic, intrinsic or intrinsic-soft")
      ->check(CLI::IsMember({"extrinsic", "intrinsic", "intrinsic-soft"}));
  embed_cmd->add_option("--local-scaling", embed.local_scaling, "Edge mode: per-point rho/sigma scaling");
  embed_cmd->add_option("--grad-clip", embed.grad_clip, "Per-coordinate update cap");
  embed_cmd->add_option("--out", embed.out, "Output directory");
  embed_cmd->add_option("--svg", embed.svg, "Optional SVG scatter of the embedding");
  embed_cmd->add_option("--config", embed.config, "JSON config; flags take precedence");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score an embedding against its input");
  add_input_options(eval_cmd, eval.input);
  eval_cmd->add_option("--embedding", eval.embedding, "Embedding CSV");
  eval_cmd->add_option("--k", eval.k, "Trustworthiness neighbourhood size");
  eval_cmd->add_option("--subsample", eval.subsample, "Points per persistence subsample");
  eval_cmd->add_option("--repeats", eval.repeats, "Number of persistence subsamples");
  eval_cmd->add_option("--out", eval.out, "Metrics JSON path");
  eval_cmd->add_option("--svg", eval.svg, "Optional SVG scatter of the embedding");
  eval_cmd->add_option("--config", eval.config, "JSON config; flags take precedence");

  PosetlabOptions lab;
  CLI::App* lab_cmd = app.add_subcommand("posetlab", "Exact checks of the measure calculus");
  lab_cmd->add_option("--law", lab.law, "Run a single law")->check(CLI::IsMember(law_names()));
  lab_cmd->add_option("--seed", lab.seed, "Random seed");
  lab_cmd->add_flag("--json", lab.json, "Report as JSON");
  lab_cmd->add_option("--marginal", lab.marginal, "Measure JSON to push forward to its fuzzy complex");
  lab_cmd->add_option("--preimage", lab.preimage, "Fuzzy complex JSON to decompose into level sets");
  lab_cmd->add_option("--out", lab.out, "Also write the report to this path");
  lab_cmd->add_option("--config", lab.config, "JSON config; flags take precedence");

  FiltrationOptions filt;
  CLI::App* filt_cmd = app.add_subcommand("filtration", "Dump appearance scales and induced weights");
  add_input_options(filt_cmd, filt.input);
  filt_cmd->add_option("--kind", filt.kind, "vr, cech or cech-intrinsic")
      ->check(CLI::IsMember({"vr", "cech", "cech-intrinsic"}));
  filt_cmd->add_option("--maxdim", filt.maxdim, "Largest simplex dimension");
  filt_cmd->add_option("--phi", filt.phi, "Scale distribution");
  filt_cmd->add_flag("--measure", filt.measure, "Include the random-scale measure (at most six points)");
  filt_cmd->add_option("--out", filt.out, "JSON path");
  filt_cmd->add_option("--config", filt.config, "JSON config; flags take precedence");

  SynthOptions syn;
  CLI::App* syn_cmd = app.add_subcommand("synth", "Write a synthetic dataset as CSV");
  syn_cmd->add_option("--kind", syn.kind, "blobs, circle or swiss_lite")
      ->required()
      ->check(CLI::IsMember({"blobs", "circle", "swiss_lite"}));
  syn_cmd->add_option("--params", syn.params, "Parameters, e.g. n=300,r=1");
  syn_cmd->add_option("--seed", syn.seed, "Random seed");
  syn_cmd->add_option("--out", syn.out, "CSV path; stdout when omitted");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (embed_cmd->parsed()) return cmd_embed(embed_cmd, embed, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_cmd, eval, out);
    if (lab_cmd->parsed()) return cmd_posetlab(lab_cmd, lab, out);
    if (filt_cmd->parsed()) return cmd_filtration(filt_cmd, filt, out);
    if (syn_cmd->parsed()) return cmd_synth(syn, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::Usage) err << app.help();
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace fuzzydr
