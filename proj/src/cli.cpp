#include "undistill/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "undistill/error.hpp"
#include "undistill/json_io.hpp"
#include "undistill/rng.hpp"

namespace undistill::cli {

namespace {

using io::Json;

struct Invocation {
  RunConfig config;
  std::string input_path;
  std::string side = "B";
  std::size_t d_a = 0, d_b = 0, d_e = 0, n_samples = 0;
  std::string example_name;
  std::size_t example_d = 2;
  double example_q = 0.5;
};

void add_common_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--rank-tol", config.rank_tol, "Relative eigenvalue cutoff for ranks")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ppt-tol", config.ppt_tol, "PPT threshold on the partial-transpose spectrum")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", config.seed, "Seed for all random draws");
  cmd->add_option("--budget", config.witness_budget, "Random trials in the witness search");
  const std::map<std::string, OutputFormat> formats{
      {"json", OutputFormat::kJson}, {"csv", OutputFormat::kCsv}, {"pretty", OutputFormat::kPretty}};
  cmd->add_option("--format", config.format, "json | csv | pretty")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  cmd->add_option("--output", config.output, "Write the result here instead of stdout");
}

Tolerances tolerances(const RunConfig& c) {
  Tolerances t;
  t.rank_tol = c.rank_tol;
  t.ppt_tol = c.ppt_tol;
  return t;
}

Json config_json(const RunConfig& c) {
  return Json{{"rank_tol", c.rank_tol},
              {"ppt_tol", c.ppt_tol},
              {"seed", c.seed},
              {"witness_budget", c.witness_budget},
              {"version", kVersion},
              {"rng_version", Rng::kVersion}};
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::kParse, "cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

std::string render(const Json& doc, OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson: return io::dump(doc) + "\n";
    case OutputFormat::kCsv: return io::flatten(doc, true);
    case OutputFormat::kPretty: return io::flatten(doc, false);
  }
  return {};
}

DensityMatrix bipartite_of(const io::InputDocument& doc, std::string& kind) {
  if (const auto* rho = std::get_if<DensityMatrix>(&doc)) {
    if (rho->num_subsystems() != 2) {
      throw Error(ErrorKind::kBadSubsystemSpec,
                  "state input must be bipartite (dims [d_A, d_B]); use \"vector\" for "
                  "tripartite pure states");
    }
    kind = "bipartite";
    return *rho;
  }
  if (const auto* psi = std::get_if<TripartitePureState>(&doc)) {
    kind = "tripartite";
    return psi->rho_ab();
  }
  kind = "channel";
  return std::get<ChoiChannel>(doc).choi();
}

Json cmd_analyze(const Invocation& inv, std::istream& in) {
  const io::InputDocument doc = io::parse_document(read_input(inv.input_path, in));
  const Tolerances tol = tolerances(inv.config);
  std::string kind;
  const DensityMatrix rho_ab = bipartite_of(doc, kind);
  const TripartitePureState psi = std::holds_alternative<TripartitePureState>(doc)
                                      ? std::get<TripartitePureState>(doc)
                                      : states::purify(rho_ab, tol.rank_tol);

  distill::ClassifyOptions opts;
  opts.tol = tol;
  opts.witness_budget = inv.config.witness_budget;
  opts.seed = inv.config.seed;

  Json out;
  out["command"] = "analyze";
  out["config"] = config_json(inv.config);
  out["input_kind"] = kind;
  Json report = io::to_json(distill::classify(psi, opts));
  for (auto it = report.begin(); it != report.end(); ++it) out[it.key()] = it.value();
  out["rank_regime"] = io::to_json(distill::rank_regime(rho_ab, tol));
  return out;
}

Json cmd_filter(const Invocation& inv, std::istream& in) {
  const io::InputDocument doc = io::parse_document(read_input(inv.input_path, in));
  const Tolerances tol = tolerances(inv.config);
  std::string kind;
  const DensityMatrix rho = bipartite_of(doc, kind);
  const Side side = inv.side == "A" ? Side::kA : Side::kB;
  const FilterOutcome f = distill::filter(rho, side, tol);

  Json out;
  out["command"] = "filter";
  out["config"] = config_json(inv.config);
  out["input_kind"] = kind;
  out["side"] = to_string(side);
  out["p_succ"] = f.p_succ;
  out["p_succ_closed_form"] = f.p_succ_closed_form;
  out["lambda_min"] = f.lambda_min;
  out["rank"] = f.r;
  out["rank_side"] = f.r_side;
  out["rank_filtered"] = f.r_filtered;
  out["filtered_hashing_rate"] = distill::filtered_hashing_rate(rho, side, tol);
  try {
    out["theorem1_bound"] = distill::low_rank_bound(rho, side, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kPreconditionRankNotLow) throw;
    out["theorem1_bound"] = nullptr;
    out["theorem1_bound_note"] = e.what();
  }
  out["filter_operator"] = io::matrix_to_json(f.filter_operator);
  out["support_projector"] = io::matrix_to_json(f.support_projector);
  out["filtered_state"] = io::to_json(f.filtered_state);
  return out;
}

std::string cmd_sample(const Invocation& inv) {
  EnsembleSpec spec;
  spec.d_a = inv.d_a;
  spec.d_b = inv.d_b;
  spec.d_e = inv.d_e;
  spec.n_samples = inv.n_samples;
  spec.seed = inv.config.seed;
  spec.rank_tol = inv.config.rank_tol;
  const EnsembleReport report = sampling::run_low_rank_ensemble(spec, inv.config.witness_budget);
  if (inv.config.format == OutputFormat::kCsv) return io::ensemble_csv(report);
  Json out;
  out["command"] = "sample";
  out["config"] = config_json(inv.config);
  Json body = io::to_json(report);
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return render(out, inv.config.format);
}

Json cmd_example(const Invocation& inv) {
  const std::string& name = inv.example_name;
  if (name == "bell") {
    const ComplexVector v = channels::maximally_entangled(2);
    return io::to_json(DensityMatrix::from_pure({2, 2}, v));
  }
  if (name == "ghz") {
    ComplexVector v = ComplexVector::Zero(8);
    v(0) = v(7) = 1.0 / std::sqrt(2.0);
    return io::to_json(TripartitePureState({2, 2, 2}, v));
  }
  if (name == "maximally-mixed") {
    return io::to_json(DensityMatrix({2, 2}, ComplexMatrix::Identity(4, 4) / 4.0));
  }
  if (name == "werner-holevo") return io::to_json(channels::werner_holevo());
  if (name == "wh-choi") return io::to_json(channels::werner_holevo().choi());
  if (name == "example1") {
    return io::to_json(channels::example1_channel(inv.example_d, inv.example_q));
  }
  throw Error(ErrorKind::kBadParameter,
              "unknown example '" + name +
                  "' (expected bell, ghz, maximally-mixed, werner-holevo, wh-choi, example1)");
}

void emit(const std::string& text, const RunConfig& config, std::ostream& out) {
  if (config.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output);
  if (!file) throw Error(ErrorKind::kParse, "cannot open output file '" + config.output + "'");
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Invocation inv;
  CLI::App app{"Distillability bounds, local filters and full-undistillability checks"};
  app.name("undistill");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* analyze = app.add_subcommand("analyze", "Classify a state, tripartite state or channel");
  analyze->add_option("file", inv.input_path, "Input JSON ('-' for stdin)")->required();
  add_common_flags(analyze, inv.config);

  auto* filter = app.add_subcommand("filter", "Apply the flattening local filter on one side");
  filter->add_option("file", inv.input_path, "Input JSON ('-' for stdin)")->required();
  filter->add_option("--side", inv.side, "A or B")->check(CLI::IsMember({"A", "B"}));
  add_common_flags(filter, inv.config);

  auto* sample = app.add_subcommand("sample", "Rank and witness statistics of random low-rank states");
  sample->add_option("d_A", inv.d_a)->required()->check(CLI::PositiveNumber);
  sample->add_option("d_B", inv.d_b)->required()->check(CLI::PositiveNumber);
  sample->add_option("d_E", inv.d_e)->required()->check(CLI::PositiveNumber);
  sample->add_option("n", inv.n_samples)->required()->check(CLI::PositiveNumber);
  add_common_flags(sample, inv.config);

  auto* example = app.add_subcommand("example", "Print a named state or channel as JSON");
  example->add_option("name", inv.example_name)->required();
  example->add_option("--d", inv.example_d, "d_A for example1");
  example->add_option("--q", inv.example_q, "Depolarizing parameter for example1");
  add_common_flags(example, inv.config);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    std::string text;
    if (analyze->parsed()) {
      text = render(cmd_analyze(inv, in), inv.config.format);
    } else if (filter->parsed()) {
      text = render(cmd_filter(inv, in), inv.config.format);
    } else if (sample->parsed()) {
      text = cmd_sample(inv);
    } else {
      text = render(cmd_example(inv), inv.config.format);
    }
    emit(text, inv.config, out);
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_numerical() ? kNumericalError : kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace undistill::cli
