#include "polarcs/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarcs/decoders.hpp"
#include "polarcs/errors.hpp"
#include "polarcs/experiment.hpp"
#include "polarcs/infodim.hpp"
#include "polarcs/matrix_io.hpp"
#include "polarcs/mid_profile.hpp"
#include "polarcs/sensing_matrix.hpp"

namespace polarcs {

namespace {

/// Thrown by command bodies for a decode or convergence failure.
struct DecodeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructArgs {
  int n = 0;
  double p = 0.0;
  std::optional<double> rate;
  std::optional<std::size_t> n_good;
  double beta = kDefaultBeta;
  std::string out;
};

struct MidsArgs {
  int n = 0;
  double p = 0.0;
  bool sorted = false;
  std::string out;
};

struct SimulateArgs {
  ExperimentConfig config;
  std::string matrix = "polar";
  std::string sweep = "sparsity";
  std::string grid;
  std::string out;
};

struct RecoverArgs {
  std::string system;
  std::string measurements;
  std::string method = "l1";
  std::optional<std::size_t> max_sparsity;
  std::string out;
};

struct InfodimArgs {
  std::string law = "mixture";
  double p = 0.1;
  double sigma = 1.0;
  int levels = 4096;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  double beta = kDefaultBeta;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

void run_construct(const ConstructArgs& a, std::ostream& out) {
  if (a.n < 0 || a.n > kMaxStages) throw InvalidParameter("n out of range");
  const std::size_t M = std::size_t{1} << a.n;
  std::size_t N = 0;
  if (a.n_good) {
    N = *a.n_good;
  } else if (a.rate) {
    N = dimension_for_rate(*a.rate, M);
  } else {
    throw InvalidParameter("one of --rate or --N is required");
  }
  if (N > M) throw InvalidParameter("N exceeds the block length");
  emit(a.out, system_to_json(build_polar_system(a.n, a.p, N, a.beta)), out);
}

void run_mids(const MidsArgs& a, std::ostream& out) {
  const MidProfile profile = mid_recursion(a.p, a.n);
  std::ostringstream csv;
  if (a.sorted) {
    csv << "rank,mid\n";
    const IndexSet order = ranked_indices(profile);
    for (std::size_t r = 0; r < order.size(); ++r) {
      csv << r << ',' << format_real(profile.mids[order[r]]) << '\n';
    }
  } else {
    csv << "index,mid\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
      csv << i << ',' << format_real(profile.mids[i]) << '\n';
    }
  }
  emit(a.out, csv.str(), out);
}

void run_simulate(SimulateArgs a, std::ostream& out, std::ostream& err) {
  ExperimentConfig& c = a.config;
  c.matrix_kind = a.matrix == "gaussian" ? MatrixKind::gaussian : MatrixKind::polar;
  c.sweep = a.sweep == "rate" ? SweepKind::rate : SweepKind::sparsity;
  if (a.grid.empty()) a.grid = c.sweep == SweepKind::sparsity ? "0:0.6:0.05" : "0.05:0.65:0.05";
  c.grid = parse_grid(a.grid);
  err << "seed: " << c.seed << '\n';
  std::ostringstream csv;
  write_results_csv(csv, run_sweep(c));
  emit(a.out, csv.str(), out);
}

void run_recover(const RecoverArgs& a, std::ostream& out) {
  const LoadedSystem loaded = system_from_json(read_file(a.system));
  const Vector y_prime = load_vector(a.measurements);
  const bool l0 = a.method == "l0";
  DecodeResult r;
  if (loaded.has_coding) {
    RecoveryOptions options;
    options.l0_max_sparsity = a.max_sparsity;
    r = recover_sparse(loaded.system, y_prime, l0 ? RecoveryMethod::l0_oracle : RecoveryMethod::l1,
                       options);
  } else if (l0) {
    const std::size_t cap = a.max_sparsity.value_or(static_cast<std::size_t>(loaded.F.rows()));
    r = l0_oracle(loaded.F, y_prime, std::min<std::size_t>(cap, loaded.F.cols()));
  } else {
    r = basis_pursuit(loaded.F, y_prime);
  }
  if (!r.ok()) throw DecodeFailure("decoding failed: " + std::string(to_string(r.status)));
  std::ostringstream csv;
  write_vector_csv(csv, r.estimate);
  emit(a.out, csv.str(), out);
}

nlohmann::json mid_record(const MidEstimate& m) {
  return {{"estimate", m.mid},
          {"entropy_x_bits", m.entropy_x},
          {"entropy_y_bits", m.entropy_y},
          {"entropy_joint_bits", m.entropy_joint},
          {"wide_confidence", m.wide_confidence}};
}

void run_infodim(const InfodimArgs& a, std::ostream& out, std::ostream& err) {
  err << "seed: " << a.seed << '\n';
  nlohmann::json record = {{"law", a.law},         {"p", a.p},
                           {"sigma", a.sigma},     {"levels", a.levels},
                           {"samples", a.samples}, {"seed", a.seed}};
  if (a.law == "uniform" || a.law == "mixture") {
    MixtureSpec spec = a.law == "uniform"
                           ? MixtureSpec{1.0, {}, {ContinuousLaw::Kind::uniform, 0.0, 1.0}}
                           : sparse_noise_mixture(a.p, a.sigma);
    const auto est =
        estimate_dim(mixture_sampler(spec), 1, a.levels, a.samples, a.seed, mixture_box(spec));
    record["estimate"] = est.dim_estimate;
    record["entropy_bits"] = est.entropy_bits;
    record["occupied_cells"] = est.occupied_cells;
    record["wide_confidence"] = est.wide_confidence;
  } else if (a.law == "sanc") {
    record.update(mid_record(estimate_sanc_mid(a.p, a.sigma, a.levels, a.samples, a.seed)));
  } else {
    const auto [first, second] =
        estimate_onestep_mids(a.p, a.sigma, a.levels, a.samples, a.seed, a.beta);
    record["beta"] = a.beta;
    record["mid1"] = mid_record(first);
    record["mid2"] = mid_record(second);
  }
  out << record.dump() << '\n';
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real-valued polar transforms and sparse recovery experiments", "polarcs"};
  app.require_subcommand(1);

  ConstructArgs construct;
  auto* c = app.add_subcommand("construct", "Build H, A, A_b and F for a polar system");
  c->add_option("--n", construct.n, "log2 of the block length")->required();
  c->add_option("--p", construct.p, "design noise sparsity")->required()->check(CLI::Range(0.0, 1.0));
  auto* c_rate = c->add_option("--rate", construct.rate, "code rate; N = ceil(rate * M)");
  auto* c_n = c->add_option("--N", construct.n_good, "number of good channels");
  c_rate->excludes(c_n);
  c->add_option("--beta", construct.beta, "transform kernel parameter");
  c->add_option("--out", construct.out, "output JSON path")->required();

  MidsArgs mids;
  auto* m = app.add_subcommand("mids", "MID profile of the polarized channels as CSV");
  m->add_option("--n", mids.n, "log2 of the block length")->required();
  m->add_option("--p", mids.p, "noise sparsity")->required()->check(CLI::Range(0.0, 1.0));
  m->add_flag("--sorted", mids.sorted, "decreasing order with ranks");
  m->add_option("--out", mids.out, "output path (default stdout)");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo codeword error rate sweep");
  s->add_option("--m", sim.config.m, "codeword length")->required();
  s->add_option("--rate", sim.config.rate, "code rate for sparsity sweeps");
  s->add_option("--N", sim.config.n_good, "explicit code dimension for sparsity sweeps");
  s->add_option("--sparsity", sim.config.sparsity, "noise sparsity for rate sweeps");
  s->add_option("--matrix", sim.matrix, "polar or gaussian")
      ->check(CLI::IsMember({"polar", "gaussian"}));
  s->add_option("--sweep", sim.sweep, "sparsity or rate")->check(CLI::IsMember({"sparsity", "rate"}));
  s->add_option("--grid", sim.grid, "a:b:step");
  s->add_option("--trials", sim.config.trials, "trials per grid point");
  s->add_option("--seed", sim.config.seed, "master seed");
  s->add_option("--sigma", sim.config.sigma, "noise standard deviation");
  s->add_option("--threshold", sim.config.error_threshold, "per-coordinate mean l1 error bound");
  s->add_option("--design-p", sim.config.design_p, "noise sparsity the polar code is built for");
  s->add_option("--beta", sim.config.beta, "transform kernel parameter");
  s->add_flag("--fixed-matrix", sim.config.fixed_matrix, "one Gaussian draw for all trials");
  s->add_option("--threads", sim.config.threads, "worker threads");
  s->add_flag("--timing", sim.config.timing, "report wall time per grid point");
  s->add_option("--out", sim.out, "output CSV path")->required();

  RecoverArgs rec;
  auto* r = app.add_subcommand("recover", "Recover sparse e from y' = F e");
  r->add_option("--system", rec.system, "system or matrix JSON")->required()->check(CLI::ExistingFile);
  r->add_option("--measurements", rec.measurements, "y' as CSV or JSON")
      ->required()
      ->check(CLI::ExistingFile);
  r->add_option("--method", rec.method, "l1 or l0")->check(CLI::IsMember({"l1", "l0"}));
  r->add_option("--max-sparsity", rec.max_sparsity, "support size cap for l0");
  r->add_option("--out", rec.out, "output CSV path")->required();

  InfodimArgs info;
  auto* d = app.add_subcommand("infodim", "Quantized-entropy information dimension estimate");
  d->add_option("--law", info.law, "mixture, sanc, uniform or onestep")
      ->check(CLI::IsMember({"mixture", "sanc", "uniform", "onestep"}));
  d->add_option("--p", info.p, "continuous weight / noise sparsity")->check(CLI::Range(0.0, 1.0));
  d->add_option("--sigma", info.sigma, "noise standard deviation");
  d->add_option("--levels", info.levels, "quantizer levels per unit box");
  d->add_option("--samples", info.samples, "sample count");
  d->add_option("--seed", info.seed, "seed");
  d->add_option("--beta", info.beta, "kernel parameter for onestep");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) run_construct(construct, out);
    if (m->parsed()) run_mids(mids, out);
    if (s->parsed()) run_simulate(sim, out, err);
    if (r->parsed()) run_recover(rec, out);
    if (d->parsed()) run_infodim(info, out, err);
  } catch (const DecodeFailure& e) {
    err << e.what() << '\n';
    return kExitDecodeFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace polarcs
