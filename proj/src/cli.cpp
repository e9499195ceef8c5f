#include "qre/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "qre/io.hpp"
#include "qre/kernels.hpp"
#include "qre/verifier.hpp"

namespace qre {

namespace {

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    try {
      dims.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw UsageError("cannot parse dimension list: " + text);
    }
  }
  if (dims.empty()) throw UsageError("empty dimension list");
  return dims;
}

std::vector<AlphaParam> parse_alphas(const std::string& text) {
  std::vector<AlphaParam> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) out.push_back(AlphaParam::parse(token));
  if (out.empty()) throw UsageError("empty alpha list");
  return out;
}

SubsystemLayout layout_from(const std::vector<int>& dims, const std::string& labels_csv) {
  std::vector<std::string> labels;
  if (!labels_csv.empty()) {
    std::string token;
    std::istringstream in(labels_csv);
    while (std::getline(in, token, ',')) labels.push_back(token);
  } else {
    for (size_t i = 0; i < dims.size(); ++i) labels.push_back(std::string(1, static_cast<char>('A' + i)));
  }
  return SubsystemLayout(labels, dims);
}

int do_compute(const std::string& kind, const std::string& alpha_text, const std::string& state_path,
               const std::string& sigma_path, double z, bool z_given, std::string target, std::string cond,
               bool as_json) {
  const AlphaParam alpha = AlphaParam::parse(alpha_text);
  const DensityOperator rho = io::load_state(state_path);

  double value = 0.0;
  bool converged = true;
  std::optional<int> iterations;

  if (kind == "d-old" || kind == "d-sandwiched" || kind == "d-alpha-z") {
    if (sigma_path.empty()) throw UsageError("divergence kinds need --sigma");
    const DensityOperator sigma = io::load_state(sigma_path);
    if (kind == "d-old")
      value = d_old(rho, sigma.op, alpha);
    else if (kind == "d-sandwiched")
      value = d_sandwiched(rho, sigma.op, alpha);
    else {
      if (!z_given) throw UsageError("d-alpha-z needs --z");
      if (alpha.kind != AlphaParam::Kind::finite) throw UsageError("d-alpha-z needs a finite alpha");
      value = d_alpha_z(rho, sigma.op, alpha.value, z);
    }
  } else {
    const EntropyKind ek = parse_kind(kind);
    if (target.empty()) target = rho.layout.labels.at(0);
    if (cond.empty()) cond = rho.layout.labels.at(1);
    const EntropyResult res = entropy(ek, rho, target, cond, alpha);
    value = res.value;
    converged = res.converged;
    iterations = res.iterations;
  }

  if (as_json) {
    std::string out = "{\"value\": ";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += buf;
    out += converged ? ", \"converged\": true" : ", \"converged\": false";
    if (iterations) out += ", \"iterations\": " + std::to_string(*iterations);
    out += "}";
    std::cout << out << "\n";
  } else {
    std::printf("%.12g\n", value);
  }
  return converged ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"quantum Renyi divergences, conditional entropies and property verification"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand("compute", "evaluate one entropy or divergence on a state file");
  std::string c_kind, c_alpha, c_state, c_sigma, c_target, c_cond;
  double c_z = 1.0;
  bool c_json = false;
  compute->add_option("--kind", c_kind,
                      "old-down|old-up|sandwiched-down|sandwiched-up|d-old|d-sandwiched|d-alpha-z")
      ->required();
  compute->add_option("--alpha", c_alpha, "Renyi order (number, 0, 1 or inf)")->required();
  compute->add_option("--state", c_state, "state file (type state or pure_state)")->required();
  compute->add_option("--sigma", c_sigma, "second operator for divergences");
  auto* zopt = compute->add_option("--z", c_z, "z parameter for d-alpha-z");
  compute->add_option("--target", c_target, "target subsystem label (default: first)");
  compute->add_option("--cond", c_cond, "conditioning subsystem label (default: second)");
  compute->add_flag("--json", c_json, "machine-readable output");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run one property suite over a random ensemble");
  std::string v_suite, v_dims, v_alphas, v_out, v_povm_m, v_povm_n;
  int v_trials = 0, v_threads = 0;
  uint64_t v_seed = 0;
  double v_tol = 0.0;
  verify_cmd->add_option("--suite", v_suite, "suite name (e.g. duality1, ordering, holder)")->required();
  auto* od = verify_cmd->add_option("--dims", v_dims, "subsystem dimensions, comma separated");
  auto* oa = verify_cmd->add_option("--alphas", v_alphas, "alpha grid, comma separated");
  auto* ot = verify_cmd->add_option("--trials", v_trials, "number of random trials");
  auto* os = verify_cmd->add_option("--seed", v_seed, "ensemble seed");
  auto* ol = verify_cmd->add_option("--tolerance", v_tol, "violation tolerance");
  auto* oth = verify_cmd->add_option("--threads", v_threads, "worker threads");
  verify_cmd->add_option("--povm-m", v_povm_m, "POVM file for the first measurement");
  verify_cmd->add_option("--povm-n", v_povm_n, "POVM file for the second measurement");
  verify_cmd->add_option("--out", v_out, "write the JSON report here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "entropy vs alpha grid as CSV");
  std::string s_state, s_alphas, s_kinds = "all", s_out, s_target, s_cond;
  sweep->add_option("--state", s_state, "state file")->required();
  sweep->add_option("--alphas", s_alphas, "alpha grid, comma separated")->required();
  sweep->add_option("--kinds", s_kinds, "all or comma list of entropy kinds");
  sweep->add_option("--target", s_target, "target label (default: first)");
  sweep->add_option("--cond", s_cond, "conditioning label (default: second)");
  sweep->add_option("--out", s_out, "output CSV path (default: stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "emit random state/channel/POVM files");
  std::string g_type, g_dims = "2,2", g_labels, g_out, g_basis = "random";
  int g_rank = 0, g_elements = 2, g_dim_out = 0, g_env = 0;
  uint64_t g_seed = 1;
  gen->add_option("--type", g_type, "state|pure-state|channel|povm")->required();
  gen->add_option("--dims", g_dims, "dimensions, comma separated");
  gen->add_option("--labels", g_labels, "labels, comma separated (default A,B,...)");
  gen->add_option("--rank", g_rank, "state rank (default: full)");
  gen->add_option("--dim-out", g_dim_out, "channel output dimension (default: input)");
  gen->add_option("--env-dim", g_env, "channel environment dimension (default: input)");
  gen->add_option("--basis", g_basis, "povm basis: z|x|random");
  gen->add_option("--elements", g_elements, "element count for random POVMs");
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_option("--out", g_out, "output path (default: stdout)");

  try {
    try {
      app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }

    if (*compute) return do_compute(c_kind, c_alpha, c_state, c_sigma, c_z, zopt->count() > 0, c_target, c_cond, c_json);

    if (*verify_cmd) {
      verify::SuiteSpec spec = verify::default_spec(verify::parse_suite(v_suite));
      if (od->count()) spec.dims = parse_dims(v_dims);
      if (oa->count()) spec.alpha_grid = parse_alphas(v_alphas);
      if (ot->count()) spec.trials = v_trials;
      if (os->count()) spec.seed = v_seed;
      if (ol->count()) spec.tolerance = v_tol;
      if (oth->count()) spec.threads = v_threads;
      spec.povm_m_path = v_povm_m;
      spec.povm_n_path = v_povm_n;
      const verify::VerificationReport report = verify::run_suite(spec);
      if (!v_out.empty()) io::save(v_out, verify::report_to_json(report));
      std::printf("suite=%s trials=%d violations=%d not_converged=%d max_residual=%.3e mean_residual=%.3e runtime_ms=%.0f\n",
                  verify::suite_name(spec.suite).c_str(), spec.trials, report.summary.violations,
                  report.summary.not_converged, report.summary.max_residual, report.summary.mean_residual,
                  report.summary.runtime_ms);
      return report.summary.violations > 0 ? 1 : 0;
    }

    if (*sweep) {
      const DensityOperator rho = io::load_state(s_state);
      const std::vector<AlphaParam> alphas = parse_alphas(s_alphas);
      std::vector<EntropyKind> kinds;
      if (s_kinds == "all") {
        kinds = {{DivergenceFamily::old_renyi, Arrow::down},
                 {DivergenceFamily::old_renyi, Arrow::up},
                 {DivergenceFamily::sandwiched, Arrow::down},
                 {DivergenceFamily::sandwiched, Arrow::up}};
      } else {
        std::string token;
        std::istringstream in(s_kinds);
        while (std::getline(in, token, ',')) kinds.push_back(parse_kind(token));
      }
      const std::string target = s_target.empty() ? rho.layout.labels.at(0) : s_target;
      const std::string cond = s_cond.empty() ? rho.layout.labels.at(1) : s_cond;
      const std::string csv = verify::sweep_csv(rho, target, cond, kinds, alphas);
      if (s_out.empty())
        std::cout << csv;
      else
        io::save(s_out, csv);
      return 0;
    }

    if (*gen) {
      SeededRng rng(g_seed);
      const std::vector<int> dims = parse_dims(g_dims);
      std::string text;
      if (g_type == "state") {
        const SubsystemLayout layout = layout_from(dims, g_labels);
        const int rank = g_rank > 0 ? g_rank : layout.total_dim();
        text = io::to_json_string(random_density(layout, rank, rng));
      } else if (g_type == "pure-state") {
        text = io::to_json_string(random_pure_state(layout_from(dims, g_labels), rng));
      } else if (g_type == "channel") {
        const int din = dims.at(0);
        const int dout = g_dim_out > 0 ? g_dim_out : din;
        const int env = g_env > 0 ? g_env : din;
        text = io::to_json_string(random_channel(din, dout, env, rng));
      } else if (g_type == "povm") {
        const int d = dims.at(0);
        Povm povm;
        if (g_basis == "z")
          povm = computational_povm(d);
        else if (g_basis == "x")
          povm = hadamard_povm();
        else if (g_basis == "random")
          povm = random_povm(d, g_elements, rng);
        else
          throw UsageError("unknown POVM basis: " + g_basis);
        text = io::to_json_string(povm);
      } else {
        throw UsageError("unknown gen type: " + g_type);
      }
      if (g_out.empty())
        std::cout << text << "\n";
      else
        io::save(g_out, text);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qre
