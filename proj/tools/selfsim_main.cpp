// selfsim: decision procedure, Fourier scans, renewal simulation and
// construction of self-similar systems from P.V. tuples.
//
// Exit codes: 0 success, 2 inconclusive verdict, 3 precondition failure,
// 4 parse error in the system file.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "selfsim/commands.hpp"
#include "selfsim/errors.hpp"

namespace {

using namespace selfsim;

void add_common(CLI::App* sub, cli::RunOptions& run) {
  sub->add_option("--precision-bits", run.precision_bits, "MPFR mantissa bits")->check(CLI::Range(64u, 1u << 16));
  sub->add_option("--tol", run.tol, "absolute tolerance for eigen relations");
  sub->add_option("--seed", run.seed, "seed for every Monte Carlo stage");
  sub->add_option("--max-words", run.max_words, "cap on cut-set expansion nodes");
  sub->add_option("--max-closure", run.max_closure, "cap on kernel closure elements");
  sub->add_option("--denom-bound", run.denom_bound, "denominator bound for rational reconstruction");
  sub->add_option("--out-dir", run.out_dir, "directory for reports and CSV files (stdout when empty)");
}

void emit(const cli::RunOptions& run, const std::string& file, const std::string& content) {
  if (run.out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(run.out_dir);
  const auto path = std::filesystem::path(run.out_dir) / file;
  std::ofstream out(path);
  if (!out) throw ContractError("cannot write " + path.string());
  out << content;
  std::cerr << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Rajchman analysis of self-similar measures"};
  app.require_subcommand(1);
  cli::RunOptions run;
  std::string input;

  auto* check = app.add_subcommand("check", "run the decision procedure on a system file");
  add_common(check, run);
  check->add_option("input", input, "system file")->required();
  bool no_witness = false;
  std::size_t generator = 0;
  int forced_k = 0;
  auto* gen_opt = check->add_option("--generator", generator, "pin one generator candidate (0-based)");
  auto* k_opt = check->add_option("--forced-k", forced_k, "only try eigenvalue subsets of this size");
  check->add_flag("--no-witness", no_witness, "skip the Fourier witness stage");
  check->add_option("--witness-m", run.witness_m, "witness offset m");
  check->add_option("--witness-n", run.witness_n, "largest witness index n");
  check->add_option("--witness-floor", run.witness_floor, "minimum |mu_hat| required to report a witness");

  auto* scan = app.add_subcommand("fourier-scan", "tabulate mu_hat along rays or the witness sequence");
  add_common(scan, run);
  scan->add_option("input", input, "system file")->required();
  cli::ScanOptions scan_opts;
  scan->add_option("--radii", scan_opts.radii, "comma-separated |xi| values")->delimiter(',');
  scan->add_option("--directions", scan_opts.directions, "number of directions (d >= 2)");
  scan->add_option("--eval-tol", scan_opts.tol, "error bound per evaluation");
  scan->add_flag("--witness", scan_opts.along_witness, "scan the witness sequence instead of rays");
  scan->add_option("--witness-m", run.witness_m, "witness offset m");
  scan->add_option("--witness-n", run.witness_n, "largest witness index n");

  auto* ren = app.add_subcommand("renewal", "simulate first hits and compare with the renewal limit");
  add_common(ren, run);
  ren->add_option("input", input, "system file")->required();
  cli::RenewalOptions ren_opts;
  ren->add_option("--t", ren_opts.t, "level t (a multiple of beta in the discrete case)");
  ren->add_option("--samples", ren_opts.samples, "number of walks");
  ren->add_flag("--psi-only", ren_opts.psi_only, "compare only the psi-marginal with rho_0");
  ren->add_option("--bin-width", ren_opts.bin_width, "histogram bin width for --psi-only");
  auto* ren_gen = ren->add_option("--generator", generator, "generator candidate defining h (0-based)");

  auto* con = app.add_subcommand("construct", "build a system file from a P.V. tuple");
  add_common(con, run);
  std::string poly, output;
  cli::ConstructOptions con_opts;
  con->add_option("--poly", poly, "ascending integer coefficients, e.g. \"4 0 1\"")->required();
  con->add_option("--roots", con_opts.roots, "root indices in sorted order (default: all outside the circle)")
      ->delimiter(',');
  con->add_flag("--salem", con_opts.salem, "use the product tuple of a Salem polynomial");
  con->add_option("--name", con_opts.name, "name written into the file");
  con->add_option("-o,--output", output, "output file (stdout when empty)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  if (*gen_opt || *ren_gen) run.generator = generator;
  if (*k_opt) run.forced_k = forced_k;
  run.witness = !no_witness;

  try {
    if (*check) {
      auto rep = cli::cmd_check(config::load_config(input), run);
      emit(run, "check_report.txt", rep.text);
      return rep.exit_code();
    }
    if (*scan) {
      emit(run, "fourier_scan.csv", cli::cmd_fourier_scan(config::load_config(input), run, scan_opts));
      return 0;
    }
    if (*ren) {
      auto res = cli::cmd_renewal(config::load_config(input), run, ren_opts);
      emit(run, "renewal_histogram.csv", res.csv);
      if (run.out_dir.empty())
        std::cerr << res.summary;
      else
        emit(run, "renewal_summary.txt", res.summary);
      return 0;
    }
    if (*con) {
      con_opts.poly = algebra::IntPolynomial::parse(poly);
      auto cfg = cli::cmd_construct(con_opts, run);
      std::ostringstream s;
      config::write_config(s, cfg);
      if (output.empty()) {
        std::cout << s.str();
      } else {
        std::ofstream out(output);
        if (!out) throw ContractError("cannot write " + output);
        out << s.str();
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
