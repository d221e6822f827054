#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shiftspec/config.hpp"
#include "shiftspec/csv.hpp"
#include "shiftspec/kernel.hpp"
#include "shiftspec/montecarlo.hpp"
#include "shiftspec/report.hpp"
#include "shiftspec/spectral.hpp"
#include "shiftspec/threads.hpp"
#include "shiftspec/verify.hpp"

namespace fs = std::filesystem;
using namespace shiftspec;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<uint64_t> seed;
  std::optional<long> n;
  std::optional<int> samples;
  int threads = 0;
};

struct Context {
  RunConfig cfg;
  SymbolicSystem sys;
  Observable obs;
  SmoothingKernel kern;
  fs::path out;
};

Context make_context(const CommonArgs& args) {
  Context ctx;
  ctx.cfg = load_config_file(args.config_path);
  if (args.seed) ctx.cfg.seed = *args.seed;
  if (args.n) ctx.cfg.n = *args.n;
  if (args.samples) ctx.cfg.samples = *args.samples;
  if (!args.out_dir.empty()) ctx.cfg.out_dir = args.out_dir;
  if (args.threads > 0) ctx.cfg.threads = args.threads;
  if (ctx.cfg.threads > 0) set_max_threads(ctx.cfg.threads);

  ctx.sys = ctx.cfg.build_system();
  ctx.obs = ctx.cfg.build_observable(ctx.sys);
  ctx.kern = ctx.cfg.build_kernel();
  ctx.out = ctx.cfg.out_dir;
  fs::create_directories(ctx.out);
  return ctx;
}

int finish(const Context& ctx, const std::string& command, const std::vector<Verdict>& verdicts) {
  write_verdicts_csv(verdicts, (ctx.out / (command + "_verdicts.csv")).string());
  bool ok = true;
  for (const Verdict& v : verdicts) {
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.name << ": " << format_double(v.value)
              << " " << v.relation << " " << format_double(v.threshold) << "\n";
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}

Verdict make_verdict(const std::string& name, const std::string& params, double value,
                     double threshold, const std::string& relation) {
  Verdict v;
  v.name = name;
  v.params = params;
  v.value = value;
  v.threshold = threshold;
  v.relation = relation;
  v.pass = relation == "<=" ? value <= threshold
                            : (relation == ">=" ? value >= threshold : value > threshold);
  return v;
}

int cmd_spectrum(const CommonArgs& args) {
  Context ctx = make_context(args);
  const double delta = find_perturbation_window(ctx.sys, ctx.obs);
  std::vector<double> ts;
  for (int k = -32; k <= 32; ++k)
    if (k != 0) ts.push_back(delta * k / 32.0);
  const EigenCurve curve = eigenvalue_curve(ctx.sys, ctx.obs, ts);

  CsvWriter csv((ctx.out / "spectrum.csv").string());
  csv.row({"t", "re_lambda", "im_lambda", "abs_lambda", "gap_ratio"});
  double conj_worst = 0.0;
  double abs_worst = 0.0;
  for (const EigenData& e : curve.samples) {
    csv.row({format_double(e.t), format_double(e.lambda.real()), format_double(e.lambda.imag()),
             format_double(std::abs(e.lambda)), format_double(e.gap_ratio)});
    abs_worst = std::max(abs_worst, std::abs(e.lambda));
  }
  for (size_t i = 0; i < ts.size() / 2; ++i) {
    // grid is symmetric: sample i pairs with the mirrored index
    const Complex a = curve.samples[i].lambda;
    const Complex b = curve.samples[ts.size() - 1 - i].lambda;
    conj_worst = std::max(conj_worst, std::abs(a - std::conj(b)));
  }
  std::vector<Verdict> verdicts;
  verdicts.push_back(make_verdict("spectrum.conjugation_symmetry", "delta=" + format_double(delta),
                                  conj_worst, 1e-10, "<="));
  verdicts.push_back(
      make_verdict("spectrum.modulus_bound", "delta=" + format_double(delta), abs_worst, 1.0, "<="));
  verdicts.push_back(make_verdict("spectrum.fitted_quadratic_decay",
                                  "delta=" + format_double(delta), curve.fitted_c, 0.0, ">"));
  return finish(ctx, "spectrum", verdicts);
}

int cmd_scan_aperiodicity(const CommonArgs& args) {
  Context ctx = make_context(args);
  const AperiodicityScan scan =
      aperiodicity_scan(ctx.sys, ctx.obs, ctx.cfg.t_lo, ctx.cfg.t_hi, ctx.cfg.t_step);

  CsvWriter csv((ctx.out / "aperiodicity.csv").string());
  csv.row({"t", "rho"});
  const long count =
      static_cast<long>(std::floor((ctx.cfg.t_hi - ctx.cfg.t_lo) / ctx.cfg.t_step + 1e-9)) + 1;
  for (long k = 0; k < count; ++k) {
    const double t = ctx.cfg.t_lo + static_cast<double>(k) * ctx.cfg.t_step;
    csv.row({format_double(t), format_double(spectral_radius(char_operator(ctx.sys, ctx.obs, t).m))});
  }
  std::vector<Verdict> verdicts;
  verdicts.push_back(make_verdict("scan_aperiodicity.max_rho",
                                  "argmax_t=" + format_double(scan.argmax_t), scan.max_rho,
                                  1.0 - 1e-8, "<="));
  return finish(ctx, "scan_aperiodicity", verdicts);
}

int cmd_variance(const CommonArgs& args) {
  Context ctx = make_context(args);
  const VarianceReport rep = variance(ctx.sys, ctx.obs);
  CsvWriter csv((ctx.out / "variance.csv").string());
  csv.row({"v_gk", "v_fd", "rel_err"});
  csv.row({format_double(rep.v_gk), format_double(rep.v_fd), format_double(rep.rel_err)});
  std::vector<Verdict> verdicts;
  verdicts.push_back(make_verdict("variance.green_kubo_vs_second_derivative",
                                  "v_gk=" + format_double(rep.v_gk), rep.rel_err, 1e-4, "<="));
  return finish(ctx, "variance", verdicts);
}

int cmd_llt(const CommonArgs& args) {
  Context ctx = make_context(args);
  const double v = variance(ctx.sys, ctx.obs).v_gk;
  const double delta = find_perturbation_window(ctx.sys, ctx.obs);
  const double target = ctx.kern.mass / std::sqrt(2.0 * std::numbers::pi * v);

  CsvWriter csv((ctx.out / "llt.csv").string());
  csv.row({"n", "sqrt_n_density", "gauss_target", "sqrt_n_lambda_l1"});
  double plateau_min = std::numeric_limits<double>::infinity(), plateau_max = 0.0;
  double density_rel = 0.0;
  for (int p = 10; p <= 14; p += 2) {
    const long n = 1L << p;
    const double root = std::sqrt(static_cast<double>(n));
    const double dens =
        root * expected_kernel_density(ctx.sys, ctx.obs, ctx.kern, n, 0.0, p >= 14 ? 16385 : 4097);
    const double l1 = root * lambda_l1_norm(ctx.sys, ctx.obs, n, delta);
    csv.row({format_double(static_cast<double>(n)), format_double(dens), format_double(target),
             format_double(l1)});
    plateau_min = std::min(plateau_min, l1);
    plateau_max = std::max(plateau_max, l1);
    if (p == 14) density_rel = std::abs(dens - target) / target;
  }
  std::vector<Verdict> verdicts;
  verdicts.push_back(
      make_verdict("llt.density_vs_gaussian", "n=2^14", density_rel, 0.05, "<="));
  verdicts.push_back(make_verdict("llt.l1_plateau", "n in {2^10..2^14}",
                                  plateau_max / plateau_min, 1.1, "<="));
  return finish(ctx, "llt", verdicts);
}

int cmd_potential_kernel(const CommonArgs& args) {
  Context ctx = make_context(args);
  std::vector<double> ys;
  for (int i = 1; i <= 10; ++i) ys.push_back(0.1 * i);
  const auto sums = potential_kernel_sums(ctx.sys, ctx.obs, ctx.kern, ys, 10000);

  CsvWriter csv((ctx.out / "potential_kernel.csv").string());
  csv.row({"y", "sum", "sum_over_y", "max_increment_at_n"});
  double worst_tail = 0.0, ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
  for (const auto& one : sums) {
    const double tail = one.max_term_beyond(9900);
    const double ratio = one.value / one.y;
    csv.row({format_double(one.y), format_double(one.value), format_double(ratio),
             format_double(tail)});
    worst_tail = std::max(worst_tail, tail);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  std::vector<Verdict> verdicts;
  verdicts.push_back(make_verdict("potential_kernel.tail_increments", "increments at N=1e4",
                                  worst_tail, 1e-6, "<="));
  verdicts.push_back(make_verdict("potential_kernel.sum_over_y_spread", "y in {0.1..1.0}",
                                  ratio_max / ratio_min, 10.0, "<="));
  return finish(ctx, "potential_kernel", verdicts);
}

int cmd_simulate(const CommonArgs& args) {
  Context ctx = make_context(args);
  const PathSample p =
      sample_path(ctx.sys, ctx.obs, static_cast<int>(ctx.cfg.n), ctx.cfg.seed, 0);
  CsvWriter csv((ctx.out / "path.csv").string());
  csv.row({"k", "state", "increment", "sum"});
  for (int k = 0; k <= p.n; ++k)
    csv.row({std::to_string(k), std::to_string(p.states[k]),
             format_double(k == 0 ? 0.0 : p.increments[k - 1]), format_double(p.sums[k])});
  std::cout << "wrote " << (ctx.out / "path.csv").string() << "\n";
  return 0;
}

int cmd_localtime(const CommonArgs& args) {
  Context ctx = make_context(args);
  const double v = variance(ctx.sys, ctx.obs).v_gk;
  const PathSample p =
      sample_path(ctx.sys, ctx.obs, static_cast<int>(ctx.cfg.n), ctx.cfg.seed, 0);
  const LocalTimeField field =
      local_time_field(p, ctx.kern, default_x_grid(v, ctx.cfg.x_points));
  CsvWriter csv((ctx.out / "localtime.csv").string());
  csv.row({"x", "l"});
  for (size_t i = 0; i < field.x_grid.size(); ++i)
    csv.row({format_double(field.x_grid[i]), format_double(field.values[i])});
  std::cout << "wrote " << (ctx.out / "localtime.csv").string() << "\n";
  return 0;
}

int cmd_verify_clt(const CommonArgs& args) {
  Context ctx = make_context(args);
  const KSResult ks =
      clt_check(ctx.sys, ctx.obs, static_cast<int>(ctx.cfg.n), ctx.cfg.samples, ctx.cfg.seed);
  std::vector<Verdict> verdicts;
  verdicts.push_back(make_verdict(
      "verify_clt.ks", "n=" + std::to_string(ctx.cfg.n) + " m=" + std::to_string(ctx.cfg.samples),
      ks.statistic, ks.critical, "<="));
  return finish(ctx, "verify_clt", verdicts);
}

int cmd_verify_localtime(const CommonArgs& args) {
  Context ctx = make_context(args);
  const KSResult ks = local_time_law_check(ctx.sys, ctx.obs, ctx.kern,
                                           static_cast<int>(ctx.cfg.n), ctx.cfg.samples,
                                           ctx.cfg.seed);
  std::vector<Verdict> verdicts;
  verdicts.push_back(make_verdict("verify_localtime.ks",
                                  "n=" + std::to_string(ctx.cfg.n) +
                                      " m=" + std::to_string(ctx.cfg.samples),
                                  ks.statistic, 0.06, "<="));
  return finish(ctx, "verify_localtime", verdicts);
}

int cmd_verify_moments(const CommonArgs& args) {
  Context ctx = make_context(args);
  const std::vector<int> n_list = {100, 1000, static_cast<int>(ctx.cfg.n)};
  std::vector<double> offsets;
  for (int i = 1; i <= 10; ++i) offsets.push_back(0.05 * i);
  const MomentRatioReport rep = moment_ratio_scan(ctx.sys, ctx.obs, ctx.kern, n_list, 0.0, offsets,
                                                  ctx.cfg.samples, ctx.cfg.seed);
  CsvWriter csv((ctx.out / "moments.csv").string());
  csv.row({"n", "offset", "fourth_moment_ratio", "second_moment"});
  for (size_t ni = 0; ni < rep.n_list.size(); ++ni)
    for (size_t oi = 0; oi < rep.offset_list.size(); ++oi)
      csv.row({std::to_string(rep.n_list[ni]), format_double(rep.offset_list[oi]),
               format_double(rep.ratios[ni][oi]), format_double(rep.second_moments[ni])});
  std::vector<Verdict> verdicts;
  verdicts.push_back(
      make_verdict("verify_moments.ratio_max_over_median", "", rep.max_over_median, 3.0, "<="));
  const auto [mn, mx] = std::minmax_element(rep.second_moments.begin(), rep.second_moments.end());
  verdicts.push_back(
      make_verdict("verify_moments.second_moment_spread", "", *mx / *mn, 3.0, "<="));
  return finish(ctx, "verify_moments", verdicts);
}

int cmd_verify_tightness(const CommonArgs& args) {
  Context ctx = make_context(args);
  const auto points = modulus_probe(ctx.sys, ctx.obs, ctx.kern, static_cast<int>(ctx.cfg.n),
                                    ctx.cfg.deltas, ctx.cfg.eps, ctx.cfg.samples, ctx.cfg.seed);
  CsvWriter csv((ctx.out / "tightness.csv").string());
  csv.row({"delta", "probability"});
  for (const auto& pt : points)
    csv.row({format_double(pt.delta), format_double(pt.probability)});
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const double p0 = points[i].probability, p1 = points[i + 1].probability;
    const double se = std::sqrt((p0 * (1.0 - p0) + p1 * (1.0 - p1)) / ctx.cfg.samples);
    worst = std::max(worst, (p1 - p0) / std::max(se, 1.0 / ctx.cfg.samples));
  }
  std::vector<Verdict> verdicts;
  verdicts.push_back(make_verdict("verify_tightness.monotone_within_se",
                                  "eps=" + format_double(ctx.cfg.eps), worst, 1.0, "<="));
  return finish(ctx, "verify_tightness", verdicts);
}

int cmd_report(const std::string& out_dir, uint64_t seed, int threads) {
  ReportOptions opt;
  opt.seed = seed;
  opt.threads = threads;
  fs::create_directories(out_dir);
  const std::vector<Verdict> verdicts = run_acceptance(opt, &std::cerr);
  write_verdicts_csv(verdicts, (fs::path(out_dir) / "verdicts.csv").string());
  std::ofstream summary((fs::path(out_dir) / "summary.txt").string());
  const bool ok_file = print_criteria_summary(verdicts, summary);
  const bool ok = print_criteria_summary(verdicts, std::cout);
  return (ok && ok_file) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit and statistical verifier for finite symbolic systems"};
  app.require_subcommand(1);

  CommonArgs args;
  uint64_t report_seed = ReportOptions{}.seed;
  std::string report_out = "out";
  int report_threads = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    if (needs_config)
      cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "seed override");
    cmd->add_option("--n", args.n, "trajectory length override");
    cmd->add_option("--samples", args.samples, "Monte Carlo sample count override");
    cmd->add_option("--threads", args.threads, "worker thread cap");
  };

  add_common(app.add_subcommand("spectrum", "eigenvalue curve inside the perturbation window"));
  add_common(app.add_subcommand("scan-aperiodicity", "spectral radius scan over a t grid"));
  add_common(app.add_subcommand("variance", "Green-Kubo vs second-derivative variance"));
  add_common(app.add_subcommand("llt", "kernel density decay and lambda L1 plateau"));
  add_common(app.add_subcommand("potential-kernel", "potential kernel partial sums over y"));
  add_common(app.add_subcommand("simulate", "sample one trajectory and write it as CSV"));
  add_common(app.add_subcommand("localtime", "local time field of one trajectory"));
  add_common(app.add_subcommand("verify-clt", "KS test of S_n/sqrt(n) against Normal(0, v)"));
  add_common(app.add_subcommand("verify-localtime", "KS test of l_n(0)/mass against |Z|/sqrt(v)"));
  add_common(app.add_subcommand("verify-moments", "local time moment ratio tables"));
  add_common(app.add_subcommand("verify-tightness", "modulus of continuity probabilities"));

  CLI::App* report = app.add_subcommand("report", "full verification suite on built-in examples");
  report->add_option("--out", report_out, "output directory");
  report->add_option("--seed", report_seed, "seed");
  report->add_option("--threads", report_threads, "worker thread cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("spectrum")) return cmd_spectrum(args);
    if (app.got_subcommand("scan-aperiodicity")) return cmd_scan_aperiodicity(args);
    if (app.got_subcommand("variance")) return cmd_variance(args);
    if (app.got_subcommand("llt")) return cmd_llt(args);
    if (app.got_subcommand("potential-kernel")) return cmd_potential_kernel(args);
    if (app.got_subcommand("simulate")) return cmd_simulate(args);
    if (app.got_subcommand("localtime")) return cmd_localtime(args);
    if (app.got_subcommand("verify-clt")) return cmd_verify_clt(args);
    if (app.got_subcommand("verify-localtime")) return cmd_verify_localtime(args);
    if (app.got_subcommand("verify-moments")) return cmd_verify_moments(args);
    if (app.got_subcommand("verify-tightness")) return cmd_verify_tightness(args);
    if (app.got_subcommand("report")) return cmd_report(report_out, report_seed, report_threads);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 10 + static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return 0;
}
