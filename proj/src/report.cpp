#include "shiftspec/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "shiftspec/csv.hpp"
#include "shiftspec/kernel.hpp"
#include "shiftspec/montecarlo.hpp"
#include "shiftspec/presets.hpp"
#include "shiftspec/rng.hpp"
#include "shiftspec/spectral.hpp"
#include "shiftspec/threads.hpp"
#include "shiftspec/verify.hpp"

namespace shiftspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Suite {
  std::vector<Verdict>& out;
  std::ostream* progress;

  void add(const std::string& name, const std::string& params, double value, double threshold,
           const std::string& relation) {
    Verdict v;
    v.name = name;
    v.params = params;
    v.value = value;
    v.threshold = threshold;
    v.relation = relation;
    if (relation == "<=")
      v.pass = value <= threshold;
    else if (relation == ">=")
      v.pass = value >= threshold;
    else if (relation == ">")
      v.pass = value > threshold;
    else
      v.pass = false;
    out.push_back(std::move(v));
  }

  void note(const std::string& line) const {
    if (progress) *progress << line << std::endl;
  }
};

std::string group_key(const std::string& name) {
  size_t first = name.find('.');
  if (first == std::string::npos) return name;
  size_t second = name.find('.', first + 1);
  return second == std::string::npos ? name : name.substr(0, second);
}

double residual_exact_algebra(const Preset& p) {
  const SymbolicSystem& sys = p.sys;
  double worst = 0.0;
  for (int i = 0; i < sys.d; ++i) {
    double s = 0.0;
    for (int j = 0; j < sys.d; ++j) s += sys.kernel(i, j);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  double total = 0.0;
  for (int j = 0; j < sys.d; ++j) {
    double s = 0.0;
    for (int i = 0; i < sys.d; ++i) s += sys.stationary[i] * sys.kernel(i, j);
    worst = std::max(worst, std::abs(s - sys.stationary[j]));
    total += sys.stationary[j];
  }
  worst = std::max(worst, std::abs(total - 1.0));

  const CharOperatorSample transfer = char_operator(p.sys, p.obs, 0.0);
  const CVec ones(sys.d, Complex(1.0, 0.0));
  const CVec t_ones = matvec(transfer.m, ones);
  for (int i = 0; i < sys.d; ++i) worst = std::max(worst, std::abs(t_ones[i] - 1.0));
  // m(T^ g) = m(g) for all g reads as pi^T M = pi^T columnwise.
  for (int x = 0; x < sys.d; ++x) {
    Complex s = 0.0;
    for (int y = 0; y < sys.d; ++y) s += sys.stationary[y] * transfer.m(y, x);
    worst = std::max(worst, std::abs(s - sys.stationary[x]));
  }

  const EigenData eig = dominant_eigen(transfer, sys.stationary);
  worst = std::max(worst, std::abs(eig.lambda - 1.0));
  for (int i = 0; i < sys.d; ++i) {
    worst = std::max(worst, std::abs(eig.eta[i] - 1.0));
    worst = std::max(worst, std::abs(eig.xi[i] - sys.stationary[i]));
  }
  return worst;
}

void c01_exact_algebra(Suite& s, const std::vector<Preset>& presets) {
  for (const Preset& p : presets)
    s.add("c01.exact_algebra." + p.name, "t=0", residual_exact_algebra(p), 1e-12, "<=");
  s.note("c01 exact algebra done");
}

void c02_oracle_equivalence(Suite& s, const std::vector<Preset>& presets) {
  const double ts[] = {0.1, 0.7, 2.3};
  for (const Preset& p : presets) {
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n)
      for (const double t : ts)
        worst = std::max(worst, std::abs(operator_charfn(p.sys, p.obs, n, t) -
                                         brute_force_charfn(p.sys, p.obs, n, t)));
    s.add("c02.oracle_equivalence." + p.name, "n=1..10 t={0.1,0.7,2.3}", worst, 1e-10, "<=");
  }
  s.note("c02 oracle equivalence done");
}

void c03_iid_reduction(Suite& s, const std::vector<Preset>& presets) {
  for (const Preset& p : presets) {
    double worst = 0.0;
    for (int k = -10; k <= 10; ++k) {
      const double t = 0.05 * k;
      if (t == 0.0) continue;
      Complex classical = 0.0;
      for (int x = 0; x < p.sys.d; ++x) {
        const double phi = p.obs.values(x, 0);  // state observable, constant in y
        classical += p.sys.stationary[x] * Complex(std::cos(t * phi), std::sin(t * phi));
      }
      const Complex lam = dominant_eigen(char_operator(p.sys, p.obs, t), p.sys.stationary).lambda;
      worst = std::max(worst, std::abs(lam - classical));
    }
    s.add("c03.iid_reduction." + p.name, "t in [-0.5,0.5]", worst, 1e-10, "<=");
  }
  s.note("c03 iid reduction done");
}

void c04_variance_crossval(Suite& s, const std::vector<Preset>& presets) {
  for (const Preset& p : presets) {
    const VarianceReport rep = variance(p.sys, p.obs);
    s.add("c04.variance_crossval." + p.name,
          "v_gk=" + format_double(rep.v_gk) + " v_fd=" + format_double(rep.v_fd), rep.rel_err,
          1e-4, "<=");
  }
  s.note("c04 variance cross-validation done");
}

void c05_eigen_expansion(Suite& s, const std::vector<Preset>& presets) {
  for (const Preset& p : presets) {
    const double v = variance(p.sys, p.obs).v_gk;

    double ratio_min = std::numeric_limits<double>::infinity();
    double ratio_max = 0.0;
    double conj_worst = 0.0;
    for (int k = 0; k <= 12; ++k) {
      // 13 log-spaced points over [1e-3, 1e-1]
      const double t = 1e-3 * std::pow(100.0, k / 12.0);
      const Complex lam = dominant_eigen(char_operator(p.sys, p.obs, t), p.sys.stationary).lambda;
      const Complex lam_neg =
          dominant_eigen(char_operator(p.sys, p.obs, -t), p.sys.stationary).lambda;
      conj_worst = std::max(conj_worst, std::abs(lam_neg - std::conj(lam)));
      const double r = std::abs(lam - 1.0 + v * t * t / 2.0) / (t * t * t);
      ratio_min = std::min(ratio_min, r);
      ratio_max = std::max(ratio_max, r);
    }
    s.add("c05.eigen_expansion." + p.name + ".cubic_ratio_spread",
          "t in [1e-3,1e-1] v=" + format_double(v), ratio_max / ratio_min, 10.0, "<=");
    s.add("c05.eigen_expansion." + p.name + ".conjugation", "t in [1e-3,1e-1]", conj_worst, 1e-10,
          "<=");

    const double delta = find_perturbation_window(p.sys, p.obs);
    std::vector<double> ts;
    for (int k = -16; k <= 16; ++k)
      if (k != 0) ts.push_back(delta * k / 16.0);
    const EigenCurve curve = eigenvalue_curve(p.sys, p.obs, ts);
    s.add("c05.eigen_expansion." + p.name + ".fitted_c", "delta=" + format_double(delta),
          curve.fitted_c, 0.0, ">");
  }
  s.note("c05 eigenvalue expansion done");
}

void c06_llt(Suite& s, const Preset& p) {
  const SmoothingKernel kern = fejer_kernel();
  const double v = variance(p.sys, p.obs).v_gk;

  const long n_big = 1L << 14;
  const double density = expected_kernel_density(p.sys, p.obs, kern, n_big, 0.0, 16385);
  const double target = kern.mass / std::sqrt(2.0 * std::numbers::pi * v);
  const double rel = std::abs(std::sqrt(static_cast<double>(n_big)) * density - target) / target;
  s.add("c06.llt." + p.name + ".density_vs_gaussian", "n=2^14", rel, 0.05, "<=");

  const double delta = find_perturbation_window(p.sys, p.obs);
  double plateau_min = std::numeric_limits<double>::infinity();
  double plateau_max = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (const long n : {1L << 10, 1L << 12, 1L << 14}) {
    const double l1 = lambda_l1_norm(p.sys, p.obs, n, delta);
    if (l1 > prev * (1.0 + 1e-12)) monotone = false;
    prev = l1;
    const double scaled = std::sqrt(static_cast<double>(n)) * l1;
    plateau_min = std::min(plateau_min, scaled);
    plateau_max = std::max(plateau_max, scaled);
  }
  s.add("c06.llt." + p.name + ".l1_plateau", "n in {2^10,2^12,2^14} delta=" + format_double(delta),
        plateau_max / plateau_min, 1.1, "<=");
  s.add("c06.llt." + p.name + ".l1_monotone", "n in {2^10,2^12,2^14}", monotone ? 1.0 : 0.0, 1.0,
        ">=");
  s.note("c06 local limit bound done");
}

void c07_potential_kernel(Suite& s, const Preset& p) {
  const SmoothingKernel kern = fejer_kernel();
  std::vector<double> ys;
  for (int i = 1; i <= 10; ++i) ys.push_back(0.1 * i);
  const int n_max = 10000;
  const auto sums = potential_kernel_sums(p.sys, p.obs, kern, ys, n_max);

  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  double worst_tail_increment = 0.0;
  for (const PotentialKernelSum& one : sums) {
    // Cauchy check at the stopping point: the last increments of the
    // partial-sum sequence (final 1% of the range, well beyond n = 1e3).
    worst_tail_increment = std::max(worst_tail_increment, one.max_term_beyond(n_max - 100));
    const double ratio = one.value / one.y;
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  s.add("c07.potential_kernel." + p.name + ".tail_increments",
        "increments at N=1e4 y in {0.1..1.0}", worst_tail_increment, 1e-6, "<=");
  s.add("c07.potential_kernel." + p.name + ".sum_over_y_spread", "y in {0.1..1.0}",
        ratio_max / ratio_min, 10.0, "<=");
  s.note("c07 potential kernel done");
}

void c08_mass_conservation(Suite& s, const Preset& p, uint64_t seed) {
  const SmoothingKernel kern = fejer_kernel();
  const int n = 10000;
  const int paths = 100;
  Vec errors(paths, 0.0);
  parallel_chunks(paths, 4, [&](size_t lo, size_t hi) {
    for (size_t j = lo; j < hi; ++j) {
      const PathSample path = sample_path(p.sys, p.obs, n, seed, j);
      const double mass = wide_trapezoid_mass(path, kern, 40.0, 6.0);
      errors[j] = std::abs(mass / kern.mass - 1.0);
    }
  });
  const double worst = *std::max_element(errors.begin(), errors.end());
  s.add("c08.mass_conservation." + p.name, "paths=100 n=1e4", worst, 1e-3, "<=");
  s.note("c08 mass conservation done");
}

void c09_clt(Suite& s, const std::vector<Preset>& presets, uint64_t seed) {
  for (const Preset& p : presets) {
    const KSResult ks = clt_check(p.sys, p.obs, 10000, 5000, seed);
    s.add("c09.clt." + p.name, "n=1e4 m=5000", ks.statistic, ks.critical, "<=");
  }
  s.note("c09 central limit theorem done");
}

void c10_local_time_law(Suite& s, const Preset& p, uint64_t seed) {
  const SmoothingKernel kern = fejer_kernel();
  const KSResult ks = local_time_law_check(p.sys, p.obs, kern, 10000, 2000, seed);
  s.add("c10.local_time_law." + p.name, "n=1e4 m=2000", ks.statistic, 0.06, "<=");
  s.note("c10 local time law done");
}

void c11_sandwich(Suite& s, const Preset& p, uint64_t seed) {
  const SmoothingKernel kern = fejer_kernel();
  const int n = 10000;
  const int paths = 100;
  Vec lo_slack(paths), up_slack(paths);
  parallel_chunks(paths, 8, [&](size_t lo, size_t hi) {
    for (size_t j = lo; j < hi; ++j) {
      const PathSample path = sample_path(p.sys, p.obs, n, seed + 1, j);
      const SandwichReport rep = occupation_sandwich(path, kern, -2.0, 3.0, 0.5);
      lo_slack[j] = rep.slack_lower;
      up_slack[j] = rep.slack_upper;
    }
  });
  s.add("c11.occupation_sandwich." + p.name + ".min_lower_slack", "paths=100 a=-2 b=3 eps=0.5",
        *std::min_element(lo_slack.begin(), lo_slack.end()), -1e-10, ">=");
  s.add("c11.occupation_sandwich." + p.name + ".min_upper_slack", "paths=100 a=-2 b=3 eps=0.5",
        *std::min_element(up_slack.begin(), up_slack.end()), -1e-10, ">=");
  s.note("c11 occupation sandwich done");
}

void c12_moment_bounds(Suite& s, const Preset& p, uint64_t seed) {
  const SmoothingKernel kern = fejer_kernel();
  const std::vector<int> n_list = {100, 1000, 10000};
  std::vector<double> offsets;
  for (int i = 1; i <= 10; ++i) offsets.push_back(0.05 * i);
  const MomentRatioReport rep =
      moment_ratio_scan(p.sys, p.obs, kern, n_list, 0.0, offsets, 2000, seed + 2);
  s.add("c12.moment_bounds." + p.name + ".ratio_max_over_median",
        "n in {1e2,1e3,1e4} off in {0.05..0.5} m=2000", rep.max_over_median, 3.0, "<=");
  const auto [mn, mx] = std::minmax_element(rep.second_moments.begin(), rep.second_moments.end());
  s.add("c12.moment_bounds." + p.name + ".second_moment_spread", "n in {1e2,1e3,1e4}", *mx / *mn,
        3.0, "<=");
  s.note("c12 moment bounds done");
}

void c13_tightness_probe(Suite& s, const Preset& p, uint64_t seed) {
  const SmoothingKernel kern = fejer_kernel();
  const double deltas[] = {0.4, 0.2, 0.1, 0.05};
  const int m = 500;
  const auto points = modulus_probe(p.sys, p.obs, kern, 10000, deltas, 0.5, m, seed + 3);
  double worst = -std::numeric_limits<double>::infinity();
  std::ostringstream probs;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const double p0 = points[i].probability;
    const double p1 = points[i + 1].probability;
    const double se =
        std::sqrt((p0 * (1.0 - p0) + p1 * (1.0 - p1)) / static_cast<double>(m));
    worst = std::max(worst, (p1 - p0) / std::max(se, 1.0 / m));
  }
  for (const auto& pt : points) probs << " p(" << pt.delta << ")=" << pt.probability;
  s.add("c13.tightness_probe." + p.name, "n=1e4 m=500 eps=0.5" + probs.str(), worst, 1.0, "<=");
  s.note("c13 tightness probe done");
}

void c14_chaining(Suite& s, uint64_t seed) {
  CounterRng rng(seed, 77);
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = trial % 8;
    const size_t size = (size_t{1} << k) + 1;
    Vec values(size);
    const bool heavy = trial % 2 == 0;
    for (double& x : values) {
      const double u = 2.0 * rng.next_double() - 1.0;
      x = heavy ? std::tan(1.5 * u) : u;
    }
    const ChainingCheck chk = dyadic_chaining_check(values);
    worst = std::max(worst, chk.sup_pairwise - chk.bound);
  }
  s.add("c14.chaining_inequality", "trials=1e4 k<=7", worst, 0.0, "<=");
  s.note("c14 chaining inequality done");
}

void c15_aperiodicity_gate(Suite& s, const std::vector<Preset>& nonlattice, const Preset& lattice) {
  const double step = std::numbers::pi / 50.0;
  const AperiodicityScan hit = aperiodicity_scan(lattice.sys, lattice.obs, step, 6.5, step);
  s.add("c15.aperiodicity_gate." + lattice.name + ".max_rho", "grid k*pi/50 up to 6.5",
        hit.max_rho, 1.0 - 1e-8, ">=");
  s.add("c15.aperiodicity_gate." + lattice.name + ".argmax_near_2pi",
        "argmax_t=" + format_double(hit.argmax_t), std::abs(std::abs(hit.argmax_t) - kTwoPi), 0.01,
        "<=");
  for (const Preset& p : nonlattice) {
    const AperiodicityScan scan = aperiodicity_scan(p.sys, p.obs, 0.05, 1.0, 0.01);
    s.add("c15.aperiodicity_gate." + p.name + ".max_rho",
          "grid [0.05,1] step 0.01 argmax=" + format_double(scan.argmax_t), scan.max_rho, 0.999,
          "<=");
  }
  s.note("c15 aperiodicity gate done");
}

}  // namespace

std::vector<Verdict> run_acceptance(const ReportOptions& opt, std::ostream* progress) {
  if (opt.threads > 0) set_max_threads(opt.threads);
  std::vector<Verdict> verdicts;
  Suite s{verdicts, progress};

  const Preset two_state = preset_two_state();
  const Preset golden = preset_golden_mean();
  const Preset iid3 = preset_iid3();
  const Preset lattice3 = preset_lattice3();
  const std::vector<Preset> all = {two_state, golden, iid3, lattice3};
  const std::vector<Preset> nonlattice = {two_state, golden, iid3};
  const std::vector<Preset> iid_like = {iid3, lattice3};

  c01_exact_algebra(s, all);
  c02_oracle_equivalence(s, all);
  c03_iid_reduction(s, iid_like);
  c04_variance_crossval(s, all);
  c05_eigen_expansion(s, nonlattice);
  c06_llt(s, two_state);
  c07_potential_kernel(s, two_state);
  c08_mass_conservation(s, two_state, opt.seed);
  c09_clt(s, nonlattice, opt.seed);
  c10_local_time_law(s, iid3, opt.seed);
  c11_sandwich(s, two_state, opt.seed);
  c12_moment_bounds(s, two_state, opt.seed);
  c13_tightness_probe(s, two_state, opt.seed);
  c14_chaining(s, opt.seed);
  c15_aperiodicity_gate(s, nonlattice, lattice3);
  return verdicts;
}

bool print_criteria_summary(const std::vector<Verdict>& verdicts, std::ostream& out) {
  std::map<std::string, std::pair<int, std::vector<const Verdict*>>> groups;
  std::vector<std::string> order;
  for (const Verdict& v : verdicts) {
    const std::string key = group_key(v.name);
    if (groups.find(key) == groups.end()) order.push_back(key);
    auto& slot = groups[key];
    ++slot.first;
    if (!v.pass) slot.second.push_back(&v);
  }
  bool ok = true;
  for (const std::string& key : order) {
    const auto& slot = groups[key];
    if (slot.second.empty()) {
      out << "[PASS] " << key << " (" << slot.first << " checks)\n";
    } else {
      ok = false;
      out << "[FAIL] " << key << " (" << slot.second.size() << "/" << slot.first
          << " checks failed)\n";
      for (const Verdict* v : slot.second)
        out << "       " << v->name << ": " << format_double(v->value) << " " << v->relation << " "
            << format_double(v->threshold) << " violated (" << v->params << ")\n";
    }
  }
  return ok;
}

void write_verdicts_csv(const std::vector<Verdict>& verdicts, const std::string& path) {
  CsvWriter csv(path);
  csv.row({"name", "params", "value", "threshold", "relation", "pass"});
  for (const Verdict& v : verdicts)
    csv.row({v.name, "\"" + v.params + "\"", format_double(v.value), format_double(v.threshold),
             v.relation, v.pass ? "1" : "0"});
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

}  // namespace shiftspec
