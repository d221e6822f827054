#include "shiftspec/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace shiftspec {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  raise(Errc::parse_error, "line " + std::to_string(line) + ": " + msg);
}

Vec parse_numbers(const std::string& value, int line) {
  Vec out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) parse_fail(line, "trailing characters in number '" + tok + "'");
    } catch (const std::logic_error&) {
      parse_fail(line, "expected a number, got '" + tok + "'");
    }
  }
  if (out.empty()) parse_fail(line, "expected at least one number");
  return out;
}

double parse_one(const std::string& value, int line) {
  const Vec v = parse_numbers(value, line);
  if (v.size() != 1) parse_fail(line, "expected a single value");
  return v[0];
}

long parse_long(const std::string& value, int line) {
  const double x = parse_one(value, line);
  const long n = static_cast<long>(x);
  if (static_cast<double>(n) != x) parse_fail(line, "expected an integer");
  return n;
}

uint64_t parse_u64(const std::string& value, int line) {
  const std::string v = trim(value);
  uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    parse_fail(line, "expected an unsigned integer, got '" + v + "'");
  return out;
}

void validate(const RunConfig& cfg) {
  auto check_rows = [&](const std::vector<Vec>& rows, const char* what, bool required) {
    if (rows.empty()) {
      if (required) raise(Errc::validation_error, std::string(what) + " rows missing");
      return;
    }
    if (static_cast<int>(rows.size()) != cfg.alphabet)
      raise(Errc::validation_error, std::string(what) + " has " + std::to_string(rows.size()) +
                                        " rows, alphabet is " + std::to_string(cfg.alphabet));
    for (size_t i = 0; i < rows.size(); ++i)
      if (static_cast<int>(rows[i].size()) != cfg.alphabet)
        raise(Errc::validation_error,
              std::string(what) + " row " + std::to_string(i) + " has wrong length");
  };

  if (cfg.alphabet < 1) raise(Errc::validation_error, "alphabet must be >= 1");
  check_rows(cfg.incidence_rows, "incidence", true);
  for (size_t i = 0; i < cfg.incidence_rows.size(); ++i)
    for (double x : cfg.incidence_rows[i])
      if (x != 0.0 && x != 1.0)
        raise(Errc::validation_error, "incidence row " + std::to_string(i) + " not 0/1");
  if (cfg.q_rows.empty() == cfg.potential_rows.empty())
    raise(Errc::validation_error, "exactly one of q rows or potential rows must be given");
  check_rows(cfg.q_rows, "q", false);
  check_rows(cfg.potential_rows, "potential", false);
  for (size_t i = 0; i < cfg.q_rows.size(); ++i) {
    double s = 0.0;
    for (double x : cfg.q_rows[i]) s += x;
    if (std::abs(s - 1.0) > 1e-12)
      raise(Errc::validation_error,
            "q row " + std::to_string(i) + " sums to " + std::to_string(s));
  }
  check_rows(cfg.observable_rows, "observable", true);
  if (!cfg.seed_set)
    raise(Errc::validation_error, "seed is required (no wall-clock seeding)");
  if (cfg.kernel_name != "fejer")
    raise(Errc::validation_error, "unknown kernel '" + cfg.kernel_name + "'");
  if (cfg.n < 1) raise(Errc::validation_error, "n must be >= 1");
  if (cfg.samples < 1) raise(Errc::validation_error, "samples must be >= 1");
  if (!(cfg.t_lo > 0.0) || !(cfg.t_hi > cfg.t_lo) || !(cfg.t_step > 0.0))
    raise(Errc::validation_error, "t grid needs 0 < t_lo < t_hi and t_step > 0");
  if (cfg.x_points < 2) raise(Errc::validation_error, "x_points must be >= 2");
  for (size_t i = 0; i + 1 < cfg.deltas.size(); ++i)
    if (!(cfg.deltas[i] > cfg.deltas[i + 1]))
      raise(Errc::validation_error, "deltas must be strictly decreasing");
  if (!cfg.deltas.empty() && !(cfg.deltas.back() > 0.0))
    raise(Errc::validation_error, "deltas must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw_line;
  std::string section;
  int line_no = 0;

  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "kernel" && section != "run" && section != "grids")
        parse_fail(line_no, "unknown section '" + section + "'");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "empty key");
    if (value.empty()) parse_fail(line_no, "empty value for '" + key + "'");

    if (section == "system") {
      if (key == "alphabet")
        cfg.alphabet = static_cast<int>(parse_long(value, line_no));
      else if (key == "incidence")
        cfg.incidence_rows.push_back(parse_numbers(value, line_no));
      else if (key == "q")
        cfg.q_rows.push_back(parse_numbers(value, line_no));
      else if (key == "potential")
        cfg.potential_rows.push_back(parse_numbers(value, line_no));
      else if (key == "observable")
        cfg.observable_rows.push_back(parse_numbers(value, line_no));
      else
        parse_fail(line_no, "unknown key '" + key + "' in [system]");
    } else if (section == "kernel") {
      if (key == "name")
        cfg.kernel_name = value;
      else
        parse_fail(line_no, "unknown key '" + key + "' in [kernel]");
    } else if (section == "run") {
      if (key == "n")
        cfg.n = parse_long(value, line_no);
      else if (key == "samples")
        cfg.samples = static_cast<int>(parse_long(value, line_no));
      else if (key == "seed") {
        cfg.seed = parse_u64(value, line_no);
        cfg.seed_set = true;
      } else if (key == "threads")
        cfg.threads = static_cast<int>(parse_long(value, line_no));
      else if (key == "out")
        cfg.out_dir = value;
      else
        parse_fail(line_no, "unknown key '" + key + "' in [run]");
    } else if (section == "grids") {
      if (key == "t_lo")
        cfg.t_lo = parse_one(value, line_no);
      else if (key == "t_hi")
        cfg.t_hi = parse_one(value, line_no);
      else if (key == "t_step")
        cfg.t_step = parse_one(value, line_no);
      else if (key == "x_points")
        cfg.x_points = static_cast<int>(parse_long(value, line_no));
      else if (key == "deltas")
        cfg.deltas = parse_numbers(value, line_no);
      else if (key == "eps")
        cfg.eps = parse_one(value, line_no);
      else
        parse_fail(line_no, "unknown key '" + key + "' in [grids]");
    } else {
      parse_fail(line_no, "key '" + key + "' outside any section");
    }
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::parse_error, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SymbolicSystem RunConfig::build_system() const {
  Incidence a(alphabet);
  for (int i = 0; i < alphabet; ++i)
    for (int j = 0; j < alphabet; ++j)
      a(i, j) = incidence_rows[i][j] != 0.0 ? 1 : 0;

  if (!q_rows.empty()) {
    Mat q(alphabet);
    for (int i = 0; i < alphabet; ++i)
      for (int j = 0; j < alphabet; ++j) q(i, j) = q_rows[i][j];
    return make_system(a, q);
  }
  Potential pot{Mat(alphabet)};
  for (int i = 0; i < alphabet; ++i)
    for (int j = 0; j < alphabet; ++j) pot.values(i, j) = potential_rows[i][j];
  return gibbs_from_potential(a, pot);
}

Observable RunConfig::build_observable(const SymbolicSystem& sys) const {
  Mat raw(alphabet);
  for (int i = 0; i < alphabet; ++i)
    for (int j = 0; j < alphabet; ++j) raw(i, j) = observable_rows[i][j];
  return center_observable(sys, raw);
}

SmoothingKernel RunConfig::build_kernel() const { return fejer_kernel(); }

}  // namespace shiftspec
