#include "nla/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "nla/errors.hpp"

namespace nla {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double to_number(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_number(key, item));
  }
  return out;
}

void set_key(ExperimentConfig& cfg, const std::string& key,
             const std::string& raw) {
  const std::string v = unquote(trim(raw));
  if (key == "experiment") cfg.experiment = v;
  else if (key == "dim") cfg.dim = static_cast<int>(to_number(key, v));
  else if (key == "q") cfg.q = to_number(key, v);
  else if (key == "lambda") cfg.lambda = to_number(key, v);
  else if (key == "kernel.J") cfg.kernel_J = v;
  else if (key == "kernel.G") cfg.kernel_G = v;
  else if (key == "kernel.rho") cfg.kernel_rho = v;
  else if (key == "n") cfg.n = static_cast<int>(to_number(key, v));
  else if (key == "half_width") cfg.half_width = to_number(key, v);
  else if (key == "scheme") cfg.scheme = v;
  else if (key == "dt") cfg.dt = (v == "auto") ? 0.0 : to_number(key, v);
  else if (key == "safety") cfg.safety = to_number(key, v);
  else if (key == "t_end") cfg.t_end = to_number(key, v);
  else if (key == "record.times") cfg.record_times = to_list(key, v);
  else if (key == "record.t_min") cfg.record_t_min = to_number(key, v);
  else if (key == "record.per_octave")
    cfg.record_per_octave = static_cast<int>(to_number(key, v));
  else if (key == "lambda_list") cfg.lambda_list = to_list(key, v);
  else if (key == "R_list") cfg.R_list = to_list(key, v);
  else if (key == "t_list") cfg.t_list = to_list(key, v);
  else if (key == "p_list") cfg.p_list = to_list(key, v);
  else if (key == "n_list") cfg.n_list = to_list(key, v);
  else if (key == "initial") cfg.initial = v;
  else if (key == "mass") cfg.mass = to_number(key, v);
  else if (key == "fit.t_lo") cfg.fit_t_lo = to_number(key, v);
  else if (key == "fit.t_hi") cfg.fit_t_hi = to_number(key, v);
  else if (key == "window.t1") cfg.window_t1 = to_number(key, v);
  else if (key == "window.t2") cfg.window_t2 = to_number(key, v);
  else if (key == "out_dir") cfg.out_dir = v;
  else if (key == "seed")
    cfg.seed = static_cast<unsigned long long>(to_number(key, v));
  else if (key == "tail_tol") cfg.tail_tol = to_number(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "decay",         "asymptotics",      "scaling_identity",
      "kernel_limits", "energy_bounds",    "tail_bounds",
      "compactness_functionals",           "profile_residuals"};
  return names;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    set_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + spec + "': expected key=value");
  set_key(cfg, trim(spec.substr(0, eq)), spec.substr(eq + 1));
}

void validate(const ExperimentConfig& cfg) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  if (cfg.dim != 1 && cfg.dim != 2)
    throw ConfigError("config key 'dim': must be 1 or 2");
  if (!std::is_sorted(cfg.lambda_list.begin(), cfg.lambda_list.end()))
    throw ConfigError("config key 'lambda_list': must be ascending");
  if (cfg.scheme != "euler" && cfg.scheme != "rk4")
    throw ConfigError("config key 'scheme': must be euler or rk4");
  // kernels must be resolvable now, not at run time
  KernelSpec::parse(cfg.kernel_J, cfg.dim);
  KernelSpec::parse(cfg.kernel_G, cfg.dim);
  KernelSpec::parse(cfg.kernel_rho, cfg.dim);
  if (cfg.initial.rfind("gaussian", 0) != 0 && cfg.initial != "two_bump")
    throw ConfigError("config key 'initial': gaussian:<sigma>[:<center>]"
                      " or two_bump");
}

}  // namespace nla
