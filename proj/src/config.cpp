#include "saddlesim/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "saddlesim/errors.hpp"

namespace saddlesim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + v + "'");
  }
}

long long to_ll(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': bad boolean '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "problem") cfg.problem = val;
    else if (key == "dataset") cfg.dataset = val;
    else if (key == "synthetic_samples") cfg.synthetic_samples = to_u64(key, val);
    else if (key == "synthetic_dim") cfg.synthetic_dim = to_u64(key, val);
    else if (key == "synthetic_seed") cfg.synthetic_seed = to_u64(key, val);
    else if (key == "lambda") cfg.lambda = to_double(key, val);
    else if (key == "beta") cfg.beta = to_double(key, val);
    else if (key == "radius_x") cfg.radius_x = to_double(key, val);
    else if (key == "radius_y") cfg.radius_y = to_double(key, val);
    else if (key == "mu_per_node") cfg.mu_per_node = to_bool(key, val);
    else if (key == "L_xx") cfg.L_xx = to_double(key, val);
    else if (key == "L_yy") cfg.L_yy = to_double(key, val);
    else if (key == "L_xy") cfg.L_xy = to_double(key, val);
    else if (key == "L_yx") cfg.L_yx = to_double(key, val);
    else if (key == "mu_x") cfg.mu_x = to_double(key, val);
    else if (key == "mu_y") cfg.mu_y = to_double(key, val);
    else if (key == "topology") cfg.topology = val;
    else if (key == "nodes") cfg.nodes = static_cast<int>(to_ll(key, val));
    else if (key == "batches") cfg.batches = static_cast<int>(to_ll(key, val));
    else if (key == "bits") cfg.bits = val;
    else if (key == "algorithm") cfg.algorithm = val;
    else if (key == "iterations") cfg.iterations = to_ll(key, val);
    else if (key == "epsilon") cfg.epsilon = to_double(key, val);
    else if (key == "switching") cfg.switching = val;
    else if (key == "t0") cfg.t0 = to_ll(key, val);
    else if (key == "threshold") cfg.threshold = to_double(key, val);
    else if (key == "gossip_iters") cfg.gossip_iters = static_cast<int>(to_ll(key, val));
    else if (key == "p_ref") cfg.p_ref = to_double(key, val);
    else if (key == "seed") cfg.seed = to_u64(key, val);
    else if (key == "trace_every") cfg.trace_every = to_ll(key, val);
    else if (key == "out") cfg.out = val;
    else if (key == "benchmark") cfg.benchmark_path = val;
    else if (key == "benchmark_iterations") cfg.benchmark_iterations = to_ll(key, val);
    else if (key == "benchmark_tol") cfg.benchmark_tol = to_double(key, val);
    else if (key == "kernels") cfg.kernels = val;
    else throw ConfigError("unknown config key '" + key + "'");
  }

  // validation
  if (cfg.problem != "logistic" && cfg.problem != "auc" &&
      cfg.problem != "synthetic" && cfg.problem != "manual")
    throw ConfigError("config key 'problem': unknown value '" + cfg.problem + "'");
  if ((cfg.problem == "logistic" || cfg.problem == "auc") && cfg.dataset.empty())
    throw ConfigError("config key 'dataset' required for problem " + cfg.problem);
  parse_graph_kind(cfg.topology);
  if (cfg.nodes < 1) throw ConfigError("config key 'nodes' must be >= 1");
  if (cfg.batches < 1) throw ConfigError("config key 'batches' must be >= 1");
  if (cfg.bits != "off") {
    const long long b = to_ll("bits", cfg.bits);
    if (b < 1 || b > 62) throw ConfigError("config key 'bits': need 1..62 or off");
  }
  if (cfg.algorithm != "cdpsvrg" && cfg.algorithm != "cdpssg" &&
      cfg.algorithm != "gsgo-only")
    throw ConfigError("config key 'algorithm': unknown value '" + cfg.algorithm + "'");
  if (cfg.iterations < 1) throw ConfigError("config key 'iterations' must be >= 1");
  if (cfg.switching != "theoretical" && cfg.switching != "practical")
    throw ConfigError("config key 'switching': unknown value '" + cfg.switching + "'");
  if (cfg.trace_every < 1) throw ConfigError("config key 'trace_every' must be >= 1");
  if (cfg.p_ref < 0.0 || cfg.p_ref > 1.0)
    throw ConfigError("config key 'p_ref' must lie in [0,1]");
  if (cfg.kernels != "auto" && cfg.kernels != "scalar")
    throw ConfigError("config key 'kernels': need auto or scalar");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "problem = " << problem << "\n";
  if (!dataset.empty()) os << "dataset = " << dataset << "\n";
  os << "synthetic_samples = " << synthetic_samples << "\n";
  os << "synthetic_dim = " << synthetic_dim << "\n";
  os << "synthetic_seed = " << synthetic_seed << "\n";
  os << "lambda = " << fmt_double(lambda) << "\n";
  os << "beta = " << fmt_double(beta) << "\n";
  os << "radius_x = " << fmt_double(radius_x) << "\n";
  os << "radius_y = " << fmt_double(radius_y) << "\n";
  os << "mu_per_node = " << (mu_per_node ? "true" : "false") << "\n";
  if (problem == "manual") {
    os << "L_xx = " << fmt_double(L_xx) << "\n";
    os << "L_yy = " << fmt_double(L_yy) << "\n";
    os << "L_xy = " << fmt_double(L_xy) << "\n";
    os << "L_yx = " << fmt_double(L_yx) << "\n";
    os << "mu_x = " << fmt_double(mu_x) << "\n";
    os << "mu_y = " << fmt_double(mu_y) << "\n";
  }
  os << "topology = " << topology << "\n";
  os << "nodes = " << nodes << "\n";
  os << "batches = " << batches << "\n";
  os << "bits = " << bits << "\n";
  os << "algorithm = " << algorithm << "\n";
  os << "iterations = " << iterations << "\n";
  os << "epsilon = " << fmt_double(epsilon) << "\n";
  os << "switching = " << switching << "\n";
  os << "t0 = " << t0 << "\n";
  os << "threshold = " << fmt_double(threshold) << "\n";
  os << "gossip_iters = " << gossip_iters << "\n";
  os << "p_ref = " << fmt_double(p_ref) << "\n";
  os << "seed = " << seed << "\n";
  os << "trace_every = " << trace_every << "\n";
  os << "out = " << out << "\n";
  if (!benchmark_path.empty()) os << "benchmark = " << benchmark_path << "\n";
  os << "benchmark_iterations = " << benchmark_iterations << "\n";
  os << "benchmark_tol = " << fmt_double(benchmark_tol) << "\n";
  os << "kernels = " << kernels << "\n";
  return os.str();
}

std::uint64_t RunConfig::problem_hash() const {
  std::ostringstream os;
  os << problem << "|" << dataset << "|" << synthetic_samples << "|"
     << synthetic_dim << "|" << synthetic_seed << "|" << fmt_double(lambda)
     << "|" << fmt_double(beta) << "|" << fmt_double(radius_x) << "|"
     << fmt_double(radius_y) << "|" << mu_per_node << "|" << nodes << "|"
     << batches << "|" << seed;
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace saddlesim
