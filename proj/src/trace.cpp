#include "saddlesim/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "saddlesim/errors.hpp"

namespace saddlesim {

std::string RunTrace::to_csv() const {
  std::ostringstream os;
  os << kTraceHeader << "\n";
  char num[40];
  for (const auto& r : rows) {
    os << r.iter << "," << r.oracle << "," << r.grads << "," << r.comms << ","
       << r.bits << ",";
    std::snprintf(num, sizeof num, "%.17g", r.dist_sq);
    os << num << ",";
    std::snprintf(num, sizeof num, "%.17g", r.lyapunov);
    os << num << "," << r.wall_ns << "\n";
  }
  return os.str();
}

void RunTrace::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write trace file: " + path);
  f << to_csv();
}

}  // namespace saddlesim
