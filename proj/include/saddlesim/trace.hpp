#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace saddlesim {

inline constexpr const char* kTraceHeader =
    "iter,oracle,grads,comms,bits,dist_sq,lyapunov,wall_ns";

struct TraceRow {
  long long iter = 0;
  std::string oracle;  // "gsgo" or "svrgo"
  std::uint64_t grads = 0;
  std::uint64_t comms = 0;
  std::uint64_t bits = 0;
  double dist_sq = 0.0;   // nan when no benchmark is available
  double lyapunov = 0.0;  // nan when no benchmark is available
  std::uint64_t wall_ns = 0;
};

struct RunTrace {
  std::vector<TraceRow> rows;

  void write_csv(const std::string& path) const;
  std::string to_csv() const;
};

}  // namespace saddlesim
