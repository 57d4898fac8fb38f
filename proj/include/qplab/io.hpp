#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qplab/errors.hpp"
#include "qplab/trajectory.hpp"

namespace qplab {

/// 17 significant digits, '.' decimal separator, locale-independent.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// CSV with header `t,value` and '\n' line endings.
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const Trajectory& traj) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open for writing: " + path.string());
  f << "t,value\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    f << format_double(traj.times[i]) << ',' << format_double(traj.values[i])
      << '\n';
  if (!f) throw io_error("write failed: " + path.string());
}

/// JSON sidecar carrying provenance (seed, generator, truncation).
inline void write_trajectory_meta(const std::filesystem::path& path,
                                  const TrajectoryMeta& meta) {
  nlohmann::json j;
  j["seed"] = meta.seed;
  j["generator"] = meta.generator;
  j["truncation"] = meta.truncation;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open for writing: " + path.string());
  f << j.dump(2) << '\n';
}

inline Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "t,value")
    throw io_error("bad trajectory CSV header: " + path.string());
  Trajectory out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw io_error("bad trajectory CSV row: " + path.string());
    out.times.push_back(std::stod(line.substr(0, comma)));
    out.values.push_back(std::stod(line.substr(comma + 1)));
  }
  out.validate();
  return out;
}

/// Reject configs with keys outside the declared schema.
inline void require_keys_subset(const nlohmann::json& obj,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed)
      if (it.key() == k) { known = true; break; }
    if (!known)
      throw validation_error("unknown config key '" + it.key() + "' in " + where);
  }
}

}  // namespace qplab
