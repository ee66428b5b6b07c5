#include "mbrd/env.hpp"

#include <cstdio>
#include <cstring>

namespace mbrd {

std::uint64_t obs_hash(const std::vector<double>& obs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double v : obs) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

std::string trace_line(int step, const std::vector<double>& obs, int action,
                       double reward, const EventVector& events, bool done) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d %016llx %d %.10g ", step,
                static_cast<unsigned long long>(obs_hash(obs)), action, reward);
  std::string line = buf;
  line += "[";
  for (size_t i = 0; i < events.size(); ++i) {
    if (i) line += ",";
    line += std::to_string(events[i]);
  }
  line += "] ";
  line += done ? "1" : "0";
  return line;
}

std::vector<std::string> record_trace(Env& env, std::uint64_t seed,
                                      const std::vector<int>& actions) {
  std::vector<std::string> lines;
  std::vector<double> obs = env.reset(seed);
  int step = 0;
  for (int a : actions) {
    StepResult r = env.step(a);
    lines.push_back(trace_line(step, obs, a, r.reward, r.events, r.done));
    obs = r.obs;
    ++step;
    if (r.done) break;
  }
  return lines;
}

}  // namespace mbrd
