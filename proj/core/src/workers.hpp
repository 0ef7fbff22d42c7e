#pragma once

#include <cstdlib>
#include <string>
#include <thread>

namespace iforge::detail {

/// Worker cap from INTERLEAVE_FORGE_THREADS; defaults to hardware concurrency, at least 1.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("INTERLEAVE_FORGE_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

}  // namespace iforge::detail
