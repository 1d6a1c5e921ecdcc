/*
 * Copyright 2026 The stugraph Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STUGRAPH_TESTS_ACCEPTANCE_REPORT_HPP_
#define STUGRAPH_TESTS_ACCEPTANCE_REPORT_HPP_

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

namespace stugraph::acceptance {

struct Verdict {
  bool pass = false;
  std::string detail;
};

/// Runs one criterion and prints a single PASS/FAIL line. A runtime limit of
/// zero means no limit.
class Report {
 public:
  void run(int id, const std::string& title, double limit_seconds, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0 && secs >= limit_seconds) {
      v.pass = false;
      v.detail += "; runtime limit " + std::to_string(limit_seconds) + " s exceeded";
    }
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id, title.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failures_ += v.pass ? 0 : 1;
  }

  void skip(int id, const std::string& title, const std::string& why) {
    std::printf("SKIP criterion %d (%s): %s\n", id, title.c_str(), why.c_str());
    std::fflush(stdout);
  }

  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

inline std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

}  // namespace stugraph::acceptance

#endif  // STUGRAPH_TESTS_ACCEPTANCE_REPORT_HPP_
