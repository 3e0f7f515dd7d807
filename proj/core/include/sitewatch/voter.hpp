#pragma once

#include <vector>

namespace sitewatch {

// Majority vote over a trailing window of the last k raw verdicts (fewer
// while warming up).  Ties, which only happen with even window contents,
// hold the previous output; before any output exists the tie-break is
// negative.  k = 1 is the identity.
class MajorityVoter {
 public:
  // Throws ConfigError when k < 1.
  explicit MajorityVoter(int k);

  // Feeds one raw verdict, returns the smoothed verdict.
  bool push(bool raw);

  int k() const { return k_; }
  int window_fill() const { return fill_; }
  bool last_output() const { return last_output_; }

  void reset();

 private:
  int k_;
  std::vector<char> window_;  // ring buffer
  int head_ = 0;
  int fill_ = 0;
  int positives_ = 0;
  bool last_output_ = false;
};

// Runs a fresh voter over a whole sequence.  Output length equals input
// length.
std::vector<bool> smooth_stream(const std::vector<bool>& raw, int k);

}  // namespace sitewatch
