#include "sitewatch/voter.hpp"

#include "sitewatch/errors.hpp"

namespace sitewatch {

MajorityVoter::MajorityVoter(int k) : k_(k) {
  if (k < 1) throw ConfigError("voter: window size k must be >= 1");
  window_.assign(static_cast<std::size_t>(k), 0);
}

bool MajorityVoter::push(bool raw) {
  if (fill_ == k_) {
    positives_ -= window_[static_cast<std::size_t>(head_)];
  } else {
    ++fill_;
  }
  window_[static_cast<std::size_t>(head_)] = raw ? 1 : 0;
  positives_ += raw ? 1 : 0;
  head_ = (head_ + 1) % k_;

  const int negatives = fill_ - positives_;
  if (positives_ != negatives) {
    last_output_ = positives_ > negatives;
  }
  // Tie: keep last_output_, which starts out negative.
  return last_output_;
}

void MajorityVoter::reset() {
  head_ = 0;
  fill_ = 0;
  positives_ = 0;
  last_output_ = false;
}

std::vector<bool> smooth_stream(const std::vector<bool>& raw, int k) {
  MajorityVoter voter(k);
  std::vector<bool> out;
  out.reserve(raw.size());
  for (bool r : raw) out.push_back(voter.push(r));
  return out;
}

}  // namespace sitewatch
