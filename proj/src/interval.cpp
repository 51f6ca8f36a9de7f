#include "hrcsyn/interval.hpp"

#include <algorithm>
#include <string>

#include "hrcsyn/error.hpp"

namespace hrcsyn {

TimeInterval::TimeInterval(double start, double end) {
  if (!(start >= 0.0) || !(end >= 0.0)) {
    throw InvalidInterval("negative or NaN endpoint [" + std::to_string(start) + ", " +
                          std::to_string(end) + "]");
  }
  if (end < start) {
    if (start - end > kTimeTolerance) {
      throw InvalidInterval("end precedes start [" + std::to_string(start) + ", " +
                            std::to_string(end) + "]");
    }
    end = start;
  }
  bounds_ = Bounds{start, end};
}

double TimeInterval::start() const {
  if (!bounds_) throw InvalidInterval("start() of the empty interval");
  return bounds_->start;
}

double TimeInterval::end() const {
  if (!bounds_) throw InvalidInterval("end() of the empty interval");
  return bounds_->end;
}

double interval_duration(const TimeInterval& t) noexcept {
  if (t.is_empty()) return 0.0;
  return t.end() - t.start();
}

TimeInterval interval_intersection(const TimeInterval& a, const TimeInterval& b) noexcept {
  if (a.is_empty() || b.is_empty()) return TimeInterval::empty();
  const double lo = std::max(a.start(), b.start());
  const double hi = std::min(a.end(), b.end());
  if (hi < lo - kTimeTolerance) return TimeInterval::empty();
  return TimeInterval(lo, std::max(lo, hi));
}

double overlap_ratio(const TimeInterval& own, const TimeInterval& other) {
  const double own_len = interval_duration(own);
  if (own_len <= kTimeTolerance) {
    throw ZeroDurationTask("overlap ratio of a task with zero measured duration");
  }
  const double ratio = interval_duration(interval_intersection(own, other)) / own_len;
  return std::clamp(ratio, 0.0, 1.0);
}

}  // namespace hrcsyn
