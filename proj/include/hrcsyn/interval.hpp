#pragma once

#include <optional>

namespace hrcsyn {

/// Absolute tolerance (seconds) used for every time comparison.
inline constexpr double kTimeTolerance = 1e-9;

/// Closed interval [start, end] in seconds, or the distinguished empty
/// interval. A point interval [t, t] is non-empty with zero duration.
class TimeInterval {
 public:
  /// The empty interval.
  constexpr TimeInterval() = default;

  /// Throws InvalidInterval for negative or reversed endpoints (beyond the
  /// time tolerance); a reversal within tolerance collapses to a point.
  TimeInterval(double start, double end);

  static constexpr TimeInterval empty() { return TimeInterval{}; }

  bool is_empty() const noexcept { return !bounds_.has_value(); }
  double start() const;
  double end() const;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;

 private:
  struct Bounds {
    double start;
    double end;
    friend bool operator==(const Bounds&, const Bounds&) = default;
  };
  std::optional<Bounds> bounds_;
};

/// end - start for a non-empty interval, 0 for the empty one.
double interval_duration(const TimeInterval& t) noexcept;

/// [max(starts), min(ends)] when that is non-empty, empty otherwise.
/// Touching endpoints yield a zero-length point interval.
TimeInterval interval_intersection(const TimeInterval& a, const TimeInterval& b) noexcept;

/// Fraction of `own` covered by `other`, in [0, 1]. Throws ZeroDurationTask
/// when `own` has zero duration.
double overlap_ratio(const TimeInterval& own, const TimeInterval& other);

}  // namespace hrcsyn
