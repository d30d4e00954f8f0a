#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace q2sfc {

// Layout of every chain-level QoS vector: the positive metrics (greater is
// better) come first, then the negative ones.
enum class Metric : std::size_t {
  kBandwidth = 0,
  kAvailability = 1,
  kDelay = 2,
  kPacketLoss = 3,
  kJitter = 4,
};

inline constexpr std::size_t kMetricCount = 5;          // L
inline constexpr std::size_t kPositiveMetricCount = 2;  // K

inline constexpr std::size_t index(Metric m) { return static_cast<std::size_t>(m); }
std::string_view metric_name(Metric m);

using QosVector = std::array<double, kMetricCount>;

inline constexpr double kUnboundedBandwidth = std::numeric_limits<double>::infinity();

// Per-device (or per-instance) QoS. Default-constructed value is the identity
// of link aggregation: nothing traversed yet.
struct QosMetrics {
  double dl = 0.0;                  // delay, us
  double bw = kUnboundedBandwidth;  // available bandwidth, Mbps
  double pl = 0.0;                  // packet loss probability
  double av = 1.0;                  // availability probability
  double jt = 0.0;                  // jitter, us

  QosVector to_vector() const;
  static QosMetrics from_vector(const QosVector& v);

  friend bool operator==(const QosMetrics&, const QosMetrics&) = default;
};

bool is_valid(const QosMetrics& q);
// Throws std::invalid_argument naming the offending field.
void validate(const QosMetrics& q);

// Table-1 composition of two segments: sums for delay and jitter, min for
// bandwidth, complement-product for loss, product for availability.
QosMetrics compose(const QosMetrics& a, const QosMetrics& b);

}  // namespace q2sfc
