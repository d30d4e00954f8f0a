#include "q2sfc/qos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace q2sfc {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kBandwidth: return "bw";
    case Metric::kAvailability: return "av";
    case Metric::kDelay: return "dl";
    case Metric::kPacketLoss: return "pl";
    case Metric::kJitter: return "jt";
  }
  return "?";
}

QosVector QosMetrics::to_vector() const {
  QosVector v{};
  v[index(Metric::kBandwidth)] = bw;
  v[index(Metric::kAvailability)] = av;
  v[index(Metric::kDelay)] = dl;
  v[index(Metric::kPacketLoss)] = pl;
  v[index(Metric::kJitter)] = jt;
  return v;
}

QosMetrics QosMetrics::from_vector(const QosVector& v) {
  QosMetrics q;
  q.bw = v[index(Metric::kBandwidth)];
  q.av = v[index(Metric::kAvailability)];
  q.dl = v[index(Metric::kDelay)];
  q.pl = v[index(Metric::kPacketLoss)];
  q.jt = v[index(Metric::kJitter)];
  return q;
}

bool is_valid(const QosMetrics& q) {
  const bool finite = std::isfinite(q.dl) && std::isfinite(q.pl) && std::isfinite(q.av) &&
                      std::isfinite(q.jt) && !std::isnan(q.bw);
  return finite && q.dl >= 0.0 && q.bw >= 0.0 && q.jt >= 0.0 && q.pl >= 0.0 && q.pl <= 1.0 &&
         q.av >= 0.0 && q.av <= 1.0;
}

void validate(const QosMetrics& q) {
  const auto check = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid QoS: ") + what);
  };
  check(std::isfinite(q.dl) && q.dl >= 0.0, "delay must be finite and >= 0");
  check(!std::isnan(q.bw) && q.bw >= 0.0, "bandwidth must be >= 0");
  check(std::isfinite(q.pl) && q.pl >= 0.0 && q.pl <= 1.0, "packet loss must lie in [0, 1]");
  check(std::isfinite(q.av) && q.av >= 0.0 && q.av <= 1.0, "availability must lie in [0, 1]");
  check(std::isfinite(q.jt) && q.jt >= 0.0, "jitter must be finite and >= 0");
}

QosMetrics compose(const QosMetrics& a, const QosMetrics& b) {
  QosMetrics out;
  out.dl = a.dl + b.dl;
  out.bw = std::min(a.bw, b.bw);
  // 1 - (1 - a)(1 - b), kept in log space so tiny loss rates stay exact.
  out.pl = -std::expm1(std::log1p(-a.pl) + std::log1p(-b.pl));
  out.av = a.av * b.av;
  out.jt = a.jt + b.jt;
  return out;
}

}  // namespace q2sfc
