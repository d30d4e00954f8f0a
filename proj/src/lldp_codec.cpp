#include "q2sfc/lldp_codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

namespace q2sfc::lldp {

namespace {

constexpr std::size_t kMaxTlvValueLength = 511;
constexpr std::size_t kMaxIdLength = 255;
constexpr std::array<std::uint8_t, 6> kNearestBridgeMac = {0x01, 0x80, 0xC2, 0x00, 0x00, 0x0E};
constexpr std::size_t kEthernetHeaderSize = 14;

[[noreturn]] void fail(CodecError error, const std::string& detail) {
  throw CodecException(error, std::string(to_string(error)) + ": " + detail);
}

void put_tlv_header(Bytes& out, std::uint8_t type, std::size_t length) {
  const auto header = static_cast<std::uint16_t>((type << 9) | (length & 0x1FF));
  out.push_back(static_cast<std::uint8_t>(header >> 8));
  out.push_back(static_cast<std::uint8_t>(header & 0xFF));
}

void put_tlv(Bytes& out, std::uint8_t type, std::span<const std::uint8_t> value) {
  put_tlv_header(out, type, value.size());
  out.insert(out.end(), value.begin(), value.end());
}

void put_f64_be(Bytes& out, double value) {
  const auto raw = std::bit_cast<std::uint64_t>(value);
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((raw >> shift) & 0xFF));
  }
}

double get_f64_be(std::span<const std::uint8_t> bytes) {
  std::uint64_t raw = 0;
  for (std::size_t i = 0; i < 8; ++i) raw = (raw << 8) | bytes[i];
  return std::bit_cast<double>(raw);
}

struct TlvView {
  std::uint8_t type;
  std::span<const std::uint8_t> value;
  std::span<const std::uint8_t> whole;
};

class TlvReader {
 public:
  explicit TlvReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ >= bytes_.size(); }
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

  TlvView next() {
    if (bytes_.size() - pos_ < 2) fail(CodecError::kMalformedTlvHeader, "truncated TLV header");
    const std::uint16_t header = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
    const std::uint8_t type = static_cast<std::uint8_t>(header >> 9);
    const std::size_t length = header & 0x1FF;
    if (bytes_.size() - pos_ - 2 < length) {
      fail(CodecError::kMalformedTlvHeader, "TLV length exceeds remaining bytes");
    }
    TlvView view{type, bytes_.subspan(pos_ + 2, length), bytes_.subspan(pos_, 2 + length)};
    pos_ += 2 + length;
    return view;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_metrics(const QosTlv& tlv, CodecError non_finite, CodecError out_of_range) {
  const double values[] = {tlv.delay_us, tlv.bandwidth_mbps, tlv.packet_loss, tlv.jitter_us};
  for (double v : values) {
    if (!std::isfinite(v)) fail(non_finite, "QoS metric is not finite");
  }
  if (tlv.delay_us < 0.0 || tlv.bandwidth_mbps < 0.0 || tlv.jitter_us < 0.0) {
    fail(out_of_range, "negative QoS metric");
  }
  if (tlv.packet_loss < 0.0 || tlv.packet_loss > 1.0) {
    fail(out_of_range, "packet loss outside [0, 1]");
  }
}

bool looks_like_qos_tlv(const TlvView& tlv) {
  if (tlv.type != kOrgSpecificTlvType || tlv.value.size() < 4) return false;
  const std::uint32_t org = (std::uint32_t{tlv.value[0]} << 16) |
                            (std::uint32_t{tlv.value[1]} << 8) | tlv.value[2];
  return org == kQosOrgCode && tlv.value[3] == kQosSubtype;
}

bool is_reserved_trailing(const RawTlv& tlv) {
  if (tlv.type <= kTtlTlvType) return true;
  if (tlv.type != kOrgSpecificTlvType || tlv.value.size() < 4) return false;
  const std::uint32_t org = (std::uint32_t{tlv.value[0]} << 16) |
                            (std::uint32_t{tlv.value[1]} << 8) | tlv.value[2];
  return org == kQosOrgCode && tlv.value[3] == kQosSubtype;
}

void put_id_tlv(Bytes& out, std::uint8_t type, std::uint8_t subtype, const Bytes& id,
                const char* what) {
  if (id.empty() || id.size() > kMaxIdLength) {
    fail(CodecError::kInvalidIdLength, std::string(what) + " must be 1..255 bytes");
  }
  put_tlv_header(out, type, 1 + id.size());
  out.push_back(subtype);
  out.insert(out.end(), id.begin(), id.end());
}

void read_id_tlv(const TlvView& tlv, std::uint8_t expected_type, std::uint8_t& subtype, Bytes& id) {
  if (tlv.type != expected_type) {
    fail(CodecError::kMissingMandatoryTlv,
         "expected TLV type " + std::to_string(expected_type) + ", found " +
             std::to_string(tlv.type));
  }
  if (tlv.value.size() < 2 || tlv.value.size() > kMaxIdLength + 1) {
    fail(CodecError::kInvalidIdLength, "ID TLV length out of range");
  }
  subtype = tlv.value[0];
  id.assign(tlv.value.begin() + 1, tlv.value.end());
}

}  // namespace

std::string_view to_string(CodecError error) {
  switch (error) {
    case CodecError::kWrongType: return "wrong TLV type";
    case CodecError::kWrongLength: return "wrong TLV length";
    case CodecError::kWrongOrgCode: return "wrong organization code";
    case CodecError::kWrongSubtype: return "wrong subtype";
    case CodecError::kTruncated: return "truncated input";
    case CodecError::kNonFinite: return "non-finite value";
    case CodecError::kOutOfRange: return "value out of range";
    case CodecError::kMissingMandatoryTlv: return "missing mandatory TLV";
    case CodecError::kMissingTerminator: return "missing End-of-LLDPDU";
    case CodecError::kMalformedTlvHeader: return "malformed TLV header";
    case CodecError::kDuplicateTlv: return "duplicate TLV";
    case CodecError::kInvalidIdLength: return "invalid ID length";
    case CodecError::kReservedTlvType: return "reserved TLV type";
  }
  return "unknown codec error";
}

Bytes encode_qos_tlv(const QosTlv& tlv) {
  check_metrics(tlv, CodecError::kNonFinite, CodecError::kOutOfRange);
  Bytes out;
  out.reserve(kQosTlvSize);
  put_tlv_header(out, kOrgSpecificTlvType, kQosValueLength);
  out.push_back(static_cast<std::uint8_t>((kQosOrgCode >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((kQosOrgCode >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(kQosOrgCode & 0xFF));
  out.push_back(kQosSubtype);
  put_f64_be(out, tlv.delay_us);
  put_f64_be(out, tlv.bandwidth_mbps);
  put_f64_be(out, tlv.packet_loss);
  put_f64_be(out, tlv.jitter_us);
  return out;
}

QosTlv decode_qos_tlv(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) fail(CodecError::kTruncated, "need at least a TLV header");
  const std::uint16_t header = static_cast<std::uint16_t>((bytes[0] << 8) | bytes[1]);
  const std::uint8_t type = static_cast<std::uint8_t>(header >> 9);
  const std::size_t length = header & 0x1FF;
  if (type != kOrgSpecificTlvType) fail(CodecError::kWrongType, "type " + std::to_string(type));
  if (length != kQosValueLength) fail(CodecError::kWrongLength, "length " + std::to_string(length));
  if (bytes.size() < kQosTlvSize) {
    fail(CodecError::kTruncated, std::to_string(bytes.size()) + " of 38 bytes");
  }
  if (bytes.size() > kQosTlvSize) {
    fail(CodecError::kWrongLength, "trailing bytes after QoS TLV");
  }
  const std::uint32_t org =
      (std::uint32_t{bytes[2]} << 16) | (std::uint32_t{bytes[3]} << 8) | bytes[4];
  if (org != kQosOrgCode) fail(CodecError::kWrongOrgCode, "organization code mismatch");
  if (bytes[5] != kQosSubtype) fail(CodecError::kWrongSubtype, "subtype mismatch");

  QosTlv tlv;
  tlv.delay_us = get_f64_be(bytes.subspan(6));
  tlv.bandwidth_mbps = get_f64_be(bytes.subspan(14));
  tlv.packet_loss = get_f64_be(bytes.subspan(22));
  tlv.jitter_us = get_f64_be(bytes.subspan(30));
  check_metrics(tlv, CodecError::kNonFinite, CodecError::kOutOfRange);
  return tlv;
}

Bytes build_lldp_frame(const LldpFrame& frame) {
  Bytes out;
  put_id_tlv(out, kChassisIdTlvType, frame.chassis_id_subtype, frame.chassis_id, "chassis id");
  put_id_tlv(out, kPortIdTlvType, frame.port_id_subtype, frame.port_id, "port id");
  put_tlv_header(out, kTtlTlvType, 2);
  out.push_back(static_cast<std::uint8_t>(frame.ttl_s >> 8));
  out.push_back(static_cast<std::uint8_t>(frame.ttl_s & 0xFF));
  if (frame.qos) {
    const Bytes qos = encode_qos_tlv(*frame.qos);
    out.insert(out.end(), qos.begin(), qos.end());
  }
  for (const auto& tlv : frame.trailing_tlvs) {
    if (is_reserved_trailing(tlv)) {
      fail(CodecError::kReservedTlvType,
           "trailing TLV type " + std::to_string(tlv.type) + " is reserved");
    }
    if (tlv.type > 127) fail(CodecError::kWrongType, "TLV type exceeds 7 bits");
    if (tlv.value.size() > kMaxTlvValueLength) {
      fail(CodecError::kWrongLength, "TLV value exceeds 511 bytes");
    }
    put_tlv(out, tlv.type, tlv.value);
  }
  put_tlv_header(out, kEndTlvType, 0);
  return out;
}

LldpFrame parse_lldp_frame(std::span<const std::uint8_t> bytes) {
  LldpFrame frame;
  TlvReader reader(bytes);

  const auto mandatory = [&](std::uint8_t type) {
    if (reader.at_end()) {
      fail(CodecError::kMissingMandatoryTlv, "frame ends before TLV type " + std::to_string(type));
    }
    return reader.next();
  };

  read_id_tlv(mandatory(kChassisIdTlvType), kChassisIdTlvType, frame.chassis_id_subtype,
              frame.chassis_id);
  read_id_tlv(mandatory(kPortIdTlvType), kPortIdTlvType, frame.port_id_subtype, frame.port_id);
  const TlvView ttl = mandatory(kTtlTlvType);
  if (ttl.type != kTtlTlvType) {
    fail(CodecError::kMissingMandatoryTlv, "expected TTL TLV, found type " + std::to_string(ttl.type));
  }
  if (ttl.value.size() != 2) fail(CodecError::kWrongLength, "TTL TLV must carry 2 bytes");
  frame.ttl_s = static_cast<std::uint16_t>((ttl.value[0] << 8) | ttl.value[1]);

  while (true) {
    if (reader.at_end()) fail(CodecError::kMissingTerminator, "no End-of-LLDPDU TLV");
    const TlvView tlv = reader.next();
    if (tlv.type == kEndTlvType) {
      if (!tlv.value.empty()) fail(CodecError::kMalformedTlvHeader, "End TLV with nonzero length");
      const auto padding = reader.rest();
      if (std::any_of(padding.begin(), padding.end(), [](std::uint8_t b) { return b != 0; })) {
        fail(CodecError::kMalformedTlvHeader, "non-zero bytes after End-of-LLDPDU");
      }
      break;
    }
    if (tlv.type <= kTtlTlvType) {
      fail(CodecError::kDuplicateTlv, "mandatory TLV type " + std::to_string(tlv.type) + " repeated");
    }
    if (looks_like_qos_tlv(tlv)) {
      if (frame.qos) fail(CodecError::kDuplicateTlv, "more than one QoS TLV");
      frame.qos = decode_qos_tlv(tlv.whole);
      continue;
    }
    frame.trailing_tlvs.push_back(RawTlv{tlv.type, Bytes(tlv.value.begin(), tlv.value.end())});
  }
  return frame;
}

Bytes wrap_ethernet(std::span<const std::uint8_t> lldpdu,
                    const std::array<std::uint8_t, 6>& source_mac) {
  Bytes out;
  out.reserve(kEthernetHeaderSize + lldpdu.size());
  out.insert(out.end(), kNearestBridgeMac.begin(), kNearestBridgeMac.end());
  out.insert(out.end(), source_mac.begin(), source_mac.end());
  out.push_back(static_cast<std::uint8_t>(kLldpEtherType >> 8));
  out.push_back(static_cast<std::uint8_t>(kLldpEtherType & 0xFF));
  out.insert(out.end(), lldpdu.begin(), lldpdu.end());
  return out;
}

bool is_lldp_ethernet_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() < kEthernetHeaderSize) return false;
  return ((frame[12] << 8) | frame[13]) == kLldpEtherType;
}

std::span<const std::uint8_t> ethernet_payload(std::span<const std::uint8_t> frame) {
  if (frame.size() < kEthernetHeaderSize) fail(CodecError::kTruncated, "short Ethernet frame");
  return frame.subspan(kEthernetHeaderSize);
}

double OverheadRow::lldp_packet_share() const {
  return total_packets == 0 ? 0.0
                            : 100.0 * static_cast<double>(lldp_packets) /
                                  static_cast<double>(total_packets);
}

double OverheadRow::lldp_byte_share() const {
  return total_bytes == 0 ? 0.0
                          : 100.0 * static_cast<double>(lldp_bytes) /
                                static_cast<double>(total_bytes);
}

double OverheadRow::mean_lldp_frame_bytes() const {
  return lldp_packets == 0 ? 0.0
                           : static_cast<double>(lldp_bytes) / static_cast<double>(lldp_packets);
}

std::vector<OverheadRow> overhead_report(std::span<const CapturedFrame> frames) {
  std::vector<OverheadRow> rows;
  for (const auto& frame : frames) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const OverheadRow& row) { return row.scheme == frame.scheme; });
    if (it == rows.end()) {
      rows.push_back(OverheadRow{frame.scheme});
      it = rows.end() - 1;
    }
    it->total_packets += 1;
    it->total_bytes += frame.bytes.size();
    if (is_lldp_ethernet_frame(frame.bytes)) {
      it->lldp_packets += 1;
      it->lldp_bytes += frame.bytes.size();
    }
  }
  return rows;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  const auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  int high = -1;
  for (char c : hex) {
    if (c == ' ' || c == ':' || c == '\t') continue;
    const int v = nibble(c);
    if (v < 0) throw std::invalid_argument(std::string("invalid hex digit '") + c + "'");
    if (high < 0) {
      high = v;
    } else {
      out.push_back(static_cast<std::uint8_t>((high << 4) | v));
      high = -1;
    }
  }
  if (high >= 0) throw std::invalid_argument("odd number of hex digits");
  return out;
}

}  // namespace q2sfc::lldp
