#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace q2sfc::lldp {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kOrgSpecificTlvType = 127;
inline constexpr std::uint32_t kQosOrgCode = 0x00ABCD;
inline constexpr std::uint8_t kQosSubtype = 0x01;
inline constexpr std::size_t kQosValueLength = 36;  // OUI + subtype + 4 x 8-byte metrics
inline constexpr std::size_t kQosTlvSize = 2 + kQosValueLength;

inline constexpr std::uint8_t kEndTlvType = 0;
inline constexpr std::uint8_t kChassisIdTlvType = 1;
inline constexpr std::uint8_t kPortIdTlvType = 2;
inline constexpr std::uint8_t kTtlTlvType = 3;

// Subtype 7: locally assigned.
inline constexpr std::uint8_t kLocallyAssignedSubtype = 7;

inline constexpr std::uint16_t kLldpEtherType = 0x88CC;

enum class CodecError {
  kWrongType,
  kWrongLength,
  kWrongOrgCode,
  kWrongSubtype,
  kTruncated,
  kNonFinite,
  kOutOfRange,
  kMissingMandatoryTlv,
  kMissingTerminator,
  kMalformedTlvHeader,
  kDuplicateTlv,
  kInvalidIdLength,
  kReservedTlvType,
};

std::string_view to_string(CodecError error);

class CodecException : public std::runtime_error {
 public:
  CodecException(CodecError error, const std::string& what)
      : std::runtime_error(what), error_(error) {}
  CodecError error() const noexcept { return error_; }

 private:
  CodecError error_;
};

// QoS metrics piggybacked on LLDP. Availability is not carried.
struct QosTlv {
  double delay_us = 0.0;
  double bandwidth_mbps = 0.0;
  double packet_loss = 0.0;
  double jitter_us = 0.0;

  friend bool operator==(const QosTlv&, const QosTlv&) = default;
};

struct RawTlv {
  std::uint8_t type = 0;
  Bytes value;

  friend bool operator==(const RawTlv&, const RawTlv&) = default;
};

struct LldpFrame {
  Bytes chassis_id;
  Bytes port_id;
  std::uint16_t ttl_s = 120;
  std::optional<QosTlv> qos;
  std::vector<RawTlv> trailing_tlvs;
  std::uint8_t chassis_id_subtype = kLocallyAssignedSubtype;
  std::uint8_t port_id_subtype = kLocallyAssignedSubtype;

  friend bool operator==(const LldpFrame&, const LldpFrame&) = default;
};

Bytes encode_qos_tlv(const QosTlv& tlv);
QosTlv decode_qos_tlv(std::span<const std::uint8_t> bytes);

// Serializes an LLDPDU: Chassis ID, Port ID, TTL, [QoS], trailing TLVs, End.
Bytes build_lldp_frame(const LldpFrame& frame);
LldpFrame parse_lldp_frame(std::span<const std::uint8_t> bytes);

// Ethernet II framing to the nearest-bridge multicast group.
Bytes wrap_ethernet(std::span<const std::uint8_t> lldpdu,
                    const std::array<std::uint8_t, 6>& source_mac);
bool is_lldp_ethernet_frame(std::span<const std::uint8_t> frame);
std::span<const std::uint8_t> ethernet_payload(std::span<const std::uint8_t> frame);

struct CapturedFrame {
  std::string scheme;
  Bytes bytes;
};

struct OverheadRow {
  std::string scheme;
  std::uint64_t total_packets = 0;
  std::uint64_t lldp_packets = 0;
  std::uint64_t total_bytes = 0;
  std::uint64_t lldp_bytes = 0;

  double lldp_packet_share() const;  // percent
  double lldp_byte_share() const;    // percent
  double mean_lldp_frame_bytes() const;
};

// Per-scheme traffic totals, rows in first-seen scheme order.
std::vector<OverheadRow> overhead_report(std::span<const CapturedFrame> frames);

std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(std::string_view hex);

}  // namespace q2sfc::lldp
