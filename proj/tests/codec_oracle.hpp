#pragma once

// Independent assembler for expected codec bytes: fields are written as
// (value, bit width) pairs, most-significant bit first.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "q2sfc/lldp_codec.hpp"

namespace codec_oracle {

class BitString {
 public:
  void put(std::uint64_t value, int bits) {
    for (int i = bits - 1; i >= 0; --i) bits_.push_back(((value >> i) & 1u) != 0);
  }
  void put_double(double d) { put(std::bit_cast<std::uint64_t>(d), 64); }
  q2sfc::lldp::Bytes bytes() const {
    if (bits_.size() % 8 != 0) throw std::logic_error("bit string not byte aligned");
    q2sfc::lldp::Bytes out(bits_.size() / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
  }

 private:
  std::vector<bool> bits_;
};

inline q2sfc::lldp::Bytes reference_qos_tlv(const q2sfc::lldp::QosTlv& t) {
  BitString b;
  b.put(127, 7);
  b.put(36, 9);
  b.put(0x00ABCD, 24);
  b.put(0x01, 8);
  b.put_double(t.delay_us);
  b.put_double(t.bandwidth_mbps);
  b.put_double(t.packet_loss);
  b.put_double(t.jitter_us);
  return b.bytes();
}

}  // namespace codec_oracle
