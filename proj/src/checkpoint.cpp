#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "q2sfc/q_network.hpp"

namespace q2sfc {

namespace {

constexpr char kMagic[8] = {'Q', '2', 'S', 'F', 'C', 'N', 'E', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::uint64_t kMaxLayers = 64;
constexpr std::uint64_t kMaxLayerWidth = 1u << 20;

// Everything is stored little-endian regardless of host order.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) hash_ = (hash_ ^ b[i]) * kFnvPrime;
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) { unsigned_le(v, 4); }
  void u64(std::uint64_t v) { unsigned_le(v, 8); }
  void f64(double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    u64(v);
  }
  std::uint64_t hash() const { return hash_; }

 private:
  void unsigned_le(std::uint64_t v, int n) {
    unsigned char b[8];
    for (int i = 0; i < n; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, static_cast<std::size_t>(n));
  }

  std::ostream& out_;
  std::uint64_t hash_ = kFnvOffset;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw std::runtime_error("checkpoint truncated");
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) hash_ = (hash_ ^ b[i]) * kFnvPrime;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(unsigned_le(4)); }
  std::uint64_t u64() { return unsigned_le(8); }
  double f64() {
    const std::uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  std::uint64_t hash() const { return hash_; }

 private:
  std::uint64_t unsigned_le(int n) {
    unsigned char b[8];
    bytes(b, static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  std::istream& in_;
  std::uint64_t hash_ = kFnvOffset;
};

}  // namespace

void save_checkpoint(std::ostream& out, const QNetwork& net) {
  if (net.layer_sizes().empty()) throw ShapeError("cannot checkpoint an empty network");
  Writer w(out);
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u64(net.layer_sizes().size());
  for (std::size_t n : net.layer_sizes()) w.u64(n);
  w.u64(net.parameters().size());
  for (double p : net.parameters()) w.f64(p);
  const std::uint64_t digest = w.hash();
  w.u64(digest);
  if (!out) throw std::runtime_error("checkpoint write failed");
}

QNetwork load_checkpoint(std::istream& in) {
  Reader r(in);
  char magic[sizeof kMagic];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw std::runtime_error("not a checkpoint file");
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint64_t layers = r.u64();
  if (layers < 2 || layers > kMaxLayers) throw std::runtime_error("checkpoint: bad layer count");
  std::vector<std::size_t> sizes;
  for (std::uint64_t i = 0; i < layers; ++i) {
    const std::uint64_t n = r.u64();
    if (n == 0 || n > kMaxLayerWidth) throw std::runtime_error("checkpoint: bad layer width");
    sizes.push_back(static_cast<std::size_t>(n));
  }
  QNetwork net(std::move(sizes));
  if (r.u64() != net.parameters().size()) throw std::runtime_error("checkpoint: parameter count mismatch");
  for (double& p : net.parameters()) p = r.f64();
  const std::uint64_t expected = r.hash();
  if (r.u64() != expected) throw std::runtime_error("checkpoint: checksum mismatch");
  return net;
}

void save_checkpoint(const std::string& path, const QNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_checkpoint(out, net);
}

QNetwork load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_checkpoint(in);
}

}  // namespace q2sfc
