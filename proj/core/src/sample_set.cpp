#include "phaselift/sample_set.hpp"

#include "phaselift/rng.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace phaselift {

namespace {

constexpr std::array<char, 8> kMagic = {'P', 'L', 'I', 'F', 'T', 'S', 'S', '\0'};
constexpr std::uint64_t kMaxDim = 1ULL << 24;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void u8(std::uint8_t v) { bytes(reinterpret_cast<const char*>(&v), 1); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

 private:
  void le(std::uint64_t v, int n) {
    char b[8];
    for (int i = 0; i < n; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(b, static_cast<std::size_t>(n));
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  std::uint64_t offset() const { return offset_; }
  void bytes(char* p, std::size_t n, const char* field) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw FormatError(std::string("sample set: truncated while reading ") + field, offset_ + in_.gcount());
    offset_ += n;
  }
  std::uint8_t u8(const char* f) {
    char c;
    bytes(&c, 1, f);
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32(const char* f) { return static_cast<std::uint32_t>(le(4, f)); }
  std::uint64_t u64(const char* f) { return le(8, f); }
  double f64(const char* f) { return std::bit_cast<double>(u64(f)); }
  std::string str(const char* f) {
    const std::uint32_t len = u32(f);
    if (len > 4096) throw FormatError(std::string("sample set: implausible length for ") + f, offset_ - 4);
    std::string s(len, '\0');
    bytes(s.data(), len, f);
    return s;
  }

 private:
  std::uint64_t le(int n, const char* f) {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), static_cast<std::size_t>(n), f);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

}  // namespace

FormatError::FormatError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

void SampleSet::validate() const {
  if (a.rows() < 1 || a.cols() < 1) throw std::invalid_argument("SampleSet: m and n must be >= 1");
  if (y.size() != a.rows() || w.size() != a.rows())
    throw std::invalid_argument("SampleSet: y and w must have length m");
}

void write_instance(std::ostream& out, const InstanceFile& inst) {
  const SampleSet& s = inst.samples;
  s.validate();
  if (inst.truth && static_cast<std::size_t>(inst.truth->size()) != s.n())
    throw std::invalid_argument("InstanceFile: truth length must equal n");
  Writer w(out);
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(kSampleSetVersion);
  w.str(s.ensemble.descriptor());
  w.str(std::string(Rng::kName));
  w.u64(s.seed);
  w.u64(s.m());
  w.u64(s.n());
  for (Eigen::Index i = 0; i < s.a.rows(); ++i)
    for (Eigen::Index j = 0; j < s.a.cols(); ++j) w.f64(s.a(i, j));
  for (double v : s.y) w.f64(v);
  for (double v : s.w) w.f64(v);
  w.u8(inst.truth ? 1 : 0);
  if (inst.truth)
    for (double v : *inst.truth) w.f64(v);
  if (!out) throw std::runtime_error("sample set: write failed");
}

InstanceFile read_instance(std::istream& in) {
  Reader r(in);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size(), "magic");
  if (magic != kMagic) throw FormatError("sample set: bad magic, not a phaselift sample file", 0);
  const std::uint64_t vpos = r.offset();
  const std::uint32_t version = r.u32("version");
  if (version != kSampleSetVersion)
    throw FormatError("sample set: unsupported format version " + std::to_string(version) + " (expected " +
                          std::to_string(kSampleSetVersion) + ")",
                      vpos);
  InstanceFile inst;
  SampleSet& s = inst.samples;
  const std::uint64_t epos = r.offset();
  const std::string desc = r.str("ensemble descriptor");
  try {
    s.ensemble = Ensemble::parse(desc);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("sample set: ") + e.what(), epos);
  }
  const std::uint64_t ppos = r.offset();
  const std::string prng = r.str("prng name");
  if (prng != Rng::kName) throw FormatError("sample set: generated by unknown PRNG '" + prng + "'", ppos);
  s.seed = r.u64("seed");
  const std::uint64_t dpos = r.offset();
  const std::uint64_t m = r.u64("m");
  const std::uint64_t n = r.u64("n");
  if (m == 0 || n == 0 || m > kMaxDim || n > kMaxDim || m * n > kMaxDim * 16)
    throw FormatError("sample set: invalid dimensions", dpos);
  s.a.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < s.a.rows(); ++i)
    for (Eigen::Index j = 0; j < s.a.cols(); ++j) s.a(i, j) = r.f64("A");
  s.y.resize(static_cast<Eigen::Index>(m));
  for (auto& v : s.y) v = r.f64("y");
  s.w.resize(static_cast<Eigen::Index>(m));
  for (auto& v : s.w) v = r.f64("w");
  const std::uint64_t tpos = r.offset();
  const std::uint8_t has_truth = r.u8("truth flag");
  if (has_truth > 1) throw FormatError("sample set: invalid truth flag", tpos);
  if (has_truth) {
    Vector x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = r.f64("truth");
    inst.truth = std::move(x);
  }
  return inst;
}

void save_instance(const std::string& path, const InstanceFile& inst) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_instance(out, inst);
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_instance(in);
}

}  // namespace phaselift
