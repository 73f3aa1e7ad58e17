#include "llgvm/snapshot.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "llgvm/errors.hpp"

namespace llgvm {

namespace {

constexpr char kMagic[8] = {'L', 'L', 'G', 'V', 'M', 'F', '0', '1'};
constexpr std::uint32_t kEndianTag = 0x01020304u;
constexpr std::size_t kNameSize = 32;

void put_u32(Bytes& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void put_u64(Bytes& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void put_f64(Bytes& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return v;
}
double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

std::uint32_t crc_of(const unsigned char* p, std::size_t n) {
  uLong c = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large payloads in pieces.
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    c = crc32(c, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

Bytes assemble(SnapshotKind kind, const PeriodicGrid& g, const std::string& name, double time, const Bytes& payload) {
  if (name.size() >= kNameSize)
    throw ContractViolation("snapshot: field name '" + name + "' longer than " + std::to_string(kNameSize - 1));
  Bytes h;
  h.reserve(kSnapshotHeaderSize);
  for (char c : kMagic) h.push_back(static_cast<unsigned char>(c));
  put_u32(h, kEndianTag);
  put_u32(h, static_cast<std::uint32_t>(kind));
  for (int a = 0; a < 3; ++a) put_u32(h, static_cast<std::uint32_t>(g.n(a)));
  for (int a = 0; a < 3; ++a) put_f64(h, g.length(a));
  for (std::size_t i = 0; i < kNameSize; ++i) h.push_back(i < name.size() ? name[i] : 0);
  put_f64(h, time);
  put_u64(h, payload.size());
  put_u32(h, crc_of(payload.data(), payload.size()));
  Bytes b(kSnapshotHeaderSize + payload.size());
  std::copy(h.begin(), h.end(), b.begin());
  std::copy(payload.begin(), payload.end(), b.begin() + kSnapshotHeaderSize);
  return b;
}

// Validates the header and the payload; returns the payload start.
const unsigned char* checked_payload(const Bytes& bytes, SnapshotKind want, SnapshotInfo& info) {
  info = decode_snapshot_info(bytes);
  if (info.kind != want)
    throw IoError(ErrorCode::contract, "snapshot: holds kind " + std::to_string(int(info.kind)) + ", expected " +
                                           std::to_string(int(want)));
  if (bytes.size() - kSnapshotHeaderSize < info.payload_bytes)
    throw IoError(ErrorCode::truncated, "snapshot: truncated payload (" +
                                            std::to_string(bytes.size() - kSnapshotHeaderSize) + " of " +
                                            std::to_string(info.payload_bytes) + " bytes)");
  const unsigned char* p = bytes.data() + kSnapshotHeaderSize;
  if (crc_of(p, info.payload_bytes) != info.crc)
    throw IoError(ErrorCode::checksum, "snapshot: payload checksum mismatch");
  return p;
}

void expect_payload(const SnapshotInfo& info, std::uint64_t bytes) {
  if (info.payload_bytes != bytes)
    throw IoError(ErrorCode::io, "snapshot: payload length " + std::to_string(info.payload_bytes) +
                                     " does not match the header (" + std::to_string(bytes) + " expected)");
}

std::uint64_t node_count(const SnapshotInfo& info) {
  return std::uint64_t(info.n[0]) * std::uint64_t(info.n[1]) * std::uint64_t(info.n[2]);
}

}  // namespace

Bytes encode_snapshot(const ScalarField& f, const std::string& name, double time) {
  Bytes payload;
  payload.reserve(8 * f.size());
  for (double v : f.values()) put_f64(payload, v);
  return assemble(SnapshotKind::scalar, f.grid(), name, time, payload);
}

Bytes encode_snapshot(const VectorField3& f, const std::string& name, double time) {
  Bytes payload;
  payload.reserve(24 * f.size());
  for (int c = 0; c < 3; ++c)
    for (double v : f.component(c)) put_f64(payload, v);
  return assemble(SnapshotKind::vector, f.grid(), name, time, payload);
}

Bytes encode_snapshot(const ParticleEnsemble& p, const PeriodicGrid& grid, const std::string& name, double time) {
  Bytes payload;
  payload.reserve(8 + 56 * p.count());
  put_u64(payload, p.count());
  for (const Vec3& x : p.x)
    for (double v : x) put_f64(payload, v);
  for (const Vec3& u : p.v)
    for (double v : u) put_f64(payload, v);
  for (double w : p.w) put_f64(payload, w);
  return assemble(SnapshotKind::particles, grid, name, time, payload);
}

SnapshotInfo decode_snapshot_info(const Bytes& bytes) {
  if (bytes.size() >= 6 && std::memcmp(bytes.data(), kMagic, 6) != 0)
    throw IoError(ErrorCode::io, "snapshot: bad magic, not an LLGVMF file");
  if (bytes.size() < kSnapshotHeaderSize)
    throw IoError(ErrorCode::truncated, "snapshot: truncated header (" + std::to_string(bytes.size()) + " bytes)");
  if (std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw IoError(ErrorCode::version, std::string("snapshot: unsupported version '") +
                                          char(bytes[6]) + char(bytes[7]) + "', expected '01'");
  const unsigned char* p = bytes.data();
  if (get_u32(p + 8) != kEndianTag) throw IoError(ErrorCode::io, "snapshot: bad endianness tag");
  SnapshotInfo info;
  const std::uint32_t kind = get_u32(p + 12);
  if (kind < 1 || kind > 3) throw IoError(ErrorCode::io, "snapshot: unknown kind " + std::to_string(kind));
  info.kind = static_cast<SnapshotKind>(kind);
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t n = get_u32(p + 16 + 4 * a);
    if (n < 4 || n > 65536) throw IoError(ErrorCode::io, "snapshot: implausible grid size " + std::to_string(n));
    info.n[a] = static_cast<int>(n);
  }
  for (int a = 0; a < 3; ++a) info.length[a] = get_f64(p + 28 + 8 * a);
  const char* name = reinterpret_cast<const char*>(p + 52);
  info.name.assign(name, strnlen(name, kNameSize));
  info.time = get_f64(p + 84);
  info.payload_bytes = get_u64(p + 92);
  info.crc = get_u32(p + 100);
  return info;
}

ScalarField decode_scalar_snapshot(const Bytes& bytes, SnapshotInfo* out) {
  SnapshotInfo info;
  const unsigned char* p = checked_payload(bytes, SnapshotKind::scalar, info);
  expect_payload(info, 8 * node_count(info));
  ScalarField f(info.grid());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = get_f64(p + 8 * i);
  if (out) *out = info;
  return f;
}

VectorField3 decode_vector_snapshot(const Bytes& bytes, SnapshotInfo* out) {
  SnapshotInfo info;
  const unsigned char* p = checked_payload(bytes, SnapshotKind::vector, info);
  expect_payload(info, 24 * node_count(info));
  VectorField3 f(info.grid());
  for (int c = 0; c < 3; ++c) {
    auto comp = f.component(c);
    for (std::size_t i = 0; i < f.size(); ++i) comp[i] = get_f64(p + 8 * (c * f.size() + i));
  }
  if (out) *out = info;
  return f;
}

ParticleEnsemble decode_particle_snapshot(const Bytes& bytes, SnapshotInfo* out) {
  SnapshotInfo info;
  const unsigned char* p = checked_payload(bytes, SnapshotKind::particles, info);
  if (info.payload_bytes < 8) throw IoError(ErrorCode::io, "snapshot: particle payload without a count");
  const std::uint64_t n = get_u64(p);
  if (n > (info.payload_bytes - 8) / 56) throw IoError(ErrorCode::io, "snapshot: particle count exceeds payload");
  expect_payload(info, 8 + 56 * n);
  ParticleEnsemble e;
  e.x.resize(n);
  e.v.resize(n);
  e.w.resize(n);
  const unsigned char* q = p + 8;
  for (auto& x : e.x)
    for (double& v : x) v = get_f64(q), q += 8;
  for (auto& u : e.v)
    for (double& v : u) v = get_f64(q), q += 8;
  for (double& w : e.w) w = get_f64(q), q += 8;
  if (out) *out = info;
  return e;
}

Bytes read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(ErrorCode::io, path + ": cannot open for reading");
  return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const Bytes& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(ErrorCode::io, path + ": cannot open for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError(ErrorCode::io, path + ": write failed");
}

void write_snapshot(const std::string& path, const ScalarField& f, const std::string& name, double time) {
  write_file(path, encode_snapshot(f, name, time));
}
void write_snapshot(const std::string& path, const VectorField3& f, const std::string& name, double time) {
  write_file(path, encode_snapshot(f, name, time));
}
void write_snapshot(const std::string& path, const ParticleEnsemble& p, const PeriodicGrid& grid,
                    const std::string& name, double time) {
  write_file(path, encode_snapshot(p, grid, name, time));
}

SnapshotInfo read_snapshot_info(const std::string& path) { return decode_snapshot_info(read_file(path)); }
ScalarField read_scalar_snapshot(const std::string& path, SnapshotInfo* info) {
  return decode_scalar_snapshot(read_file(path), info);
}
VectorField3 read_vector_snapshot(const std::string& path, SnapshotInfo* info) {
  return decode_vector_snapshot(read_file(path), info);
}
ParticleEnsemble read_particle_snapshot(const std::string& path, SnapshotInfo* info) {
  return decode_particle_snapshot(read_file(path), info);
}

}  // namespace llgvm
