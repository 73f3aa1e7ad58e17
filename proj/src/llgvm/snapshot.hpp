#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "llgvm/grid.hpp"
#include "llgvm/kinetic.hpp"

namespace llgvm {

/// Binary snapshot: a 104-byte header followed by a payload of IEEE doubles,
/// everything little-endian regardless of the host.
///
///   offset  size  field
///        0     8  magic "LLGVMF01" (the last two bytes are the version)
///        8     4  endianness tag 0x01020304
///       12     4  kind (1 scalar field, 2 vector field, 3 particles)
///       16    12  grid cells, 3 x int32
///       28    24  box lengths, 3 x float64
///       52    32  field name, NUL padded
///       84     8  time, float64
///       92     8  payload length in bytes, uint64
///      100     4  CRC-32 of the payload (zlib polynomial)
///
/// Scalar payload: values in grid order. Vector payload: x, y, z components
/// one after another. Particle payload: uint64 count n, then positions and
/// velocities (3n doubles each, interleaved per particle) and n weights.
enum class SnapshotKind : std::uint32_t { scalar = 1, vector = 2, particles = 3 };

inline constexpr std::size_t kSnapshotHeaderSize = 104;

struct SnapshotInfo {
  SnapshotKind kind = SnapshotKind::vector;
  std::array<int, 3> n{0, 0, 0};
  std::array<double, 3> length{0.0, 0.0, 0.0};
  std::string name;
  double time = 0.0;
  std::uint64_t payload_bytes = 0;
  std::uint32_t crc = 0;

  PeriodicGrid grid() const { return PeriodicGrid(n, length); }
};

using Bytes = std::vector<unsigned char>;

Bytes encode_snapshot(const ScalarField& f, const std::string& name, double time);
Bytes encode_snapshot(const VectorField3& f, const std::string& name, double time);
Bytes encode_snapshot(const ParticleEnsemble& p, const PeriodicGrid& grid, const std::string& name, double time);

/// Header only. Throws IoError with code truncated (short header), version
/// (magic "LLGVMF" with another version), or io (not a snapshot at all).
SnapshotInfo decode_snapshot_info(const Bytes& bytes);
/// Full decode. Additionally throws IoError truncated (payload shorter than
/// declared), checksum (CRC mismatch) and contract (kind mismatch).
ScalarField decode_scalar_snapshot(const Bytes& bytes, SnapshotInfo* info = nullptr);
VectorField3 decode_vector_snapshot(const Bytes& bytes, SnapshotInfo* info = nullptr);
ParticleEnsemble decode_particle_snapshot(const Bytes& bytes, SnapshotInfo* info = nullptr);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, const Bytes& bytes);

void write_snapshot(const std::string& path, const ScalarField& f, const std::string& name, double time);
void write_snapshot(const std::string& path, const VectorField3& f, const std::string& name, double time);
void write_snapshot(const std::string& path, const ParticleEnsemble& p, const PeriodicGrid& grid,
                    const std::string& name, double time);
SnapshotInfo read_snapshot_info(const std::string& path);
ScalarField read_scalar_snapshot(const std::string& path, SnapshotInfo* info = nullptr);
VectorField3 read_vector_snapshot(const std::string& path, SnapshotInfo* info = nullptr);
ParticleEnsemble read_particle_snapshot(const std::string& path, SnapshotInfo* info = nullptr);

}  // namespace llgvm
