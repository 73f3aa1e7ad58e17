#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "llgvm/vec3.hpp"

namespace llgvm {

/// Uniform periodic grid. Node (i, j, k) sits at (i hx, j hy, k hz); storage
/// is x-fastest: index = (k Ny + j) Nx + i.
class PeriodicGrid {
 public:
  /// Throws ContractViolation unless every N is even and >= 4 and every L > 0.
  PeriodicGrid(std::array<int, 3> n_cells, std::array<double, 3> box_length);
  static PeriodicGrid cubic(int n, double length) { return PeriodicGrid({n, n, n}, {length, length, length}); }

  const std::array<int, 3>& n_cells() const noexcept { return n_; }
  int n(int axis) const noexcept { return n_[axis]; }
  const std::array<double, 3>& box_length() const noexcept { return length_; }
  double length(int axis) const noexcept { return length_[axis]; }
  double spacing(int axis) const noexcept { return length_[axis] / n_[axis]; }
  double max_spacing() const noexcept;
  double min_spacing() const noexcept;
  double cell_volume() const noexcept { return spacing(0) * spacing(1) * spacing(2); }
  double volume() const noexcept { return length_[0] * length_[1] * length_[2]; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
  }

  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(k) * n_[1] + j) * n_[0] + i;
  }
  /// Index with periodic wrap of each coordinate.
  std::size_t wrapped_index(int i, int j, int k) const noexcept;
  std::array<int, 3> coords(std::size_t idx) const noexcept;
  Vec3 node_position(int i, int j, int k) const noexcept {
    return {i * spacing(0), j * spacing(1), k * spacing(2)};
  }

  bool operator==(const PeriodicGrid& o) const noexcept {
    return n_ == o.n_ && length_ == o.length_;
  }

 private:
  std::array<int, 3> n_;
  std::array<double, 3> length_;
};

/// Throws ContractViolation naming `what` when the grids differ.
void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what);

class ScalarField {
 public:
  explicit ScalarField(const PeriodicGrid& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  bool all_finite() const noexcept;
  bool operator==(const ScalarField& o) const noexcept {
    return grid_ == o.grid_ && values_ == o.values_;
  }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

/// Three node-collocated components stored component-major.
class VectorField3 {
 public:
  explicit VectorField3(const PeriodicGrid& grid, const Vec3& fill = {0.0, 0.0, 0.0});

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<double> component(int c) noexcept { return comp_[c]; }
  std::span<const double> component(int c) const noexcept { return comp_[c]; }
  std::size_t size() const noexcept { return comp_[0].size(); }

  Vec3 get(std::size_t i) const noexcept { return {comp_[0][i], comp_[1][i], comp_[2][i]}; }
  void set(std::size_t i, const Vec3& v) noexcept {
    comp_[0][i] = v[0];
    comp_[1][i] = v[1];
    comp_[2][i] = v[2];
  }

  bool all_finite() const noexcept;
  bool operator==(const VectorField3& o) const noexcept {
    return grid_ == o.grid_ && comp_ == o.comp_;
  }

 private:
  PeriodicGrid grid_;
  std::array<std::vector<double>, 3> comp_;
};

// Pointwise helpers. All require matching grids.
VectorField3 operator+(const VectorField3& a, const VectorField3& b);
VectorField3 operator-(const VectorField3& a, const VectorField3& b);
VectorField3 operator*(double s, const VectorField3& a);
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField dot(const VectorField3& a, const VectorField3& b);
VectorField3 cross(const VectorField3& a, const VectorField3& b);

double max_abs(const ScalarField& f);
double max_abs(const VectorField3& f);
/// Mean over nodes, per component.
double mean(const ScalarField& f);
Vec3 mean(const VectorField3& f);

}  // namespace llgvm
