#include "llgvm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "llgvm/errors.hpp"

namespace llgvm {

PeriodicGrid::PeriodicGrid(std::array<int, 3> n_cells, std::array<double, 3> box_length)
    : n_(n_cells), length_(box_length) {
  for (int a = 0; a < 3; ++a) {
    if (n_[a] < 4 || n_[a] % 2 != 0) {
      throw ContractViolation("grid axis " + std::to_string(a) + " has N = " +
                              std::to_string(n_[a]) + "; every N must be even and >= 4");
    }
    if (!(length_[a] > 0.0) || !std::isfinite(length_[a])) {
      throw ContractViolation("grid axis " + std::to_string(a) +
                              " has non-positive box length");
    }
  }
}

double PeriodicGrid::max_spacing() const noexcept {
  return std::max({spacing(0), spacing(1), spacing(2)});
}

double PeriodicGrid::min_spacing() const noexcept {
  return std::min({spacing(0), spacing(1), spacing(2)});
}

std::size_t PeriodicGrid::wrapped_index(int i, int j, int k) const noexcept {
  auto wrap = [](int v, int n) {
    if (v >= 0 && v < n) return v;
    if (v < 0 && v >= -n) return v + n;
    if (v >= n && v < 2 * n) return v - n;
    return ((v % n) + n) % n;
  };
  return index(wrap(i, n_[0]), wrap(j, n_[1]), wrap(k, n_[2]));
}

std::array<int, 3> PeriodicGrid::coords(std::size_t idx) const noexcept {
  const int i = static_cast<int>(idx % n_[0]);
  idx /= n_[0];
  const int j = static_cast<int>(idx % n_[1]);
  const int k = static_cast<int>(idx / n_[1]);
  return {i, j, k};
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
  if (!(a == b)) throw ContractViolation(std::string("grid mismatch in ") + what);
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

VectorField3::VectorField3(const PeriodicGrid& grid, const Vec3& fill) : grid_(grid) {
  for (int c = 0; c < 3; ++c) comp_[c].assign(grid.size(), fill[c]);
}

bool VectorField3::all_finite() const noexcept {
  for (const auto& c : comp_) {
    if (!std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); })) return false;
  }
  return true;
}

namespace {
template <class Op>
VectorField3 zip(const VectorField3& a, const VectorField3& b, Op op, const char* what) {
  require_same_grid(a.grid(), b.grid(), what);
  VectorField3 r(a.grid());
  for (int c = 0; c < 3; ++c) {
    auto ra = a.component(c);
    auto rb = b.component(c);
    auto out = r.component(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(ra[i], rb[i]);
  }
  return r;
}
template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op, const char* what) {
  require_same_grid(a.grid(), b.grid(), what);
  ScalarField r(a.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = op(a[i], b[i]);
  return r;
}
}  // namespace

VectorField3 operator+(const VectorField3& a, const VectorField3& b) {
  return zip(a, b, [](double x, double y) { return x + y; }, "vector addition");
}
VectorField3 operator-(const VectorField3& a, const VectorField3& b) {
  return zip(a, b, [](double x, double y) { return x - y; }, "vector subtraction");
}
VectorField3 operator*(double s, const VectorField3& a) {
  VectorField3 r(a);
  for (int c = 0; c < 3; ++c)
    for (auto& v : r.component(c)) v *= s;
  return r;
}
ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; }, "scalar addition");
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; }, "scalar subtraction");
}
ScalarField operator*(double s, const ScalarField& a) {
  ScalarField r(a);
  for (auto& v : r.values()) v *= s;
  return r;
}

ScalarField dot(const VectorField3& a, const VectorField3& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise dot");
  ScalarField r(a.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = dot(a.get(i), b.get(i));
  return r;
}

VectorField3 cross(const VectorField3& a, const VectorField3& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise cross");
  VectorField3 r(a.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r.set(i, cross(a.get(i), b.get(i)));
  return r;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const VectorField3& f) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (double v : f.component(c)) m = std::max(m, std::abs(v));
  return m;
}

double mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / static_cast<double>(f.size());
}

Vec3 mean(const VectorField3& f) {
  Vec3 m{};
  for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (double v : f.component(c)) s += v;
    m[c] = s / static_cast<double>(f.size());
  }
  return m;
}

}  // namespace llgvm
