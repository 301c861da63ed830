#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace steinerlab {

/// Scalar field sampled on a uniform square grid over [-L, L]^2.
/// Index (i, j) maps to the point (-L + i*h, -L + j*h); rows of constant y
/// are contiguous in memory.
class GridField {
 public:
  GridField(double half_width, int n);
  GridField(double half_width, int n, std::vector<double> values);

  static GridField from_function(double half_width, int n,
                                 const std::function<double(double, double)>& f);

  double half_width() const { return half_width_; }
  int size() const { return n_; }
  double spacing() const { return h_; }

  double x(int i) const { return -half_width_ + i * h_; }
  double y(int j) const { return -half_width_ + j * h_; }

  double operator()(int i, int j) const { return values_[idx(i, j)]; }
  double& operator()(int i, int j) { return values_[idx(i, j)]; }

  std::span<const double> row(int j) const {
    return std::span<const double>(values_.data() + static_cast<std::size_t>(j) * n_, n_);
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Bilinear interpolation at an interior point; throws outside the domain.
  double sample(double px, double py) const;

  double min_value() const;
  double max_value() const;

  /// Mean of the samples on the outermost ring of grid points.
  double boundary_ring_mean() const;

  bool same_grid(const GridField& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

  enum class Payload { binary, csv };
  void save(const std::filesystem::path& path, Payload payload = Payload::binary) const;
  static GridField load(const std::filesystem::path& path);

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * n_ + i;
  }
  void validate() const;

  double half_width_ = 0.0;
  int n_ = 0;
  double h_ = 0.0;
  std::vector<double> values_;
};

/// Pair of grid fields forming a vector field on the same grid.
struct VectorFieldGrid {
  GridField x;
  GridField y;

  VectorFieldGrid(GridField vx, GridField vy);
  double magnitude(int i, int j) const;
};

}  // namespace steinerlab
