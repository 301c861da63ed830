#include "steinerlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "steinerlab/parallel.hpp"

namespace steinerlab {

GridField::GridField(double half_width, int n)
    : half_width_(half_width),
      n_(n),
      h_(n > 1 ? 2.0 * half_width / (n - 1) : 0.0),
      values_(static_cast<std::size_t>(n) * n, 0.0) {
  validate();
}

GridField::GridField(double half_width, int n, std::vector<double> values)
    : half_width_(half_width),
      n_(n),
      h_(n > 1 ? 2.0 * half_width / (n - 1) : 0.0),
      values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(n_) * n_) {
    throw std::invalid_argument("GridField: values size must be n*n");
  }
  validate();
}

void GridField::validate() const {
  if (n_ < 16) throw std::invalid_argument("GridField: n >= 16 required");
  if (!(half_width_ > 0.0) || !std::isfinite(half_width_)) {
    throw std::invalid_argument("GridField: half width must be positive");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("GridField: non-finite value");
  }
}

GridField GridField::from_function(double half_width, int n,
                                   const std::function<double(double, double)>& f) {
  GridField g(half_width, n);
  parallel_for(0, n, [&](int j) {
    double py = g.y(j);
    for (int i = 0; i < n; ++i) g(i, j) = f(g.x(i), py);
  });
  g.validate();
  return g;
}

double GridField::sample(double px, double py) const {
  const double eps = 1e-12 * half_width_;
  if (px < -half_width_ - eps || px > half_width_ + eps || py < -half_width_ - eps ||
      py > half_width_ + eps) {
    throw std::out_of_range("GridField::sample: point outside domain");
  }
  double fi = (px + half_width_) / h_;
  double fj = (py + half_width_) / h_;
  int i = std::clamp(static_cast<int>(std::floor(fi)), 0, n_ - 2);
  int j = std::clamp(static_cast<int>(std::floor(fj)), 0, n_ - 2);
  double tx = std::clamp(fi - i, 0.0, 1.0);
  double ty = std::clamp(fj - j, 0.0, 1.0);
  double v00 = (*this)(i, j), v10 = (*this)(i + 1, j);
  double v01 = (*this)(i, j + 1), v11 = (*this)(i + 1, j + 1);
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 +
         tx * ty * v11;
}

double GridField::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridField::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double GridField::boundary_ring_mean() const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) sum += (*this)(i, 0) + (*this)(i, n_ - 1);
  for (int j = 1; j < n_ - 1; ++j) sum += (*this)(0, j) + (*this)(n_ - 1, j);
  return sum / (4.0 * (n_ - 1));
}

// ---------------------------------------------------------------------------
// File format: one JSON header line {"L":..,"n":..,"payload":"binary"|"csv"}
// followed by the n*n values row-major (little-endian float64 or CSV rows).

void GridField::save(const std::filesystem::path& path, Payload payload) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("GridField::save: cannot open " + path.string());
  nlohmann::json header = {
      {"L", half_width_},
      {"n", n_},
      {"payload", payload == Payload::binary ? "binary" : "csv"},
  };
  out << header.dump() << "\n";
  if (payload == Payload::binary) {
    out.write(reinterpret_cast<const char*>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
  } else {
    char buf[32];
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < n_; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", (*this)(i, j));
        out << buf << (i + 1 < n_ ? "," : "\n");
      }
    }
  }
  if (!out) throw std::runtime_error("GridField::save: write failed");
}

GridField GridField::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("GridField::load: cannot open " + path.string());
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw std::runtime_error("GridField::load: missing header");
  }
  nlohmann::json header = nlohmann::json::parse(header_line);
  double half_width = header.at("L").get<double>();
  int n = header.at("n").get<int>();
  std::string payload = header.value("payload", "binary");

  std::vector<double> values(static_cast<std::size_t>(n) * n);
  if (payload == "binary") {
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double))) {
      throw std::runtime_error("GridField::load: truncated payload");
    }
  } else if (payload == "csv") {
    std::size_t k = 0;
    std::string line;
    while (k < values.size() && std::getline(in, line)) {
      const char* p = line.c_str();
      char* end = nullptr;
      while (k < values.size()) {
        values[k] = std::strtod(p, &end);
        if (end == p) break;
        ++k;
        p = end;
        if (*p == ',') ++p;
      }
    }
    if (k != values.size()) throw std::runtime_error("GridField::load: truncated payload");
  } else {
    throw std::runtime_error("GridField::load: unknown payload kind " + payload);
  }
  return GridField(half_width, n, std::move(values));
}

VectorFieldGrid::VectorFieldGrid(GridField vx, GridField vy)
    : x(std::move(vx)), y(std::move(vy)) {
  if (!x.same_grid(y)) {
    throw std::invalid_argument("VectorFieldGrid: components on mismatched grids");
  }
}

double VectorFieldGrid::magnitude(int i, int j) const {
  return std::hypot(x(i, j), y(i, j));
}

}  // namespace steinerlab
