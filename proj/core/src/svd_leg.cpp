#include "stochastid/svd_leg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace stochastid::svd {

Decomposition singular_decomposition(const Eigen::MatrixXd& d) {
  if (d.rows() < 1 || d.cols() < 1) {
    throw Error(ErrorKind::InvalidArgument, "cannot decompose an empty matrix");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::ColPivHouseholderQRPreconditioner> solver(
      d, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Decomposition out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  for (Eigen::Index j = 0; j < out.v.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.v.rows(); ++i) {
      const double x = out.v(i, j);
      if (x == 0.0) continue;
      if (x < 0.0) {
        out.v.col(j) *= -1.0;
        out.u.col(j) *= -1.0;
      }
      break;
    }
  }
  return out;
}

SingularPair top2_right_singular(const Eigen::MatrixXd& d) {
  if (d.rows() < 2 || d.cols() < 2) {
    throw Error(ErrorKind::InvalidArgument, "top-two singular vectors need at least a 2x2 matrix");
  }
  const Decomposition svd = singular_decomposition(d);
  const double s1 = svd.sigma(0);
  const double s2 = svd.sigma(1);
  if (!(s1 > 0.0) || s2 < 1e-12 * s1) {
    throw Error(ErrorKind::RankDeficient,
                "second singular value is negligible (sigma1=" + std::to_string(s1) +
                    ", sigma2=" + std::to_string(s2) + ")");
  }
  SingularPair pair;
  pair.sigma1 = s1;
  pair.sigma2 = s2;
  pair.e1.assign(svd.v.col(0).data(), svd.v.col(0).data() + svd.v.rows());
  pair.e2.assign(svd.v.col(1).data(), svd.v.col(1).data() + svd.v.rows());
  return pair;
}

SingularPair top2_right_singular(const embedding::DataMatrix& d) {
  return top2_right_singular(d.values);
}

BinaryImage::BinaryImage(int resolution) : BinaryImage(resolution, resolution) {}

BinaryImage::BinaryImage(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw Error(ErrorKind::InvalidArgument, "negative image size");
  bits_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

std::size_t BinaryImage::foreground_count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

int auto_resolution(std::size_t points) {
  const double scaled =
      kDefaultResolution * std::sqrt(static_cast<double>(points) / embedding::kDefaultMaxColumns);
  return std::max(kMinResolution, static_cast<int>(std::lround(scaled)));
}

namespace {

// Pixel coordinate in [0, span] for every value.
std::vector<int> normalize_axis(const std::vector<double>& values, int span, Normalization mode,
                                const char* axis) {
  const std::size_t n = values.size();
  std::vector<int> out(n, 0);
  if (n == 1) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    throw Error(ErrorKind::ZeroRange, std::string("zero range on axis ") + axis);
  }
  if (mode == Normalization::MinMax) {
    const double range = *hi - *lo;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = static_cast<int>(std::lround((values[i] - *lo) / range * span));
    }
    return out;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double denom = static_cast<double>(n - 1);
  for (std::size_t start = 0; start < n;) {
    std::size_t stop = start + 1;
    while (stop < n && values[order[stop]] == values[order[start]]) ++stop;
    const double mid_rank = 0.5 * static_cast<double>(start + stop - 1);
    const int pixel = static_cast<int>(std::lround(mid_rank / denom * span));
    for (std::size_t i = start; i < stop; ++i) out[order[i]] = pixel;
    start = stop;
  }
  return out;
}

}  // namespace

BinaryImage rasterize(const std::vector<double>& x, const std::vector<double>& y,
                      const RasterOptions& options) {
  if (options.resolution < kMinResolution) {
    throw Error(ErrorKind::InvalidArgument,
                "raster resolution must be >= " + std::to_string(kMinResolution));
  }
  if (options.dilation < 0) throw Error(ErrorKind::InvalidArgument, "dilation must be >= 0");
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorKind::InvalidArgument, "scatter axes must be nonempty and equally long");
  }
  const int r = options.resolution;
  const int d = options.dilation;
  const int pad = d + 1;
  const int span = r - 1 - 2 * pad;
  if (span < 0) {
    throw Error(ErrorKind::InvalidArgument, "dilation too large for the raster resolution");
  }
  const std::vector<int> cols = normalize_axis(x, span, options.normalization, "E1");
  const std::vector<int> rows = normalize_axis(y, span, options.normalization, "E2");

  std::vector<std::pair<int, int>> disc;
  for (int dy = -d; dy <= d; ++dy) {
    for (int dx = -d; dx <= d; ++dx) {
      if (dx * dx + dy * dy <= d * d) disc.emplace_back(dy, dx);
    }
  }
  BinaryImage image(r);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    // E2 grows upwards in the plotted frame.
    const int row = r - 1 - (pad + rows[i]);
    const int col = pad + cols[i];
    for (const auto& [dy, dx] : disc) image.set(row + dy, col + dx);
  }
  return image;
}

BinaryImage rasterize(const SingularPair& pair, const RasterOptions& options) {
  return rasterize(pair.e1, pair.e2, options);
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Raster-scan union-find labelling over pixels whose bit equals `value`.
// With `eight` the diagonal neighbours above are merged as well.
DisjointSets label(const BinaryImage& img, bool value, bool eight) {
  const int rows = img.rows();
  const int cols = img.cols();
  DisjointSets sets(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  auto id = [cols](int r, int c) {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c);
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (img.at(r, c) != value) continue;
      if (c > 0 && img.at(r, c - 1) == value) sets.unite(id(r, c), id(r, c - 1));
      if (r > 0) {
        if (img.at(r - 1, c) == value) sets.unite(id(r, c), id(r - 1, c));
        if (eight) {
          if (c > 0 && img.at(r - 1, c - 1) == value) sets.unite(id(r, c), id(r - 1, c - 1));
          if (c + 1 < cols && img.at(r - 1, c + 1) == value) sets.unite(id(r, c), id(r - 1, c + 1));
        }
      }
    }
  }
  return sets;
}

}  // namespace

BettiDescriptor betti(const BinaryImage& image) {
  const int rows = image.rows();
  const int cols = image.cols();
  if (rows == 0 || cols == 0) return {};
  const std::size_t total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);

  BettiDescriptor out;
  DisjointSets fg = label(image, true, true);
  DisjointSets bg = label(image, false, false);

  std::vector<std::uint8_t> touches_border(total, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (r != 0 && c != 0 && r != rows - 1 && c != cols - 1) continue;
      if (!image.at(r, c)) {
        touches_border[bg.find(static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                               static_cast<std::size_t>(c))] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (image.bits()[i]) {
      if (fg.find(i) == i) ++out.b0;
    } else if (bg.find(i) == i && !touches_border[i]) {
      ++out.b1;
    }
  }
  return out;
}

Label svd_label(const BettiDescriptor& descriptor) {
  if (descriptor.norm() < 1) {
    throw Error(ErrorKind::InvalidArgument, "Betti norm 0: the raster has no foreground");
  }
  return descriptor.norm() == 1 ? Label::Stochastic : Label::NonStochastic;
}

}  // namespace stochastid::svd
