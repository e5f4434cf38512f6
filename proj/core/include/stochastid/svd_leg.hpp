#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stochastid/embedding.hpp"
#include "stochastid/types.hpp"

namespace stochastid::svd {

/// Right singular vectors of the two largest singular values.
/// Invariants: unit norm, mutually orthogonal, sigma1 >= sigma2 >= 0, and
/// the first nonzero component of each vector is positive.
struct SingularPair {
  std::vector<double> e1;
  std::vector<double> e2;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Thin SVD D = U diag(sigma) V^T, singular values descending, columns of
/// U and V sign-normalized together so V's first nonzero entry is positive.
struct Decomposition {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
};

Decomposition singular_decomposition(const Eigen::MatrixXd& d);

/// Throws RankDeficient when sigma2 < 1e-12 * sigma1, InvalidArgument when
/// the matrix has fewer than 2 rows or columns.
SingularPair top2_right_singular(const embedding::DataMatrix& d);
SingularPair top2_right_singular(const Eigen::MatrixXd& d);

/// Row-major R x R boolean raster; (row, col) with row 0 at the top.
class BinaryImage {
 public:
  BinaryImage() = default;
  explicit BinaryImage(int resolution);
  BinaryImage(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int resolution() const noexcept { return rows_; }

  bool at(int r, int c) const { return bits_[index(r, c)] != 0; }
  void set(int r, int c, bool value = true) { bits_[index(r, c)] = value ? 1 : 0; }
  std::size_t foreground_count() const noexcept;
  bool empty() const noexcept { return foreground_count() == 0; }

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// How each axis of the E1-E2 scatter is mapped onto pixel coordinates.
enum class Normalization {
  /// Linear map of [min, max] onto the drawable span.
  MinMax,
  /// Mid-rank of each coordinate, scaled to the drawable span. Strictly
  /// monotone per axis, so components and holes of the point pattern are
  /// preserved while point density is equalized.
  Rank,
};

inline constexpr int kDefaultResolution = 48;
inline constexpr int kDefaultDilation = 1;
inline constexpr int kMinResolution = 8;

struct RasterOptions {
  int resolution = kDefaultResolution;
  int dilation = kDefaultDilation;
  Normalization normalization = Normalization::Rank;
};

/// Resolution that keeps the points-per-pixel density of the default
/// raster (48 px at 5000 points) for `points` points.
int auto_resolution(std::size_t points);

/// Each (e1_i, e2_i) is normalized per axis onto [pad, R-1-pad] with
/// pad = dilation+1, rounded to the nearest pixel and stamped as a filled
/// disc of radius `dilation`. E1 runs along columns, E2 along rows.
///
/// Throws ZeroRange when either axis is constant over two or more points,
/// InvalidArgument for bad options or mismatched vector lengths.
BinaryImage rasterize(const SingularPair& pair, const RasterOptions& options = {});
BinaryImage rasterize(const std::vector<double>& x, const std::vector<double>& y,
                      const RasterOptions& options = {});

struct BettiDescriptor {
  int b0 = 0;  ///< 8-connected foreground components
  int b1 = 0;  ///< 4-connected background components not touching the border

  int norm() const noexcept { return b0 + b1; }
  friend bool operator==(const BettiDescriptor&, const BettiDescriptor&) = default;
};

BettiDescriptor betti(const BinaryImage& image);

/// norm == 1 -> Stochastic, norm > 1 -> NonStochastic. Throws
/// InvalidArgument for norm 0 (empty image).
Label svd_label(const BettiDescriptor& descriptor);

}  // namespace stochastid::svd
