#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/costs.hpp"
#include "qtrack/error.hpp"

namespace qtrack {

class IdxError : public Error {
 public:
  enum class Kind { io, format, truncated, count_mismatch };

  IdxError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxDataset {
  Eigen::MatrixXd images;           // count x (rows * cols), values in [0, 1]
  std::vector<std::uint8_t> labels;
  int rows = 28;
  int cols = 28;

  int count() const { return static_cast<int>(labels.size()); }
};

/// Reads an IDX image file and its label file. Pixels are scaled by 1/255.
IdxDataset load_idx(const std::string& images_path, const std::string& labels_path);

/// Raw pixel bytes, row-major, count x rows x cols.
void write_idx_images(const std::string& path, const std::vector<std::uint8_t>& pixels, int count,
                      int rows, int cols);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

/// Keeps the digits d1 (label -1) and d2 (label +1), shuffles them with
/// `seed` and deals `total` samples into n contiguous batches of total / n.
LogisticData select_and_partition(const IdxDataset& ds, int d1, int d2, int total, int n,
                                  std::uint64_t seed, double lambda);

}  // namespace qtrack
