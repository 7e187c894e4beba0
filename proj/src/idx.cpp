#include "qtrack/idx.hpp"

#include <array>
#include <fstream>
#include <iterator>

namespace qtrack {

namespace {

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxError(IdxError::Kind::io, "cannot open IDX file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                              static_cast<char>(v)};
  out.write(b.data(), 4);
}

// Validates magic and header length; returns the dimension sizes.
std::vector<std::uint32_t> header(const std::vector<std::uint8_t>& b, std::uint32_t magic, int ndims,
                                  const std::string& path) {
  if (b.size() < 4 || be32(b, 0) != magic) {
    throw IdxError(IdxError::Kind::format, path + ": bad magic number (expected 0x0000080" +
                                               std::to_string(magic & 0xf) + ")");
  }
  const std::size_t need = 4 + 4 * static_cast<std::size_t>(ndims);
  if (b.size() < need) throw IdxError(IdxError::Kind::truncated, path + ": truncated header");
  std::vector<std::uint32_t> dims;
  for (int d = 0; d < ndims; ++d) dims.push_back(be32(b, 4 + 4 * static_cast<std::size_t>(d)));
  return dims;
}

}  // namespace

IdxDataset load_idx(const std::string& images_path, const std::string& labels_path) {
  const auto img = slurp(images_path);
  const auto lab = slurp(labels_path);
  const auto idims = header(img, kIdxImageMagic, 3, images_path);
  const auto ldims = header(lab, kIdxLabelMagic, 1, labels_path);

  const std::size_t count = idims[0];
  const std::size_t pixels = std::size_t{idims[1]} * idims[2];
  if (img.size() - 16 < count * pixels)
    throw IdxError(IdxError::Kind::truncated, images_path + ": payload holds fewer than " +
                                                  std::to_string(count) + " images");
  if (lab.size() - 8 < ldims[0])
    throw IdxError(IdxError::Kind::truncated, labels_path + ": payload holds fewer than " +
                                                  std::to_string(ldims[0]) + " labels");
  if (ldims[0] != count)
    throw IdxError(IdxError::Kind::count_mismatch, "IDX count mismatch: " + std::to_string(count) +
                                                       " images but " + std::to_string(ldims[0]) + " labels");

  IdxDataset ds;
  ds.rows = static_cast<int>(idims[1]);
  ds.cols = static_cast<int>(idims[2]);
  ds.images.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(pixels));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < pixels; ++j)
      ds.images(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = img[16 + i * pixels + j] / 255.0;
  ds.labels.assign(lab.begin() + 8, lab.begin() + 8 + static_cast<std::ptrdiff_t>(count));
  return ds;
}

void write_idx_images(const std::string& path, const std::vector<std::uint8_t>& pixels, int count, int rows,
                      int cols) {
  if (count < 0 || rows < 1 || cols < 1 ||
      pixels.size() != static_cast<std::size_t>(count) * static_cast<std::size_t>(rows) * cols)
    throw DomainError("write_idx_images: pixel buffer does not match count x rows x cols");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IdxError(IdxError::Kind::io, "cannot write '" + path + "'");
  put_be32(out, kIdxImageMagic);
  put_be32(out, static_cast<std::uint32_t>(count));
  put_be32(out, static_cast<std::uint32_t>(rows));
  put_be32(out, static_cast<std::uint32_t>(cols));
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IdxError(IdxError::Kind::io, "cannot write '" + path + "'");
  put_be32(out, kIdxLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

}  // namespace qtrack
