#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace psegi {

/// Row-major grayscale image. Pixel index of (row, col) is row * width + col.
class Image {
public:
  Image(std::size_t width, std::size_t height, std::vector<double> pixels);
  Image(std::size_t width, std::size_t height, double fill);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  std::span<const double> pixels() const { return pixels_; }
  const std::vector<double>& vector() const { return pixels_; }

  double operator[](std::size_t i) const { return pixels_[i]; }
  double at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }

  /// Same shape, new values. Values are validated like the constructor.
  Image with_pixels(std::vector<double> pixels) const;

private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> pixels_;
};

/// Reads an 8-bit grayscale PGM (P2 or P5) or PNG. With `normalize`, values
/// are divided by 255.
Image load_image(const std::filesystem::path& path, bool normalize);

/// Writes pixel values clamped to [0, 255] and rounded, as binary PGM (P5).
void save_pgm(const std::filesystem::path& path, const Image& img);

/// Writes an object mask as binary PGM: object = 255, background = 0.
void save_mask(const std::filesystem::path& path, std::size_t width, std::size_t height,
               std::span<const std::uint8_t> object_mask);

} // namespace psegi
