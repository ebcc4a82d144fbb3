#include "psegi/image.hpp"

#include "psegi/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

namespace psegi {

namespace {

void validate(std::size_t width, std::size_t height, const std::vector<double>& pixels) {
  if (width == 0 || height == 0) throw InputError("image has zero size");
  if (width * height != pixels.size())
    throw InputError("pixel count does not match width * height");
  if (pixels.size() < 2) throw InputError("image must contain at least two pixels");
  for (double v : pixels)
    if (!std::isfinite(v)) throw InputError("image contains a non-finite pixel value");
}

// Skips whitespace and '#' comments between PGM header tokens.
void skip_pnm_space(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_pnm_int(std::istream& in) {
  skip_pnm_space(in);
  std::size_t v = 0;
  if (!(in >> v)) throw InputError("malformed PGM header");
  return v;
}

Image read_pgm(std::istream& in, bool normalize) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
    if (magic[0] == 'P' && (magic[1] == '3' || magic[1] == '6'))
      throw InputError("color PPM input is not supported; expected grayscale");
    throw InputError("not a PGM file");
  }
  const bool binary = magic[1] == '5';
  const std::size_t width = read_pnm_int(in);
  const std::size_t height = read_pnm_int(in);
  const std::size_t maxval = read_pnm_int(in);
  if (width == 0 || height == 0) throw InputError("image has zero size");
  if (maxval == 0 || maxval > 255) throw InputError("only 8-bit PGM is supported");

  const double scale = normalize ? 1.0 / 255.0 : 1.0;
  std::vector<double> pixels(width * height);
  if (binary) {
    in.get(); // single whitespace byte after maxval
    std::vector<unsigned char> raw(pixels.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw InputError("truncated PGM data");
    for (std::size_t i = 0; i < raw.size(); ++i) pixels[i] = raw[i] * scale;
  } else {
    for (auto& p : pixels) {
      const std::size_t v = read_pnm_int(in);
      if (v > maxval) throw InputError("PGM sample exceeds maxval");
      p = static_cast<double>(v) * scale;
    }
  }
  return Image(width, height, std::move(pixels));
}

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadState() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

Image read_png(const std::filesystem::path& path, bool normalize) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw InputError("cannot open " + path.string());

  PngReadState st;
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!st.png) throw InputError("libpng initialization failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw InputError("libpng initialization failed");

  // libpng reports errors through longjmp; nothing with a destructor is
  // created between here and the end of the read.
  if (setjmp(png_jmpbuf(st.png))) throw InputError("corrupt PNG file " + path.string());

  png_init_io(st.png, fp.get());
  png_read_info(st.png, st.info);
  const png_uint_32 width = png_get_image_width(st.png, st.info);
  const png_uint_32 height = png_get_image_height(st.png, st.info);
  const int color = png_get_color_type(st.png, st.info);
  const int depth = png_get_bit_depth(st.png, st.info);

  if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_GRAY_ALPHA)
    throw InputError("non-grayscale PNG is not supported");
  if (depth > 8) throw InputError("only 8-bit PNG is supported");
  if (width == 0 || height == 0) throw InputError("image has zero size");

  if (depth < 8) png_set_expand_gray_1_2_4_to_8(st.png);
  if (color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_strip_alpha(st.png);
  png_read_update_info(st.png, st.info);

  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = raw.data() + static_cast<std::size_t>(r) * width;
  png_read_image(st.png, rows.data());
  png_read_end(st.png, nullptr);

  const double scale = normalize ? 1.0 / 255.0 : 1.0;
  std::vector<double> pixels(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) pixels[i] = raw[i] * scale;
  return Image(width, height, std::move(pixels));
}

} // namespace

Image::Image(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  validate(width_, height_, pixels_);
}

Image::Image(std::size_t width, std::size_t height, double fill)
    : Image(width, height, std::vector<double>(width * height, fill)) {}

Image Image::with_pixels(std::vector<double> pixels) const {
  return Image(width_, height_, std::move(pixels));
}

Image load_image(const std::filesystem::path& path, bool normalize) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  const bool is_png = in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
  if (is_png) {
    in.close();
    return read_png(path, normalize);
  }
  in.clear();
  in.seekg(0);
  return read_pgm(in, normalize);
}

void save_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raw(img.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = static_cast<unsigned char>(std::clamp(std::lround(img[i]), 0L, 255L));
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void save_mask(const std::filesystem::path& path, std::size_t width, std::size_t height,
               std::span<const std::uint8_t> object_mask) {
  if (object_mask.size() != width * height) throw InputError("mask size does not match shape");
  std::vector<double> v(object_mask.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = object_mask[i] ? 255.0 : 0.0;
  save_pgm(path, Image(width, height, std::move(v)));
}

} // namespace psegi
