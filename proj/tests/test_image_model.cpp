#include "doctest.h"

#include "psegi/error.hpp"
#include "psegi/image.hpp"
#include "psegi/noise.hpp"
#include "psegi/preprocess.hpp"

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace psegi;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("psegi_test_" + name);
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream f(p, std::ios::binary);
  f << bytes;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

} // namespace

TEST_CASE("image shape and value validation") {
  CHECK_THROWS_AS(Image(1, 1, std::vector<double>{0.5}), InputError);
  CHECK_THROWS_AS(Image(2, 2, std::vector<double>{0, 1, 2}), InputError);
  CHECK_THROWS_AS(Image(2, 1, std::vector<double>{0, std::nan("")}), InputError);
  Image img(3, 2, std::vector<double>{0, 1, 2, 3, 4, 5});
  CHECK(img.size() == 6);
  CHECK(img.at(1, 2) == 5);
}

TEST_CASE("binary PGM loads with normalization") {
  const auto p = temp_file("p5.pgm");
  write_bytes(p, std::string("P5\n2 2\n255\n") + std::string({'\x00', '\xff', '\x80', '\x40'}));
  const Image img = load_image(p, true);
  CHECK(img.width() == 2);
  CHECK(img[0] == 0.0);
  CHECK(img[1] == 1.0);
  CHECK(img[2] == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
  CHECK(img[3] == doctest::Approx(64.0 / 255.0).epsilon(1e-15));
  const Image raw = load_image(p, false);
  CHECK(raw[1] == 255.0);
}

TEST_CASE("ASCII PGM with comments loads") {
  const auto p = temp_file("p2.pgm");
  write_bytes(p, "P2\n# comment\n3 1\n255\n0 10 255\n");
  const Image img = load_image(p, false);
  CHECK(img.size() == 3);
  CHECK(img[1] == 10.0);
}

TEST_CASE("single-pixel and color files are rejected") {
  const auto p = temp_file("one.pgm");
  write_bytes(p, std::string("P5\n1 1\n255\n") + '\x10');
  CHECK_THROWS_AS(load_image(p, true), InputError);
  const auto c = temp_file("color.ppm");
  write_bytes(c, std::string("P6\n1 2\n255\n") + std::string(6, '\x10'));
  CHECK_THROWS_AS(load_image(c, true), InputError);
  CHECK_THROWS_AS(load_image(temp_file("does_not_exist.pgm"), true), InputError);
}

TEST_CASE("PGM save and load round-trips bit-exactly") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<double> px(35);
  for (auto& v : px) v = d(rng);
  const Image img(7, 5, px);
  const auto p = temp_file("round.pgm");
  save_pgm(p, img);
  const Image back = load_image(p, false);
  CHECK(back.vector() == img.vector());
  std::ifstream a(p, std::ios::binary);
  const std::string first((std::istreambuf_iterator<char>(a)), {});
  save_pgm(p, back);
  std::ifstream b(p, std::ios::binary);
  const std::string second((std::istreambuf_iterator<char>(b)), {});
  CHECK(first == second);
}

TEST_CASE("PNG of constant gray loads as constant image") {
  const auto p = temp_file("const.png");
  FILE* f = std::fopen(p.c_str(), "wb");
  REQUIRE(f);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, 100, 100, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(100, 128);
  for (int r = 0; r < 100; ++r) png_write_row(png, row.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);

  const Image img = load_image(p, true);
  CHECK(img.size() == 10000);
  for (double v : img.pixels()) CHECK(v == 128.0 / 255.0);
}

TEST_CASE("noise estimation uses the maximum-likelihood divisor") {
  CHECK(estimate_noise(Image(2, 1, std::vector<double>{0, 1})).sigma2() == doctest::Approx(0.25));
  CHECK_THROWS_AS(estimate_noise(Image(2, 2, 0.5)), InputError);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d(0.5, 0.1);
  std::vector<double> px(10000);
  for (auto& v : px) v = d(rng);
  const double s2 = estimate_noise(Image(100, 100, px)).sigma2();
  CHECK(s2 >= 0.009);
  CHECK(s2 <= 0.011);
}

TEST_CASE("noise model validation and products") {
  CHECK_THROWS_AS(NoiseModel::isotropic(0.0), InputError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(NoiseModel::full(asym), InputError);
  Eigen::MatrixXd indef(2, 2);
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(NoiseModel::full(indef), InputError);
  Eigen::MatrixXd spd(2, 2);
  spd << 2, 1, 1, 3;
  const auto m = NoiseModel::full(spd);
  const std::vector<double> v{1, -1};
  CHECK(m.quadratic(v) == doctest::Approx(3.0));
  const auto sv = m.apply(v);
  CHECK(sv[0] == doctest::Approx(1.0));
  CHECK(sv[1] == doctest::Approx(-2.0));
}

TEST_CASE("identity preprocessing returns the input") {
  std::mt19937_64 rng(5);
  const Image img(4, 3, random_vector(12, rng));
  LinearPreprocess id({FilterStage::identity()});
  CHECK(id.is_identity());
  CHECK(id.apply(img).vector() == img.vector());
}

TEST_CASE("first-order vertical difference responds only on the step row") {
  // Rows 0-2 are 0, rows 3-5 are 2.
  std::vector<double> px(36);
  for (std::size_t r = 3; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) px[r * 6 + c] = 2.0;
  const LinearPreprocess dy({FilterStage::conv3x3_vec({0, 0, 0, -1, 1, 0, 0, 0, 0})});
  const Image out = dy.apply(Image(6, 6, px));
  for (std::size_t r = 1; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) CHECK(out.at(r, c) == (r == 3 ? 2.0 : 0.0));
}

TEST_CASE("gaussian blur of an impulse sums to one") {
  std::vector<double> px(49, 0.0);
  px[24] = 1.0;
  const Image out = LinearPreprocess({FilterStage::gaussian_blur(3, 1.0)}).apply(Image(7, 7, px));
  double sum = 0.0;
  for (double v : out.pixels()) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(FilterStage::gaussian_blur(4), InputError);
}

TEST_CASE("preprocessing is linear and its adjoint is the transpose") {
  std::mt19937_64 rng(17);
  const std::size_t w = 6, h = 5, n = w * h;
  for (auto boundary : {Boundary::replicate, Boundary::zero}) {
    const LinearPreprocess L({FilterStage::gaussian_blur(5), FilterStage::conv3x3({1, 2, 0, -1, 0.5, 0, 0, 3, -2})},
                             boundary);
    const auto a = random_vector(n, rng), b = random_vector(n, rng);
    std::vector<double> ab(n);
    for (std::size_t i = 0; i < n; ++i) ab[i] = 2.0 * a[i] - 3.0 * b[i];
    const auto la = L.apply(a, w, h), lb = L.apply(b, w, h), lab = L.apply(ab, w, h);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(lab[i] - 2.0 * la[i] + 3.0 * lb[i]) < 1e-12);
    // <L a, b> = <a, L' b>
    const auto ltb = L.apply_adjoint(b, w, h);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lhs += la[i] * b[i];
      rhs += a[i] * ltb[i];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("composed map equals stages applied in sequence") {
  std::mt19937_64 rng(19);
  const std::size_t w = 5, h = 5;
  const auto v = random_vector(w * h, rng);
  const auto s1 = FilterStage::gaussian_blur(3);
  const auto s2 = FilterStage::conv3x3({0, 1, 0, 1, -4, 1, 0, 1, 0});
  const auto both = LinearPreprocess({s1, s2}).apply(v, w, h);
  const auto seq = LinearPreprocess({s2}).apply(LinearPreprocess({s1}).apply(v, w, h), w, h);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(both[i] == doctest::Approx(seq[i]).epsilon(1e-14));
}

TEST_CASE("blur with replicate boundary preserves constants row by row") {
  const std::size_t w = 6, h = 4, n = w * h;
  const LinearPreprocess L({FilterStage::gaussian_blur(5)});
  // Row i of L is L' applied to e_i transposed; rows summing to 1 is L 1 = 1.
  const auto ones = L.apply(std::vector<double>(n, 1.0), w, h);
  for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(e.begin(), e.end(), 0.0);
    e[i] = 1.0;
    const auto col = L.apply_adjoint(e, w, h);
    double s = 0.0;
    for (double v : col) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
}
