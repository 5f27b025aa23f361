#include <catch2/catch_amalgamated.hpp>

#include <tkrylov/tkrylov.hpp>

#include <filesystem>
#include <fstream>

#include "support/oracles.hpp"

using namespace tkrylov;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

Tensor3 reversed_entries(const Tensor3& t) {
  Tensor3 out(t.n1(), t.n2(), t.n3());
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) out.flat()[i] = t.flat()[n - 1 - i];
  return out;
}

}  // namespace

TEST_CASE("add_noise calibrates the perturbation exactly") {
  std::mt19937_64 g(131);
  const Tensor3 c_hat = oracles::random_tensor(9, 7, 3, g);

  SECTION("zero level is a no-op") {
    const NoiseResult r = add_noise(c_hat, {0.0, 42});
    REQUIRE((r.c.flat() == c_hat.flat()).all());
    REQUIRE(r.eps == 0.0);
    REQUIRE(frob_norm(r.noise) == 0.0);
  }

  SECTION("noise norm hits the requested level") {
    for (double nu : {1e-3, 1e-2, 0.5}) {
      const NoiseResult r = add_noise(c_hat, {nu, 42});
      REQUIRE(r.eps / frob_norm(c_hat) == Catch::Approx(nu).epsilon(1e-15));
      REQUIRE(frob_norm(r.noise) == Catch::Approx(r.eps).epsilon(1e-15));
      REQUIRE(oracles::max_abs_diff(r.c, c_hat + r.noise) == 0.0);
    }
  }

  SECTION("fixed seed reproduces bitwise") {
    const NoiseResult a = add_noise(c_hat, {1e-2, 7});
    const NoiseResult b = add_noise(c_hat, {1e-2, 7});
    REQUIRE((a.c.flat() == b.c.flat()).all());
    const NoiseResult other = add_noise(c_hat, {1e-2, 8});
    REQUIRE_FALSE((a.c.flat() == other.c.flat()).all());
  }

  SECTION("negative level is rejected") {
    REQUIRE_THROWS_AS(add_noise(c_hat, {-0.1, 1}), std::invalid_argument);
  }
}

TEST_CASE("snr follows the decibel law") {
  std::mt19937_64 g(132);
  const Tensor3 x_hat = oracles::random_tensor(6, 6, 3, g);

  SECTION("mean image scores zero decibels") {
    Tensor3 flat_mean(6, 6, 3);
    flat_mean.flat() = x_hat.flat().mean();
    REQUIRE(snr(flat_mean, x_hat) == Catch::Approx(0.0).margin(1e-10));
  }

  SECTION("shrinking the error tenfold adds twenty decibels") {
    const Tensor3 err = oracles::random_tensor(6, 6, 3, g);
    const Tensor3 near = x_hat + 0.1 * err;
    const Tensor3 nearer = x_hat + 0.01 * err;
    REQUIRE(snr(nearer, x_hat) - snr(near, x_hat)
            == Catch::Approx(20.0).margin(1e-9));
  }

  SECTION("perfect restoration is infinite") {
    REQUIRE(std::isinf(snr(x_hat, x_hat)));
    REQUIRE(snr(x_hat, x_hat) > 0.0);
  }

  SECTION("shape mismatch throws") {
    REQUIRE_THROWS_AS(snr(Tensor3(5, 6, 3), x_hat), std::invalid_argument);
  }
}

TEST_CASE("relative_error is the normalized Frobenius distance") {
  std::mt19937_64 g(133);
  const Tensor3 x_hat = oracles::random_tensor(5, 4, 3, g);

  REQUIRE(relative_error(x_hat, x_hat) == 0.0);
  REQUIRE(relative_error(Tensor3(5, 4, 3), x_hat)
          == Catch::Approx(1.0).epsilon(1e-14));
  REQUIRE_THROWS_AS(relative_error(x_hat, Tensor3(5, 4, 3)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(relative_error(Tensor3(4, 4, 3), x_hat),
                    std::invalid_argument);
}

TEST_CASE("metrics are invariant under simultaneous entry permutation") {
  std::mt19937_64 g(134);
  const Tensor3 x_hat = oracles::random_tensor(6, 5, 3, g);
  const Tensor3 x_res = oracles::random_tensor(6, 5, 3, g);
  const Tensor3 ph = reversed_entries(x_hat);
  const Tensor3 pr = reversed_entries(x_res);

  REQUIRE(snr(x_res, x_hat) == Catch::Approx(snr(pr, ph)).epsilon(1e-13));
  REQUIRE(relative_error(x_res, x_hat)
          == Catch::Approx(relative_error(pr, ph)).epsilon(1e-13));
}

TEST_CASE("ppm save and load round trip at 8-bit quantization") {
  const auto path = temp_file("tkrylov_test_roundtrip.ppm");

  SECTION("quantized values reproduce exactly") {
    RgbImage img(3, 5);
    std::mt19937_64 g(135);
    std::uniform_int_distribution<int> level(0, 255);
    for (auto& ch : img.channel)
      for (Eigen::Index i = 0; i < ch.rows(); ++i)
        for (Eigen::Index j = 0; j < ch.cols(); ++j)
          ch(i, j) = level(g) / 255.0;

    save_ppm(img, path.string());
    const RgbImage back = load_ppm(path.string());
    REQUIRE(back.n1 == 3);
    REQUIRE(back.n2 == 5);
    for (int k = 0; k < 3; ++k)
      REQUIRE((back.channel[k] - img.channel[k]).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("single red pixel") {
    RgbImage img(1, 1);
    img.channel[0](0, 0) = 1.0;
    save_ppm(img, path.string());
    const Tensor3 t = image_to_tensor(load_ppm(path.string()));
    REQUIRE(t(0, 0, 0) == 1.0);
    REQUIRE(t(0, 0, 1) == 0.0);
    REQUIRE(t(0, 0, 2) == 0.0);
  }

  SECTION("export clamps out-of-range values") {
    RgbImage img(1, 2);
    img.channel[0](0, 0) = 1.7;
    img.channel[0](0, 1) = -0.3;
    save_ppm(img, path.string());
    const RgbImage back = load_ppm(path.string());
    REQUIRE(back.channel[0](0, 0) == 1.0);
    REQUIRE(back.channel[0](0, 1) == 0.0);
  }

  SECTION("malformed inputs are rejected") {
    {
      std::ofstream f(path, std::ios::binary);
      f << "P5\n2 2\n255\n";
    }
    REQUIRE_THROWS_AS(load_ppm(path.string()), std::runtime_error);
    {
      std::ofstream f(path, std::ios::binary);
      f << "P6\n2 2\n65535\n";
    }
    REQUIRE_THROWS_AS(load_ppm(path.string()), std::runtime_error);
    {
      std::ofstream f(path, std::ios::binary);
      f << "P6\n4 4\n255\n";
      f.put(0);
    }
    REQUIRE_THROWS_AS(load_ppm(path.string()), std::runtime_error);
    REQUIRE_THROWS_AS(load_ppm("/nonexistent/nowhere.ppm"), std::runtime_error);
  }

  SECTION("comments and whitespace in the header parse") {
    {
      std::ofstream f(path, std::ios::binary);
      f << "P6 # format\n# full-line comment\n  1 1\n255\n";
      f.put(static_cast<char>(255));
      f.put(static_cast<char>(0));
      f.put(static_cast<char>(0));
    }
    const RgbImage img = load_ppm(path.string());
    REQUIRE(img.channel[0](0, 0) == 1.0);
  }

  std::filesystem::remove(path);
}

TEST_CASE("image and frame tensor conversions") {
  std::mt19937_64 g(136);

  SECTION("image round trip is exact") {
    RgbImage img(4, 6);
    for (auto& ch : img.channel) ch = oracles::random_matrix(4, 6, g);
    const RgbImage back = tensor_to_image(image_to_tensor(img));
    for (int k = 0; k < 3; ++k)
      REQUIRE((back.channel[k] - img.channel[k]).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("tensor_to_image needs exactly three slices") {
    REQUIRE_THROWS_AS(tensor_to_image(Tensor3(4, 4, 6)), std::invalid_argument);
  }

  SECTION("frame stacking order") {
    std::vector<RgbImage> frames(2, RgbImage(4, 4));
    for (int f = 0; f < 2; ++f)
      for (int k = 0; k < 3; ++k)
        frames[f].channel[k] = (3.0 * f + k) * Eigen::MatrixXd::Ones(4, 4);

    const Tensor3 t = frames_to_tensor(frames);
    REQUIRE(t.n3() == 6);
    for (int s = 0; s < 6; ++s) REQUIRE(t(1, 2, s) == static_cast<double>(s));

    const std::vector<RgbImage> back = tensor_to_frames(t);
    REQUIRE(back.size() == 2);
    for (int f = 0; f < 2; ++f)
      for (int k = 0; k < 3; ++k)
        REQUIRE((back[f].channel[k] - frames[f].channel[k]).cwiseAbs().maxCoeff()
                == 0.0);
  }

  SECTION("inconsistent frame sizes are rejected") {
    std::vector<RgbImage> frames{RgbImage(4, 4), RgbImage(4, 5)};
    REQUIRE_THROWS_AS(frames_to_tensor(frames), std::invalid_argument);
    REQUIRE_THROWS_AS(frames_to_tensor({}), std::invalid_argument);
    REQUIRE_THROWS_AS(tensor_to_frames(Tensor3(4, 4, 5)), std::invalid_argument);
  }
}

TEST_CASE("synth_image produces deterministic structured content") {
  SECTION("checker blocks alternate") {
    const RgbImage img = synth_image(SynthKind::checker, 8, 1);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          REQUIRE(img.channel[k](i, j) == static_cast<double>((i + j + k) % 2));
  }

  SECTION("all kinds are deterministic with nonzero channel energy") {
    for (SynthKind kind :
         {SynthKind::checker, SynthKind::gradient, SynthKind::disks}) {
      const RgbImage a = synth_image(kind, 16, 9);
      const RgbImage b = synth_image(kind, 16, 9);
      for (int k = 0; k < 3; ++k) {
        REQUIRE((a.channel[k] - b.channel[k]).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE(a.channel[k].norm() > 0.0);
      }
    }
  }

  SECTION("kind parsing") {
    REQUIRE(synth_kind_from_string("checker") == SynthKind::checker);
    REQUIRE(synth_kind_from_string("gradient") == SynthKind::gradient);
    REQUIRE(synth_kind_from_string("disks") == SynthKind::disks);
    REQUIRE_THROWS_AS(synth_kind_from_string("plasma"), std::invalid_argument);
  }

  SECTION("minimum size is enforced") {
    REQUIRE_THROWS_AS(synth_image(SynthKind::checker, 4, 1),
                      std::invalid_argument);
  }
}
