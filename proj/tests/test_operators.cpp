#include <catch2/catch_amalgamated.hpp>

#include <tkrylov/tkrylov.hpp>

#include "support/oracles.hpp"

using namespace tkrylov;

namespace {

BlurModel identity_model(std::size_t n) {
  BlurModel m;
  m.n = n;
  m.sigma = 1.0;
  m.r = 0;
  m.a1 = Eigen::MatrixXd::Identity(n, n);
  m.a2 = m.a1;
  m.alpha = 1.0;
  m.beta = 0.0;
  m.gamma = 0.0;
  m.acolor = Eigen::Matrix3d::Identity();
  return m;
}

}  // namespace

TEST_CASE("gaussian_band_matrix evaluates the banded Gaussian kernel") {
  SECTION("band radius zero is a scaled identity") {
    const Eigen::MatrixXd a = gaussian_band_matrix(4, 2.0, 0);
    const double scale = 1.0 / (2.0 * std::sqrt(2.0 * M_PI));
    REQUIRE((a - scale * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff()
            < 1e-15);
  }

  SECTION("unit-sigma values") {
    const Eigen::MatrixXd a = gaussian_band_matrix(3, 1.0, 1);
    REQUIRE(a(0, 0) == Catch::Approx(0.3989422804014327).epsilon(1e-14));
    REQUIRE(a(0, 1) == Catch::Approx(0.24197072451914337).epsilon(1e-14));
    REQUIRE(a(0, 2) == 0.0);
  }

  SECTION("symmetry is exact") {
    const Eigen::MatrixXd a = gaussian_band_matrix(9, 2.5, 4);
    REQUIRE((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("invalid parameters throw") {
    REQUIRE_THROWS_AS(gaussian_band_matrix(4, 0.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(gaussian_band_matrix(4, -1.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(gaussian_band_matrix(4, 1.0, 4), std::invalid_argument);
  }
}

TEST_CASE("blur_model assembles the circulant channel mixing") {
  const BlurModel m = blur_model(8, 2.0, 3, 0.8, 0.1, 0.1);
  Eigen::Matrix3d expect;
  expect << 0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8;
  REQUIRE((m.acolor - expect).cwiseAbs().maxCoeff() < 1e-15);
  for (int row = 0; row < 3; ++row)
    REQUIRE(m.acolor.row(row).sum() == Catch::Approx(1.0).margin(1e-12));

  SECTION("weights must sum to one") {
    REQUIRE_THROWS_AS(blur_model(8, 2.0, 3, 0.8, 0.2, 0.2),
                      std::invalid_argument);
  }
}

TEST_CASE("build_cross_channel_blur tensorizes the blur model") {
  SECTION("identity model gives the identity map") {
    const TensorLinearOperator op = build_cross_channel_blur(identity_model(5));
    std::mt19937_64 g(51);
    const Tensor3 x = oracles::random_tensor(5, 5, 3, g);
    REQUIRE(oracles::max_abs_diff(op.apply(x), x) < 1e-12);
  }

  SECTION("matches the Kronecker oracle at desk scale") {
    std::mt19937_64 g(52);
    const BlurModel m = blur_model(4, 1.5, 2, 0.7, 0.2, 0.1);
    const TensorLinearOperator op = build_cross_channel_blur(m);
    const Tensor3 x = oracles::random_tensor(4, 4, 3, g);
    REQUIRE(oracles::max_abs_diff(op.apply(x), kron_oracle_apply(m, x)) < 1e-10);
  }

  SECTION("Kronecker equivalence across sizes") {
    std::mt19937_64 g(53);
    for (std::size_t n : {2u, 4u, 8u}) {
      const BlurModel m = blur_model(n, 1.0, n > 2 ? 2 : 1, 0.8, 0.1, 0.1);
      const TensorLinearOperator op = build_cross_channel_blur(m);
      const Tensor3 x = oracles::random_tensor(n, n, 3, g);
      const Tensor3 via_op = op.apply(x);
      const double bound = 1e-10 * (1.0 + frob_norm(via_op));
      REQUIRE(oracles::max_abs_diff(via_op, kron_oracle_apply(m, x)) < bound);
    }
  }

  SECTION("a non-circulant mixing matrix is rejected") {
    BlurModel m = blur_model(4, 1.0, 1, 0.8, 0.1, 0.1);
    m.acolor(0, 1) = 0.05;
    m.acolor(0, 2) = 0.15;
    REQUIRE_THROWS_AS(build_cross_channel_blur(m), std::invalid_argument);
  }
}

TEST_CASE("build_within_channel_video_blur blurs each slice independently") {
  SECTION("band radius zero scales every slice") {
    const TensorLinearOperator op =
        build_within_channel_video_blur(6, 2, 1.0, 0);
    std::mt19937_64 g(54);
    const Tensor3 x = oracles::random_tensor(6, 6, 6, g);
    const double s = 1.0 / std::sqrt(2.0 * M_PI);
    REQUIRE(oracles::max_abs_diff(op.apply(x), (s * s) * x) < 1e-12);
  }

  SECTION("single frame matches the identity-mixing Kronecker oracle") {
    std::mt19937_64 g(55);
    BlurModel m = identity_model(4);
    m.sigma = 1.5;
    m.r = 2;
    m.a1 = gaussian_band_matrix(4, 1.5, 2);
    m.a2 = m.a1;
    const TensorLinearOperator op =
        build_within_channel_video_blur(4, 1, 1.5, 2);
    const Tensor3 x = oracles::random_tensor(4, 4, 3, g);
    REQUIRE(oracles::max_abs_diff(op.apply(x), kron_oracle_apply(m, x)) < 1e-10);
  }

  SECTION("full-scale construction succeeds") {
    REQUIRE_NOTHROW(build_within_channel_video_blur(240, 10, 2.0, 4));
  }
}

TEST_CASE("kron_oracle_apply is linear and guarded") {
  std::mt19937_64 g(56);
  const BlurModel m = blur_model(8, 2.0, 3, 0.8, 0.1, 0.1);

  SECTION("identity blur leaves the tensor unchanged") {
    const Tensor3 x = oracles::random_tensor(8, 8, 3, g);
    REQUIRE(oracles::max_abs_diff(kron_oracle_apply(identity_model(8), x), x)
            < 1e-12);
  }

  SECTION("linearity") {
    const Tensor3 x = oracles::random_tensor(8, 8, 3, g);
    const Tensor3 y = oracles::random_tensor(8, 8, 3, g);
    const Tensor3 lhs = kron_oracle_apply(m, 2.0 * x + (-3.0) * y);
    const Tensor3 rhs =
        2.0 * kron_oracle_apply(m, x) - 3.0 * kron_oracle_apply(m, y);
    REQUIRE(oracles::max_abs_diff(lhs, rhs) < 1e-12);
  }

  SECTION("size guard") {
    BlurModel big = blur_model(40, 2.0, 3, 0.8, 0.1, 0.1);
    REQUIRE_THROWS_AS(kron_oracle_apply(big, Tensor3(40, 40, 3)),
                      std::invalid_argument);
  }
}

TEST_CASE("operator apply and transpose") {
  std::mt19937_64 g(57);

  SECTION("one-sided identity tensor acts as identity") {
    const TensorLinearOperator op =
        TensorLinearOperator::one_sided(identity_tensor(4, 3), 5);
    const Tensor3 x = oracles::random_tensor(4, 5, 3, g);
    REQUIRE(oracles::max_abs_diff(op.apply(x), x) < 1e-12);
    REQUIRE(oracles::max_abs_diff(op.apply_transpose(x), x) < 1e-12);
  }

  SECTION("adjoint consistency for one-sided operators") {
    const Tensor3 a = oracles::random_tensor(6, 6, 4, g);
    const TensorLinearOperator op = TensorLinearOperator::one_sided(a, 5);
    const Tensor3 x = oracles::random_tensor(6, 5, 4, g);
    const Tensor3 y = oracles::random_tensor(6, 5, 4, g);
    const double lhs = inner(op.apply(x), y);
    const double rhs = inner(x, op.apply_transpose(y));
    REQUIRE(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
  }

  SECTION("adjoint consistency for two-sided operators") {
    const Tensor3 a = oracles::random_tensor(4, 3, 3, g);
    const Tensor3 b = oracles::random_tensor(5, 2, 3, g);
    const TensorLinearOperator op = TensorLinearOperator::two_sided(a, b);
    const Tensor3 x = oracles::random_tensor(3, 5, 3, g);
    const Tensor3 y = oracles::random_tensor(4, 2, 3, g);
    const double lhs = inner(op.apply(x), y);
    const double rhs = inner(x, op.apply_transpose(y));
    REQUIRE(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
  }

  SECTION("two-sided apply composes the one-sided products") {
    const Tensor3 a = oracles::random_tensor(4, 3, 3, g);
    const Tensor3 b = oracles::random_tensor(5, 2, 3, g);
    const TensorLinearOperator op = TensorLinearOperator::two_sided(a, b);
    const Tensor3 x = oracles::random_tensor(3, 5, 3, g);
    REQUIRE(oracles::max_abs_diff(op.apply(x), t_product(t_product(a, x), b))
            < 1e-11);
  }

  SECTION("shape mismatches throw") {
    const TensorLinearOperator op =
        TensorLinearOperator::one_sided(identity_tensor(4, 3), 5);
    REQUIRE_THROWS_AS(op.apply(Tensor3(4, 4, 3)), std::invalid_argument);
    REQUIRE_THROWS_AS(op.apply_transpose(Tensor3(5, 4, 3)), std::invalid_argument);
    REQUIRE_THROWS_AS(
        TensorLinearOperator::two_sided(Tensor3(2, 2, 2), Tensor3(2, 2, 3)),
        std::invalid_argument);
  }
}

TEST_CASE("dense_matrix materializes the operator in the flat basis") {
  std::mt19937_64 g(58);
  const Tensor3 a = oracles::random_tensor(3, 3, 2, g);
  const Tensor3 b = oracles::random_tensor(4, 4, 2, g);
  const TensorLinearOperator op = TensorLinearOperator::two_sided(a, b);
  const Eigen::MatrixXd k = dense_matrix(op);
  REQUIRE(k.rows() == 3 * 4 * 2);
  REQUIRE(k.cols() == 3 * 4 * 2);

  const Tensor3 x = oracles::random_tensor(3, 4, 2, g);
  const Eigen::VectorXd via_matrix = k * x.flat().matrix();
  const Tensor3 via_op = op.apply(x);
  REQUIRE((via_matrix - via_op.flat().matrix()).cwiseAbs().maxCoeff() < 1e-11);

  SECTION("transpose of the matrix is the adjoint") {
    const Tensor3 y = oracles::random_tensor(3, 4, 2, g);
    const Eigen::VectorXd via_t = k.transpose() * y.flat().matrix();
    REQUIRE((via_t - op.apply_transpose(y).flat().matrix()).cwiseAbs().maxCoeff()
            < 1e-11);
  }

  SECTION("size guard") {
    const TensorLinearOperator big =
        TensorLinearOperator::one_sided(identity_tensor(40, 3), 40);
    REQUIRE_THROWS_AS(dense_matrix(big), std::invalid_argument);
  }
}
