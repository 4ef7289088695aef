#pragma once

#include <cstdint>
#include <string>

#include "ihd/core.hpp"

namespace ihd {

/// Gray-scale image, row-major: pixel (row i, column j) at pix[i*nx + j],
/// 0 <= i < ny, 0 <= j < nx. Intensities nominally in [0,1] (not enforced
/// during optimization).
struct Image {
  int nx = 0;  // width
  int ny = 0;  // height
  Eigen::VectorXd pix;

  Image() = default;
  Image(int nx_, int ny_) : nx(nx_), ny(ny_), pix(Eigen::VectorXd::Zero(std::int64_t(nx_) * ny_)) {}
  double& at(int i, int j) { return pix[std::int64_t(i) * nx + j]; }
  double at(int i, int j) const { return pix[std::int64_t(i) * nx + j]; }
};

/// Odd-sized square convolution stencil, nonnegative, entries summing to 1.
struct Kernel {
  int size = 0;
  Eigen::VectorXd w;

  double at(int p, int q) const { return w[std::int64_t(p) * size + q]; }
};

Kernel gaussian_kernel(int size = 5, double sigma = 1.5);
Kernel identity_kernel();

/// Throws std::invalid_argument unless the kernel is odd-sized, nonnegative,
/// and normalized to within 1e-12.
void check_kernel(const Kernel& k);

Objective rosenbrock();
Objective quadratic(const Matrix& A, const Point& b);
Objective double_well();

/// 2-D correlation with replicate-edge (zero-flux) boundary handling, and its
/// exact adjoint (scatter with the same edge clamping).
Image blur_apply(const Kernel& kernel, const Image& u);
Image blur_adjoint(const Kernel& kernel, const Image& v);

/// Forward differences with zero difference at the trailing boundary, and
/// their exact adjoints (negative backward differences).
Image kx_apply(const Image& u);
Image kx_adjoint(const Image& v);
Image ky_apply(const Image& u);
Image ky_adjoint(const Image& v);

struct DeblurProblem {
  Kernel kernel;
  Image b;  // blurry, noisy observation
  double mu = 5e-5;
  double rho = 1e-3;
};

/// f(u) = 1/2 ||Au - b||^2 + (mu/2) sum log(rho + (Kx u)^2 + (Ky u)^2),
/// grad f(u) = A^T(Au - b) + mu [Kx^T(Kx u / m) + Ky^T(Ky u / m)] with
/// m = rho + (Kx u)^2 + (Ky u)^2 elementwise. lipschitz_L is the upper bound
/// ||A||^2 + (2 mu / rho)(||Kx||^2 + ||Ky||^2), operator norms by power
/// iteration. Points are the column-major flattening of images.
Objective deblur_objective(const DeblurProblem& p);

/// b = blur(u_true) + sigma * N(0,1) per pixel, deterministic in seed.
Image synthesize_observation(const Image& u_true, const Kernel& kernel,
                             double noise_sigma, std::uint64_t seed);

/// Piecewise-constant synthetic test image, deterministic, values in [0,1].
Image phantom(int nx, int ny);

/// Binary PGM (P5), maxval 255 or 65535 (big-endian), scaled to [0,1] on read.
/// Write emits maxval 255 with round-to-nearest. Parse errors report the byte
/// offset.
Image pgm_read(const std::string& path);
void pgm_write(const std::string& path, const Image& img);

/// Column-major flattening: point[j*ny + i] = image(i, j).
Point image_to_point(const Image& img);
Image point_to_image(const Point& p, int nx, int ny);

/// Largest singular value estimate by power iteration on F^T F (seeded start,
/// fixed iteration count; deterministic).
double operator_norm_est(const std::function<Image(const Image&)>& fwd,
                         const std::function<Image(const Image&)>& adj, int nx, int ny,
                         int iters = 50, std::uint64_t seed = 0x9E3779B9u);

}  // namespace ihd
