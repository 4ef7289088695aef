#include "ihd/problems.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ihd/rng.hpp"

namespace ihd {

Kernel gaussian_kernel(int size, double sigma) {
  if (size < 1 || size % 2 == 0) throw std::invalid_argument("kernel size must be odd");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  Kernel k;
  k.size = size;
  k.w.resize(std::int64_t(size) * size);
  const int r = size / 2;
  double sum = 0.0;
  for (int p = 0; p < size; ++p)
    for (int q = 0; q < size; ++q) {
      const double dp = p - r, dq = q - r;
      const double v = std::exp(-(dp * dp + dq * dq) / (2.0 * sigma * sigma));
      k.w[std::int64_t(p) * size + q] = v;
      sum += v;
    }
  k.w /= sum;
  return k;
}

Kernel identity_kernel() {
  Kernel k;
  k.size = 1;
  k.w.resize(1);
  k.w[0] = 1.0;
  return k;
}

void check_kernel(const Kernel& k) {
  if (k.size < 1 || k.size % 2 == 0) throw std::invalid_argument("kernel size must be odd");
  if (k.w.size() != std::int64_t(k.size) * k.size)
    throw std::invalid_argument("kernel weight count must be size^2");
  double sum = 0.0;
  for (std::int64_t i = 0; i < k.w.size(); ++i) {
    if (!(k.w[i] >= 0.0) || !std::isfinite(k.w[i]))
      throw std::invalid_argument("kernel entries must be nonnegative and finite");
    sum += k.w[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("kernel entries must sum to 1");
}

Objective rosenbrock() {
  Objective f;
  f.dim = 2;
  f.eval = [](const Point& p) {
    const double x = p[0], y = p[1];
    const double a = 1.0 - x, b = y - x * x;
    return a * a + 100.0 * b * b;
  };
  f.grad = [](const Point& p) {
    const double x = p[0], y = p[1];
    Point g(2);
    g[0] = -2.0 * (1.0 - x) - 400.0 * x * (y - x * x);
    g[1] = 200.0 * (y - x * x);
    return g;
  };
  f.hess = [](const Point& p) {
    const double x = p[0], y = p[1];
    Matrix h(2, 2);
    h(0, 0) = 2.0 - 400.0 * y + 1200.0 * x * x;
    h(0, 1) = h(1, 0) = -400.0 * x;
    h(1, 1) = 200.0;
    return h;
  };
  return f;
}

Objective quadratic(const Matrix& A, const Point& b) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix must be square");
  if (b.size() != A.rows()) throw std::invalid_argument("vector dimension mismatch");
  const double scale = 1.0 + A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix must be symmetric");
  Objective f;
  f.dim = static_cast<int>(A.rows());
  f.eval = [A, b](const Point& x) { return 0.5 * x.dot(A * x) - b.dot(x); };
  f.grad = [A, b](const Point& x) -> Point { return A * x - b; };
  f.hess = [A](const Point&) { return A; };
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  f.lipschitz_L = es.eigenvalues().cwiseAbs().maxCoeff();
  return f;
}

Objective double_well() {
  Objective f;
  f.dim = 2;
  f.eval = [](const Point& p) {
    const double x = p[0], y = p[1];
    return 0.25 * x * x * x * x - 0.5 * x * x + 0.5 * y * y;
  };
  f.grad = [](const Point& p) {
    Point g(2);
    g[0] = p[0] * p[0] * p[0] - p[0];
    g[1] = p[1];
    return g;
  };
  f.hess = [](const Point& p) {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 3.0 * p[0] * p[0] - 1.0;
    h(1, 1) = 1.0;
    return h;
  };
  return f;
}

namespace {

inline int clamp_idx(int v, int n) { return std::min(std::max(v, 0), n - 1); }

}  // namespace

Image blur_apply(const Kernel& kernel, const Image& u) {
  check_kernel(kernel);
  const int r = kernel.size / 2;
  Image out(u.nx, u.ny);
  for (int i = 0; i < u.ny; ++i)
    for (int j = 0; j < u.nx; ++j) {
      double acc = 0.0;
      for (int p = 0; p < kernel.size; ++p) {
        const int ci = clamp_idx(i + p - r, u.ny);
        for (int q = 0; q < kernel.size; ++q)
          acc += kernel.at(p, q) * u.at(ci, clamp_idx(j + q - r, u.nx));
      }
      out.at(i, j) = acc;
    }
  return out;
}

Image blur_adjoint(const Kernel& kernel, const Image& v) {
  check_kernel(kernel);
  const int r = kernel.size / 2;
  Image out(v.nx, v.ny);
  for (int i = 0; i < v.ny; ++i)
    for (int j = 0; j < v.nx; ++j) {
      const double w = v.at(i, j);
      for (int p = 0; p < kernel.size; ++p) {
        const int ci = clamp_idx(i + p - r, v.ny);
        for (int q = 0; q < kernel.size; ++q)
          out.at(ci, clamp_idx(j + q - r, v.nx)) += kernel.at(p, q) * w;
      }
    }
  return out;
}

Image kx_apply(const Image& u) {
  Image out(u.nx, u.ny);
  for (int i = 0; i < u.ny; ++i)
    for (int j = 0; j + 1 < u.nx; ++j) out.at(i, j) = u.at(i, j + 1) - u.at(i, j);
  return out;
}

Image kx_adjoint(const Image& v) {
  Image out(v.nx, v.ny);
  if (v.nx < 2) return out;
  for (int i = 0; i < v.ny; ++i) {
    out.at(i, 0) = -v.at(i, 0);
    for (int j = 1; j + 1 < v.nx; ++j) out.at(i, j) = v.at(i, j - 1) - v.at(i, j);
    out.at(i, v.nx - 1) = v.at(i, v.nx - 2);
  }
  return out;
}

Image ky_apply(const Image& u) {
  Image out(u.nx, u.ny);
  for (int i = 0; i + 1 < u.ny; ++i)
    for (int j = 0; j < u.nx; ++j) out.at(i, j) = u.at(i + 1, j) - u.at(i, j);
  return out;
}

Image ky_adjoint(const Image& v) {
  Image out(v.nx, v.ny);
  if (v.ny < 2) return out;
  for (int j = 0; j < v.nx; ++j) {
    out.at(0, j) = -v.at(0, j);
    for (int i = 1; i + 1 < v.ny; ++i) out.at(i, j) = v.at(i - 1, j) - v.at(i, j);
    out.at(v.ny - 1, j) = v.at(v.ny - 2, j);
  }
  return out;
}

Point image_to_point(const Image& img) {
  Point p(std::int64_t(img.nx) * img.ny);
  for (int j = 0; j < img.nx; ++j)
    for (int i = 0; i < img.ny; ++i) p[std::int64_t(j) * img.ny + i] = img.at(i, j);
  return p;
}

Image point_to_image(const Point& p, int nx, int ny) {
  if (p.size() != std::int64_t(nx) * ny)
    throw std::invalid_argument("point length does not match image dimensions");
  Image img(nx, ny);
  for (int j = 0; j < nx; ++j)
    for (int i = 0; i < ny; ++i) img.at(i, j) = p[std::int64_t(j) * ny + i];
  return img;
}

double operator_norm_est(const std::function<Image(const Image&)>& fwd,
                         const std::function<Image(const Image&)>& adj, int nx, int ny,
                         int iters, std::uint64_t seed) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("image dimensions must be positive");
  if (iters < 1) throw std::invalid_argument("iters must be positive");
  SplitMix64 g = SplitMix64::stream(seed, 0);
  Image x(nx, ny);
  for (std::int64_t i = 0; i < x.pix.size(); ++i) x.pix[i] = g.uniform01();
  double nrm = x.pix.norm();
  if (nrm == 0.0) return 0.0;
  x.pix /= nrm;
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Image y = adj(fwd(x));
    lambda = y.pix.norm();
    if (lambda == 0.0) return 0.0;
    x.pix = y.pix / lambda;
  }
  return std::sqrt(lambda);
}

Objective deblur_objective(const DeblurProblem& p) {
  check_kernel(p.kernel);
  if (!(p.mu >= 0.0) || !(p.rho > 0.0))
    throw std::invalid_argument("mu must be nonnegative and rho positive");
  const int nx = p.b.nx, ny = p.b.ny;
  if (nx < 1 || ny < 1) throw std::invalid_argument("observation image is empty");

  const Kernel ker = p.kernel;
  const Image b = p.b;
  const double mu = p.mu, rho = p.rho;

  Objective f;
  f.dim = nx * ny;
  f.eval = [ker, b, mu, rho, nx, ny](const Point& pt) {
    const Image u = point_to_image(pt, nx, ny);
    const Image au = blur_apply(ker, u);
    const Image gx = kx_apply(u);
    const Image gy = ky_apply(u);
    double quad = 0.0, reg = 0.0;
    for (std::int64_t i = 0; i < au.pix.size(); ++i) {
      const double r = au.pix[i] - b.pix[i];
      quad += r * r;
      reg += std::log(rho + gx.pix[i] * gx.pix[i] + gy.pix[i] * gy.pix[i]);
    }
    return 0.5 * quad + 0.5 * mu * reg;
  };
  f.grad = [ker, b, mu, rho, nx, ny](const Point& pt) {
    const Image u = point_to_image(pt, nx, ny);
    Image r = blur_apply(ker, u);
    r.pix -= b.pix;
    const Image gx = kx_apply(u);
    const Image gy = ky_apply(u);
    Image wx(nx, ny), wy(nx, ny);
    for (std::int64_t i = 0; i < u.pix.size(); ++i) {
      const double m = rho + gx.pix[i] * gx.pix[i] + gy.pix[i] * gy.pix[i];
      wx.pix[i] = gx.pix[i] / m;
      wy.pix[i] = gy.pix[i] / m;
    }
    Image out = blur_adjoint(ker, r);
    out.pix += mu * (kx_adjoint(wx).pix + ky_adjoint(wy).pix);
    return image_to_point(out);
  };

  const double na =
      operator_norm_est([&ker](const Image& u) { return blur_apply(ker, u); },
                        [&ker](const Image& v) { return blur_adjoint(ker, v); }, nx, ny);
  const double nkx = operator_norm_est(kx_apply, kx_adjoint, nx, ny);
  const double nky = operator_norm_est(ky_apply, ky_adjoint, nx, ny);
  f.lipschitz_L = na * na + 2.0 * mu / rho * (nkx * nkx + nky * nky);
  return f;
}

Image synthesize_observation(const Image& u_true, const Kernel& kernel,
                             double noise_sigma, std::uint64_t seed) {
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be nonnegative");
  Image b = blur_apply(kernel, u_true);
  if (noise_sigma > 0.0) {
    SplitMix64 g = SplitMix64::stream(seed, 0);
    for (std::int64_t i = 0; i < b.pix.size(); ++i) b.pix[i] += noise_sigma * g.normal();
  }
  return b;
}

Image phantom(int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("image dimensions must be positive");
  Image u(nx, ny);
  for (int i = 0; i < ny; ++i)
    for (int j = 0; j < nx; ++j) {
      const double fi = static_cast<double>(i) / ny;
      const double fj = static_cast<double>(j) / nx;
      double v = 0.15;
      if (fi >= 0.2 && fi < 0.5 && fj >= 0.15 && fj < 0.45) v = 0.9;
      const double di = fi - 0.35, dj = fj - 0.65;
      if (di * di + dj * dj < 0.15 * 0.15) v = 0.55;
      if (fi >= 0.7 && fi < 0.8 && fj >= 0.2 && fj < 0.8) v = 0.75;
      if (fi >= 0.55 && fi < 0.65 && fj >= 0.1 && fj < 0.2) v = 1.0;
      u.at(i, j) = v;
    }
  return u;
}

}  // namespace ihd
