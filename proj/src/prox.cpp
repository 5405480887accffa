#include "sspnp/prox.hpp"

#include <cmath>
#include <iostream>

#include "fft_util.hpp"

namespace sspnp::prox {

CgResult cg_solve(const std::function<Image(const Image&)>& linop, const Image& b,
                  const Image& x0, double tol, int max_iters) {
  if (tol <= 0.0 || max_iters < 1) {
    throw std::invalid_argument("cg_solve: tol must be > 0 and max_iters >= 1");
  }
  CgResult result;
  const double b_norm = norm(b);
  if (b_norm == 0.0) {
    result.solution = Image(b.height(), b.width(), b.channels(), 0.0);
    result.converged = true;
    return result;
  }

  Image x = x0;
  Image r = sub(b, linop(x));
  Image p = r;
  double rr = dot(r, r);

  int it = 0;
  while (it < max_iters && std::sqrt(rr) / b_norm > tol) {
    const Image ap = linop(p);
    const double alpha = rr / dot(p, ap);
    x = add_scaled(x, alpha, p);
    r = add_scaled(r, -alpha, ap);
    const double rr_new = dot(r, r);
    p = add_scaled(r, rr_new / rr, p);
    rr = rr_new;
    ++it;
  }

  result.solution = std::move(x);
  result.iterations = it;
  result.relative_residual = std::sqrt(rr) / b_norm;
  result.converged = result.relative_residual <= tol;
  if (!result.converged) {
    std::cerr << "cg_solve: no convergence after " << it
              << " iterations, relative residual " << result.relative_residual << "\n";
  }
  return result;
}

namespace {

Image prox_deconv_fft(const Image& v, const Image& y, const op::GaussianKernel& kernel,
                      double delta) {
  const int h = v.height(), w = v.width(), c = v.channels();
  const auto otf = op::detail::kernel_otf(kernel, h, w);

  Image out(h, w, c);
  std::vector<double> plane(static_cast<size_t>(h) * w);
  std::vector<std::complex<double>> v_hat, y_hat;
  for (int ch = 0; ch < c; ++ch) {
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) plane[static_cast<size_t>(yy) * w + xx] = v.at(yy, xx, ch);
    }
    op::detail::fft2(h, w, plane.data(), v_hat);
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) plane[static_cast<size_t>(yy) * w + xx] = y.at(yy, xx, ch);
    }
    op::detail::fft2(h, w, plane.data(), y_hat);
    for (size_t i = 0; i < v_hat.size(); ++i) {
      v_hat[i] = (v_hat[i] + delta * std::conj(otf[i]) * y_hat[i]) /
                 (1.0 + delta * std::norm(otf[i]));
    }
    op::detail::ifft2(h, w, v_hat, plane.data());
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) out.at(yy, xx, ch) = plane[static_cast<size_t>(yy) * w + xx];
    }
  }
  return out;
}

}  // namespace

Image prox_data(const Image& v, const Image& y, const op::ForwardOperator& a,
                double delta, const ProxConfig& cfg) {
  if (delta < 0.0) throw std::invalid_argument("prox_data: delta must be >= 0");
  if (delta == 0.0) return v;

  ProxMethod method = cfg.method;
  if (method == ProxMethod::automatic) {
    method = a.kind() == op::OperatorKind::deconv ? ProxMethod::fft : ProxMethod::cg;
  }
  if (method == ProxMethod::fft) {
    if (a.kind() != op::OperatorKind::deconv) {
      throw std::invalid_argument("prox_data: the fft method only applies to deconvolution");
    }
    return prox_deconv_fft(v, y, a.kernel(), delta);
  }

  const Image b = add_scaled(v, delta, a.adjoint(y));
  auto normal_op = [&](const Image& u) { return add_scaled(u, delta, a.adjoint(a.apply(u))); };
  return cg_solve(normal_op, b, v, cfg.cg_tol, cfg.cg_max_iters).solution;
}

namespace {

// Forward-difference gradient with Neumann boundary; divergence is its
// negative adjoint.
void gradient2d(const std::vector<double>& u, int h, int w, std::vector<double>& gx,
                std::vector<double>& gy) {
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      gx[i] = x + 1 < w ? u[i + 1] - u[i] : 0.0;
      gy[i] = y + 1 < h ? u[i + static_cast<size_t>(w)] - u[i] : 0.0;
    }
  }
}

void divergence2d(const std::vector<double>& px, const std::vector<double>& py, int h,
                  int w, std::vector<double>& div) {
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      double d = 0.0;
      if (x < w - 1) d += px[i];
      if (x > 0) d -= px[i - 1];
      if (y < h - 1) d += py[i];
      if (y > 0) d -= py[i - static_cast<size_t>(w)];
      div[i] = d;
    }
  }
}

}  // namespace

Image tv_denoise(const Image& v, double weight, int iters) {
  if (weight < 0.0 || iters < 1) {
    throw std::invalid_argument("tv_denoise: weight must be >= 0 and iters >= 1");
  }
  if (weight == 0.0) return v;

  const int h = v.height(), w = v.width();
  const size_t n = static_cast<size_t>(h) * w;
  const double tau = 0.25;

  Image out(h, w, v.channels());
  std::vector<double> plane(n), px(n), py(n), gx(n), gy(n), div(n), work(n);
  for (int ch = 0; ch < v.channels(); ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) plane[static_cast<size_t>(y) * w + x] = v.at(y, x, ch);
    }
    std::fill(px.begin(), px.end(), 0.0);
    std::fill(py.begin(), py.end(), 0.0);

    // Dual ascent on p: p <- (p + tau grad(div p - v/w)) / (1 + tau |grad ...|)
    for (int it = 0; it < iters; ++it) {
      divergence2d(px, py, h, w, div);
      for (size_t i = 0; i < n; ++i) work[i] = div[i] - plane[i] / weight;
      gradient2d(work, h, w, gx, gy);
      for (size_t i = 0; i < n; ++i) {
        const double mag = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
        const double denom = 1.0 + tau * mag;
        px[i] = (px[i] + tau * gx[i]) / denom;
        py[i] = (py[i] + tau * gy[i]) / denom;
      }
    }
    divergence2d(px, py, h, w, div);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const size_t i = static_cast<size_t>(y) * w + x;
        out.at(y, x, ch) = plane[i] - weight * div[i];
      }
    }
  }
  return out;
}

}  // namespace sspnp::prox
