#include "pfno/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pfno/error.hpp"
#include "pfno/fft.hpp"

namespace pfno::nn {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

void check_conv(const Tensor4& x, const ConvShape& s) {
  if (s.k % 2 == 0 || s.k < 1) throw InvalidArgument("conv: kernel size must be odd");
  if (s.stride < 1) throw InvalidArgument("conv: stride must be positive");
  if (x.c != s.in) throw InvalidArgument("conv: channel mismatch");
}

// y[j] += w * x[(s*j + off) mod n] for j < m.
inline void shifted_axpy(double* y, const double* x, double w, int m, int n, int s, int off) {
  if (s == 1) {
    const int o = wrap(off, n);
    const int first = n - o;  // y[0..first) reads x[o..n)
    const int lim = first < m ? first : m;
    for (int j = 0; j < lim; ++j) y[j] += w * x[o + j];
    for (int j = lim; j < m; ++j) y[j] += w * x[j - first];
  } else {
    for (int j = 0; j < m; ++j) y[j] += w * x[wrap(s * j + off, n)];
  }
}

// y[(s*j + off) mod n] += w * x[j] for j < m.
inline void shifted_scatter(double* y, const double* x, double w, int m, int n, int s, int off) {
  if (s == 1) {
    const int o = wrap(off, n);
    const int first = n - o;
    const int lim = first < m ? first : m;
    for (int j = 0; j < lim; ++j) y[o + j] += w * x[j];
    for (int j = lim; j < m; ++j) y[j - first] += w * x[j];
  } else {
    for (int j = 0; j < m; ++j) y[wrap(s * j + off, n)] += w * x[j];
  }
}

// sum_j a[j] * x[(s*j + off) mod n] for j < m.
inline double shifted_dot(const double* a, const double* x, int m, int n, int s, int off) {
  double acc = 0.0;
  if (s == 1) {
    const int o = wrap(off, n);
    const int first = n - o;
    const int lim = first < m ? first : m;
    for (int j = 0; j < lim; ++j) acc += a[j] * x[o + j];
    for (int j = lim; j < m; ++j) acc += a[j] * x[j - first];
  } else {
    for (int j = 0; j < m; ++j) acc += a[j] * x[wrap(s * j + off, n)];
  }
  return acc;
}

// Four partial sums so the reduction is not latency bound.
double dot4(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    s0 += a[t] * b[t];
    s1 += a[t + 1] * b[t + 1];
    s2 += a[t + 2] * b[t + 2];
    s3 += a[t + 3] * b[t + 3];
  }
  for (; t < n; ++t) s0 += a[t] * b[t];
  return (s0 + s1) + (s2 + s3);
}

// Periodic halo of width p around an h x w plane; row stride w + 2p.
void fill_halo(const double* x, int h, int w, int p, double* out) {
  const int W = w + 2 * p;
  for (int r = 0; r < h + 2 * p; ++r) {
    const double* src = x + static_cast<std::size_t>(wrap(r - p, h)) * w;
    double* dst = out + static_cast<std::size_t>(r) * W;
    for (int c = 0; c < W; ++c) dst[c] = src[wrap(c - p, w)];
  }
}

// Stride-1 convolutions run on halo-padded planes: each tap is then a single
// contiguous axpy/dot over (h-1)*W + w entries, with the 2p junk columns per
// row ignored.
struct Padded {
  int h, w, p, W;
  std::size_t len() const { return static_cast<std::size_t>(h - 1) * W + w; }
  std::size_t halo_size() const { return static_cast<std::size_t>(h + 2 * p) * W; }
};

}  // namespace

Tensor4 conv2d_periodic(const Tensor4& x, const double* kernel, const double* bias, const ConvShape& s) {
  check_conv(x, s);
  if (x.h % s.stride || x.w % s.stride) throw InvalidArgument("conv: stride must divide spatial dims");
  const int ho = x.h / s.stride, wo = x.w / s.stride, pad = s.k / 2;
  Tensor4 y(x.n, s.out, ho, wo);
  if (s.stride == 1) {
    const Padded g{x.h, x.w, pad, x.w + 2 * pad};
    std::vector<double> xh(g.halo_size() * s.in), acc(g.len());
    for (int b = 0; b < x.n; ++b) {
      for (int c = 0; c < s.in; ++c) fill_halo(x.data(b, c), x.h, x.w, pad, xh.data() + g.halo_size() * c);
      for (int o = 0; o < s.out; ++o) {
        std::fill(acc.begin(), acc.end(), bias ? bias[o] : 0.0);
        for (int c = 0; c < s.in; ++c) {
          const double* kp = kernel + (static_cast<std::size_t>(o) * s.in + c) * s.k * s.k;
          for (int p = 0; p < s.k; ++p)
            for (int q = 0; q < s.k; ++q) {
              const double kv = kp[p * s.k + q];
              const double* src = xh.data() + g.halo_size() * c + static_cast<std::size_t>(p) * g.W + q;
              double* a = acc.data();
              const std::size_t n = g.len();
              for (std::size_t t = 0; t < n; ++t) a[t] += kv * src[t];
            }
        }
        double* yp = y.data(b, o);
        for (int i = 0; i < ho; ++i)
          std::copy_n(acc.data() + static_cast<std::size_t>(i) * g.W, wo, yp + static_cast<std::size_t>(i) * wo);
      }
    }
    return y;
  }
  for (int b = 0; b < x.n; ++b)
    for (int o = 0; o < s.out; ++o) {
      double* yp = y.data(b, o);
      if (bias)
        for (std::size_t t = 0; t < y.plane(); ++t) yp[t] = bias[o];
      for (int c = 0; c < s.in; ++c) {
        const double* xp = x.data(b, c);
        const double* kp = kernel + (static_cast<std::size_t>(o) * s.in + c) * s.k * s.k;
        for (int p = 0; p < s.k; ++p)
          for (int i = 0; i < ho; ++i) {
            const double* xr = xp + static_cast<std::size_t>(wrap(s.stride * i + p - pad, x.h)) * x.w;
            double* yr = yp + static_cast<std::size_t>(i) * wo;
            for (int q = 0; q < s.k; ++q) shifted_axpy(yr, xr, kp[p * s.k + q], wo, x.w, s.stride, q - pad);
          }
      }
    }
  return y;
}

void conv2d_periodic_backward(const Tensor4& x, const double* kernel, const ConvShape& s, const Tensor4& dy,
                              Tensor4* dx, double* dk, double* db) {
  check_conv(x, s);
  const int ho = dy.h, wo = dy.w, pad = s.k / 2;
  if (dx && !dx->same_shape(x)) *dx = Tensor4(x.n, x.c, x.h, x.w);
  if (s.stride == 1) {
    const Padded g{x.h, x.w, pad, x.w + 2 * pad};
    const std::size_t n = g.len();
    std::vector<double> xh(dk ? g.halo_size() * s.in : 0), dxh(dx ? g.halo_size() * s.in : 0), gb(n);
    for (int b = 0; b < x.n; ++b) {
      if (dk)
        for (int c = 0; c < s.in; ++c) fill_halo(x.data(b, c), x.h, x.w, pad, xh.data() + g.halo_size() * c);
      std::fill(dxh.begin(), dxh.end(), 0.0);
      for (int o = 0; o < s.out; ++o) {
        const double* gp = dy.data(b, o);
        if (db)
          for (std::size_t t = 0; t < dy.plane(); ++t) db[o] += gp[t];
        std::fill(gb.begin(), gb.end(), 0.0);
        for (int i = 0; i < ho; ++i)
          std::copy_n(gp + static_cast<std::size_t>(i) * wo, wo, gb.data() + static_cast<std::size_t>(i) * g.W);
        for (int c = 0; c < s.in; ++c) {
          const std::size_t kbase = (static_cast<std::size_t>(o) * s.in + c) * s.k * s.k;
          for (int p = 0; p < s.k; ++p)
            for (int q = 0; q < s.k; ++q) {
              const std::size_t off = g.halo_size() * c + static_cast<std::size_t>(p) * g.W + q;
              if (dk) {
                const double* src = xh.data() + off;
                dk[kbase + p * s.k + q] += dot4(gb.data(), src, n);
              }
              if (dx) {
                const double kv = kernel[kbase + p * s.k + q];
                double* dst = dxh.data() + off;
                for (std::size_t t = 0; t < n; ++t) dst[t] += kv * gb[t];
              }
            }
        }
      }
      if (dx)
        for (int c = 0; c < s.in; ++c) {
          double* d = dx->data(b, c);
          const double* hp = dxh.data() + g.halo_size() * c;
          for (int r = 0; r < x.h + 2 * pad; ++r) {
            double* row = d + static_cast<std::size_t>(wrap(r - pad, x.h)) * x.w;
            for (int cc = 0; cc < g.W; ++cc) row[wrap(cc - pad, x.w)] += hp[static_cast<std::size_t>(r) * g.W + cc];
          }
        }
    }
    return;
  }
  for (int b = 0; b < x.n; ++b)
    for (int o = 0; o < s.out; ++o) {
      const double* gp = dy.data(b, o);
      if (db)
        for (std::size_t t = 0; t < dy.plane(); ++t) db[o] += gp[t];
      for (int c = 0; c < s.in; ++c) {
        const double* xp = x.data(b, c);
        const std::size_t kbase = (static_cast<std::size_t>(o) * s.in + c) * s.k * s.k;
        for (int p = 0; p < s.k; ++p)
          for (int i = 0; i < ho; ++i) {
            const std::size_t row = static_cast<std::size_t>(wrap(s.stride * i + p - pad, x.h)) * x.w;
            const double* gr = gp + static_cast<std::size_t>(i) * wo;
            for (int q = 0; q < s.k; ++q) {
              if (dk) dk[kbase + p * s.k + q] += shifted_dot(gr, xp + row, wo, x.w, s.stride, q - pad);
              if (dx) shifted_scatter(dx->data(b, c) + row, gr, kernel[kbase + p * s.k + q], wo, x.w, s.stride, q - pad);
            }
          }
      }
    }
}

Tensor4 conv_transpose2d_periodic(const Tensor4& x, const double* kernel, const double* bias, const ConvShape& s) {
  check_conv(x, s);
  const int ho = x.h * s.stride, wo = x.w * s.stride, pad = s.k / 2;
  Tensor4 y(x.n, s.out, ho, wo);
  for (int b = 0; b < x.n; ++b)
    for (int o = 0; o < s.out; ++o) {
      double* yp = y.data(b, o);
      if (bias)
        for (std::size_t t = 0; t < y.plane(); ++t) yp[t] = bias[o];
      for (int c = 0; c < s.in; ++c) {
        const double* xp = x.data(b, c);
        const double* kp = kernel + (static_cast<std::size_t>(c) * s.out + o) * s.k * s.k;
        for (int p = 0; p < s.k; ++p)
          for (int i = 0; i < x.h; ++i) {
            double* yr = yp + static_cast<std::size_t>(wrap(s.stride * i + p - pad, ho)) * wo;
            const double* xr = xp + static_cast<std::size_t>(i) * x.w;
            for (int q = 0; q < s.k; ++q) shifted_scatter(yr, xr, kp[p * s.k + q], x.w, wo, s.stride, q - pad);
          }
      }
    }
  return y;
}

void conv_transpose2d_periodic_backward(const Tensor4& x, const double* kernel, const ConvShape& s,
                                        const Tensor4& dy, Tensor4* dx, double* dk, double* db) {
  check_conv(x, s);
  const int ho = dy.h, wo = dy.w, pad = s.k / 2;
  if (dx && !dx->same_shape(x)) *dx = Tensor4(x.n, x.c, x.h, x.w);
  for (int b = 0; b < x.n; ++b)
    for (int o = 0; o < s.out; ++o) {
      const double* gp = dy.data(b, o);
      if (db)
        for (std::size_t t = 0; t < dy.plane(); ++t) db[o] += gp[t];
      for (int c = 0; c < s.in; ++c) {
        const double* xp = x.data(b, c);
        const std::size_t kbase = (static_cast<std::size_t>(c) * s.out + o) * s.k * s.k;
        for (int p = 0; p < s.k; ++p)
          for (int i = 0; i < x.h; ++i) {
            const double* gr = gp + static_cast<std::size_t>(wrap(s.stride * i + p - pad, ho)) * wo;
            const double* xr = xp + static_cast<std::size_t>(i) * x.w;
            for (int q = 0; q < s.k; ++q) {
              if (dk) dk[kbase + p * s.k + q] += shifted_dot(xr, gr, x.w, wo, s.stride, q - pad);
              if (dx) {
                double* dxr = dx->data(b, c) + static_cast<std::size_t>(i) * x.w;
                const double w = kernel[kbase + p * s.k + q];
                for (int j = 0; j < x.w; ++j) dxr[j] += w * gr[wrap(s.stride * j + q - pad, wo)];
              }
            }
          }
      }
    }
}

namespace {

using cplx = std::complex<double>;

struct ModeIndex {
  int row;  // FFT row of kx
  int col;  // ky
  std::size_t w;  // offset into [2m-1][m]
};

std::vector<ModeIndex> retained_modes(int h, int m) {
  std::vector<ModeIndex> idx;
  for (int t = 0; t < 2 * m - 1; ++t)
    for (int ky = 0; ky < m; ++ky)
      idx.push_back({wrap(t - (m - 1), h), ky, static_cast<std::size_t>(t) * m + ky});
  return idx;
}

void check_spectral(const Tensor4& x, const SpectralShape& s) {
  if (x.c != s.in) throw InvalidArgument("spectral_conv: channel mismatch");
  if (s.modes < 1 || 2 * s.modes > x.h || 2 * s.modes > x.w)
    throw InvalidArgument("spectral_conv: modes must not exceed n/2");
}

}  // namespace

Tensor4 spectral_conv(const Tensor4& x, const double* wr, const double* wi, const SpectralShape& s) {
  check_spectral(x, s);
  const int hc = x.w / 2 + 1;
  const std::size_t nspec = static_cast<std::size_t>(x.h) * hc;
  const std::size_t per = static_cast<std::size_t>(2 * s.modes - 1) * s.modes;
  const auto modes = retained_modes(x.h, s.modes);
  const double norm = 1.0 / (static_cast<double>(x.h) * x.w);
  Tensor4 y(x.n, s.out, x.h, x.w);
  std::vector<cplx> X(nspec * s.in), Y(nspec);
  for (int b = 0; b < x.n; ++b) {
    for (int c = 0; c < s.in; ++c) fft::forward(x.data(b, c), x.h, x.w, X.data() + nspec * c);
    for (int o = 0; o < s.out; ++o) {
      std::fill(Y.begin(), Y.end(), cplx(0.0));
      for (int c = 0; c < s.in; ++c) {
        const std::size_t wb = (static_cast<std::size_t>(c) * s.out + o) * per;
        for (const auto& m : modes) {
          const std::size_t k = static_cast<std::size_t>(m.row) * hc + m.col;
          Y[k] += cplx(wr[wb + m.w], wi[wb + m.w]) * X[nspec * c + k];
        }
      }
      double* yp = y.data(b, o);
      fft::inverse(Y.data(), x.h, x.w, yp);
      for (std::size_t t = 0; t < y.plane(); ++t) yp[t] *= norm;
    }
  }
  return y;
}

void spectral_conv_backward(const Tensor4& x, const double* wr, const double* wi, const SpectralShape& s,
                            const Tensor4& dy, Tensor4* dx, double* dwr, double* dwi) {
  check_spectral(x, s);
  const int hc = x.w / 2 + 1;
  const std::size_t nspec = static_cast<std::size_t>(x.h) * hc;
  const std::size_t per = static_cast<std::size_t>(2 * s.modes - 1) * s.modes;
  const auto modes = retained_modes(x.h, s.modes);
  const double norm = 1.0 / (static_cast<double>(x.h) * x.w);
  if (dx && !dx->same_shape(x)) *dx = Tensor4(x.n, x.c, x.h, x.w);
  std::vector<cplx> X(nspec * s.in), G(nspec * s.out), GX(nspec);
  std::vector<double> tmp(x.plane());
  for (int b = 0; b < x.n; ++b) {
    for (int c = 0; c < s.in; ++c) fft::forward(x.data(b, c), x.h, x.w, X.data() + nspec * c);
    // Gradient with respect to Y(k): (c_k / N) rfft(dy), c_k = 1 on ky = 0, else 2.
    for (int o = 0; o < s.out; ++o) {
      fft::forward(dy.data(b, o), x.h, x.w, G.data() + nspec * o);
      for (int ky_row = 0; ky_row < x.h; ++ky_row)
        for (int ky = 0; ky < hc; ++ky) {
          const double ck = (ky == 0 || (x.w % 2 == 0 && ky == x.w / 2)) ? 1.0 : 2.0;
          G[nspec * o + static_cast<std::size_t>(ky_row) * hc + ky] *= ck * norm;
        }
    }
    for (int c = 0; c < s.in; ++c) {
      std::fill(GX.begin(), GX.end(), cplx(0.0));
      for (int o = 0; o < s.out; ++o) {
        const std::size_t wb = (static_cast<std::size_t>(c) * s.out + o) * per;
        for (const auto& m : modes) {
          const std::size_t k = static_cast<std::size_t>(m.row) * hc + m.col;
          const cplx g = G[nspec * o + k];
          if (dwr) {
            const cplx d = g * std::conj(X[nspec * c + k]);
            dwr[wb + m.w] += d.real();
            dwi[wb + m.w] += d.imag();
          }
          GX[k] += std::conj(cplx(wr[wb + m.w], wi[wb + m.w])) * g;
        }
      }
      if (dx) {
        // dx = c2r(GX / c_k).
        for (const auto& m : modes) {
          const std::size_t k = static_cast<std::size_t>(m.row) * hc + m.col;
          if (m.col != 0) GX[k] *= 0.5;
        }
        fft::inverse(GX.data(), x.h, x.w, tmp.data());
        double* dxp = dx->data(b, c);
        for (std::size_t t = 0; t < tmp.size(); ++t) dxp[t] += tmp[t];
      }
    }
  }
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  if (name == "gelu") return Activation::gelu;
  throw InvalidArgument("unknown activation: " + name);
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
    case Activation::gelu: return "gelu";
  }
  return "identity";
}

namespace {

double act(double x, Activation a) {
  switch (a) {
    case Activation::identity: return x;
    case Activation::tanh: return std::tanh(x);
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::gelu: return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2));
  }
  return x;
}

double act_prime(double x, Activation a) {
  switch (a) {
    case Activation::identity: return 1.0;
    case Activation::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::gelu:
      return 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2)) +
             x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  }
  return 1.0;
}

}  // namespace

Tensor4 activate(const Tensor4& x, Activation a) {
  Tensor4 y = x;
  if (a != Activation::identity)
    for (double& t : y.v) t = act(t, a);
  return y;
}

Tensor4 activate_backward(const Tensor4& x, Activation a, const Tensor4& dy) {
  Tensor4 dx = dy;
  if (a != Activation::identity)
    for (std::size_t k = 0; k < dx.v.size(); ++k) dx.v[k] *= act_prime(x.v[k], a);
  return dx;
}

}  // namespace pfno::nn
