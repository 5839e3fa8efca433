#include "pfno/nn/models.hpp"

#include "pfno/error.hpp"

namespace pfno::nn {

namespace {

ConvShape shape_of(const ModelWeights& w, const std::string& name, int stride) {
  const auto& s = w.tensors.at(name + ".w").shape;
  return ConvShape{s[1], s[0], s[2], stride};
}

Tensor4 conv(const ModelWeights& w, const std::string& name, const Tensor4& x, int stride = 1) {
  return conv2d_periodic(x, w.ptr(name + ".w"), w.ptr(name + ".b"), shape_of(w, name, stride));
}

Tensor4 conv_back(const ModelWeights& w, const std::string& name, const Tensor4& x, const Tensor4& dy,
                  ModelWeights& g, int stride = 1) {
  Tensor4 dx;
  conv2d_periodic_backward(x, w.ptr(name + ".w"), shape_of(w, name, stride), dy, &dx, g.ptr(name + ".w"),
                           g.ptr(name + ".b"));
  return dx;
}

ConvShape tshape_of(const ModelWeights& w, const std::string& name) {
  const auto& s = w.tensors.at(name + ".w").shape;
  return ConvShape{s[0], s[1], s[2], 2};
}

void add_into(Tensor4& a, const Tensor4& b) {
  for (std::size_t k = 0; k < a.v.size(); ++k) a.v[k] += b.v[k];
}

const Tensor4& get(const Cache& c, const std::string& k) {
  auto it = c.find(k);
  if (it == c.end()) throw InvalidArgument("backward: cache lacks " + k);
  return it->second;
}

Tensor4 double_conv(const ModelWeights& w, const std::string& name, const Tensor4& x, Activation a, Cache* c) {
  Tensor4 p1 = conv(w, name + ".c1", x);
  Tensor4 h1 = activate(p1, a);
  Tensor4 p2 = conv(w, name + ".c2", h1);
  Tensor4 out = activate(p2, a);
  if (c) {
    (*c)[name + ".in"] = x;
    (*c)[name + ".p1"] = std::move(p1);
    (*c)[name + ".h1"] = std::move(h1);
    (*c)[name + ".p2"] = std::move(p2);
  }
  return out;
}

Tensor4 double_conv_back(const ModelWeights& w, const std::string& name, const Cache& c, const Tensor4& dy,
                         Activation a, ModelWeights& g) {
  Tensor4 d = activate_backward(get(c, name + ".p2"), a, dy);
  d = conv_back(w, name + ".c2", get(c, name + ".h1"), d, g);
  d = activate_backward(get(c, name + ".p1"), a, d);
  return conv_back(w, name + ".c1", get(c, name + ".in"), d, g);
}

}  // namespace

Network::Network(ArchitectureSpec spec, DendriteParams phys) : spec_(std::move(spec)), phys_(phys) {}

Tensor4 Network::forward(const ModelWeights& w, const Tensor4& x, Cache* cache) const {
  if (x.c != spec_.input_channels()) throw InvalidArgument("network: input channel mismatch");
  switch (spec_.kind) {
    case ModelKind::rdno: return forward_rdno(w, x, cache);
    case ModelKind::unet: return forward_unet(w, x, cache);
    case ModelKind::fno: return forward_fno(w, x, cache);
    case ModelKind::prescribed_rdno: {
      Tensor4 r = reaction(x);
      if (cache) (*cache)["pr.x"] = x;
      return forward_unet(w, r, cache);
    }
  }
  throw InvalidArgument("network: unknown kind");
}

Tensor4 Network::backward(const ModelWeights& w, const Cache& cache, const Tensor4& dy, ModelWeights& grad) const {
  switch (spec_.kind) {
    case ModelKind::rdno: return backward_rdno(w, cache, dy, grad);
    case ModelKind::unet: return backward_unet(w, cache, dy, grad);
    case ModelKind::fno: return backward_fno(w, cache, dy, grad);
    case ModelKind::prescribed_rdno: {
      const Tensor4 dr = backward_unet(w, cache, dy, grad);
      return reaction_backward(get(cache, "pr.x"), dr);
    }
  }
  throw InvalidArgument("network: unknown kind");
}

// ---- RDNO: diffusion conv after a residual reaction stack.

Tensor4 Network::forward_rdno(const ModelWeights& w, const Tensor4& x, Cache* c) const {
  const auto& r = spec_.rdno;
  Tensor4 h = conv(w, "lift", x);
  if (c) (*c)["x"] = x;
  for (int i = 0; i < r.depth; ++i) {
    const std::string s = std::to_string(i);
    Tensor4 z = conv(w, "react" + s, h);
    Tensor4 a = activate(z, r.activation);
    if (c) {
      (*c)["h" + s] = h;
      (*c)["z" + s] = std::move(z);
    }
    add_into(h, a);
  }
  if (c) (*c)["hL"] = h;
  Tensor4 p = conv(w, "proj", h);
  Tensor4 y = conv(w, "diff", p);
  if (c) (*c)["p"] = std::move(p);
  return y;
}

Tensor4 Network::backward_rdno(const ModelWeights& w, const Cache& c, const Tensor4& dy, ModelWeights& g) const {
  const auto& r = spec_.rdno;
  Tensor4 d = conv_back(w, "diff", get(c, "p"), dy, g);
  d = conv_back(w, "proj", get(c, "hL"), d, g);
  for (int i = r.depth - 1; i >= 0; --i) {
    const std::string s = std::to_string(i);
    Tensor4 dz = activate_backward(get(c, "z" + s), r.activation, d);
    add_into(d, conv_back(w, "react" + s, get(c, "h" + s), dz, g));
  }
  return conv_back(w, "lift", get(c, "x"), d, g);
}

// ---- UNet with strided-conv downsampling, transpose-conv upsampling and
// concatenated skips.

Tensor4 Network::forward_unet(const ModelWeights& w, const Tensor4& x, Cache* c) const {
  const auto& u = spec_.unet;
  if (x.h % (1 << u.levels) || x.w % (1 << u.levels))
    throw InvalidArgument("unet: spatial dims must be divisible by 2^levels");
  std::vector<Tensor4> skips;
  Tensor4 cur = double_conv(w, "lift", x, u.activation, c);
  skips.push_back(cur);
  for (int l = 0; l < u.levels; ++l) {
    const std::string s = std::to_string(l);
    if (c) (*c)["down" + s + ".in"] = cur;
    Tensor4 d = conv(w, "down" + s, cur, 2);
    cur = double_conv(w, "enc" + s, d, u.activation, c);
    skips.push_back(cur);
  }
  for (int l = u.levels - 1; l >= 0; --l) {
    const std::string s = std::to_string(l);
    if (c) (*c)["up" + s + ".in"] = cur;
    Tensor4 up = conv_transpose2d_periodic(cur, w.ptr("up" + s + ".w"), w.ptr("up" + s + ".b"), tshape_of(w, "up" + s));
    cur = double_conv(w, "dec" + s, concat_channels(up, skips[l]), u.activation, c);
  }
  if (c) (*c)["proj.in"] = cur;
  return conv(w, "proj", cur);
}

Tensor4 Network::backward_unet(const ModelWeights& w, const Cache& c, const Tensor4& dy, ModelWeights& g) const {
  const auto& u = spec_.unet;
  std::vector<Tensor4> dskip(u.levels);
  Tensor4 d = conv_back(w, "proj", get(c, "proj.in"), dy, g);
  for (int l = 0; l < u.levels; ++l) {
    const std::string s = std::to_string(l);
    Tensor4 dcat = double_conv_back(w, "dec" + s, c, d, u.activation, g);
    const int cu = w.tensors.at("up" + s + ".w").shape[1];
    Tensor4 dup;
    split_channels(dcat, cu, dup, dskip[l]);
    const Tensor4& in = get(c, "up" + s + ".in");
    Tensor4 din;
    conv_transpose2d_periodic_backward(in, w.ptr("up" + s + ".w"), tshape_of(w, "up" + s), dup, &din,
                                       g.ptr("up" + s + ".w"), g.ptr("up" + s + ".b"));
    d = std::move(din);
  }
  for (int l = u.levels - 1; l >= 0; --l) {
    const std::string s = std::to_string(l);
    Tensor4 dd = double_conv_back(w, "enc" + s, c, d, u.activation, g);
    d = conv_back(w, "down" + s, get(c, "down" + s + ".in"), dd, g, 2);
    add_into(d, dskip[l]);
  }
  return double_conv_back(w, "lift", c, d, u.activation, g);
}

std::vector<int> Network::unet_resolutions(int n) const {
  std::vector<int> r{n};
  for (int l = 0; l < spec_.unet.levels; ++l) r.push_back(r.back() / 2);
  return r;
}

// ---- FNO: lifting, spectral layers with a 1x1 bypass, projection.

Tensor4 Network::forward_fno(const ModelWeights& w, const Tensor4& x, Cache* c) const {
  const auto& f = spec_.fno;
  const SpectralShape ss{f.width, f.width, f.modes};
  if (c) (*c)["x"] = x;
  Tensor4 h = conv(w, "lift", x);
  for (int l = 0; l < f.layers; ++l) {
    const std::string s = std::to_string(l);
    Tensor4 z = spectral_conv(h, w.ptr("spec" + s + ".wr"), w.ptr("spec" + s + ".wi"), ss);
    add_into(z, conv(w, "skip" + s, h));
    if (c) (*c)["h" + s] = h;
    h = activate(z, l + 1 < f.layers ? f.activation : Activation::identity);
    if (c) (*c)["z" + s] = std::move(z);
  }
  if (c) (*c)["hL"] = h;
  return conv(w, "proj", h);
}

Tensor4 Network::backward_fno(const ModelWeights& w, const Cache& c, const Tensor4& dy, ModelWeights& g) const {
  const auto& f = spec_.fno;
  const SpectralShape ss{f.width, f.width, f.modes};
  Tensor4 d = conv_back(w, "proj", get(c, "hL"), dy, g);
  for (int l = f.layers - 1; l >= 0; --l) {
    const std::string s = std::to_string(l);
    Tensor4 dz = activate_backward(get(c, "z" + s), l + 1 < f.layers ? f.activation : Activation::identity, d);
    const Tensor4& h = get(c, "h" + s);
    Tensor4 dh;
    spectral_conv_backward(h, w.ptr("spec" + s + ".wr"), w.ptr("spec" + s + ".wi"), ss, dz, &dh,
                           g.ptr("spec" + s + ".wr"), g.ptr("spec" + s + ".wi"));
    add_into(dh, conv_back(w, "skip" + s, h, dz, g));
    d = std::move(dh);
  }
  return conv_back(w, "lift", get(c, "x"), d, g);
}

// ---- Prescribed reaction phi - (dt/tau) dE2/dphi(phi, U), pointwise.

Tensor4 Network::reaction(const Tensor4& x) const {
  const auto& p = phys_;
  const double r = p.dt / p.tau, ie2 = 1.0 / (p.eps * p.eps), ch = p.lambda0 / p.eps;
  Tensor4 out(x.n, 1, x.h, x.w);
  for (int b = 0; b < x.n; ++b) {
    const double* phi = x.data(b, 0);
    const double* U = x.data(b, 1);
    double* o = out.data(b, 0);
    for (std::size_t k = 0; k < x.plane(); ++k) {
      const double f = phi[k];
      const double g = (f * f * f - f) * ie2 + ch * (f * f - 1.0) * (f * f - 1.0) * U[k] - p.beta * f * ie2;
      o[k] = f - r * g;
    }
  }
  return out;
}

Tensor4 Network::reaction_backward(const Tensor4& x, const Tensor4& dr) const {
  const auto& p = phys_;
  const double r = p.dt / p.tau, ie2 = 1.0 / (p.eps * p.eps), ch = p.lambda0 / p.eps;
  Tensor4 dx(x.n, 2, x.h, x.w);
  for (int b = 0; b < x.n; ++b) {
    const double* phi = x.data(b, 0);
    const double* U = x.data(b, 1);
    const double* g = dr.data(b, 0);
    double* dphi = dx.data(b, 0);
    double* dU = dx.data(b, 1);
    for (std::size_t k = 0; k < x.plane(); ++k) {
      const double f = phi[k];
      const double s = f * f - 1.0;
      const double dgdf = (3.0 * f * f - 1.0) * ie2 + ch * 4.0 * f * s * U[k] - p.beta * ie2;
      dphi[k] = g[k] * (1.0 - r * dgdf);
      dU[k] = -g[k] * r * ch * s * s;
    }
  }
  return dx;
}

Tensor4 forward_rdno(const Tensor4& u, const ModelWeights& w, const ArchitectureSpec& spec) {
  if (spec.kind != ModelKind::rdno) throw InvalidArgument("forward_rdno: spec kind is not rdno");
  return Network(spec).forward(w, u);
}

Tensor4 forward_prescribed_rdno(const Tensor4& phi, const Tensor4& U, const ModelWeights& w,
                                const ArchitectureSpec& spec, const DendriteParams& p) {
  if (spec.kind != ModelKind::prescribed_rdno) throw InvalidArgument("forward_prescribed_rdno: wrong spec kind");
  if (phi.c != 1 || U.c != 1 || phi.n != U.n || phi.h != U.h || phi.w != U.w)
    throw InvalidArgument("forward_prescribed_rdno: phi and U must be single-channel with equal shape");
  return Network(spec, p).forward(w, concat_channels(phi, U));
}

Tensor4 forward_unet(const Tensor4& x, const ModelWeights& w, const ArchitectureSpec& spec) {
  if (spec.kind != ModelKind::unet) throw InvalidArgument("forward_unet: spec kind is not unet");
  return Network(spec).forward(w, x);
}

Tensor4 forward_fno(const Tensor4& x, const ModelWeights& w, const ArchitectureSpec& spec) {
  if (spec.kind != ModelKind::fno) throw InvalidArgument("forward_fno: spec kind is not fno");
  return Network(spec).forward(w, x);
}

ModelWeights identity_rdno_weights(const ArchitectureSpec& spec) {
  ModelWeights w = zero_weights(spec);
  // lift = e_0, proj = e_0^T.
  w.ptr("lift.w")[0] = 1.0;
  w.ptr("proj.w")[0] = 1.0;
  const int k = spec.rdno.diffusion_kernel;
  w.ptr("diff.w")[(k / 2) * k + k / 2] = 1.0;
  return w;
}

}  // namespace pfno::nn
