#include "pfno/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace pfno::fft {
namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
// Plans are created once per shape under a lock and never destroyed.
struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_fwd = nullptr;
  fftw_plan c2c_bwd = nullptr;
};

std::mutex plan_mutex;
std::map<std::pair<int, int>, Plans> plan_cache;

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

const Plans& plans_for(int rows, int cols) {
  std::lock_guard lock(plan_mutex);
  auto [it, inserted] = plan_cache.try_emplace({rows, cols});
  if (inserted) {
    double* r = fftw_alloc_real(static_cast<std::size_t>(rows) * cols);
    fftw_complex* c = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    fftw_complex* c2 = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    it->second.r2c = fftw_plan_dft_r2c_2d(rows, cols, r, c, kFlags);
    it->second.c2r = fftw_plan_dft_c2r_2d(rows, cols, c, r, kFlags);
    it->second.c2c_fwd = fftw_plan_dft_2d(rows, cols, c, c2, FFTW_FORWARD, kFlags);
    it->second.c2c_bwd = fftw_plan_dft_2d(rows, cols, c, c2, FFTW_BACKWARD, kFlags);
    fftw_free(r);
    fftw_free(c);
    fftw_free(c2);
  }
  return it->second;
}

}  // namespace

void forward(const double* in, int rows, int cols, cplx* out) {
  const Plans& p = plans_for(rows, cols);
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

std::vector<cplx> forward(const std::vector<double>& in, int rows, int cols) {
  std::vector<cplx> out(static_cast<std::size_t>(rows) * (cols / 2 + 1));
  forward(in.data(), rows, cols, out.data());
  return out;
}

void inverse(const cplx* in, int rows, int cols, double* out) {
  const Plans& p = plans_for(rows, cols);
  // c2r overwrites its input. Columns ky = 0 (and ky = cols/2) are made
  // Hermitian in kx so the result is the real part of the full inverse.
  const int hc = cols / 2 + 1;
  std::vector<cplx> scratch(in, in + static_cast<std::size_t>(rows) * hc);
  auto symmetrize = [&](int ky) {
    for (int kx = 0; kx <= rows / 2; ++kx) {
      const int mx = (rows - kx) % rows;
      const cplx a = scratch[static_cast<std::size_t>(kx) * hc + ky];
      const cplx b = scratch[static_cast<std::size_t>(mx) * hc + ky];
      const cplx s = 0.5 * (a + std::conj(b));
      scratch[static_cast<std::size_t>(kx) * hc + ky] = s;
      scratch[static_cast<std::size_t>(mx) * hc + ky] = std::conj(s);
    }
  };
  symmetrize(0);
  if (cols % 2 == 0) symmetrize(cols / 2);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

void complex_transform(const cplx* in, int rows, int cols, int sign, cplx* out) {
  const Plans& p = plans_for(rows, cols);
  fftw_execute_dft(sign < 0 ? p.c2c_fwd : p.c2c_bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace pfno::fft
