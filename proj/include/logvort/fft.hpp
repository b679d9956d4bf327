#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace logvort::detail {

/// Cached complex-to-complex FFTW plans per grid size. FFTW_ESTIMATE keeps the
/// algorithm choice deterministic across runs, which the byte-identical output
/// contract depends on. Transforms run single-threaded; callers parallelise at
/// a coarser grain.
class FftPlans {
 public:
  static FftPlans& get(int n) {
    static std::mutex registry_mu;
    static std::map<int, std::unique_ptr<FftPlans>> registry;
    std::lock_guard<std::mutex> lock(registry_mu);
    auto it = registry.find(n);
    if (it == registry.end()) {
      it = registry.emplace(n, std::unique_ptr<FftPlans>(new FftPlans(n))).first;
    }
    return *it->second;
  }

  /// out = sum_m in_m e^{-2 pi i j.m / n} (per axis), FFTW forward convention.
  void forward(const std::complex<double>* in, std::complex<double>* out) { execute(fwd_, in, out); }

  /// out = sum_j in_j e^{+2 pi i j.m / n}, unnormalized.
  void backward(const std::complex<double>* in, std::complex<double>* out) { execute(bwd_, in, out); }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  ~FftPlans() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_in_);
    fftw_free(buf_out_);
  }

 private:
  explicit FftPlans(int n) : n_(n) {
    const std::size_t count = static_cast<std::size_t>(n) * n;
    buf_in_ = fftw_alloc_complex(count);
    buf_out_ = fftw_alloc_complex(count);
    if (!buf_in_ || !buf_out_) throw std::runtime_error("FftPlans: allocation failed");
    fwd_ = fftw_plan_dft_2d(n, n, buf_in_, buf_out_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(n, n, buf_in_, buf_out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("FftPlans: planning failed");
  }

  void execute(fftw_plan plan, const std::complex<double>* in, std::complex<double>* out) {
    const std::size_t count = static_cast<std::size_t>(n_) * n_;
    std::lock_guard<std::mutex> lock(mu_);
    auto* bi = reinterpret_cast<std::complex<double>*>(buf_in_);
    auto* bo = reinterpret_cast<std::complex<double>*>(buf_out_);
    std::copy(in, in + count, bi);
    fftw_execute(plan);
    std::copy(bo, bo + count, out);
  }

  int n_;
  fftw_complex* buf_in_ = nullptr;
  fftw_complex* buf_out_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
  std::mutex mu_;
};

}  // namespace logvort::detail
