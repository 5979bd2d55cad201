#pragma once

#include <complex>
#include <vector>

namespace ltrace {

/// n-dimensional complex FFT on a row-major grid (last axis fastest).
/// Plans are created under a global lock (the FFTW planner is not
/// thread-safe); execution is lock-free and each object owns its buffers, so
/// one FftPlan per worker is safe.
class FftPlan {
 public:
  explicit FftPlan(const std::vector<int>& dims);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return size_; }

  /// In place, unnormalized: forward uses e^{-i k x}, backward e^{+i k x}.
  void forward(std::vector<std::complex<double>>& data);
  void backward(std::vector<std::complex<double>>& data);

 private:
  void execute(void* plan, std::vector<std::complex<double>>& data);

  std::vector<int> dims_;
  std::size_t size_ = 0;
  std::complex<double>* buffer_ = nullptr;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

}  // namespace ltrace
