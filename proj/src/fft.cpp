#include "ltrace/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "ltrace/errors.hpp"

namespace ltrace {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(const std::vector<int>& dims) : dims_(dims) {
  if (dims_.empty()) throw DomainError("FftPlan: no dimensions");
  size_ = 1;
  for (int d : dims_) {
    if (d < 1) throw DomainError("FftPlan: dimensions must be positive");
    size_ *= static_cast<std::size_t>(d);
  }
  std::lock_guard<std::mutex> lock(planner_mutex());
  buffer_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size_));
  if (!buffer_) throw Error("FftPlan: allocation failed");
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  forward_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_ || !backward_) throw Error("FftPlan: planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  if (buffer_) fftw_free(buffer_);
}

void FftPlan::execute(void* plan, std::vector<std::complex<double>>& data) {
  if (data.size() != size_) throw DimensionError("FftPlan: data size", static_cast<long>(size_), static_cast<long>(data.size()));
  std::copy(data.begin(), data.end(), buffer_);
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  fftw_execute_dft(static_cast<fftw_plan>(plan), buf, buf);
  std::copy(buffer_, buffer_ + size_, data.begin());
}

void FftPlan::forward(std::vector<std::complex<double>>& data) { execute(forward_, data); }
void FftPlan::backward(std::vector<std::complex<double>>& data) { execute(backward_, data); }

}  // namespace ltrace
