#include "srsp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace srsp {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  fftw_plan forward_unaligned = nullptr;
  fftw_plan backward_unaligned = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plans] : plans_) {
      fftw_destroy_plan(plans.forward);
      fftw_destroy_plan(plans.backward);
      fftw_destroy_plan(plans.forward_unaligned);
      fftw_destroy_plan(plans.backward_unaligned);
    }
  }

  const PlanPair& get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    fftw_complex* in = fftw_alloc_complex(total);
    fftw_complex* out = fftw_alloc_complex(total);
    // FFTW_ESTIMATE keeps plan selection, and hence rounding, deterministic.
    const unsigned unaligned = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair plans;
    plans.forward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    plans.backward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    plans.forward_unaligned = fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, unaligned);
    plans.backward_unaligned = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, unaligned);
    fftw_free(in);
    fftw_free(out);
    return plans_.emplace(n, plans).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

Eigen::ArrayXcd execute(fftw_plan aligned, fftw_plan unaligned, const Eigen::ArrayXcd& input) {
  // FFTW's new-array execute does not modify the input for out-of-place plans.
  Eigen::ArrayXcd output(input.size());
  auto* in = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(input.data()));
  auto* out = reinterpret_cast<fftw_complex*>(output.data());
  const bool simd_ok = fftw_alignment_of(reinterpret_cast<double*>(in)) == 0 &&
                       fftw_alignment_of(reinterpret_cast<double*>(out)) == 0;
  fftw_execute_dft(simd_ok ? aligned : unaligned, in, out);
  return output;
}

}  // namespace

Eigen::ArrayXcd forward_transform(const Grid& grid, const Eigen::ArrayXcd& values) {
  const PlanPair& plans = cache().get(grid.n());
  return execute(plans.forward, plans.forward_unaligned, values);
}

Eigen::ArrayXcd inverse_transform(const Grid& grid, const Eigen::ArrayXcd& coefficients) {
  const PlanPair& plans = cache().get(grid.n());
  Eigen::ArrayXcd out = execute(plans.backward, plans.backward_unaligned, coefficients);
  out /= static_cast<double>(grid.size());
  return out;
}

Eigen::ArrayXcd forward_transform(const Grid& grid, const Eigen::ArrayXd& values) {
  return forward_transform(grid, Eigen::ArrayXcd(values.cast<std::complex<double>>()));
}

}  // namespace srsp
