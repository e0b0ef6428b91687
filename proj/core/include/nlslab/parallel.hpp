#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

namespace nlslab {

/// Worker count: set_thread_count() override, else NLSLAB_THREADS, else
/// std::thread::hardware_concurrency().
int thread_count();
/// 0 restores the environment/hardware default.
void set_thread_count(int n);

/// Runs body(i) for i in [0, n) on up to thread_count() workers.
///
/// Work items are claimed dynamically, so callers that need reproducible
/// results must write per-item outputs and reduce them in index order.
/// Nested calls from inside a worker run serially on that worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Kahan-Babuska (Neumaier) compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated sum of `values` in index order.
double ordered_sum(std::span<const double> values);

}  // namespace nlslab
