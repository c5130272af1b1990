#ifndef MFZ_SUMMATION_HPP
#define MFZ_SUMMATION_HPP

#include <cmath>
#include <complex>

namespace mfz {

// Neumaier's variant of Kahan summation. The running compensation captures
// the low-order bits lost by each addition regardless of operand ordering.
class NeumaierSum {
 public:
  NeumaierSum() = default;
  explicit NeumaierSum(double initial) : sum_(initial) {}

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  // Folds another accumulator in, keeping both compensation terms.
  void merge(const NeumaierSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  NeumaierSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexNeumaierSum {
 public:
  void add(std::complex<double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void merge(const ComplexNeumaierSum& other) noexcept {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  NeumaierSum re_;
  NeumaierSum im_;
};

}  // namespace mfz

#endif  // MFZ_SUMMATION_HPP
