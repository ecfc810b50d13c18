#ifndef PENSION_STATS_HPP
#define PENSION_STATS_HPP

#include <cmath>
#include <span>

namespace pension {

/// Compensated (Kahan) accumulator; keeps reductions order-stable enough
/// that serial and chunked summation of the same sequence agree bitwise
/// when applied in the same fixed order.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanVar {
    double mean;
    double variance;  ///< unbiased (n-1); 0 when n < 2
};

inline double kahan_mean(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return xs.empty() ? 0.0 : s.value() / static_cast<double>(xs.size());
}

inline MeanVar mean_variance(std::span<const double> xs) {
    const double m = kahan_mean(xs);
    if (xs.size() < 2) return {m, 0.0};
    KahanSum sq;
    for (double x : xs) {
        const double d = x - m;
        sq.add(d * d);
    }
    return {m, sq.value() / static_cast<double>(xs.size() - 1)};
}

}  // namespace pension

#endif  // PENSION_STATS_HPP
