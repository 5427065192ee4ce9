#ifndef LOCQ_DETAIL_SUMMATION_HPP
#define LOCQ_DETAIL_SUMMATION_HPP

#include <cmath>

namespace locq::detail
{

// Neumaier's variant of Kahan summation.
template <typename Real>
class CompensatedSum
{
public:
    void add(Real x)
    {
        using std::abs;
        const Real t = sum_ + x;
        if (abs(sum_) >= abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    Real value() const
    {
        return sum_ + comp_;
    }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

} // namespace locq::detail

#endif
