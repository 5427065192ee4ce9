#ifndef LOCQ_ERRORS_HPP
#define LOCQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace locq
{

// Base of every error raised by the library. The CLI maps these to exit code 2
// unless a more specific mapping applies.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define LOCQ_DEFINE_ERROR(Name)                                                                                        \
    class Name : public Error                                                                                          \
    {                                                                                                                  \
    public:                                                                                                            \
        explicit Name(const std::string &what) : Error(#Name ": " + what) {}                                           \
    }

// series-core
LOCQ_DEFINE_ERROR(ZeroConstantTerm);
LOCQ_DEFINE_ERROR(NotInvertible);
LOCQ_DEFINE_ERROR(DegenerateFactor);
LOCQ_DEFINE_ERROR(TruncationLoss);

// spectral / infinite products
LOCQ_DEFINE_ERROR(InvalidParameter);
LOCQ_DEFINE_ERROR(NonConvergent);
LOCQ_DEFINE_ERROR(ToleranceUnreachable);

// pfaffian
LOCQ_DEFINE_ERROR(OddDimension);
LOCQ_DEFINE_ERROR(NotSkewSymmetric);
LOCQ_DEFINE_ERROR(SingularMatrix);

// localization
LOCQ_DEFINE_ERROR(DegenerateWeight);

// qhyper
LOCQ_DEFINE_ERROR(DivisionByZero);
LOCQ_DEFINE_ERROR(DegenerateParameters);

// genus
LOCQ_DEFINE_ERROR(BetaSingularity);
LOCQ_DEFINE_ERROR(ScanInconclusive);

#undef LOCQ_DEFINE_ERROR

} // namespace locq

#endif
