#pragma once

#include <stdexcept>
#include <string>

namespace lwave {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map families of failures onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define LWAVE_DEFINE_ERROR(Name, Base)          \
    class Name : public Base {                  \
    public:                                     \
        using Base::Base;                       \
    }

// Shape family: anything whose root cause is incompatible dimensions.
LWAVE_DEFINE_ERROR(ShapeError, Error);
LWAVE_DEFINE_ERROR(InvalidLength, ShapeError);
LWAVE_DEFINE_ERROR(InvalidShape, ShapeError);
LWAVE_DEFINE_ERROR(TooSmall, ShapeError);

LWAVE_DEFINE_ERROR(InvalidConfig, Error);
LWAVE_DEFINE_ERROR(UnreachableNode, Error);

// PNM decoding.
LWAVE_DEFINE_ERROR(FormatError, Error);
LWAVE_DEFINE_ERROR(MalformedHeader, FormatError);
LWAVE_DEFINE_ERROR(UnsupportedMaxval, FormatError);
LWAVE_DEFINE_ERROR(TruncatedData, FormatError);

#undef LWAVE_DEFINE_ERROR

class NonFiniteLoss : public Error {
public:
    NonFiniteLoss(int epoch, const std::string& what)
        : Error(what), epoch_(epoch) {}

    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

} // namespace lwave
