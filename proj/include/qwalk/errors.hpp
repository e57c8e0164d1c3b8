#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Base for every error raised by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotInvertible : public Error { public: using Error::Error; };
class ScheduleGap : public Error { public: using Error::Error; };
class UnsupportedRegime : public Error { public: using Error::Error; };
class DegenerateBranch : public Error { public: using Error::Error; };
class DimensionCap : public Error { public: using Error::Error; };
class NonUnitaryInput : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class DegenerateSpinor : public Error { public: using Error::Error; };
class EqualSlopes : public Error { public: using Error::Error; };
class ParallelQuadratures : public Error { public: using Error::Error; };
class InvalidArgument : public Error { public: using Error::Error; };

} // namespace qwalk
