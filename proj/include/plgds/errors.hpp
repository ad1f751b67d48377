#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plgds {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergentSeries : Error { using Error::Error; };
struct RegimeViolation : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct AmbiguousGrowth : Error { using Error::Error; };
struct ScaleError : Error { using Error::Error; };
struct InternalInvariantViolation : Error { using Error::Error; };
struct SelfLoopError : Error { using Error::Error; };
struct ParityError : Error { using Error::Error; };
struct WheelStall : Error { using Error::Error; };
struct DivisibilityError : Error { using Error::Error; };
struct NotDominating : Error { using Error::Error; };
struct DegreeZeroError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

struct InfeasibleEmbedding : Error {
    std::string constraint;
    InfeasibleEmbedding(std::string c, const std::string& detail)
        : Error("infeasible embedding: " + c + ": " + detail), constraint(std::move(c)) {}
};

struct InfeasibleScale : Error {
    double min_n;  // smallest core size that opens the window, or 0 if none found
    InfeasibleScale(const std::string& what, double min_n_)
        : Error(what), min_n(min_n_) {}
};

struct BudgetExceeded : Error {
    std::vector<std::uint32_t> incumbent;
    std::size_t lower_bound;
    BudgetExceeded(std::vector<std::uint32_t> inc, std::size_t lb)
        : Error("exact solver budget exhausted"), incumbent(std::move(inc)), lower_bound(lb) {}
};

}  // namespace plgds
