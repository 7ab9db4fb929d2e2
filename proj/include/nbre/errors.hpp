#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nbre {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct MassError : Error { using Error::Error; };
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double best = 0.0) : Error(what), best_residual(best) {}
    double best_residual;
};
struct OrderError : Error { using Error::Error; };
struct SingularityError : Error { using Error::Error; };
struct ChartError : Error { using Error::Error; };
struct ClassificationError : Error { using Error::Error; };
struct ResonantLinearError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct BudgetError : Error { using Error::Error; };
struct StiffnessError : Error { using Error::Error; };
struct FamilyCollapseError : Error { using Error::Error; };
struct ContinuationEnd : Error { using Error::Error; };

struct SmallDivisorError : Error {
    SmallDivisorError(const std::string& what, std::vector<int> k) : Error(what), kvec(std::move(k)) {}
    std::vector<int> kvec;
};

}  // namespace nbre
