#pragma once

#include <stdexcept>
#include <string>

namespace dpr {

// Base class for all recoverable pipeline errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// core_model
struct EmptyField : Error { using Error::Error; };
struct DanglingRule : Error { using Error::Error; };
struct CorruptState : Error { using Error::Error; };

// providers
struct ProviderUnavailable : Error { using Error::Error; };
struct RateLimited : Error { using Error::Error; };
struct ReplayMiss : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// rule_pipeline
struct ParseFailure : Error { using Error::Error; };
struct EmptyEvidence : Error { using Error::Error; };

// research_loop
struct AllQueriesFailed : Error { using Error::Error; };

// indexer
struct DegenerateInput : Error { using Error::Error; };

// evaluator / cli
struct MissingAsset : Error { using Error::Error; };

}  // namespace dpr
