#include "spstore/errors.hpp"

namespace spstore {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedTerm: return "MalformedTerm";
    case ErrorCode::LiteralSubject: return "LiteralSubject";
    case ErrorCode::NonIriPredicate: return "NonIriPredicate";
    case ErrorCode::UnknownTermId: return "UnknownTermId";
    case ErrorCode::MintCollision: return "MintCollision";
    case ErrorCode::NotASingleton: return "NotASingleton";
    case ErrorCode::AmbiguousSingleton: return "AmbiguousSingleton";
    case ErrorCode::IncompleteSingleton: return "IncompleteSingleton";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::NotInferred: return "NotInferred";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownPrefix: return "UnknownPrefix";
    case ErrorCode::QueryTimeout: return "QueryTimeout";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace spstore
