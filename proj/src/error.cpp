#include "opinion/error.hpp"

namespace opinion {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DuplicateCaseId: return "DuplicateCaseId";
    case ErrorCode::BudgetUnsatisfiable: return "BudgetUnsatisfiable";
    case ErrorCode::BackendFailure: return "BackendFailure";
    case ErrorCode::NoAlphabetic: return "NoAlphabetic";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::EmptyTopic: return "EmptyTopic";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooFewClusters: return "TooFewClusters";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::Configuration: return "Configuration";
  }
  return "Unknown";
}

}  // namespace opinion
