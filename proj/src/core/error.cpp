#include "narx/core/error.hpp"

namespace narx {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Domain: return "numeric-domain";
    case ErrorKind::Index: return "index";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Config: return "config";
    case ErrorKind::Format: return "format";
    case ErrorKind::Transfer: return "transfer";
    case ErrorKind::Ingestion: return "ingestion";
    case ErrorKind::Training: return "training";
    case ErrorKind::Generation: return "generation";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::FeatureNotEnabled: return "feature-not-enabled";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace narx
