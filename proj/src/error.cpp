#include "cforge/error.hpp"

namespace cforge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PointOffManifold: return "point-off-manifold";
    case ErrorCode::NotTangent: return "not-tangent";
    case ErrorCode::FrameDeficient: return "frame-deficient";
    case ErrorCode::DegeneratePlane: return "degenerate-plane";
    case ErrorCode::JetDepthExceeded: return "jet-depth-exceeded";
    case ErrorCode::UnsupportedDegree: return "unsupported-degree";
    case ErrorCode::ModeUnset: return "mode-unset";
    case ErrorCode::SpectrumMismatch: return "spectrum-mismatch";
    case ErrorCode::ClusteringAmbiguous: return "clustering-ambiguous";
    case ErrorCode::NeitherFits: return "neither-fits";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::UnknownManifold: return "unknown-manifold";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace cforge
