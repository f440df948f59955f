#pragma once

#include <stdexcept>
#include <string>

namespace cforge {

enum class ErrorCode {
  PointOffManifold,
  NotTangent,
  FrameDeficient,
  DegeneratePlane,
  JetDepthExceeded,
  UnsupportedDegree,
  ModeUnset,
  SpectrumMismatch,
  ClusteringAmbiguous,
  NeitherFits,
  InvalidArgument,
  UnknownManifold,
  Config,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cforge
