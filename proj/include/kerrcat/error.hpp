#ifndef KERRCAT_ERROR_HPP
#define KERRCAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kerrcat {

enum class ErrorKind {
  InvalidSpace,
  TruncationRisk,
  DegenerateCat,
  NotATransmon,
  Topology,
  Domain,
  BathSpec,
  Resource,
  Integrator,
  PropagatorAccuracy,
  ModeIdentification,
  Size,
  NonParitySymmetric,
  InternalConsistency,
  Config,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidSpace: return "invalid-space";
    case ErrorKind::TruncationRisk: return "truncation-risk";
    case ErrorKind::DegenerateCat: return "degenerate-cat";
    case ErrorKind::NotATransmon: return "not-a-transmon";
    case ErrorKind::Topology: return "topology";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::BathSpec: return "bath-spec";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Integrator: return "integrator";
    case ErrorKind::PropagatorAccuracy: return "propagator-accuracy";
    case ErrorKind::ModeIdentification: return "mode-identification";
    case ErrorKind::Size: return "size";
    case ErrorKind::NonParitySymmetric: return "non-parity-symmetric";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kerrcat

#endif  // KERRCAT_ERROR_HPP
