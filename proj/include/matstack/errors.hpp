#pragma once

#include <stdexcept>
#include <string>

namespace matstack {

// Error taxonomy. The CLI maps these onto its exit-code contract:
// configuration/condition problems -> 2, IO/transport problems -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ModeError : Error { using Error::Error; };
struct StructureError : Error { using Error::Error; };
struct ValueError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ConditionError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct VisibilityError : Error { using Error::Error; };
struct SpecError : Error { using Error::Error; };
struct DominanceError : Error { using Error::Error; };
struct GenerationStuckError : Error { using Error::Error; };
struct CheckpointError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Remote embedder failures keep their own types so callers can distinguish
// a dead endpoint from a lying one.
struct TransportError : Error { using Error::Error; };
struct MalformedResponseError : TransportError { using TransportError::TransportError; };
struct DimensionMismatchError : TransportError { using TransportError::TransportError; };

} // namespace matstack
