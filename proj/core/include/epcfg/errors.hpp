#pragma once

#include <stdexcept>

namespace epcfg {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- tensor / numeric domain -------------------------------------------

struct ShapeMismatch : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct NonFiniteResult : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct InvalidWindow : Error { using Error::Error; };
struct InvalidStrength : Error { using Error::Error; };
struct InvalidPhi : Error { using Error::Error; };

// --- toy diffusion ------------------------------------------------------

struct InvalidRange : Error { using Error::Error; };
struct DegenerateAlpha : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct InvalidMixture : Error { using Error::Error; };

// --- metrics ------------------------------------------------------------

struct EmptyBatch : Error { using Error::Error; };
struct RaggedLogs : Error { using Error::Error; };

// --- files / config -----------------------------------------------------

struct IoFailure : Error { using Error::Error; };
struct BadMagic : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };
struct MalformedCsv : Error { using Error::Error; };
struct MalformedConfig : Error { using Error::Error; };

}  // namespace epcfg
