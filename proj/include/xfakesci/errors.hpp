#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xfakesci {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- corpus --------------------------------------------------------------
struct MalformedJson : Error {
    using Error::Error;
};

struct MissingField : Error {
    MissingField(std::size_t record_index, const std::string& field)
        : Error("record " + std::to_string(record_index) + ": missing or empty \"" + field + "\""),
          record_index(record_index),
          field(field) {}
    std::size_t record_index;
    std::string field;
};

struct EmptyCorpus : Error {
    using Error::Error;
};

struct InsufficientDocuments : Error {
    using Error::Error;
};

// -- transport -----------------------------------------------------------
struct TransportError : Error {
    using Error::Error;
};

struct TimeoutError : TransportError {
    using TransportError::TransportError;
};

struct NonJsonResponse : Error {
    using Error::Error;
};

// -- textnet -------------------------------------------------------------
struct EmptyModel : Error {
    using Error::Error;
};

// -- calibration / classifier --------------------------------------------
struct ZeroWordCount : Error {
    using Error::Error;
};

struct EmptyMeans : Error {
    using Error::Error;
};

// -- baselines -----------------------------------------------------------
struct EmptyVocabulary : Error {
    using Error::Error;
};

struct SingleClassTraining : Error {
    using Error::Error;
};

struct NonFiniteLoss : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// -- eval ----------------------------------------------------------------
struct EmptyPredictions : Error {
    using Error::Error;
};

struct UndefinedF1 : Error {
    using Error::Error;
};

// -- genclient -----------------------------------------------------------
struct MalformedBatch : Error {
    using Error::Error;
};

// -- pipeline ------------------------------------------------------------
// Wraps a module error with the stage that raised it. `external` marks
// transport-level failures so the CLI can map them to a distinct exit code.
struct PipelineError : Error {
    PipelineError(std::string stage, const std::string& what, bool external = false)
        : Error(stage + ": " + what), stage(std::move(stage)), external(external) {}
    std::string stage;
    bool external;
};

}  // namespace xfakesci
